//! Command-line harness: TOML run configs, experiment dispatch and
//! reproducible NDJSON/CSV artifacts with a per-run manifest.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod output;
pub mod run;

pub use config::{load_config, parse_config, Experiment, FieldError, RunConfig};
pub use error::{exit, CliError};
pub use run::{execute, Invocation};
