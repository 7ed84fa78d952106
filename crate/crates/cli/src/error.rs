use thiserror::Error;

use crate::config::FieldError;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const VALIDATION: i32 = 1;
    pub const NUMERIC: i32 = 2;
    pub const BUDGET: i32 = 3;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot parse config: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("invalid config:\n{}", format_fields(.0))]
    Invalid(Vec<FieldError>),
    #[error(transparent)]
    Core(#[from] logheat_core::Error),
    /// A computation finished but its outcome is a failure (a certificate
    /// violated, a path exploded).
    #[error("{0}")]
    Failed(String),
    #[error("optimization budget exhausted before a feasible control was found")]
    Budget,
}

fn format_fields(errors: &[FieldError]) -> String {
    errors.iter().map(|e| format!("  {e}")).collect::<Vec<_>>().join("\n")
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use logheat_core::Error as E;
        match self {
            Self::Parse(_) | Self::Invalid(_) | Self::Io(_) => exit::VALIDATION,
            Self::Core(E::BlowUp { .. } | E::Numeric { .. } | E::TooManyEvents { .. } | E::Alignment(_)) => {
                exit::NUMERIC
            }
            Self::Core(_) => exit::VALIDATION,
            Self::Failed(_) => exit::NUMERIC,
            Self::Budget => exit::BUDGET,
        }
    }

    pub fn status(&self) -> &'static str {
        match self.exit_code() {
            exit::VALIDATION => "validation_error",
            exit::BUDGET => "budget_exhausted",
            _ => "numeric_error",
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e.to_string())
    }
}
