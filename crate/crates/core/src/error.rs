use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the numerical modules.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid basis index {0} (indices start at 1)")]
    InvalidIndex(i64),
    #[error("point {x} lies outside the domain [0, {length}]")]
    OutsideDomain { x: f64, length: f64 },
    #[error("non-finite integrand value at node x = {x}")]
    Numeric { x: f64 },
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("invalid configuration: {0}")]
    Configuration(String),
    #[error("control value {value} at cell {cell}, atom {atom} is negative or not finite")]
    InvalidControlValue { cell: usize, atom: usize, value: f64 },
    #[error("control outside the bounded class: {0}")]
    ControlClass(String),
    #[error("trajectories are not on a common time grid: {0}")]
    Alignment(String),
    #[error("state blew up at t = {time} (norm history tail: {norm_history:?})")]
    BlowUp { time: f64, norm_history: Vec<f64> },
    #[error("expected {expected:.3e} jump events per path exceeds the cap of {cap:.0e}")]
    TooManyEvents { expected: f64, cap: f64 },
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }
}
