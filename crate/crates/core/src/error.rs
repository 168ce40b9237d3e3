use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HmError {
    #[error("constraint violated: {0}")]
    Constraint(String),
    #[error("r = {r} exceeds the configured cap {cap}")]
    CapExceeded { r: u64, cap: u64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precision failure: {0}")]
    Precision(String),
    #[error("x = {x} exceeds the sieve ceiling {ceiling}")]
    CeilingExceeded { x: f64, ceiling: u64 },
    #[error("x = {x} lies above the band table ({table_max}) but below the analytic threshold")]
    UncoveredGap { x: f64, table_max: u64 },
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("no valid grid point: {0}")]
    NoValidPoint(String),
    #[error("not applicable: {0}")]
    Inapplicable(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for HmError {
    fn from(e: std::io::Error) -> Self {
        HmError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, HmError>;
