use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("point ({x}, {y}) lies outside the {width}x{height} domain")]
    DomainViolation { x: f64, y: f64, width: f64, height: f64 },

    #[error("insufficient points: need at least {needed}, found {found}")]
    InsufficientPoints { needed: usize, found: usize },

    #[error("duplicate point: entries {first} and {second} share coordinates")]
    DuplicatePoint { first: usize, second: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degenerate distribution: {0}")]
    DegenerateDistribution(String),

    #[error("incompatible curves: {0}")]
    IncompatibleCurves(String),

    #[error("generation failed: placed {placed} of {requested} points before saturating")]
    GenerationFailure { placed: usize, requested: usize },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("duplicate coordinate at lines {first_line} and {second_line}")]
    DuplicateCoordinate { first_line: usize, second_line: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
