use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("simplex {vertices:?} appears more than once at order {order}")]
    DuplicateSimplex { order: usize, vertices: Vec<usize> },

    #[error("simplex {vertices:?} repeats a vertex")]
    DuplicateVertex { vertices: Vec<usize> },

    #[error("simplex {vertices:?} listed at order {order} has {} vertices, expected {}", vertices.len(), order + 1)]
    WrongCardinality { order: usize, vertices: Vec<usize> },

    #[error("complex has no 0-simplices")]
    EmptyComplex,

    #[error("order {order} is outside the valid range {min}..={max}")]
    OrderOutOfRange { order: usize, min: usize, max: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("eigensolver did not converge: {0}")]
    ConvergenceFailure(String),

    #[error("loss mask selects no entries")]
    EmptyMask,

    #[error("label {label} is out of range for {classes} classes")]
    LabelOutOfRange { label: usize, classes: usize },

    #[error("gradient tape is stale: recorded at parameter generation {recorded}, model is at {current}")]
    StaleTape { recorded: u64, current: u64 },

    #[error("missing rate {0} must lie strictly between 0 and 1")]
    RateOutOfRange(f64),

    #[error("parse error in {context}: {message}")]
    Parse { context: String, message: String },

    #[error("schema version mismatch: expected {expected}, found {found}")]
    SchemaVersionMismatch { expected: u32, found: u32 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("training failed for order {order}: {source}")]
    Training {
        order: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub fn parse(context: impl Into<String>, message: impl ToString) -> Self {
        Error::Parse {
            context: context.into(),
            message: message.to_string(),
        }
    }

    pub fn dims(message: impl Into<String>) -> Self {
        Error::DimensionMismatch(message.into())
    }
}
