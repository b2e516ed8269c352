use thiserror::Error;

/// Errors raised by the library and the CLI.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The rule cannot resolve the requested degrees without aliasing.
    #[error("quadrature rule with {nodes} nodes is too coarse for degree bound {degree} (aliasing risk)")]
    Aliasing { nodes: usize, degree: usize },

    #[error("extension order {0} outside 1..=12; larger Vandermonde systems are too ill-conditioned")]
    ExtensionOrder(usize),

    #[error("degree bounds {found:?} exceed {limit:?}")]
    BoundMismatch { limit: Vec<usize>, found: Vec<usize> },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{0}")]
    Runtime(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by inconsistent user arguments rather than by
    /// malformed data or I/O. The CLI maps these to exit status 2.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::DimensionMismatch { .. }
                | Error::InvalidArgument(_)
                | Error::Aliasing { .. }
                | Error::ExtensionOrder(_)
                | Error::BoundMismatch { .. }
        )
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
