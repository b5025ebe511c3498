use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("d0({i}, {j}) exceeds d1({i}, {j}) by {excess:e}")]
    Domination { i: usize, j: usize, excess: f64 },

    #[error("product space of {points} points exceeds the cap of {cap}")]
    Size { points: usize, cap: usize },

    #[error("matrix is not positive definite (pivot {pivot:e} at row {row})")]
    NotPositiveDefinite { row: usize, pivot: f64 },

    #[error("subset of size {size} is not positive definite")]
    SubsetNotPositiveDefinite { size: usize },

    #[error("space admits no weighting: residual {residual:e} exceeds {tol:e}")]
    NoWeighting { residual: f64, tol: f64 },

    #[error("zeta matrix is singular (determinant {0:e})")]
    SingularZeta(f64),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("generation failed: {0}")]
    Generation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    /// True for errors caused by malformed or unreadable user input.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Input(_) | Error::Io(_) | Error::Csv(_) | Error::Json(_) | Error::Domination { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
