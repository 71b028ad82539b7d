use thiserror::Error;

/// Errors raised anywhere in the lab.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    #[error("invalid covariance: {0}")]
    InvalidCovariance(String),
    #[error("unknown task index {index} (problem has {count} tasks)")]
    UnknownTask { index: usize, count: usize },
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("expectation-form gain requires identity covariances")]
    UnsupportedCovariance,
    #[error("scheduler called before warm-up finished ({have} of {need} samples on task {task})")]
    NotWarmedUp { task: usize, have: usize, need: usize },
    #[error("curriculum enumeration too large: {count} compositions exceed limit {limit}")]
    TooLarge { count: u128, limit: u128 },
    #[error("alpha calibration failed: coverage {coverage:.4} below target {target:.4} at alpha {alpha}")]
    CalibrationFailed { alpha: f64, coverage: f64, target: f64 },
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Whether the error stems from user configuration rather than the numerics.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidConfig(_)
                | Error::UnknownTask { .. }
                | Error::Unsupported(_)
                | Error::UnsupportedCovariance
                | Error::TooLarge { .. }
                | Error::Json(_)
                | Error::Io(_)
        )
    }
}
