use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("trajectory {trajectory} ran away at t = {time:.6} (scaled): {detail}")]
    Runaway {
        trajectory: u64,
        time: f64,
        detail: String,
    },

    #[error("{excluded} of {total} trajectories ran away (limit is 5%)")]
    TooManyExclusions { excluded: usize, total: usize },

    #[error("norm drift {drift:.3e} at t = {time:.3} exceeds 1e-4; reduce the time step")]
    NormDrift { drift: f64, time: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("csv row {row}: {message}")]
    Csv { row: usize, message: String },

    #[error("{} of {total} work items failed ({completed} completed); first failure at item {}: {}",
        failures.len(), failures[0].0, failures[0].1)]
    Scheduled {
        total: usize,
        completed: usize,
        failures: Vec<(usize, Error)>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Numerical failures map to exit code 2, everything else to 1.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::Runaway { .. } | Error::TooManyExclusions { .. } | Error::NormDrift { .. } => true,
            Error::Scheduled { failures, .. } => failures.iter().any(|(_, e)| e.is_numerical()),
            _ => false,
        }
    }
}
