use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("spacing array is empty")]
    EmptySpacings,

    #[error("spacing at index {index} is {value}, spacings must be at least 1")]
    NonPositiveSpacing { index: usize, value: i64 },

    #[error("invalid sensor array: {0}")]
    InvalidArray(String),

    #[error("{family} does not support n = {n}: {reason}")]
    UnsupportedN {
        family: &'static str,
        n: usize,
        reason: String,
    },

    #[error("unknown array family '{0}'")]
    UnknownFamily(String),

    #[error("maximum spacing {base} occurs in more than one contiguous run")]
    NoUniqueBaseRun { base: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not Hermitian (relative asymmetry {0:.3e})")]
    NotHermitian(f64),

    #[error("lag {0} is missing from the difference co-array")]
    MissingLag(i64),

    #[error("eigendecomposition did not converge")]
    RankDeficient,

    #[error("{k} sources cannot be resolved with a {dim}-element virtual array")]
    KTooLarge { k: usize, dim: usize },

    #[error("at least {min} sources are required, got {k}")]
    KTooSmall { k: usize, min: usize },

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("invalid sweep: {0}")]
    InvalidSweep(String),

    #[error("no successful trials to aggregate")]
    NoSuccessfulTrials,

    #[error("no hole-free {n}-sensor array exists with aperture at most {max_aperture}")]
    ApertureBudgetExceeded { n: usize, max_aperture: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Stable machine-readable identifier, used as the CLI error prefix.
    pub fn code(&self) -> &'static str {
        match self {
            Error::EmptySpacings => "EmptySpacings",
            Error::NonPositiveSpacing { .. } => "NonPositiveSpacing",
            Error::InvalidArray(_) => "InvalidArray",
            Error::UnsupportedN { .. } => "UnsupportedN",
            Error::UnknownFamily(_) => "UnknownFamily",
            Error::NoUniqueBaseRun { .. } => "NoUniqueBaseRun",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::NotHermitian(_) => "NotHermitian",
            Error::MissingLag(_) => "MissingLag",
            Error::RankDeficient => "RankDeficient",
            Error::KTooLarge { .. } => "KTooLarge",
            Error::KTooSmall { .. } => "KTooSmall",
            Error::InvalidScenario(_) => "InvalidScenario",
            Error::InvalidSweep(_) => "InvalidSweep",
            Error::NoSuccessfulTrials => "NoSuccessfulTrials",
            Error::ApertureBudgetExceeded { .. } => "ApertureBudgetExceeded",
            Error::Parse(_) => "Parse",
            Error::Io(_) => "Io",
            Error::Json(_) => "Json",
            Error::Csv(_) => "Csv",
        }
    }
}
