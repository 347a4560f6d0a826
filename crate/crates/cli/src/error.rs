use thiserror::Error;

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] coarray_core::Error),

    #[error("{0}")]
    Usage(String),

    #[error("{mismatches} closed-form mismatches in {instances} instances")]
    VerificationFailed { mismatches: usize, instances: usize },
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.code(),
            CliError::Usage(_) => "Usage",
            CliError::VerificationFailed { .. } => "VerificationFailed",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}
