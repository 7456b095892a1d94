use thiserror::Error;

/// Failure modes shared by every operation in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed graph text, JSON, vertex ids or set shapes.
    #[error("input error: {0}")]
    Input(String),
    /// A parameter lies outside the range where the operation is defined.
    #[error("parameter out of range: {0}")]
    Domain(String),
    /// A structural precondition on the supplied objects does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// Regular-pair extraction found nothing usable.
    #[error("no regular pair found: {0}")]
    NoPairFound(String),
    /// Refinement hit its iteration cap.
    #[error("partition refinement did not converge: {0}")]
    NotConverged(String),
    /// An internal postcondition failed; this indicates a bug.
    #[error("internal invariant failed: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code used by the command-line harness.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Input(_) | Error::Domain(_) | Error::Precondition(_) => 2,
            Error::NoPairFound(_) | Error::NotConverged(_) => 1,
            Error::Invariant(_) => 3,
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Input(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Input(e.to_string())
    }
}
