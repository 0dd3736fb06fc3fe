use thiserror::Error;

/// Errors produced by the kcoverage library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The reduction was handed a complex that is disconnected or has holes.
    #[error("reduction precondition violated: complex has beta0 = {beta0}, beta1 = {beta1}, expected (1, 0)")]
    NotReducible { beta0: usize, beta1: usize },

    /// A k-coverage result failed its geometric certificate. Carries the
    /// offending node set as JSON so the run can be replayed.
    #[error("certification failed for seed {seed:?} ({failures} uncovered grid samples)")]
    CertificationFailed {
        seed: Option<u64>,
        failures: usize,
        nodeset_json: String,
    },

    #[error("malformed input: {0}")]
    Parse(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
