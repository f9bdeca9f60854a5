//! Crate-wide error type.

use thiserror::Error;

/// Errors raised by state construction, file I/O, and the numeric kernels.
#[derive(Debug, Error)]
pub enum Error {
    /// A state ended up with no nonzero amplitude where one is required.
    #[error("state has no nonzero amplitude")]
    EmptyState,

    /// A photon pair exceeds the total-photon cap (`fock::MAX_TOTAL`).
    #[error("photon pair ({n_c},{n_d}) exceeds the {max}-photon total cap")]
    CapExceeded { n_c: u32, n_d: u32, max: u32 },

    /// A state file listed the same (nc, nd) pair more than once.
    #[error("duplicate term ({n_c},{n_d}) in state file")]
    DuplicateTerm { n_c: u32, n_d: u32 },

    /// A state file failed to parse; the message carries line/field context.
    #[error("state file parse error: {0}")]
    Parse(String),

    /// The dense-oracle basis cannot hold the requested state.
    #[error(
        "oracle cutoff {cutoff} too small for state occupying up to {needed} photons per mode"
    )]
    CutoffTooSmall { cutoff: u32, needed: u32 },

    /// A pattern grid violates its shape contract.
    #[error("bad grid: {0}")]
    BadGrid(String),

    /// A physical input that must be strictly positive was not.
    #[error("{name} must be positive and finite (got {value})")]
    NonPositiveInput { name: &'static str, value: f64 },

    /// A precondition on a non-physical argument was violated.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// Numerical self-consistency violation (e.g. a dosage value far below zero).
    #[error("internal consistency violation: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
