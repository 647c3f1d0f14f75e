//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by any simulation stage.
#[derive(Debug, Error)]
pub enum Error {
    /// A matrix handed to the Hermitian eigensolver failed the symmetry check.
    #[error("matrix is not Hermitian: max |M - M^dag| = {deviation:.3e} exceeds {tolerance:.3e}")]
    NonHermitianInput { deviation: f64, tolerance: f64 },

    /// The Jacobi sweep budget ran out before the off-diagonal norm dropped
    /// below threshold.
    #[error("eigensolver did not converge in {sweeps} sweeps (off-diagonal norm {off_diag:.3e})")]
    NoConvergence { sweeps: usize, off_diag: f64 },

    /// Physical parameters violate a model precondition.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// A Fock-space truncation is too small for the requested operation.
    #[error("Fock cutoffs too small: need >= {min}, got ({phonon}, {photon})")]
    CutoffTooSmall {
        min: usize,
        phonon: usize,
        photon: usize,
    },

    /// Adaptive quadrature hit its depth budget before meeting tolerance.
    #[error("quadrature did not converge: {0}")]
    QuadratureNoConvergence(String),

    /// A time outside the sampled profile grid was requested.
    #[error("time {t} is not on the dephasing profile grid")]
    GridMiss { t: f64 },

    /// A density operator violated trace/Hermiticity/positivity bounds.
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// Operands with incompatible dimensions or basis tags.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A power-law fit was requested on unusable samples.
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    /// A scenario config file could not be parsed.
    #[error("config parse error: {0}")]
    ParseError(String),

    /// A parsed scenario config violates one or more invariants.
    #[error("config validation failed: {0}")]
    ValidationError(String),

    /// Figure preset index outside 1..=6.
    #[error("unknown figure {0} (expected 1..=6)")]
    UnknownFigure(u32),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
