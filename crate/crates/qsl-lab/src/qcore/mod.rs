//! Complex linear-algebra primitives for driven quantum systems: normalized
//! state vectors, dense Hermitian operators, expectation values and variances,
//! fidelity angles, eigensolvers, and gauge-fixed spectral frames.
//!
//! Everything here is a pure function of its inputs; values are immutable
//! after construction and safe to share across threads.

mod eig;
mod operator;
mod spectral;
mod state;

pub use eig::EigenDecomposition;
pub use operator::{HermitianOperator, Repr};
pub use spectral::SpectralFrame;
pub use state::StateVector;

use thiserror::Error;

/// Shorthand used throughout the crate.
pub type C64 = num_complex::Complex64;

/// Hermiticity deviation allowed at operator construction.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Below this sigma the orthogonal decomposition is treated as undefined.
pub const DEGENERATE_SIGMA: f64 = 1e-13;
/// Negative variance round-off beyond this magnitude is an error, not noise.
pub const VARIANCE_CLAMP: f64 = 1e-14;
/// Eigenvalue gaps below this are treated as collisions.
pub const GAP_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum QcoreError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("cannot normalize a zero vector")]
    ZeroNorm,
    #[error("entry count {got} does not form a {dim}x{dim} matrix")]
    BadShape { dim: usize, got: usize },
    #[error("not Hermitian: |H[{row},{col}] - conj(H[{col},{row}])| = {deviation:.3e}")]
    NotHermitian { row: usize, col: usize, deviation: f64 },
    #[error("variance sigma = {sigma:.3e} vanishes; orthogonal component undefined")]
    DegenerateDecomposition { sigma: f64 },
    #[error("variance^2 = {value:.3e} is negative beyond round-off tolerance")]
    NegativeVariance { value: f64 },
    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-norm {off:.3e})")]
    EigNonConvergence { sweeps: usize, off: f64 },
    #[error("gap collision at t = {time:.6e}: levels {level_a} and {level_b} gap {gap:.3e}")]
    GapCollision {
        time: f64,
        level_a: usize,
        level_b: usize,
        gap: f64,
    },
    #[error("level index {level} out of range for dimension {dim}")]
    LevelOutOfRange { level: usize, dim: usize },
}

pub(crate) fn check_dims(left: usize, right: usize) -> Result<(), QcoreError> {
    if left == right {
        Ok(())
    } else {
        Err(QcoreError::DimensionMismatch { left, right })
    }
}
