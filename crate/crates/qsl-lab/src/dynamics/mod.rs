//! Time evolution: Schrodinger propagation, adiabatic reference states,
//! counterdiabatic operators, the moving-basis Hamiltonian split, and the
//! adiabatic-expansion approximation of the effective counterdiabatic term.

mod adiabatic;
mod grid;
mod hamiltonian;
mod propagate;

pub use adiabatic::{
    adiabatic_state, adiabatic_state_with_frame, counterdiabatic, counterdiabatic_series,
    moving_basis_decomposition, AdiabaticExpansion,
};
pub use grid::TimeGrid;
pub use hamiltonian::HamiltonianFn;
pub use propagate::{propagate, propagate_diagonal, rk4_step, Rk4Workspace, Trajectory};

use crate::qcore::QcoreError;
use thiserror::Error;

/// Maximum allowed |norm - 1| over a propagated trajectory.
pub const NORM_DRIFT_TOL: f64 = 1e-8;
/// Maximum allowed orthonormality deviation of an evolved basis.
pub const BASIS_ORTHONORMALITY_TOL: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum DynamicsError {
    #[error(transparent)]
    Qcore(#[from] QcoreError),
    #[error(
        "norm drift {drift:.3e} exceeds {tol:.1e} after {n_steps} steps; \
         increase the grid resolution"
    )]
    NormDrift {
        drift: f64,
        n_steps: usize,
        tol: f64,
    },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("time grid needs at least 2 points, got {0}")]
    GridTooShort(usize),
    #[error("time grid must run forward: t0 = {t0}, t1 = {t1}")]
    GridReversed { t0: f64, t1: f64 },
    #[error("evolved basis not orthonormal (deviation {deviation:.3e}); \
             propagation accuracy insufficient")]
    NonOrthonormalBasis { deviation: f64 },
    #[error("trajectories live on different grids")]
    GridMismatch,
    #[error("moving-basis split needs {dim} basis trajectories, got {got}")]
    IncompleteBasis { dim: usize, got: usize },
}
