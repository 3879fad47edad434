//! Speed-limit quantities: the Mandelstam-Tamm relation, fidelity-angle
//! series against the adiabatic state, the counterdiabatic variance bounds
//! and their improvements, the adiabatic-expansion estimate, and the
//! rate-function bounds that stay finite for many-body systems.

mod rate;
mod series;

pub use rate::{
    rate_bound_perp, rate_bound_weak_adiabatic_series, weak_bound_point, RateSeries,
    OVERLAP_FLAG_TOL, OVERLAP_UNDERFLOW,
};
pub use series::BoundSeries;

use crate::dynamics::grid::{central_derivative, trapezoid};
use crate::dynamics::{DynamicsError, HamiltonianFn, Trajectory};
use crate::qcore::{HermitianOperator, QcoreError, StateVector};
use thiserror::Error;

/// Canonical series names used in [`BoundSeries`] maps and CSV columns.
pub const KEY_DELTA_E1_PSI: &str = "delta_e1_psi";
pub const KEY_DELTA_E1_AD: &str = "delta_e1_ad";
pub const KEY_DELTA_E2: &str = "delta_e2";
pub const KEY_DELTA_E_INV: &str = "delta_e_inv";
pub const KEY_ADEXP: &str = "adexp";
pub const KEY_ABS_DTHETA_AD: &str = "abs_dtheta_ad";
pub const KEY_DTHETA_AD: &str = "dtheta_ad";

/// Required initial-state fidelity with the reference eigenstate for the
/// eigenstate-start bounds.
pub const EIGENSTATE_START_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum BoundsError {
    #[error(transparent)]
    Qcore(#[from] QcoreError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error("trajectories live on different grids")]
    GridMismatch,
    #[error(
        "eigenstate-start contract violated: initial fidelity with the \
         reference eigenstate is {fidelity} (need > 1 - 1e-10)"
    )]
    EigenstateStart { fidelity: f64 },
    #[error("overlap magnitude {value:.3e} underflowed the generic path; \
             use a model-specific log-space path")]
    OverlapUnderflow { value: f64 },
    #[error("series '{0}' not present")]
    MissingSeries(String),
}

/// Mandelstam-Tamm check: returns
/// `(arccos|<psi(0)|psi(T)>|, integral of sigma(H(t), psi(t)) dt)`.
/// The relation guarantees lhs <= rhs up to quadrature error.
pub fn mt_bound(traj: &Trajectory, h: &HamiltonianFn) -> Result<(f64, f64), BoundsError> {
    let lhs = traj.initial_state().fubini_angle(traj.final_state())?;
    let sigmas = variance_series(traj, |i| Ok(h.at(traj.grid().time(i))))?;
    let rhs = trapezoid(&sigmas, traj.grid().dt());
    Ok((lhs, rhs))
}

/// Per-point sigma(op(i), psi(t_i)) for an operator family on the grid.
pub fn variance_series(
    traj: &Trajectory,
    op_at: impl Fn(usize) -> Result<HermitianOperator, BoundsError>,
) -> Result<Vec<f64>, BoundsError> {
    (0..traj.len())
        .map(|i| Ok(op_at(i)?.variance_sqrt(traj.state(i))?))
        .collect()
}

/// Fidelity-angle series between the evolved and adiabatic trajectories.
///
/// Fills `theta_ad`, its absolute and signed time derivatives (central
/// differences, one-sided at the ends), and registers the integral of
/// `|dtheta_ad/dt|`.
pub fn theta_ad_series(traj: &Trajectory, ad_traj: &Trajectory) -> Result<BoundSeries, BoundsError> {
    if traj.grid() != ad_traj.grid() {
        return Err(BoundsError::GridMismatch);
    }
    let theta: Vec<f64> = (0..traj.len())
        .map(|i| ad_traj.state(i).fubini_angle(traj.state(i)))
        .collect::<Result<_, _>>()?;
    Ok(BoundSeries::from_theta(traj.grid().clone(), theta))
}

/// Asserts the eigenstate-start condition for the improved bounds.
pub fn check_eigenstate_start(
    traj: &Trajectory,
    reference: &StateVector,
) -> Result<(), BoundsError> {
    let fidelity = traj.initial_state().overlap(reference)?.norm();
    if fidelity <= 1.0 - EIGENSTATE_START_TOL {
        return Err(BoundsError::EigenstateStart { fidelity });
    }
    Ok(())
}

/// sigma(H_CD, psi) series: the plain counterdiabatic-variance bound. The
/// host trajectory may be either the evolved or the adiabatic one.
pub fn delta_e1(
    host: &Trajectory,
    cd_at: impl Fn(usize) -> Result<HermitianOperator, BoundsError>,
) -> Result<Vec<f64>, BoundsError> {
    variance_series(host, cd_at)
}

/// sigma(H - H_CD, psi) series; requires the eigenstate-start condition.
pub fn delta_e2(
    traj: &Trajectory,
    h: &HamiltonianFn,
    cd_at: impl Fn(usize) -> Result<HermitianOperator, BoundsError>,
    initial_eigenstate: &StateVector,
) -> Result<Vec<f64>, BoundsError> {
    check_eigenstate_start(traj, initial_eigenstate)?;
    variance_series(traj, |i| {
        let cd = cd_at(i)?;
        Ok(h.at(traj.grid().time(i)).sub(&cd)?)
    })
}

/// sigma(H1 - H_CD, psi) series with H1 supplied per grid point (from the
/// moving-basis split); requires the eigenstate-start condition.
pub fn delta_e_inv(
    traj: &Trajectory,
    h1_at: impl Fn(usize) -> Result<HermitianOperator, BoundsError>,
    cd_at: impl Fn(usize) -> Result<HermitianOperator, BoundsError>,
    initial_eigenstate: &StateVector,
) -> Result<Vec<f64>, BoundsError> {
    check_eigenstate_start(traj, initial_eigenstate)?;
    variance_series(traj, |i| Ok(h1_at(i)?.sub(&cd_at(i)?)?))
}

pub(crate) fn derivative(series: &[f64], dt: f64) -> Vec<f64> {
    central_derivative(series, dt)
}
