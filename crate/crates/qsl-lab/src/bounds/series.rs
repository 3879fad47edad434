use super::{BoundsError, KEY_ABS_DTHETA_AD, KEY_DTHETA_AD};
use crate::dynamics::grid::{central_derivative, trapezoid};
use crate::dynamics::TimeGrid;
use std::collections::BTreeMap;

/// Per-time record of the adiabatic fidelity angle and named bound series,
/// with trapezoidal integrals kept alongside.
#[derive(Debug, Clone)]
pub struct BoundSeries {
    grid: TimeGrid,
    pub theta_ad: Vec<f64>,
    pub dtheta_ad: Vec<f64>,
    pub dtheta_ad_abs: Vec<f64>,
    values: BTreeMap<String, Vec<f64>>,
    integrals: BTreeMap<String, f64>,
}

impl BoundSeries {
    /// Builds from a fidelity-angle series, differentiating it on the grid.
    pub(crate) fn from_theta(grid: TimeGrid, theta_ad: Vec<f64>) -> Self {
        let dt = grid.dt();
        let dtheta_ad = central_derivative(&theta_ad, dt);
        let dtheta_ad_abs: Vec<f64> = dtheta_ad.iter().map(|x| x.abs()).collect();
        let mut integrals = BTreeMap::new();
        integrals.insert(KEY_ABS_DTHETA_AD.to_string(), trapezoid(&dtheta_ad_abs, dt));
        integrals.insert(KEY_DTHETA_AD.to_string(), trapezoid(&dtheta_ad, dt));
        Self {
            grid,
            theta_ad,
            dtheta_ad,
            dtheta_ad_abs,
            values: BTreeMap::new(),
            integrals,
        }
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.theta_ad.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta_ad.is_empty()
    }

    /// Final fidelity angle theta_ad(T).
    pub fn theta_final(&self) -> f64 {
        *self.theta_ad.last().expect("nonempty series")
    }

    /// Registers a named series and its trapezoidal integral.
    pub fn insert(&mut self, name: &str, series: Vec<f64>) {
        assert_eq!(series.len(), self.theta_ad.len(), "series length mismatch");
        self.integrals
            .insert(name.to_string(), trapezoid(&series, self.grid.dt()));
        self.values.insert(name.to_string(), series);
    }

    pub fn series(&self, name: &str) -> Result<&[f64], BoundsError> {
        self.values
            .get(name)
            .map(Vec::as_slice)
            .ok_or_else(|| BoundsError::MissingSeries(name.to_string()))
    }

    pub fn integral(&self, name: &str) -> Result<f64, BoundsError> {
        self.integrals
            .get(name)
            .copied()
            .ok_or_else(|| BoundsError::MissingSeries(name.to_string()))
    }

    /// Names of the registered value series, in sorted order.
    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.values.keys().map(String::as_str)
    }
}
