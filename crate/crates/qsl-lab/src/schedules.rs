//! Annealing protocols: named smooth families and seeded random monotone
//! protocols, with analytic first and second derivatives.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Endpoint-slope regularization for the steep-boundary family.
///
/// The raw inverse of the flat-boundary map has divergent endpoint slope; a
/// pivot of `1 - STEEP_REG` keeps both derivatives finite (endpoint slope
/// about 14x the mean) while preserving the exact endpoint values.
const STEEP_REG: f64 = 1e-3;

/// Relative slack when checking `t` against `[0, T]`, absorbing grid
/// round-off at the endpoints.
const RANGE_SLACK: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum ScheduleError {
    #[error("time {t} outside schedule range [0, {horizon}]")]
    OutOfRange { t: f64, horizon: f64 },
    #[error("piecewise schedule needs at least 2 knots, got {0}")]
    TooFewKnots(usize),
    #[error("piecewise knots must be strictly monotone")]
    NonMonotoneKnots,
    #[error("schedule horizon must be positive, got {0}")]
    BadHorizon(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScheduleKind {
    Linear,
    BoundaryFlat,
    BoundarySteep,
    PiecewiseMonotone,
}

/// Smooth scalar protocol on `[0, T]` with `value(0) = v0` and
/// `value(T) = v1` exact.
#[derive(Debug, Clone)]
pub struct Schedule {
    v0: f64,
    v1: f64,
    horizon: f64,
    shape: Shape,
}

#[derive(Debug, Clone)]
enum Shape {
    Linear,
    BoundaryFlat,
    BoundarySteep,
    /// Monotone cubic Hermite through knots on a uniform grid.
    Piecewise { knots: Vec<f64>, slopes: Vec<f64> },
}

impl Schedule {
    pub fn linear(v0: f64, v1: f64, horizon: f64) -> Result<Self, ScheduleError> {
        Self::named(v0, v1, horizon, Shape::Linear)
    }

    /// sin^2 ramp: zero first derivative at both endpoints.
    pub fn boundary_flat(v0: f64, v1: f64, horizon: f64) -> Result<Self, ScheduleError> {
        Self::named(v0, v1, horizon, Shape::BoundaryFlat)
    }

    /// Inverse of the flat-boundary map applied to a linear ramp: steep
    /// (but finite, see [`STEEP_REG`]) slopes at both endpoints.
    pub fn boundary_steep(v0: f64, v1: f64, horizon: f64) -> Result<Self, ScheduleError> {
        Self::named(v0, v1, horizon, Shape::BoundarySteep)
    }

    fn named(v0: f64, v1: f64, horizon: f64, shape: Shape) -> Result<Self, ScheduleError> {
        if !(horizon > 0.0) {
            return Err(ScheduleError::BadHorizon(horizon));
        }
        Ok(Self {
            v0,
            v1,
            horizon,
            shape,
        })
    }

    /// Monotone cubic (Fritsch-Carlson slopes) through `knots` placed on a
    /// uniform grid over `[0, horizon]`. Knots must be strictly monotone.
    pub fn piecewise_monotone(
        knots: Vec<f64>,
        horizon: f64,
    ) -> Result<Self, ScheduleError> {
        if !(horizon > 0.0) {
            return Err(ScheduleError::BadHorizon(horizon));
        }
        if knots.len() < 2 {
            return Err(ScheduleError::TooFewKnots(knots.len()));
        }
        let increasing = knots[1] > knots[0];
        for w in knots.windows(2) {
            if (increasing && w[1] <= w[0]) || (!increasing && w[1] >= w[0]) {
                return Err(ScheduleError::NonMonotoneKnots);
            }
        }
        let slopes = fritsch_carlson_slopes(&knots, horizon);
        Ok(Self {
            v0: knots[0],
            v1: *knots.last().expect("nonempty"),
            horizon,
            shape: Shape::Piecewise { knots, slopes },
        })
    }

    /// Seeded random strictly monotone protocol from `v0` to `v1`.
    ///
    /// Draws `n_knots - 1` positive increments from a ChaCha8 stream,
    /// normalizes their cumulative sum onto `[v0, v1]`, and interpolates with
    /// the monotone cubic. The same seed reproduces the schedule bit for bit.
    pub fn random_monotone(
        seed: u64,
        horizon: f64,
        v0: f64,
        v1: f64,
        n_knots: usize,
    ) -> Result<Self, ScheduleError> {
        if n_knots < 2 {
            return Err(ScheduleError::TooFewKnots(n_knots));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut cumulative = Vec::with_capacity(n_knots);
        cumulative.push(0.0);
        let mut total = 0.0;
        for _ in 0..n_knots - 1 {
            // 1 - u in (0, 1]: increments strictly positive.
            let inc = 1.0 - rng.gen::<f64>();
            total += inc;
            cumulative.push(total);
        }
        let knots: Vec<f64> = cumulative
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                if i == n_knots - 1 {
                    v1 // exact endpoint
                } else {
                    v0 + (v1 - v0) * (c / total)
                }
            })
            .collect();
        Self::piecewise_monotone(knots, horizon)
    }

    pub fn kind(&self) -> ScheduleKind {
        match self.shape {
            Shape::Linear => ScheduleKind::Linear,
            Shape::BoundaryFlat => ScheduleKind::BoundaryFlat,
            Shape::BoundarySteep => ScheduleKind::BoundarySteep,
            Shape::Piecewise { .. } => ScheduleKind::PiecewiseMonotone,
        }
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn endpoints(&self) -> (f64, f64) {
        (self.v0, self.v1)
    }

    pub fn knots(&self) -> Option<&[f64]> {
        match &self.shape {
            Shape::Piecewise { knots, .. } => Some(knots),
            _ => None,
        }
    }

    fn checked_time(&self, t: f64) -> Result<f64, ScheduleError> {
        let slack = RANGE_SLACK * self.horizon.max(1.0);
        if t < -slack || t > self.horizon + slack {
            return Err(ScheduleError::OutOfRange {
                t,
                horizon: self.horizon,
            });
        }
        Ok(t.clamp(0.0, self.horizon))
    }

    pub fn value(&self, t: f64) -> Result<f64, ScheduleError> {
        let t = self.checked_time(t)?;
        let x = t / self.horizon;
        let span = self.v1 - self.v0;
        Ok(match &self.shape {
            Shape::Linear => self.v0 + span * x,
            Shape::BoundaryFlat => self.v0 + span * 0.5 * (1.0 - (std::f64::consts::PI * x).cos()),
            Shape::BoundarySteep => {
                let (num, den) = steep_map(x);
                if x == 0.0 {
                    self.v0
                } else if x == 1.0 {
                    self.v1
                } else {
                    self.v0 + span * num / den
                }
            }
            Shape::Piecewise { knots, slopes } => {
                hermite_eval(knots, slopes, self.horizon, t, 0)
            }
        })
    }

    pub fn deriv(&self, t: f64) -> Result<f64, ScheduleError> {
        let t = self.checked_time(t)?;
        let x = t / self.horizon;
        let span = self.v1 - self.v0;
        Ok(match &self.shape {
            Shape::Linear => span / self.horizon,
            Shape::BoundaryFlat => {
                span * 0.5 * std::f64::consts::PI * (std::f64::consts::PI * x).sin()
                    / self.horizon
            }
            Shape::BoundarySteep => {
                let c = 1.0 - STEEP_REG;
                let u = 1.0 - 2.0 * x;
                let g = 1.0 - c * c * u * u;
                let (_, den) = steep_map(x);
                span * 2.0 * c / (g.sqrt() * den) / self.horizon
            }
            Shape::Piecewise { knots, slopes } => {
                hermite_eval(knots, slopes, self.horizon, t, 1)
            }
        })
    }

    pub fn deriv2(&self, t: f64) -> Result<f64, ScheduleError> {
        let t = self.checked_time(t)?;
        let x = t / self.horizon;
        let span = self.v1 - self.v0;
        let t2 = self.horizon * self.horizon;
        Ok(match &self.shape {
            Shape::Linear => 0.0,
            Shape::BoundaryFlat => {
                let pi = std::f64::consts::PI;
                span * 0.5 * pi * pi * (pi * x).cos() / t2
            }
            Shape::BoundarySteep => {
                let c = 1.0 - STEEP_REG;
                let u = 1.0 - 2.0 * x;
                let g = 1.0 - c * c * u * u;
                let (_, den) = steep_map(x);
                span * (-4.0) * c * c * c * u / (g.powf(1.5) * den) / t2
            }
            Shape::Piecewise { knots, slopes } => {
                hermite_eval(knots, slopes, self.horizon, t, 2)
            }
        })
    }
}

/// Steep shape numerator/denominator: f(x) = (acos(c(1-2x)) - acos(c)) / den,
/// den = acos(-c) - acos(c), c = 1 - STEEP_REG.
fn steep_map(x: f64) -> (f64, f64) {
    let c = 1.0 - STEEP_REG;
    let num = (c * (1.0 - 2.0 * x)).acos() - c.acos();
    let den = (-c).acos() - c.acos();
    (num, den)
}

/// Fritsch-Carlson monotone slopes for knots on a uniform grid.
fn fritsch_carlson_slopes(knots: &[f64], horizon: f64) -> Vec<f64> {
    let n = knots.len();
    let h = horizon / (n - 1) as f64;
    let secants: Vec<f64> = knots.windows(2).map(|w| (w[1] - w[0]) / h).collect();
    let mut m = vec![0.0; n];
    m[0] = secants[0];
    m[n - 1] = secants[n - 2];
    for i in 1..n - 1 {
        if secants[i - 1] * secants[i] <= 0.0 {
            m[i] = 0.0;
        } else {
            m[i] = 0.5 * (secants[i - 1] + secants[i]);
        }
    }
    for i in 0..n - 1 {
        let delta = secants[i];
        if delta == 0.0 {
            m[i] = 0.0;
            m[i + 1] = 0.0;
            continue;
        }
        let alpha = m[i] / delta;
        let beta = m[i + 1] / delta;
        let s = alpha * alpha + beta * beta;
        if s > 9.0 {
            let tau = 3.0 / s.sqrt();
            m[i] = tau * alpha * delta;
            m[i + 1] = tau * beta * delta;
        }
    }
    m
}

/// Cubic Hermite value / first / second derivative on the uniform knot grid.
fn hermite_eval(knots: &[f64], slopes: &[f64], horizon: f64, t: f64, order: u8) -> f64 {
    let n = knots.len();
    let h = horizon / (n - 1) as f64;
    let mut idx = ((t / h).floor() as usize).min(n - 2);
    if t >= horizon {
        idx = n - 2;
    }
    let s = ((t - idx as f64 * h) / h).clamp(0.0, 1.0);
    let (y0, y1) = (knots[idx], knots[idx + 1]);
    let (m0, m1) = (slopes[idx] * h, slopes[idx + 1] * h);
    match order {
        0 => {
            let h00 = 2.0 * s * s * s - 3.0 * s * s + 1.0;
            let h10 = s * s * s - 2.0 * s * s + s;
            let h01 = -2.0 * s * s * s + 3.0 * s * s;
            let h11 = s * s * s - s * s;
            y0 * h00 + m0 * h10 + y1 * h01 + m1 * h11
        }
        1 => {
            let d00 = 6.0 * s * s - 6.0 * s;
            let d10 = 3.0 * s * s - 4.0 * s + 1.0;
            let d01 = -6.0 * s * s + 6.0 * s;
            let d11 = 3.0 * s * s - 2.0 * s;
            (y0 * d00 + m0 * d10 + y1 * d01 + m1 * d11) / h
        }
        _ => {
            let c00 = 12.0 * s - 6.0;
            let c10 = 6.0 * s - 4.0;
            let c01 = -12.0 * s + 6.0;
            let c11 = 6.0 * s - 2.0;
            (y0 * c00 + m0 * c10 + y1 * c01 + m1 * c11) / (h * h)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn linear_midpoint() {
        let s = Schedule::linear(FRAC_PI_2, 0.0, 50.0).unwrap();
        assert!((s.value(25.0).unwrap() - PI / 4.0).abs() < 1e-15);
        assert!((s.deriv(10.0).unwrap() + FRAC_PI_2 / 50.0).abs() < 1e-15);
        assert_eq!(s.deriv2(10.0).unwrap(), 0.0);
    }

    #[test]
    fn boundary_flat_flat_ends() {
        let s = Schedule::boundary_flat(FRAC_PI_2, 0.0, 50.0).unwrap();
        assert_eq!(s.deriv(0.0).unwrap(), 0.0);
        assert!(s.deriv(50.0).unwrap().abs() < 1e-16);
        assert!((s.value(0.0).unwrap() - FRAC_PI_2).abs() < 1e-15);
        assert!(s.value(50.0).unwrap().abs() < 1e-15);
    }

    #[test]
    fn boundary_steep_exact_endpoints_steep_slopes() {
        let s = Schedule::boundary_steep(FRAC_PI_2, 0.0, 50.0).unwrap();
        assert_eq!(s.value(0.0).unwrap(), FRAC_PI_2);
        assert_eq!(s.value(50.0).unwrap(), 0.0);
        let mean_slope = FRAC_PI_2 / 50.0;
        assert!(s.deriv(0.0).unwrap().abs() > 5.0 * mean_slope);
        assert!(s.deriv(0.0).unwrap().is_finite());
        assert!(s.deriv2(1.0).unwrap().is_finite());
        // steeper at ends than the middle
        assert!(s.deriv(0.0).unwrap().abs() > 2.0 * s.deriv(25.0).unwrap().abs());
    }

    #[test]
    fn out_of_range_rejected() {
        let s = Schedule::linear(1.0, 0.0, 10.0).unwrap();
        assert!(s.value(-0.5).is_err());
        assert!(s.value(10.5).is_err());
        // grid round-off slack accepted
        assert!(s.value(10.0 + 1e-12).is_ok());
    }

    #[test]
    fn piecewise_interpolates_knots_and_stays_monotone() {
        let knots = vec![FRAC_PI_2, 1.2, 0.9, 0.5, 0.2, 0.0];
        let s = Schedule::piecewise_monotone(knots.clone(), 50.0).unwrap();
        let h = 50.0 / (knots.len() - 1) as f64;
        for (i, &k) in knots.iter().enumerate() {
            assert!((s.value(i as f64 * h).unwrap() - k).abs() < 1e-12);
        }
        for i in 0..10_000 {
            let t = 50.0 * i as f64 / 9_999.0;
            assert!(s.deriv(t).unwrap() <= 1e-12, "derivative sign flip at t={t}");
        }
    }

    #[test]
    fn random_monotone_deterministic_and_decreasing() {
        let a = Schedule::random_monotone(42, 50.0, FRAC_PI_2, 0.0, 8).unwrap();
        let b = Schedule::random_monotone(42, 50.0, FRAC_PI_2, 0.0, 8).unwrap();
        assert_eq!(a.knots().unwrap(), b.knots().unwrap());
        assert!((a.value(0.0).unwrap() - FRAC_PI_2).abs() < 1e-12);
        assert!(a.value(50.0).unwrap().abs() < 1e-12);
        for i in 0..1000 {
            let t = 50.0 * i as f64 / 999.0;
            assert!(a.deriv(t).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn many_seeds_monotone_dense_sampling() {
        for seed in 0..500u64 {
            let s = Schedule::random_monotone(seed, 50.0, FRAC_PI_2, 0.0, 8).unwrap();
            let mut prev = s.value(0.0).unwrap();
            for i in 1..1000 {
                let t = 50.0 * i as f64 / 999.0;
                let v = s.value(t).unwrap();
                assert!(v <= prev + 1e-12, "seed {seed} not decreasing at t={t}");
                prev = v;
            }
        }
    }

    #[test]
    fn finite_difference_matches_analytic_derivative() {
        let cases = vec![
            Schedule::linear(FRAC_PI_2, 0.0, 50.0).unwrap(),
            Schedule::boundary_flat(FRAC_PI_2, 0.0, 50.0).unwrap(),
            Schedule::boundary_steep(FRAC_PI_2, 0.0, 50.0).unwrap(),
            Schedule::random_monotone(7, 50.0, FRAC_PI_2, 0.0, 8).unwrap(),
        ];
        for s in &cases {
            let horizon = s.horizon();
            let fd_step = horizon * 1e-5;
            let mut max_deriv: f64 = 0.0;
            for i in 0..100 {
                let t = horizon * (0.005 + 0.99 * i as f64 / 99.0);
                max_deriv = max_deriv.max(s.deriv(t).unwrap().abs());
            }
            for i in 0..100 {
                let t = horizon * (0.005 + 0.99 * i as f64 / 99.0);
                let fd = (s.value(t + fd_step).unwrap() - s.value(t - fd_step).unwrap())
                    / (2.0 * fd_step);
                let err = (fd - s.deriv(t).unwrap()).abs();
                assert!(
                    err < 1e-6 * max_deriv,
                    "{:?} at t={t}: fd={fd} analytic={} err={err:e}",
                    s.kind(),
                    s.deriv(t).unwrap()
                );
            }
        }
    }
}
