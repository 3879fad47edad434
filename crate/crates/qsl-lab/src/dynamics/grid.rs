use super::DynamicsError;

/// Uniform time grid including both endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    t0: f64,
    t1: f64,
    points: Vec<f64>,
}

impl TimeGrid {
    /// Grid of `n_points` uniformly spaced times from `t0` to `t1` inclusive.
    pub fn new(t0: f64, t1: f64, n_points: usize) -> Result<Self, DynamicsError> {
        if n_points < 2 {
            return Err(DynamicsError::GridTooShort(n_points));
        }
        if !(t1 > t0) {
            return Err(DynamicsError::GridReversed { t0, t1 });
        }
        let dt = (t1 - t0) / (n_points - 1) as f64;
        let mut points: Vec<f64> = (0..n_points).map(|i| t0 + i as f64 * dt).collect();
        points[n_points - 1] = t1; // exact endpoint
        Ok(Self { t0, t1, points })
    }

    pub fn span(t1: f64, n_points: usize) -> Result<Self, DynamicsError> {
        Self::new(0.0, t1, n_points)
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn t1(&self) -> f64 {
        self.t1
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dt(&self) -> f64 {
        (self.t1 - self.t0) / (self.points.len() - 1) as f64
    }

    pub fn times(&self) -> &[f64] {
        &self.points
    }

    pub fn time(&self, index: usize) -> f64 {
        self.points[index]
    }
}

/// Trapezoidal integral of uniformly sampled values.
pub fn trapezoid(values: &[f64], dt: f64) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let inner: f64 = values[1..values.len() - 1].iter().sum();
    dt * (0.5 * values[0] + inner + 0.5 * values[values.len() - 1])
}

/// Running trapezoidal integral; element i holds the integral up to t_i.
pub fn trapezoid_progressive(values: &[f64], dt: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(values.len());
    let mut acc = 0.0;
    out.push(0.0);
    for w in values.windows(2) {
        acc += 0.5 * dt * (w[0] + w[1]);
        out.push(acc);
    }
    out
}

/// Central-difference derivative on a uniform grid, second-order one-sided
/// at both endpoints.
pub fn central_derivative(values: &[f64], dt: f64) -> Vec<f64> {
    let n = values.len();
    assert!(n >= 3, "need at least 3 points to differentiate");
    let mut out = vec![0.0; n];
    out[0] = (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * dt);
    for i in 1..n - 1 {
        out[i] = (values[i + 1] - values[i - 1]) / (2.0 * dt);
    }
    out[n - 1] = (3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) / (2.0 * dt);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints_exact() {
        let g = TimeGrid::span(50.0, 5001).unwrap();
        assert_eq!(g.time(0), 0.0);
        assert_eq!(g.time(5000), 50.0);
        assert!((g.dt() - 0.01).abs() < 1e-15);
    }

    #[test]
    fn rejects_degenerate_grids() {
        assert!(TimeGrid::new(0.0, 1.0, 1).is_err());
        assert!(TimeGrid::new(1.0, 1.0, 10).is_err());
        assert!(TimeGrid::new(2.0, 1.0, 10).is_err());
    }

    #[test]
    fn trapezoid_quadratic() {
        let n = 1001;
        let dt = 1.0 / (n - 1) as f64;
        let vals: Vec<f64> = (0..n).map(|i| (i as f64 * dt).powi(2)).collect();
        assert!((trapezoid(&vals, dt) - 1.0 / 3.0).abs() < 1e-6);
        let prog = trapezoid_progressive(&vals, dt);
        assert!((prog[n - 1] - trapezoid(&vals, dt)).abs() < 1e-14);
    }

    #[test]
    fn central_derivative_exact_for_quadratic() {
        let n = 11;
        let dt = 0.1;
        let vals: Vec<f64> = (0..n).map(|i| (i as f64 * dt).powi(2)).collect();
        let d = central_derivative(&vals, dt);
        for (i, di) in d.iter().enumerate() {
            assert!((di - 2.0 * i as f64 * dt).abs() < 1e-12);
        }
    }
}
