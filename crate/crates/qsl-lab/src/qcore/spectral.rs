use super::{C64, EigenDecomposition, HermitianOperator, QcoreError, GAP_TOL};

/// Instantaneous eigenvalues and eigenvectors on a time grid.
///
/// After [`gauge_fix_continuity`](SpectralFrame::gauge_fix_continuity) each
/// consecutive overlap `<n(t_i)|n(t_{i+1})>` is real positive, so
/// finite-difference derivatives of the eigenvectors are meaningful.
#[derive(Debug, Clone)]
pub struct SpectralFrame {
    times: Vec<f64>,
    /// `eigenvalues[i][n]`: n-th ascending eigenvalue at grid point i.
    eigenvalues: Vec<Vec<f64>>,
    /// `eigenvectors[i][n]`: matching eigenvector column.
    eigenvectors: Vec<Vec<Vec<C64>>>,
}

impl SpectralFrame {
    /// Diagonalizes `h(t)` at every grid time. No gauge fixing yet.
    pub fn compute(
        times: &[f64],
        h: impl Fn(f64) -> HermitianOperator,
    ) -> Result<Self, QcoreError> {
        let mut eigenvalues = Vec::with_capacity(times.len());
        let mut eigenvectors = Vec::with_capacity(times.len());
        for &t in times {
            let EigenDecomposition {
                eigenvalues: vals,
                eigenvectors: vecs,
            } = h(t).eig()?;
            eigenvalues.push(vals);
            eigenvectors.push(vecs);
        }
        Ok(Self {
            times: times.to_vec(),
            eigenvalues,
            eigenvectors,
        })
    }

    /// Builds from precomputed per-time decompositions.
    pub fn from_parts(
        times: Vec<f64>,
        eigenvalues: Vec<Vec<f64>>,
        eigenvectors: Vec<Vec<Vec<C64>>>,
    ) -> Self {
        assert_eq!(times.len(), eigenvalues.len());
        assert_eq!(times.len(), eigenvectors.len());
        Self {
            times,
            eigenvalues,
            eigenvectors,
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn levels(&self) -> usize {
        self.eigenvalues.first().map_or(0, Vec::len)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn eigenvalue(&self, time_index: usize, level: usize) -> f64 {
        self.eigenvalues[time_index][level]
    }

    pub fn eigenvalues_at(&self, time_index: usize) -> &[f64] {
        &self.eigenvalues[time_index]
    }

    pub fn eigenvector(&self, time_index: usize, level: usize) -> &[C64] {
        &self.eigenvectors[time_index][level]
    }

    /// Smallest gap between any two consecutive levels over the whole grid,
    /// with the grid point and level pair where it occurs.
    pub fn min_gap(&self) -> (f64, usize, usize) {
        let mut best = (f64::INFINITY, 0, 0);
        for (i, vals) in self.eigenvalues.iter().enumerate() {
            for n in 0..vals.len().saturating_sub(1) {
                let gap = vals[n + 1] - vals[n];
                if gap < best.0 {
                    best = (gap, i, n);
                }
            }
        }
        best
    }

    /// Smallest gap separating `level` from its neighbors over the grid.
    pub fn level_gap(&self, level: usize) -> f64 {
        let mut gap = f64::INFINITY;
        for vals in &self.eigenvalues {
            if level > 0 {
                gap = gap.min(vals[level] - vals[level - 1]);
            }
            if level + 1 < vals.len() {
                gap = gap.min(vals[level + 1] - vals[level]);
            }
        }
        gap
    }

    /// Rephases eigenvectors so every consecutive overlap is real positive.
    ///
    /// Requires a nondegenerate spectrum (all consecutive-level gaps above
    /// [`GAP_TOL`]) so that each level is a unique ray.
    pub fn gauge_fix_continuity(mut self) -> Result<Self, QcoreError> {
        let (gap, idx, level) = self.min_gap();
        if gap <= GAP_TOL {
            return Err(QcoreError::GapCollision {
                time: self.times[idx],
                level_a: level,
                level_b: level + 1,
                gap,
            });
        }
        let levels = self.levels();
        for n in 0..levels {
            for i in 1..self.times.len() {
                let overlap: C64 = self.eigenvectors[i - 1][n]
                    .iter()
                    .zip(&self.eigenvectors[i][n])
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                let mag = overlap.norm();
                if mag == 0.0 {
                    continue;
                }
                let phase = overlap.conj() / mag;
                for c in &mut self.eigenvectors[i][n] {
                    *c *= phase;
                }
            }
        }
        Ok(self)
    }

    /// Maximum eigen-residual ||H v - lambda v|| over the grid (test support).
    pub fn max_residual(&self, h: impl Fn(f64) -> HermitianOperator) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, &t) in self.times.iter().enumerate() {
            let op = h(t);
            let d = op.dim();
            let mut buf = vec![C64::new(0.0, 0.0); d];
            for n in 0..self.levels() {
                op.apply_into(&self.eigenvectors[i][n], &mut buf);
                let lambda = self.eigenvalues[i][n];
                let resid: f64 = buf
                    .iter()
                    .zip(&self.eigenvectors[i][n])
                    .map(|(hv, v)| (hv - v * lambda).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                worst = worst.max(resid);
            }
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sweep_hamiltonian(t: f64) -> HermitianOperator {
        // Two-level sweep with theta from pi/2 to 0 over T = 1.
        let theta = std::f64::consts::FRAC_PI_2 * (1.0 - t);
        HermitianOperator::two_by_two(
            0.5 * theta.cos(),
            C64::new(0.5 * theta.sin(), 0.0),
            -0.5 * theta.cos(),
        )
    }

    #[test]
    fn constant_hamiltonian_constant_vectors() {
        let times: Vec<f64> = (0..10).map(|i| i as f64 * 0.1).collect();
        let frame = SpectralFrame::compute(&times, |_| HermitianOperator::pauli_x())
            .unwrap()
            .gauge_fix_continuity()
            .unwrap();
        for i in 1..frame.len() {
            for n in 0..2 {
                let diff: f64 = frame
                    .eigenvector(0, n)
                    .iter()
                    .zip(frame.eigenvector(i, n))
                    .map(|(a, b)| (a - b).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                assert!(diff < 1e-12);
            }
        }
    }

    #[test]
    fn real_hamiltonian_real_gauge_kills_n_dot_overlap() {
        let n_pts = 201;
        let times: Vec<f64> = (0..n_pts).map(|i| i as f64 / (n_pts - 1) as f64).collect();
        let frame = SpectralFrame::compute(&times, sweep_hamiltonian)
            .unwrap()
            .gauge_fix_continuity()
            .unwrap();
        let dt = times[1] - times[0];
        for i in 1..n_pts - 1 {
            for n in 0..2 {
                // <n | dn/dt> by central differences; real gauge makes it ~0.
                let mut acc = C64::new(0.0, 0.0);
                for ((prev, cur), next) in frame
                    .eigenvector(i - 1, n)
                    .iter()
                    .zip(frame.eigenvector(i, n))
                    .zip(frame.eigenvector(i + 1, n))
                {
                    acc += cur.conj() * (next - prev) / (2.0 * dt);
                }
                assert!(acc.re.abs() < 1e-8, "real part {0:e}", acc.re);
                assert!(acc.im.abs() < 1e-8, "imag part {0:e}", acc.im);
            }
        }
    }

    #[test]
    fn sign_flips_removed() {
        let times: Vec<f64> = (0..8).map(|i| i as f64).collect();
        let base = SpectralFrame::compute(&times, |_| HermitianOperator::pauli_z()).unwrap();
        // Flip signs on alternating grid points by hand.
        let mut vecs = Vec::new();
        let mut vals = Vec::new();
        for i in 0..times.len() {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            vals.push(base.eigenvalues_at(i).to_vec());
            vecs.push(
                (0..2)
                    .map(|n| {
                        base.eigenvector(i, n)
                            .iter()
                            .map(|c| c * sign)
                            .collect::<Vec<_>>()
                    })
                    .collect::<Vec<_>>(),
            );
        }
        let fixed = SpectralFrame::from_parts(times, vals, vecs)
            .gauge_fix_continuity()
            .unwrap();
        for n in 0..2 {
            for i in 1..fixed.len() {
                let overlap: C64 = fixed.eigenvector(i - 1, n)
                    .iter()
                    .zip(fixed.eigenvector(i, n))
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                assert!(overlap.re >= 0.0);
                assert!(overlap.im.abs() < 1e-14);
            }
        }
    }

    #[test]
    fn degenerate_spectrum_rejected() {
        let times = vec![0.0, 1.0];
        let frame =
            SpectralFrame::compute(&times, |_| HermitianOperator::diagonal(&[1.0, 1.0]).unwrap())
                .unwrap();
        assert!(matches!(
            frame.gauge_fix_continuity(),
            Err(QcoreError::GapCollision { .. })
        ));
    }

    #[test]
    fn residuals_small_on_sweep() {
        let times: Vec<f64> = (0..50).map(|i| i as f64 / 49.0).collect();
        let frame = SpectralFrame::compute(&times, sweep_hamiltonian).unwrap();
        assert!(frame.max_residual(sweep_hamiltonian) < 1e-10);
    }
}
