use super::{
    check_dims, eig, C64, EigenDecomposition, QcoreError, DEGENERATE_SIGMA, HERMITICITY_TOL,
    VARIANCE_CLAMP,
};
use crate::qcore::StateVector;

/// Storage tag for a Hermitian operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Repr {
    Dense,
    TwoByTwo,
    Diagonal,
}

/// Dense square complex Hermitian matrix (energy units, hbar = 1).
///
/// Entries satisfy `H[i][j] = conj(H[j][i])` within [`HERMITICITY_TOL`];
/// construction symmetrizes round-off away. The diagonal constructor accepts
/// only real entries.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    dim: usize,
    entries: Vec<C64>, // row-major
    repr: Repr,
}

impl HermitianOperator {
    /// Builds a dense operator from row-major entries, checking Hermiticity.
    pub fn dense(dim: usize, entries: Vec<C64>) -> Result<Self, QcoreError> {
        if dim < 2 {
            return Err(QcoreError::DimensionTooSmall(dim));
        }
        if entries.len() != dim * dim {
            return Err(QcoreError::BadShape {
                dim,
                got: entries.len(),
            });
        }
        let mut m = Self {
            dim,
            entries,
            repr: if dim == 2 { Repr::TwoByTwo } else { Repr::Dense },
        };
        m.check_and_symmetrize()?;
        Ok(m)
    }

    /// 2x2 Hermitian matrix [[d0, off], [conj(off), d1]].
    pub fn two_by_two(d0: f64, off: C64, d1: f64) -> Self {
        Self {
            dim: 2,
            entries: vec![C64::new(d0, 0.0), off, off.conj(), C64::new(d1, 0.0)],
            repr: Repr::TwoByTwo,
        }
    }

    /// Diagonal operator from real entries.
    pub fn diagonal(diag: &[f64]) -> Result<Self, QcoreError> {
        let dim = diag.len();
        if dim < 2 {
            return Err(QcoreError::DimensionTooSmall(dim));
        }
        let mut entries = vec![C64::new(0.0, 0.0); dim * dim];
        for (i, &d) in diag.iter().enumerate() {
            entries[i * dim + i] = C64::new(d, 0.0);
        }
        Ok(Self {
            dim,
            entries,
            repr: Repr::Diagonal,
        })
    }

    pub fn zero(dim: usize) -> Result<Self, QcoreError> {
        Self::diagonal(&vec![0.0; dim])
    }

    pub fn identity(dim: usize) -> Result<Self, QcoreError> {
        Self::diagonal(&vec![1.0; dim])
    }

    pub fn pauli_x() -> Self {
        Self::two_by_two(0.0, C64::new(1.0, 0.0), 0.0)
    }

    pub fn pauli_y() -> Self {
        Self::two_by_two(0.0, C64::new(0.0, -1.0), 0.0)
    }

    pub fn pauli_z() -> Self {
        Self::two_by_two(1.0, C64::new(0.0, 0.0), -1.0)
    }

    fn check_and_symmetrize(&mut self) -> Result<(), QcoreError> {
        let d = self.dim;
        for i in 0..d {
            let diag = self.entries[i * d + i];
            if diag.im.abs() > HERMITICITY_TOL {
                return Err(QcoreError::NotHermitian {
                    row: i,
                    col: i,
                    deviation: diag.im.abs(),
                });
            }
            self.entries[i * d + i] = C64::new(diag.re, 0.0);
            for j in (i + 1)..d {
                let upper = self.entries[i * d + j];
                let lower = self.entries[j * d + i];
                let deviation = (upper - lower.conj()).norm();
                if deviation > HERMITICITY_TOL {
                    return Err(QcoreError::NotHermitian {
                        row: i,
                        col: j,
                        deviation,
                    });
                }
                let mean = (upper + lower.conj()) * 0.5;
                self.entries[i * d + j] = mean;
                self.entries[j * d + i] = mean.conj();
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn repr(&self) -> Repr {
        self.repr
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.entries[row * self.dim + col]
    }

    /// Matrix-vector product into a caller-provided buffer (no checks).
    pub(crate) fn apply_into(&self, x: &[C64], out: &mut [C64]) {
        let d = self.dim;
        for i in 0..d {
            let row = &self.entries[i * d..(i + 1) * d];
            let mut acc = C64::new(0.0, 0.0);
            for (h, xv) in row.iter().zip(x) {
                acc += h * xv;
            }
            out[i] = acc;
        }
    }

    /// H |psi> as a raw (unnormalized) amplitude vector.
    pub fn apply(&self, psi: &StateVector) -> Result<Vec<C64>, QcoreError> {
        check_dims(self.dim, psi.dim())?;
        let mut out = vec![C64::new(0.0, 0.0); self.dim];
        self.apply_into(psi.amplitudes(), &mut out);
        Ok(out)
    }

    /// Real part of <psi|H|psi>; asserts the imaginary part is below 1e-10.
    pub fn expectation(&self, psi: &StateVector) -> Result<f64, QcoreError> {
        let hpsi = self.apply(psi)?;
        let val: C64 = psi
            .amplitudes()
            .iter()
            .zip(&hpsi)
            .map(|(a, b)| a.conj() * b)
            .sum();
        assert!(
            val.im.abs() < 1e-10,
            "expectation of a Hermitian operator came out complex (im = {:e})",
            val.im
        );
        Ok(val.re)
    }

    /// sigma(H, psi) = sqrt(<H^2> - <H>^2) >= 0.
    ///
    /// Negative round-off above -[`VARIANCE_CLAMP`] is clamped to zero;
    /// anything more negative is an error.
    pub fn variance_sqrt(&self, psi: &StateVector) -> Result<f64, QcoreError> {
        let hpsi = self.apply(psi)?;
        // <H^2> = |H psi|^2 for Hermitian H.
        let h2: f64 = hpsi.iter().map(|a| a.norm_sqr()).sum();
        let mean: C64 = psi
            .amplitudes()
            .iter()
            .zip(&hpsi)
            .map(|(a, b)| a.conj() * b)
            .sum();
        let var = h2 - mean.re * mean.re;
        if var < -VARIANCE_CLAMP {
            return Err(QcoreError::NegativeVariance { value: var });
        }
        Ok(var.max(0.0).sqrt())
    }

    /// Decomposes H|psi> = <H>|psi> + sigma |psi_perp>, returning
    /// (|psi_perp>, sigma).
    ///
    /// Errors when sigma <= [`DEGENERATE_SIGMA`] (psi is an eigenstate and the
    /// orthogonal direction is undefined).
    pub fn orthogonal_component(
        &self,
        psi: &StateVector,
    ) -> Result<(StateVector, f64), QcoreError> {
        let hpsi = self.apply(psi)?;
        let mean: C64 = psi
            .amplitudes()
            .iter()
            .zip(&hpsi)
            .map(|(a, b)| a.conj() * b)
            .sum();
        let residual: Vec<C64> = hpsi
            .iter()
            .zip(psi.amplitudes())
            .map(|(h, a)| h - C64::new(mean.re, 0.0) * a)
            .collect();
        let sigma = residual.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if sigma <= DEGENERATE_SIGMA {
            return Err(QcoreError::DegenerateDecomposition { sigma });
        }
        let perp = residual.into_iter().map(|a| a / sigma).collect();
        Ok((StateVector::from_normalized(perp), sigma))
    }

    pub fn add(&self, other: &Self) -> Result<Self, QcoreError> {
        self.combine(other, 1.0)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, QcoreError> {
        self.combine(other, -1.0)
    }

    fn combine(&self, other: &Self, sign: f64) -> Result<Self, QcoreError> {
        check_dims(self.dim, other.dim)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b * sign)
            .collect();
        let repr = match (self.repr, other.repr) {
            (Repr::Diagonal, Repr::Diagonal) => Repr::Diagonal,
            _ if self.dim == 2 => Repr::TwoByTwo,
            _ => Repr::Dense,
        };
        Ok(Self {
            dim: self.dim,
            entries,
            repr,
        })
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|a| a * factor).collect(),
            repr: self.repr,
        }
    }

    /// Largest absolute entry, used for step-size heuristics.
    pub fn max_abs_entry(&self) -> f64 {
        self.entries.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    /// Full eigendecomposition, eigenvalues ascending.
    ///
    /// 2x2 inputs use the closed-form solution; larger dense inputs use cyclic
    /// Jacobi rotations. Diagonal inputs are read off directly.
    pub fn eig(&self) -> Result<EigenDecomposition, QcoreError> {
        eig::eig_herm(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plus_state() -> StateVector {
        StateVector::from_real(&[1.0, 1.0]).unwrap()
    }

    #[test]
    fn expectation_eigenstate() {
        let z = HermitianOperator::pauli_z();
        let up = StateVector::from_real(&[1.0, 0.0]).unwrap();
        assert!((z.expectation(&up).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn expectation_symmetry_zero() {
        let z = HermitianOperator::pauli_z();
        assert!(z.expectation(&plus_state()).unwrap().abs() < 1e-14);
    }

    #[test]
    fn expectation_matches_double_loop_oracle() {
        // Fixed pseudo-random 4x4 Hermitian and state; oracle is the direct
        // sum over conj(psi_i) H_ij psi_j.
        let mut entries = vec![C64::new(0.0, 0.0); 16];
        let mut seed = 0x2545F4914F6CDD1Du64;
        let mut next = || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            (seed >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        for i in 0..4 {
            entries[i * 4 + i] = C64::new(next(), 0.0);
            for j in (i + 1)..4 {
                let v = C64::new(next(), next());
                entries[i * 4 + j] = v;
                entries[j * 4 + i] = v.conj();
            }
        }
        let h = HermitianOperator::dense(4, entries.clone()).unwrap();
        let psi = StateVector::new((0..4).map(|_| C64::new(next(), next())).collect()).unwrap();
        let mut oracle = C64::new(0.0, 0.0);
        for i in 0..4 {
            for j in 0..4 {
                oracle += psi.amplitudes()[i].conj() * entries[i * 4 + j] * psi.amplitudes()[j];
            }
        }
        assert!((h.expectation(&psi).unwrap() - oracle.re).abs() < 1e-12);
    }

    #[test]
    fn variance_eigenstate_zero() {
        let z = HermitianOperator::pauli_z();
        let up = StateVector::from_real(&[1.0, 0.0]).unwrap();
        assert_eq!(z.variance_sqrt(&up).unwrap(), 0.0);
    }

    #[test]
    fn variance_equal_weights() {
        let z = HermitianOperator::pauli_z();
        assert!((z.variance_sqrt(&plus_state()).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn variance_scaled_pauli_y_on_real_state() {
        // (theta_dot/2) sigma_y on a real-amplitude state: <sigma_y> = 0 and
        // sigma_y^2 = 1, so sigma = |theta_dot|/2.
        let theta_dot = -std::f64::consts::PI / 100.0;
        let op = HermitianOperator::pauli_y().scaled(theta_dot / 2.0);
        let psi = StateVector::from_real(&[0.3, -0.7]).unwrap();
        let expected = std::f64::consts::PI / 200.0;
        assert!((op.variance_sqrt(&psi).unwrap() - expected).abs() < 1e-14);
    }

    #[test]
    fn orthogonal_component_pauli_z_plus() {
        let z = HermitianOperator::pauli_z();
        let (perp, sigma) = z.orthogonal_component(&plus_state()).unwrap();
        assert!((sigma - 1.0).abs() < 1e-12);
        let minus = StateVector::from_real(&[1.0, -1.0]).unwrap();
        assert!(perp.fubini_angle(&minus).unwrap() < 1e-7);
    }

    #[test]
    fn orthogonal_component_pauli_x_up() {
        let x = HermitianOperator::pauli_x();
        let up = StateVector::from_real(&[1.0, 0.0]).unwrap();
        let (perp, sigma) = x.orthogonal_component(&up).unwrap();
        assert!((sigma - 1.0).abs() < 1e-12);
        assert!((perp.amplitudes()[1].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn orthogonal_component_rejects_eigenstate() {
        let z = HermitianOperator::pauli_z();
        let up = StateVector::from_real(&[1.0, 0.0]).unwrap();
        assert!(matches!(
            z.orthogonal_component(&up),
            Err(QcoreError::DegenerateDecomposition { .. })
        ));
    }

    #[test]
    fn non_hermitian_rejected() {
        let entries = vec![
            C64::new(1.0, 0.0),
            C64::new(0.5, 0.0),
            C64::new(0.2, 0.0),
            C64::new(-1.0, 0.0),
        ];
        assert!(HermitianOperator::dense(2, entries).is_err());
    }
}
