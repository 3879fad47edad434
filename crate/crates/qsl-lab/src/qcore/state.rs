use super::{check_dims, C64, QcoreError};

/// Normalized complex amplitude vector of dimension >= 2.
///
/// The Euclidean norm is 1 within round-off after construction or
/// [`renormalize`](StateVector::renormalize).
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<C64>,
}

impl StateVector {
    /// Builds a state from raw amplitudes, renormalizing to unit norm.
    pub fn new(amps: Vec<C64>) -> Result<Self, QcoreError> {
        if amps.len() < 2 {
            return Err(QcoreError::DimensionTooSmall(amps.len()));
        }
        let mut state = Self { amps };
        state.renormalize()?;
        Ok(state)
    }

    /// Builds a state from real amplitudes.
    pub fn from_real(components: &[f64]) -> Result<Self, QcoreError> {
        Self::new(components.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    /// Computational basis state |index>.
    pub fn basis(dim: usize, index: usize) -> Result<Self, QcoreError> {
        if dim < 2 {
            return Err(QcoreError::DimensionTooSmall(dim));
        }
        if index >= dim {
            return Err(QcoreError::LevelOutOfRange { level: index, dim });
        }
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        amps[index] = C64::new(1.0, 0.0);
        Ok(Self { amps })
    }

    /// Wraps amplitudes that are already unit-norm (callers guarantee it).
    pub(crate) fn from_normalized(amps: Vec<C64>) -> Self {
        debug_assert!(amps.len() >= 2);
        debug_assert!((amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt() - 1.0).abs() < 1e-8);
        Self { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Rescales to unit norm; errors on an exactly zero vector.
    pub fn renormalize(&mut self) -> Result<(), QcoreError> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(QcoreError::ZeroNorm);
        }
        for a in &mut self.amps {
            *a /= n;
        }
        Ok(())
    }

    /// Inner product <self|other>.
    pub fn overlap(&self, other: &Self) -> Result<C64, QcoreError> {
        check_dims(self.dim(), other.dim())?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Fubini-Study angle arccos(|<self|other>|), in [0, pi/2].
    ///
    /// The arccos argument is clamped to [0, 1] against round-off.
    pub fn fubini_angle(&self, other: &Self) -> Result<f64, QcoreError> {
        let f = self.overlap(other)?.norm();
        Ok(f.clamp(0.0, 1.0).acos())
    }

    /// Multiplies all amplitudes by a unit-magnitude phase factor.
    pub fn with_phase(&self, phase: C64) -> Self {
        Self {
            amps: self.amps.iter().map(|a| a * phase).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_normalizes() {
        let s = StateVector::new(vec![C64::new(3.0, 0.0), C64::new(4.0, 0.0)]).unwrap();
        assert!((s.norm() - 1.0).abs() < 1e-12);
        assert!((s.amplitudes()[0].re - 0.6).abs() < 1e-12);
    }

    #[test]
    fn rejects_dimension_one() {
        assert!(matches!(
            StateVector::new(vec![C64::new(1.0, 0.0)]),
            Err(QcoreError::DimensionTooSmall(1))
        ));
    }

    #[test]
    fn rejects_zero_vector() {
        assert!(matches!(
            StateVector::new(vec![C64::new(0.0, 0.0); 3]),
            Err(QcoreError::ZeroNorm)
        ));
    }

    #[test]
    fn fubini_identity_and_orthogonal() {
        let a = StateVector::from_real(&[1.0, 0.0]).unwrap();
        let b = StateVector::from_real(&[0.0, 1.0]).unwrap();
        assert!(a.fubini_angle(&a).unwrap() < 1e-7);
        assert!((a.fubini_angle(&b).unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn fubini_matches_arccos_of_overlap() {
        // |<a|b>| = 0.6 -> arccos(0.6)
        let a = StateVector::from_real(&[1.0, 0.0]).unwrap();
        let b = StateVector::from_real(&[0.6, 0.8]).unwrap();
        assert!((a.fubini_angle(&b).unwrap() - 0.6_f64.acos()).abs() < 1e-12);
    }

    #[test]
    fn fubini_dimension_mismatch() {
        let a = StateVector::from_real(&[1.0, 0.0]).unwrap();
        let b = StateVector::from_real(&[1.0, 0.0, 0.0]).unwrap();
        assert!(a.fubini_angle(&b).is_err());
    }
}
