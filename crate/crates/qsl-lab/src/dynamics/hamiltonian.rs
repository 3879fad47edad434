use crate::qcore::HermitianOperator;

type Evaluator = Box<dyn Fn(f64) -> HermitianOperator + Send + Sync>;

/// Time-dependent Hamiltonian with an optional analytic time derivative.
///
/// When no analytic derivative is attached, callers fall back to a central
/// finite difference; the evaluator must then accept times slightly outside
/// the queried point (one finite-difference step on either side).
pub struct HamiltonianFn {
    dim: usize,
    eval: Evaluator,
    deriv: Option<Evaluator>,
}

impl HamiltonianFn {
    pub fn new(
        dim: usize,
        eval: impl Fn(f64) -> HermitianOperator + Send + Sync + 'static,
    ) -> Self {
        Self {
            dim,
            eval: Box::new(eval),
            deriv: None,
        }
    }

    pub fn with_derivative(
        mut self,
        deriv: impl Fn(f64) -> HermitianOperator + Send + Sync + 'static,
    ) -> Self {
        self.deriv = Some(Box::new(deriv));
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn at(&self, t: f64) -> HermitianOperator {
        let h = (self.eval)(t);
        debug_assert_eq!(h.dim(), self.dim);
        h
    }

    pub fn has_analytic_derivative(&self) -> bool {
        self.deriv.is_some()
    }

    /// dH/dt at `t`: analytic when available, otherwise a central finite
    /// difference with step `fd_step`.
    pub fn derivative_at(&self, t: f64, fd_step: f64) -> HermitianOperator {
        if let Some(deriv) = &self.deriv {
            return deriv(t);
        }
        let plus = (self.eval)(t + fd_step);
        let minus = (self.eval)(t - fd_step);
        plus.sub(&minus)
            .expect("evaluator dimension is constant over time")
            .scaled(0.5 / fd_step)
    }
}

impl std::fmt::Debug for HamiltonianFn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HamiltonianFn")
            .field("dim", &self.dim)
            .field("analytic_derivative", &self.deriv.is_some())
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::C64;

    #[test]
    fn finite_difference_derivative_matches_analytic() {
        let eval = |t: f64| {
            HermitianOperator::two_by_two(t * t, C64::new(t, 0.5 * t * t), -t)
        };
        let h_fd = HamiltonianFn::new(2, eval);
        let h_an = HamiltonianFn::new(2, eval).with_derivative(|t: f64| {
            HermitianOperator::two_by_two(2.0 * t, C64::new(1.0, t), -1.0)
        });
        for &t in &[0.2, 0.7, 1.9] {
            let a = h_fd.derivative_at(t, 1e-5);
            let b = h_an.derivative_at(t, 1e-5);
            for (x, y) in a.entries().iter().zip(b.entries()) {
                assert!((x - y).norm() < 1e-9);
            }
        }
    }
}
