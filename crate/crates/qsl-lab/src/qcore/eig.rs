//! Hermitian eigensolver: closed-form for 2x2, cyclic Jacobi for general
//! dense matrices. No external linear-algebra dependency; adequate for the
//! dimensions used here (capped at [`DENSE_EIG_CAP`]).

use super::{C64, HermitianOperator, QcoreError, Repr};

/// Largest dimension accepted by the dense Jacobi path.
pub const DENSE_EIG_CAP: usize = 4096;

const MAX_SWEEPS: usize = 64;

/// Eigenvalues in ascending order with matching orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    /// `eigenvectors[n]` is the column eigenvector for `eigenvalues[n]`.
    pub eigenvectors: Vec<Vec<C64>>,
}

impl EigenDecomposition {
    /// Smallest gap between consecutive eigenvalues.
    pub fn min_gap(&self) -> f64 {
        self.eigenvalues
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min)
    }
}

pub(crate) fn eig_herm(op: &HermitianOperator) -> Result<EigenDecomposition, QcoreError> {
    match op.repr() {
        Repr::TwoByTwo => Ok(eig_2x2(op)),
        Repr::Diagonal => Ok(eig_diagonal(op)),
        Repr::Dense => {
            if op.dim() == 2 {
                Ok(eig_2x2(op))
            } else {
                eig_jacobi(op)
            }
        }
    }
}

fn eig_diagonal(op: &HermitianOperator) -> EigenDecomposition {
    let d = op.dim();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| {
        op.entry(a, a)
            .re
            .partial_cmp(&op.entry(b, b).re)
            .expect("diagonal entries are finite")
    });
    let eigenvalues = order.iter().map(|&i| op.entry(i, i).re).collect();
    let eigenvectors = order
        .iter()
        .map(|&i| {
            let mut v = vec![C64::new(0.0, 0.0); d];
            v[i] = C64::new(1.0, 0.0);
            v
        })
        .collect();
    EigenDecomposition {
        eigenvalues,
        eigenvectors,
    }
}

/// Closed-form 2x2 Hermitian eigendecomposition.
///
/// For H = [[a, b], [conj(b), d]] the eigenvector (b, lambda - a) is exact and
/// the two branches are exactly orthogonal; the larger-norm branch is chosen
/// per level for stability.
fn eig_2x2(op: &HermitianOperator) -> EigenDecomposition {
    let a = op.entry(0, 0).re;
    let d = op.entry(1, 1).re;
    let b = op.entry(0, 1);
    let mid = 0.5 * (a + d);
    let half_diff = 0.5 * (a - d);
    let radius = (half_diff * half_diff + b.norm_sqr()).sqrt();
    let lo = mid - radius;
    let hi = mid + radius;

    if b.norm() == 0.0 {
        let (order, vals) = if a <= d { ([0, 1], [a, d]) } else { ([1, 0], [d, a]) };
        let mut vecs = vec![vec![C64::new(0.0, 0.0); 2]; 2];
        vecs[0][order[0]] = C64::new(1.0, 0.0);
        vecs[1][order[1]] = C64::new(1.0, 0.0);
        return EigenDecomposition {
            eigenvalues: vec![vals[0], vals[1]],
            eigenvectors: vecs,
        };
    }

    let vector_for = |lambda: f64| -> Vec<C64> {
        // Both (b, lambda - a) and (lambda - d, conj(b)) solve the eigen
        // equation; pick the better-conditioned one.
        let v1 = [b, C64::new(lambda - a, 0.0)];
        let v2 = [C64::new(lambda - d, 0.0), b.conj()];
        let n1 = (v1[0].norm_sqr() + v1[1].norm_sqr()).sqrt();
        let n2 = (v2[0].norm_sqr() + v2[1].norm_sqr()).sqrt();
        let (v, n) = if n1 >= n2 { (v1, n1) } else { (v2, n2) };
        vec![v[0] / n, v[1] / n]
    };

    EigenDecomposition {
        eigenvalues: vec![lo, hi],
        eigenvectors: vec![vector_for(lo), vector_for(hi)],
    }
}

fn off_diagonal_norm(a: &[C64], d: usize) -> f64 {
    let mut sum = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                sum += a[i * d + j].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Cyclic Jacobi for complex Hermitian matrices.
fn eig_jacobi(op: &HermitianOperator) -> Result<EigenDecomposition, QcoreError> {
    let d = op.dim();
    assert!(
        d <= DENSE_EIG_CAP,
        "dense eigensolver capped at dimension {DENSE_EIG_CAP}, got {d}"
    );
    let mut a: Vec<C64> = op.entries().to_vec();
    let mut v: Vec<C64> = vec![C64::new(0.0, 0.0); d * d];
    for i in 0..d {
        v[i * d + i] = C64::new(1.0, 0.0);
    }

    let frob: f64 = a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    let tol = 1e-12 * frob.max(1.0);

    let mut converged = false;
    let mut sweeps = 0;
    while sweeps < MAX_SWEEPS {
        if off_diagonal_norm(&a, d) < tol {
            converged = true;
            break;
        }
        for p in 0..d {
            for q in (p + 1)..d {
                let apq = a[p * d + q];
                let r = apq.norm();
                if r == 0.0 {
                    continue;
                }
                let app = a[p * d + p].re;
                let aqq = a[q * d + q].re;
                // Phase that makes the pivot real, then a real Jacobi angle.
                let phase = apq / r;
                let tau = (app - aqq) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let sp = phase * s; // s * e^{i phi}
                let spc = sp.conj();

                // Column rotation: col_p' = c col_p + conj(sp) col_q,
                //                  col_q' = -sp col_p + c col_q.
                for k in 0..d {
                    let akp = a[k * d + p];
                    let akq = a[k * d + q];
                    a[k * d + p] = akp * c + akq * spc;
                    a[k * d + q] = akq * c - akp * sp;
                }
                // Row rotation (conjugate transpose of the same).
                for k in 0..d {
                    let apk = a[p * d + k];
                    let aqk = a[q * d + k];
                    a[p * d + k] = apk * c + aqk * sp;
                    a[q * d + k] = aqk * c - apk * spc;
                }
                // Clean the pivot pair and diagonal imaginary round-off.
                a[p * d + q] = C64::new(0.0, 0.0);
                a[q * d + p] = C64::new(0.0, 0.0);
                a[p * d + p] = C64::new(a[p * d + p].re, 0.0);
                a[q * d + q] = C64::new(a[q * d + q].re, 0.0);

                for k in 0..d {
                    let vkp = v[k * d + p];
                    let vkq = v[k * d + q];
                    v[k * d + p] = vkp * c + vkq * spc;
                    v[k * d + q] = vkq * c - vkp * sp;
                }
            }
        }
        sweeps += 1;
    }
    if !converged && off_diagonal_norm(&a, d) >= tol {
        return Err(QcoreError::EigNonConvergence {
            sweeps,
            off: off_diagonal_norm(&a, d),
        });
    }

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| {
        a[i * d + i]
            .re
            .partial_cmp(&a[j * d + j].re)
            .expect("eigenvalues are finite")
    });
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[i * d + i].re).collect();
    let eigenvectors: Vec<Vec<C64>> = order
        .iter()
        .map(|&col| (0..d).map(|row| v[row * d + col]).collect())
        .collect();
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}
