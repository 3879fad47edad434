use super::grid::{central_derivative, trapezoid_progressive};
use super::{DynamicsError, HamiltonianFn, TimeGrid, Trajectory, BASIS_ORTHONORMALITY_TOL};
use crate::qcore::{C64, HermitianOperator, QcoreError, SpectralFrame, StateVector, GAP_TOL};

/// Adiabatic reference trajectory for one spectral level: the instantaneous
/// eigenstate dressed with the dynamical phase (trapezoidal quadrature of the
/// eigenvalue) and the geometric factor (quadrature of `<n|dn/dt>` from
/// central differences of the gauge-fixed eigenvectors).
pub fn adiabatic_state(
    h: &HamiltonianFn,
    level: usize,
    grid: &TimeGrid,
) -> Result<Trajectory, DynamicsError> {
    let frame = SpectralFrame::compute(grid.times(), |t| h.at(t))?.gauge_fix_continuity()?;
    adiabatic_state_with_frame(level, grid, &frame)
}

/// Same as [`adiabatic_state`] but reusing an existing gauge-fixed frame.
pub fn adiabatic_state_with_frame(
    level: usize,
    grid: &TimeGrid,
    frame: &SpectralFrame,
) -> Result<Trajectory, DynamicsError> {
    let dim = frame.levels();
    if level >= dim {
        return Err(QcoreError::LevelOutOfRange { level, dim }.into());
    }
    let gap = frame.level_gap(level);
    if gap <= GAP_TOL {
        return Err(QcoreError::GapCollision {
            time: grid.t0(),
            level_a: level,
            level_b: level + 1,
            gap,
        }
        .into());
    }
    let n = grid.len();
    let dt = grid.dt();

    let energies: Vec<f64> = (0..n).map(|i| frame.eigenvalue(i, level)).collect();
    let dyn_phase = trapezoid_progressive(&energies, dt);

    // <n|dn/dt> per grid point, central differences (one-sided at the ends).
    let mut overlap_re = vec![0.0; n];
    let mut overlap_im = vec![0.0; n];
    for i in 0..n {
        let (a, b, w) = if i == 0 {
            (0, 1, 1.0 / dt)
        } else if i == n - 1 {
            (n - 2, n - 1, 1.0 / dt)
        } else {
            (i - 1, i + 1, 0.5 / dt)
        };
        let cur = frame.eigenvector(i, level);
        let lo = frame.eigenvector(a, level);
        let hi = frame.eigenvector(b, level);
        let mut acc = C64::new(0.0, 0.0);
        for k in 0..dim {
            acc += cur[k].conj() * (hi[k] - lo[k]) * w;
        }
        overlap_re[i] = acc.re;
        overlap_im[i] = acc.im;
    }
    let geo_re = trapezoid_progressive(&overlap_re, dt);
    let geo_im = trapezoid_progressive(&overlap_im, dt);

    let mut states = Vec::with_capacity(n);
    for i in 0..n {
        // exp(-i * dyn_phase - geometric_integral)
        let exponent = C64::new(-geo_re[i], -dyn_phase[i] - geo_im[i]);
        let factor = exponent.exp();
        let amps: Vec<C64> = frame
            .eigenvector(i, level)
            .iter()
            .map(|c| c * factor)
            .collect();
        states.push(StateVector::new(amps)?);
    }
    Ok(Trajectory::new(grid.clone(), states, vec![1.0; n]))
}

/// Counterdiabatic operator at grid point `time_index`:
/// `<m|H_CD|n> = i <m|dH/dt|n> / (e_n - e_m)` for `m != n`, zero diagonal.
///
/// `fd_step` is the finite-difference step used when `h` carries no analytic
/// derivative (callers typically pass `grid.dt() / 10`).
pub fn counterdiabatic(
    h: &HamiltonianFn,
    frame: &SpectralFrame,
    time_index: usize,
    fd_step: f64,
) -> Result<HermitianOperator, DynamicsError> {
    let t = frame.times()[time_index];
    let dim = frame.levels();
    let energies = frame.eigenvalues_at(time_index);
    for m in 0..dim - 1 {
        let gap = energies[m + 1] - energies[m];
        if gap <= GAP_TOL {
            return Err(QcoreError::GapCollision {
                time: t,
                level_a: m,
                level_b: m + 1,
                gap,
            }
            .into());
        }
    }
    let dh = h.derivative_at(t, fd_step);
    let elems = eigenbasis_elements(&dh, frame, time_index);

    let mut cd_eig = vec![C64::new(0.0, 0.0); dim * dim];
    for m in 0..dim {
        for nn in 0..dim {
            if m != nn {
                let denom = energies[nn] - energies[m];
                cd_eig[m * dim + nn] = C64::new(0.0, 1.0) * elems[m * dim + nn] / denom;
            }
        }
    }
    Ok(from_eigenbasis(&cd_eig, frame, time_index)?)
}

/// Counterdiabatic operators at every grid point of a gauge-fixed frame.
pub fn counterdiabatic_series(
    h: &HamiltonianFn,
    frame: &SpectralFrame,
    fd_step: f64,
) -> Result<Vec<HermitianOperator>, DynamicsError> {
    (0..frame.len())
        .map(|i| counterdiabatic(h, frame, i, fd_step))
        .collect()
}

/// Matrix elements `<m|op|n>` in the frame basis at one grid point.
fn eigenbasis_elements(op: &HermitianOperator, frame: &SpectralFrame, idx: usize) -> Vec<C64> {
    let dim = frame.levels();
    let mut buf = vec![C64::new(0.0, 0.0); dim];
    let mut out = vec![C64::new(0.0, 0.0); dim * dim];
    for nn in 0..dim {
        op.apply_into(frame.eigenvector(idx, nn), &mut buf);
        for m in 0..dim {
            let vm = frame.eigenvector(idx, m);
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..dim {
                acc += vm[k].conj() * buf[k];
            }
            out[m * dim + nn] = acc;
        }
    }
    out
}

/// Rebuilds a dense operator from its frame-basis elements.
fn from_eigenbasis(
    elems: &[C64],
    frame: &SpectralFrame,
    idx: usize,
) -> Result<HermitianOperator, QcoreError> {
    let dim = frame.levels();
    let mut entries = vec![C64::new(0.0, 0.0); dim * dim];
    for m in 0..dim {
        let vm = frame.eigenvector(idx, m);
        for nn in 0..dim {
            let vn = frame.eigenvector(idx, nn);
            let w = elems[m * dim + nn];
            if w.norm_sqr() == 0.0 {
                continue;
            }
            for r in 0..dim {
                for c in 0..dim {
                    entries[r * dim + c] += vm[r] * w * vn[c].conj();
                }
            }
        }
    }
    HermitianOperator::dense(dim, entries)
}

/// Splits `H = H0 + H1` in the moving basis `{U(t)|n(0)>}`: `H0` keeps the
/// basis-diagonal part, `H1` the rest. `basis` holds one propagated
/// trajectory per initial eigenstate, in level order.
pub fn moving_basis_decomposition(
    h: &HamiltonianFn,
    basis: &[Trajectory],
    time_index: usize,
) -> Result<(HermitianOperator, HermitianOperator), DynamicsError> {
    let dim = h.dim();
    if basis.len() != dim {
        return Err(DynamicsError::IncompleteBasis {
            dim,
            got: basis.len(),
        });
    }
    let states: Vec<&StateVector> = basis.iter().map(|b| b.state(time_index)).collect();
    let mut deviation: f64 = 0.0;
    for i in 0..dim {
        for j in i..dim {
            let dot = states[i].overlap(states[j])?;
            let expect = if i == j { 1.0 } else { 0.0 };
            deviation = deviation.max((dot.norm() - expect).abs());
        }
    }
    if deviation > BASIS_ORTHONORMALITY_TOL {
        return Err(DynamicsError::NonOrthonormalBasis { deviation });
    }

    let t = basis[0].grid().time(time_index);
    let hop = h.at(t);
    let mut h0_entries = vec![C64::new(0.0, 0.0); dim * dim];
    for st in &states {
        let energy = hop.expectation(st)?;
        let amps = st.amplitudes();
        for r in 0..dim {
            for c in 0..dim {
                h0_entries[r * dim + c] += amps[r] * energy * amps[c].conj();
            }
        }
    }
    let h0 = HermitianOperator::dense(dim, h0_entries)?;
    let h1 = hop.sub(&h0)?;
    Ok((h0, h1))
}

/// Grid-wide adiabatic-expansion data: counterdiabatic matrix elements in the
/// instantaneous eigenbasis and their gap-weighted time derivatives. Supplies
/// both the second-order effective-counterdiabatic approximation and the
/// variance estimate built from it.
pub struct AdiabaticExpansion {
    frame: SpectralFrame,
    /// Per grid point: `<m|H_CD|n>` in the frame basis (zero diagonal).
    cd_elems: Vec<Vec<C64>>,
    /// Per grid point: `q[m][n] = <m|H_CD|n> / (e_m - e_n)` for m != n.
    q_elems: Vec<Vec<C64>>,
    dt: f64,
}

impl AdiabaticExpansion {
    pub fn new(h: &HamiltonianFn, grid: &TimeGrid) -> Result<Self, DynamicsError> {
        let frame = SpectralFrame::compute(grid.times(), |t| h.at(t))?.gauge_fix_continuity()?;
        let dim = frame.levels();
        let fd_step = grid.dt() / 10.0;
        let mut cd_elems = Vec::with_capacity(grid.len());
        let mut q_elems = Vec::with_capacity(grid.len());
        for i in 0..grid.len() {
            let cd = counterdiabatic(h, &frame, i, fd_step)?;
            let elems = eigenbasis_elements(&cd, &frame, i);
            let energies = frame.eigenvalues_at(i);
            let mut q = vec![C64::new(0.0, 0.0); dim * dim];
            for m in 0..dim {
                for nn in 0..dim {
                    if m != nn {
                        q[m * dim + nn] = elems[m * dim + nn] / (energies[m] - energies[nn]);
                    }
                }
            }
            cd_elems.push(elems);
            q_elems.push(q);
        }
        Ok(Self {
            frame,
            cd_elems,
            q_elems,
            dt: grid.dt(),
        })
    }

    pub fn frame(&self) -> &SpectralFrame {
        &self.frame
    }

    fn q_derivative(&self, idx: usize, m: usize, nn: usize) -> C64 {
        let dim = self.frame.levels();
        let last = self.q_elems.len() - 1;
        let pick = |i: usize| self.q_elems[i][m * dim + nn];
        if idx == 0 {
            (pick(0) * -3.0 + pick(1) * 4.0 - pick(2)) / (2.0 * self.dt)
        } else if idx == last {
            (pick(last) * 3.0 - pick(last - 1) * 4.0 + pick(last - 2)) / (2.0 * self.dt)
        } else {
            (pick(idx + 1) - pick(idx - 1)) / (2.0 * self.dt)
        }
    }

    /// Off-diagonal second-order approximation of the effective
    /// counterdiabatic term:
    /// `<m|H1|n> ~ <m|H_CD|n> + i d/dt(<m|H_CD|n>/(e_m - e_n))`, zero diagonal.
    pub fn h1_at(&self, idx: usize) -> Result<HermitianOperator, DynamicsError> {
        let dim = self.frame.levels();
        let mut elems = vec![C64::new(0.0, 0.0); dim * dim];
        for m in 0..dim {
            for nn in 0..dim {
                if m != nn {
                    elems[m * dim + nn] = self.cd_elems[idx][m * dim + nn]
                        + C64::new(0.0, 1.0) * self.q_derivative(idx, m, nn);
                }
            }
        }
        Ok(from_eigenbasis(&elems, &self.frame, idx)?)
    }

    /// Variance estimate for the followed level:
    /// `sqrt(sum_{m != n} |d/dt(<m|H_CD|n>/(e_m - e_n))|^2)` per grid point.
    pub fn estimate_series(&self, level: usize) -> Result<Vec<f64>, DynamicsError> {
        let dim = self.frame.levels();
        if level >= dim {
            return Err(QcoreError::LevelOutOfRange { level, dim }.into());
        }
        let mut out = Vec::with_capacity(self.q_elems.len());
        for idx in 0..self.q_elems.len() {
            let mut acc = 0.0;
            for m in 0..dim {
                if m != level {
                    acc += self.q_derivative(idx, m, level).norm_sqr();
                }
            }
            out.push(acc.sqrt());
        }
        Ok(out)
    }
}

/// Assembles the full adiabatic propagator columns and checks the defining
/// equation `i dU/dt = (H + H_CD) U` column-wise; returns the worst residual.
/// Test support for smooth protocols.
pub fn adiabatic_propagator_residual(
    h: &HamiltonianFn,
    grid: &TimeGrid,
) -> Result<f64, DynamicsError> {
    let frame = SpectralFrame::compute(grid.times(), |t| h.at(t))?.gauge_fix_continuity()?;
    let dim = frame.levels();
    let columns: Vec<Trajectory> = (0..dim)
        .map(|level| adiabatic_state_with_frame(level, grid, &frame))
        .collect::<Result<_, _>>()?;
    let fd_step = grid.dt() / 10.0;
    let dt = grid.dt();
    let mut worst: f64 = 0.0;
    for i in 1..grid.len() - 1 {
        let hcd = counterdiabatic(h, &frame, i, fd_step)?;
        let gen = h.at(grid.time(i)).add(&hcd)?;
        for col in &columns {
            let prev = col.state(i - 1).amplitudes();
            let next = col.state(i + 1).amplitudes();
            let mut hbuf = vec![C64::new(0.0, 0.0); dim];
            gen.apply_into(col.state(i).amplitudes(), &mut hbuf);
            let mut resid = 0.0;
            for k in 0..dim {
                let du = (next[k] - prev[k]) / (2.0 * dt);
                resid += (C64::new(0.0, 1.0) * du - hbuf[k]).norm_sqr();
            }
            worst = worst.max(resid.sqrt());
        }
    }
    Ok(worst)
}
