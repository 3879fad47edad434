use super::{DynamicsError, HamiltonianFn, TimeGrid, NORM_DRIFT_TOL};
use crate::qcore::{C64, StateVector};

/// Time-evolved state samples on a grid.
///
/// `states` are renormalized for downstream fidelity computations; `norms`
/// keeps the raw pre-renormalization norms as an integration-accuracy record.
#[derive(Debug, Clone)]
pub struct Trajectory {
    grid: TimeGrid,
    states: Vec<StateVector>,
    norms: Vec<f64>,
}

impl Trajectory {
    pub(crate) fn new(grid: TimeGrid, states: Vec<StateVector>, norms: Vec<f64>) -> Self {
        assert_eq!(grid.len(), states.len());
        assert_eq!(grid.len(), norms.len());
        Self {
            grid,
            states,
            norms,
        }
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn state(&self, index: usize) -> &StateVector {
        &self.states[index]
    }

    pub fn states(&self) -> &[StateVector] {
        &self.states
    }

    pub fn norms(&self) -> &[f64] {
        &self.norms
    }

    pub fn initial_state(&self) -> &StateVector {
        &self.states[0]
    }

    pub fn final_state(&self) -> &StateVector {
        self.states.last().expect("grid has at least 2 points")
    }

    pub fn max_norm_drift(&self) -> f64 {
        self.norms
            .iter()
            .map(|n| (n - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

/// Scratch buffers for repeated fourth-order Runge-Kutta steps.
pub struct Rk4Workspace {
    k1: Vec<C64>,
    k2: Vec<C64>,
    k3: Vec<C64>,
    k4: Vec<C64>,
    stage: Vec<C64>,
    hbuf: Vec<C64>,
}

impl Rk4Workspace {
    pub fn new(dim: usize) -> Self {
        let z = vec![C64::new(0.0, 0.0); dim];
        Self {
            k1: z.clone(),
            k2: z.clone(),
            k3: z.clone(),
            k4: z.clone(),
            stage: z.clone(),
            hbuf: z,
        }
    }
}

/// One fixed-step RK4 update of i d/dt psi = H(t) psi, with the Hamiltonian
/// evaluated at the step endpoints and midpoint.
pub fn rk4_step(h: &HamiltonianFn, t: f64, dt: f64, psi: &mut [C64], ws: &mut Rk4Workspace) {
    let minus_i = C64::new(0.0, -1.0);
    let half = dt / 2.0;

    let h_t = h.at(t);
    h_t.apply_into(psi, &mut ws.hbuf);
    for (k, hv) in ws.k1.iter_mut().zip(&ws.hbuf) {
        *k = minus_i * hv;
    }

    let h_mid = h.at(t + half);
    for ((s, p), k) in ws.stage.iter_mut().zip(psi.iter()).zip(&ws.k1) {
        *s = p + k * half;
    }
    h_mid.apply_into(&ws.stage, &mut ws.hbuf);
    for (k, hv) in ws.k2.iter_mut().zip(&ws.hbuf) {
        *k = minus_i * hv;
    }

    for ((s, p), k) in ws.stage.iter_mut().zip(psi.iter()).zip(&ws.k2) {
        *s = p + k * half;
    }
    h_mid.apply_into(&ws.stage, &mut ws.hbuf);
    for (k, hv) in ws.k3.iter_mut().zip(&ws.hbuf) {
        *k = minus_i * hv;
    }

    let h_end = h.at(t + dt);
    for ((s, p), k) in ws.stage.iter_mut().zip(psi.iter()).zip(&ws.k3) {
        *s = p + k * dt;
    }
    h_end.apply_into(&ws.stage, &mut ws.hbuf);
    for (k, hv) in ws.k4.iter_mut().zip(&ws.hbuf) {
        *k = minus_i * hv;
    }

    let w = dt / 6.0;
    for i in 0..psi.len() {
        psi[i] += (ws.k1[i] + (ws.k2[i] + ws.k3[i]) * 2.0 + ws.k4[i]) * w;
    }
}

/// Fixed-step RK4 propagation of `psi0` under `h` across `grid`.
///
/// Errors when the accumulated norm drift exceeds [`NORM_DRIFT_TOL`]; the fix
/// is a finer grid.
pub fn propagate(
    h: &HamiltonianFn,
    psi0: &StateVector,
    grid: &TimeGrid,
) -> Result<Trajectory, DynamicsError> {
    if h.dim() != psi0.dim() {
        return Err(DynamicsError::DimensionMismatch {
            left: h.dim(),
            right: psi0.dim(),
        });
    }
    let dt = grid.dt();
    let mut psi: Vec<C64> = psi0.amplitudes().to_vec();
    let mut ws = Rk4Workspace::new(psi.len());

    let mut states = Vec::with_capacity(grid.len());
    let mut norms = Vec::with_capacity(grid.len());
    states.push(psi0.clone());
    norms.push(psi0.norm());

    for i in 1..grid.len() {
        rk4_step(h, grid.time(i - 1), dt, &mut psi, &mut ws);
        let norm = psi.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        norms.push(norm);
        states.push(StateVector::from_normalized(
            psi.iter().map(|a| a / norm).collect(),
        ));
    }

    let drift = norms.iter().map(|n| (n - 1.0).abs()).fold(0.0, f64::max);
    if drift > NORM_DRIFT_TOL {
        return Err(DynamicsError::NormDrift {
            drift,
            n_steps: grid.len() - 1,
            tol: NORM_DRIFT_TOL,
        });
    }
    Ok(Trajectory::new(grid.clone(), states, norms))
}

/// Exact evolution under a time-independent diagonal Hamiltonian:
/// amplitudes are multiplied by exp(-i E_m t).
pub fn propagate_diagonal(energies: &[f64], psi0: &StateVector, t: f64) -> StateVector {
    assert_eq!(
        energies.len(),
        psi0.dim(),
        "energy list must match the state dimension"
    );
    let amps = psi0
        .amplitudes()
        .iter()
        .zip(energies)
        .map(|(a, &e)| {
            let phase = -e * t;
            a * C64::new(phase.cos(), phase.sin())
        })
        .collect();
    StateVector::from_normalized(amps)
}
