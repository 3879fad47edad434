//! Quantum-speed-limit laboratory for driven quantum systems.
//!
//! The crate simulates annealing-style Schrodinger dynamics, constructs
//! adiabatic reference states and counterdiabatic operators, and evaluates
//! speed-limit bounds on the fidelity between the time-evolved and adiabatic
//! states, including rate-function bounds that stay finite for many-body
//! systems. Three concrete systems are built in: a two-level sweep, the
//! transverse-field Ising chain factorized into momentum modes, and a
//! collective-spin quench with exact diagonal evolution.
//!
//! Start from the `examples/` directory for runnable demonstrations of each
//! capability, or the `qsl-lab` binary for the preset experiment suites.

pub mod dynamics;
pub mod qcore;
pub mod schedules;

pub use qcore::C64;
