//! Named parameter sets behind the command-line `--figure` presets, kept
//! here so the verification suites can drive the exact same numbers.

use crate::process::{DynamicsClass, InitialState, TransitionMatrix};
use crate::schrodinger::Hamiltonian;

/// Reference two-level parameters used by the `fig1`, `fig4a` and `fig4b`
/// presets.
pub const FIG1_ALPHA: f64 = 0.0;
pub const FIG1_BETA: f64 = 1.56;
pub const FIG1_DELTA: f64 = 1.255;
pub const FIG1_C1: f64 = 0.825;

pub fn fig1_hamiltonian() -> Hamiltonian {
    Hamiltonian::new(FIG1_ALPHA, FIG1_BETA, FIG1_DELTA).expect("preset parameters are valid")
}

/// Initial state with `c2 = sqrt(1 - c1^2)`.
pub fn fig1_initial() -> InitialState {
    InitialState::new(FIG1_C1, (1.0 - FIG1_C1 * FIG1_C1).sqrt())
        .expect("preset parameters are valid")
}

/// Classical matrices demonstrating the four dynamics regimes
/// (`fig3a`..`fig3d`).
pub fn fig3_matrix(class: DynamicsClass) -> TransitionMatrix {
    let (k11, k12, k21, k22) = match class {
        DynamicsClass::ImmediateStationary => (1.0, 1.0, 1.0, 1.0),
        DynamicsClass::MonotoneStationary => (2.0, 1.0, 1.0, 2.0),
        DynamicsClass::DampedOscillation => (1.0, 2.0, 2.0, 1.0),
        DynamicsClass::SustainedOscillation => (0.0, 1.0, 1.0, 0.0),
    };
    TransitionMatrix { k11, k12, k21, k22 }
}

/// Initial condition shared by the fig3 presets.
pub fn fig3_initial() -> InitialState {
    InitialState::new(1.0, 0.0).expect("preset parameters are valid")
}
