//! Discrete two-state stochastic processes, classical and signed.
//!
//! The same propagation rule — a 2x2 transition matrix applied step by
//! step to a pair of transmitted signals — supports two probability rules:
//! the classical one, proportional to the signal itself, and the
//! squared-signal rule that emerges from counting signed recombination
//! events. This crate implements both, together with the machinery used
//! to cross-verify them:
//!
//! - [`process`]: signal propagation, both probability rules, Markov
//!   reduction and dynamics classification;
//! - [`schrodinger`]: the closed-form two-level reference solution;
//! - [`paths`]: exact brute-force enumeration of signed channel paths,
//!   the independent oracle for matrix-power propagation;
//! - [`ensemble`]: recombination-event matrices, their quarter-turn
//!   rotations and the rotation average;
//! - [`equivalence`]: the rate/Hamiltonian mapping, unitary
//!   normalization, the interpolating wave function and the fair coin;
//! - [`presets`]: the parameter sets behind the CLI `--figure` presets.
//!
//! Everything is a pure function of its inputs; values are `Send + Sync`
//! and parameter sweeps can be parallelized freely.

pub mod ensemble;
pub mod equivalence;
pub mod error;
pub mod paths;
pub mod presets;
pub mod process;
pub mod schrodinger;

pub use ensemble::{classify_cells, four_rotations, mean_over_rotations, BornEnsemble, EventMatrix};
pub use equivalence::{
    coin_probabilities, hamiltonian_from_transition, interpolating_wavefunction,
    normalize_unitary, oscillation_condition, transition_from_hamiltonian, NormalizedTransition,
};
pub use error::{Error, Result};
pub use paths::{
    ChannelMatrix, OracleMismatch, PathCount, PathOracle, State, VerificationReport,
    DEFAULT_BUDGET,
};
pub use process::{
    born_probability, classical_probability, DynamicsClass, InitialState, SignalVector,
    TransitionMatrix, STRUCTURAL_TOL,
};
pub use schrodinger::{Hamiltonian, WaveFunction};
