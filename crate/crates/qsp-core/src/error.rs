//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
#[non_exhaustive]
pub enum Error {
    /// A numeric input that must be finite was NaN or infinite.
    #[error("{name} must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },

    /// A strictly positive quantity (tau, hbar, ...) was zero or negative.
    #[error("{name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },

    /// The classical probability rule received a signed signal vector.
    #[error("classical rule requires nonnegative signals, got ({a1}, {a2})")]
    NegativeClassicalSignal { a1: f64, a2: f64 },

    /// Total signal is zero; classical probabilities are undefined.
    #[error("total signal is zero, probabilities are undefined")]
    ZeroTotalSignal,

    /// The Born rule received the zero vector.
    #[error("Born rule is undefined for the zero signal vector")]
    ZeroSignalVector,

    /// Initial state must have c1^2 + c2^2 > 0.
    #[error("initial state must satisfy c1^2 + c2^2 > 0")]
    ZeroInitialState,

    /// A classical (nonnegative-rate) operation received negative rates.
    #[error("classical dynamics require nonnegative transition rates")]
    NegativeRates,

    /// A transition matrix column is entirely zero.
    #[error("transition matrix column {column} is zero")]
    ZeroColumn { column: usize },

    /// The all-zero transition matrix admits no dynamics.
    #[error("transition matrix is zero")]
    ZeroMatrix,

    /// Column sums differ from 1; Markov propagation does not apply.
    #[error("column sums must equal 1 for Markov propagation")]
    NotMarkov,

    /// The matrix fits none of the four dynamics regimes.
    #[error("dynamics fall outside every regime (det = 0 without equal-row or pure-swap structure)")]
    UnclassifiedDynamics,

    /// beta and delta cannot both vanish (the oscillation period would be undefined).
    #[error("beta and delta cannot both be zero")]
    DegenerateHamiltonian,

    /// Exhaustive path enumeration would exceed the configured budget.
    #[error("oracle budget exceeded: {required} weighted paths exceed the cap of {budget}")]
    OracleBudgetExceeded { required: u128, budget: u64 },

    /// Path enumeration needs at least one nonzero initial multiplicity.
    #[error("initial multiplicities cannot both be zero")]
    ZeroInitialMultiplicities,

    /// A channel sign outside {-1, +1}.
    #[error("channel signs must be +1 or -1, got {sign}")]
    InvalidChannelSign { sign: i8 },

    /// Event matrices need at least one transmitted qubit.
    #[error("event matrix requires a_plus + a_minus >= 1")]
    EmptyEventMatrix,

    /// Rotation indices are quarter turns 0..=3.
    #[error("rotation index must be in 0..=3, got {rotation}")]
    InvalidRotation { rotation: u8 },

    /// The mean event matrix failed its {0, 1} / central-block structure check.
    /// This would falsify the counting claim the ensemble is built on.
    #[error("born ensemble falsified: {0}")]
    EnsembleFalsified(String),

    /// A cell was neither invariant (+1 in all four rotations) nor
    /// alternating (+1 in exactly two).
    #[error("event-matrix cell classification falsified: {0}")]
    CellTypeFalsified(String),

    /// lambda = 0 does not define a transition matrix.
    #[error("lambda must be nonzero")]
    ZeroLambda,

    /// Hamiltonian equivalence requires a symmetric transition matrix.
    #[error("no equivalent Hamiltonian: transition matrix is not symmetric (k12 != k21)")]
    AsymmetricTransition,

    /// Hamiltonian equivalence requires the sustained-oscillation structure.
    #[error("no equivalent Hamiltonian: transition matrix does not sustain oscillations")]
    NotOscillatory,

    /// K^2 + L^2 must be 1 for a normalized transition.
    #[error("normalized transition requires K^2 + L^2 = 1, got {norm_sqr}")]
    NotNormalized { norm_sqr: f64 },

    /// The interpolating wave function requires a normalized initial state.
    #[error("initial state must be normalized (c1^2 + c2^2 = 1), got norm^2 = {norm_sqr}")]
    UnnormalizedInitialState { norm_sqr: f64 },
}
