//! Bridges between the signed discrete process and the continuous
//! two-level solution: the oscillation condition, the rate/Hamiltonian
//! mapping, unitary normalization with closed-form matrix powers, the
//! interpolating wave function, and the fair coin.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::process::{InitialState, TransitionMatrix, STRUCTURAL_TOL};
use crate::schrodinger::{Hamiltonian, WaveFunction};

/// True iff the signed process sustains probability oscillations:
/// `k11 = -k22` with `k22^2 + k12 k21 != 0`, excluding the `k21 = 0`
/// branch whose probabilities are frozen at their initial value.
pub fn oscillation_condition(k: &TransitionMatrix) -> bool {
    let antisymmetric_diagonal = (k.k11 + k.k22).abs() <= STRUCTURAL_TOL;
    let nondegenerate = (k.k22 * k.k22 + k.k12 * k.k21).abs() > STRUCTURAL_TOL;
    let frozen = k.k21.abs() <= STRUCTURAL_TOL && k.k11.abs() > STRUCTURAL_TOL;
    antisymmetric_diagonal && nondegenerate && !frozen
}

/// Transition matrix equivalent to a Hamiltonian: `K = lambda (H - alpha I)`,
/// i.e. `k11 = -k22 = lambda delta`, `k12 = k21 = lambda beta`.
pub fn transition_from_hamiltonian(h: &Hamiltonian, lambda: f64) -> Result<TransitionMatrix> {
    if !lambda.is_finite() {
        return Err(Error::NonFinite { name: "lambda", value: lambda });
    }
    if lambda == 0.0 {
        return Err(Error::ZeroLambda);
    }
    TransitionMatrix::new(
        lambda * h.delta(),
        lambda * h.beta(),
        lambda * h.beta(),
        -lambda * h.delta(),
    )
}

/// Invert [`transition_from_hamiltonian`]: `beta = k12 / lambda`,
/// `delta = k11 / lambda`, with the caller's `alpha` (which the forward
/// map discards).
pub fn hamiltonian_from_transition(
    k: &TransitionMatrix,
    lambda: f64,
    alpha: f64,
) -> Result<Hamiltonian> {
    if !lambda.is_finite() {
        return Err(Error::NonFinite { name: "lambda", value: lambda });
    }
    if lambda == 0.0 {
        return Err(Error::ZeroLambda);
    }
    if (k.k12 - k.k21).abs() > STRUCTURAL_TOL {
        return Err(Error::AsymmetricTransition);
    }
    if !oscillation_condition(k) {
        return Err(Error::NotOscillatory);
    }
    Hamiltonian::new(alpha, k.k12 / lambda, k.k11 / lambda)
}

/// Symmetric oscillatory transition matrix rescaled to `K^2 + L^2 = 1`,
/// stored as the diagonal rate `K` and cross rate `L` of
/// `[[K, L], [L, -K]]`.
///
/// The represented matrix is symmetric and orthogonal, so its square is
/// the identity and signal norms are preserved exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizedTransition {
    self_rate: f64,
    cross_rate: f64,
}

impl NormalizedTransition {
    pub fn new(self_rate: f64, cross_rate: f64) -> Result<Self> {
        let norm_sqr = self_rate * self_rate + cross_rate * cross_rate;
        if !norm_sqr.is_finite() || (norm_sqr - 1.0).abs() > STRUCTURAL_TOL {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self { self_rate, cross_rate })
    }

    /// Diagonal rate `K` (`k11 = -k22`).
    pub fn self_rate(&self) -> f64 {
        self.self_rate
    }

    /// Cross rate `L` (`k12 = k21`).
    pub fn cross_rate(&self) -> f64 {
        self.cross_rate
    }

    /// The matrix `[[K, L], [L, -K]]`.
    pub fn matrix(&self) -> TransitionMatrix {
        TransitionMatrix {
            k11: self.self_rate,
            k12: self.cross_rate,
            k21: self.cross_rate,
            k22: -self.self_rate,
        }
    }

    /// Closed form of the n-th power: the identity for even `n`, the
    /// matrix itself for odd `n` (its square is the identity).
    pub fn power(&self, n: u32) -> [[f64; 2]; 2] {
        if n % 2 == 0 {
            [[1.0, 0.0], [0.0, 1.0]]
        } else {
            [
                [self.self_rate, self.cross_rate],
                [self.cross_rate, -self.self_rate],
            ]
        }
    }
}

/// Rescale a symmetric oscillatory transition matrix to `K^2 + L^2 = 1`.
///
/// Squared-signal probabilities are invariant under the rescaling, so the
/// normalized matrix generates the same observable process.
pub fn normalize_unitary(k: &TransitionMatrix) -> Result<NormalizedTransition> {
    if k.k11 == 0.0 && k.k12 == 0.0 && k.k21 == 0.0 && k.k22 == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    if (k.k12 - k.k21).abs() > STRUCTURAL_TOL {
        return Err(Error::AsymmetricTransition);
    }
    if !oscillation_condition(k) {
        return Err(Error::NotOscillatory);
    }
    let norm = k.k11.hypot(k.k12);
    Ok(NormalizedTransition {
        self_rate: k.k11 / norm,
        cross_rate: k.k12 / norm,
    })
}

/// Smooth interpolation of the discrete squared-signal probabilities:
/// `psi(t) = X(t) c - i X(t + tau) (K c)` with `X(t) = cos(pi t / (2 tau))`.
///
/// At `t = n tau` the squared moduli reproduce the step-`n` probabilities;
/// the total probability is 1 at every `t`. With
/// `(K, L) = (-delta, -beta) / sqrt(beta^2 + delta^2)` and
/// `tau = period / 2` this equals the continuous solution at `alpha = 0`.
pub fn interpolating_wavefunction(
    transition: &NormalizedTransition,
    c: &InitialState,
    t: f64,
    tau: f64,
) -> Result<WaveFunction> {
    if !tau.is_finite() || tau <= 0.0 {
        return Err(Error::NonPositive { name: "tau", value: tau });
    }
    let norm_sqr = c.norm_sqr();
    if (norm_sqr - 1.0).abs() > STRUCTURAL_TOL {
        return Err(Error::UnnormalizedInitialState { norm_sqr });
    }
    let x_now = (PI * t / (2.0 * tau)).cos();
    let x_next = (PI * (t + tau) / (2.0 * tau)).cos();
    let stepped = transition.matrix().apply((c.c1, c.c2));
    Ok(WaveFunction {
        psi1: Complex64::new(x_now * c.c1, -x_next * stepped.0),
        psi2: Complex64::new(x_now * c.c2, -x_next * stepped.1),
        t,
    })
}

/// Landing probabilities of the fair coin as a function of the impact
/// angle: `(cos^2(phi / 2), sin^2(phi / 2))`.
pub fn coin_probabilities(phi: f64) -> (f64, f64) {
    let half = 0.5 * phi;
    (half.cos().powi(2), half.sin().powi(2))
}
