//! Closed-form evolution of the two-level system with a real Hamiltonian.
//!
//! The Hamiltonian is `[[alpha + delta, beta], [beta, alpha - delta]]`. Its
//! propagator factors into a global phase `exp(-i alpha t / hbar)` times a
//! rotation by `theta = t * sqrt(beta^2 + delta^2) / hbar`, so probabilities
//! are independent of `alpha` and oscillate with period
//! `pi * hbar / sqrt(beta^2 + delta^2)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::process::InitialState;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hamiltonian {
    alpha: f64,
    beta: f64,
    delta: f64,
    hbar: f64,
}

/// Complex two-component amplitude at time `t`, normalized to unit total
/// probability by construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveFunction {
    pub psi1: Complex64,
    pub psi2: Complex64,
    pub t: f64,
}

impl Hamiltonian {
    /// Hamiltonian with `hbar = 1`.
    pub fn new(alpha: f64, beta: f64, delta: f64) -> Result<Self> {
        Self::with_hbar(alpha, beta, delta, 1.0)
    }

    pub fn with_hbar(alpha: f64, beta: f64, delta: f64, hbar: f64) -> Result<Self> {
        for (name, value) in [("alpha", alpha), ("beta", beta), ("delta", delta), ("hbar", hbar)] {
            if !value.is_finite() {
                return Err(Error::NonFinite { name, value });
            }
        }
        if hbar <= 0.0 {
            return Err(Error::NonPositive { name: "hbar", value: hbar });
        }
        if beta == 0.0 && delta == 0.0 {
            return Err(Error::DegenerateHamiltonian);
        }
        Ok(Self { alpha, beta, delta, hbar })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// `sqrt(beta^2 + delta^2)`, the angular scale of the oscillation.
    pub fn omega(&self) -> f64 {
        self.beta.hypot(self.delta)
    }

    /// Dimensionless phase `theta = t * omega / hbar`.
    pub fn theta(&self, t: f64) -> f64 {
        t * self.omega() / self.hbar
    }

    /// Oscillation period of the probabilities, `pi * hbar / omega`.
    pub fn period(&self) -> f64 {
        std::f64::consts::PI * self.hbar / self.omega()
    }

    /// Row-major matrix `[[alpha + delta, beta], [beta, alpha - delta]]`.
    pub fn matrix(&self) -> [[f64; 2]; 2] {
        [
            [self.alpha + self.delta, self.beta],
            [self.beta, self.alpha - self.delta],
        ]
    }

    /// Propagate the (internally normalized) initial state to time `t`.
    pub fn evolve(&self, c: &InitialState, t: f64) -> WaveFunction {
        let theta = self.theta(t);
        let (sin, cos) = theta.sin_cos();
        let w = self.omega();
        let i = Complex64::i();
        let phase = Complex64::from_polar(1.0, -self.alpha * t / self.hbar);

        let u11 = phase * (cos - i * (self.delta / w) * sin);
        let u12 = phase * (-i * (self.beta / w) * sin);
        let u21 = u12;
        let u22 = phase * (cos + i * (self.delta / w) * sin);

        let norm = c.norm_sqr().sqrt();
        WaveFunction {
            psi1: (u11 * c.c1 + u12 * c.c2) / norm,
            psi2: (u21 * c.c1 + u22 * c.c2) / norm,
            t,
        }
    }

    /// `(P1, P2)` at time `t`; independent of `alpha`.
    pub fn probabilities(&self, c: &InitialState, t: f64) -> (f64, f64) {
        self.evolve(c, t).probabilities()
    }

    /// `P1` at its two extremes, `theta = 0` and `theta = pi/2`.
    ///
    /// `P1(t)` is a convex combination of these two values at every time,
    /// so they bound the oscillation from both sides.
    pub fn amplitude_bounds(&self, c: &InitialState) -> (f64, f64) {
        let at_zero = self.probabilities(c, 0.0).0;
        // theta = pi/2 corresponds to t = pi*hbar/(2*omega) = period/2.
        let at_quarter_turn = self.probabilities(c, 0.5 * self.period()).0;
        (at_zero, at_quarter_turn)
    }
}

impl WaveFunction {
    /// `(|psi1|^2, |psi2|^2)`.
    pub fn probabilities(&self) -> (f64, f64) {
        (self.psi1.norm_sqr(), self.psi2.norm_sqr())
    }

    /// Total probability; 1 within rounding for any evolved state.
    pub fn norm_sqr(&self) -> f64 {
        self.psi1.norm_sqr() + self.psi2.norm_sqr()
    }
}
