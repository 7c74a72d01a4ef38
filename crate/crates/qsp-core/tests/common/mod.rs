//! Shared helpers for the integration suites: a fixed-step fourth-order
//! integrator serving as the independent reference for the closed-form
//! two-level solution, small 2x2 helpers, and a seeded RNG.

#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qsp_core::{Hamiltonian, InitialState};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random Hamiltonian with couplings in [-3, 3] and omega bounded away
/// from zero.
pub fn random_hamiltonian<R: Rng>(rng: &mut R, alpha: f64) -> Hamiltonian {
    loop {
        let beta = rng.gen_range(-3.0..3.0);
        let delta = rng.gen_range(-3.0..3.0);
        if beta * beta + delta * delta > 0.01 {
            return Hamiltonian::new(alpha, beta, delta).unwrap();
        }
    }
}

/// Random normalized initial state bounded away from the poles.
pub fn random_normalized_state<R: Rng>(rng: &mut R) -> InitialState {
    let angle = rng.gen_range(0.0..std::f64::consts::TAU);
    InitialState::new(angle.cos(), angle.sin()).unwrap()
}

fn schrodinger_rhs(h: &Hamiltonian, psi: [Complex64; 2]) -> [Complex64; 2] {
    let m = h.matrix();
    let f = -Complex64::i() / h.hbar();
    [
        f * (m[0][0] * psi[0] + m[0][1] * psi[1]),
        f * (m[1][0] * psi[0] + m[1][1] * psi[1]),
    ]
}

/// Integrate the equation of motion with classic fixed-step RK4 from the
/// normalized initial state, returning `(t, psi)` at every step including
/// t = 0. Entirely independent of the closed-form propagator.
pub fn rk4_evolution(
    h: &Hamiltonian,
    c: &InitialState,
    t_end: f64,
    steps: u32,
) -> Vec<(f64, [Complex64; 2])> {
    let (c1, c2) = c.normalized();
    let mut psi = [Complex64::new(c1, 0.0), Complex64::new(c2, 0.0)];
    let dt = t_end / f64::from(steps);
    let mut out = Vec::with_capacity(steps as usize + 1);
    out.push((0.0, psi));
    for step in 0..steps {
        let k1 = schrodinger_rhs(h, psi);
        let k2 = schrodinger_rhs(h, add_scaled(psi, k1, 0.5 * dt));
        let k3 = schrodinger_rhs(h, add_scaled(psi, k2, 0.5 * dt));
        let k4 = schrodinger_rhs(h, add_scaled(psi, k3, dt));
        for i in 0..2 {
            psi[i] += (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        out.push((dt * f64::from(step + 1), psi));
    }
    out
}

fn add_scaled(psi: [Complex64; 2], k: [Complex64; 2], factor: f64) -> [Complex64; 2] {
    [psi[0] + factor * k[0], psi[1] + factor * k[1]]
}

pub fn mat2_mul(a: [[f64; 2]; 2], b: [[f64; 2]; 2]) -> [[f64; 2]; 2] {
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn max_abs_diff(a: [[f64; 2]; 2], b: [[f64; 2]; 2]) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            worst = worst.max((a[i][j] - b[i][j]).abs());
        }
    }
    worst
}
