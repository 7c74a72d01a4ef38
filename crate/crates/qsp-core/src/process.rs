//! Signal propagation on the two-state transition graph and the probability
//! rules that turn propagated signals into observation probabilities.
//!
//! A walker is transmitted along a graph layered by time step; the rate
//! `k_ij` counts the unit channels from state `j` to state `i`, so one step
//! of propagation is an ordinary matrix-vector product. Classical dynamics
//! restrict rates and signals to be nonnegative and normalize by the total
//! signal; signed dynamics keep the same propagation but normalize by the
//! squared signals.

use crate::error::{Error, Result};

/// Absolute tolerance for structural equality checks on user-given rates
/// (rates are inputs, not computed quantities).
pub const STRUCTURAL_TOL: f64 = 1e-12;

fn check_finite(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite { name, value })
    }
}

/// 2x2 matrix of transition rates. Entry `kij` is the rate of the
/// transition `j -> i`, so a signal column vector evolves as `a' = K a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionMatrix {
    pub k11: f64,
    pub k12: f64,
    pub k21: f64,
    pub k22: f64,
}

/// Pair of transmitted signals at a given step, together with the step
/// index and the mean time `tau` between transitions (`t = n * tau`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignalVector {
    pub a1: f64,
    pub a2: f64,
    pub n: u32,
    pub tau: f64,
}

/// Initial multiplicities (classical) or amplitudes (signed) of the two
/// states at step zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialState {
    pub c1: f64,
    pub c2: f64,
}

/// Long-time behavior of the classical process.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DynamicsClass {
    /// Equal rows: the stationary probability is reached at the first step.
    ImmediateStationary,
    /// det(K) > 0: the stationary probability is approached monotonically.
    MonotoneStationary,
    /// det(K) < 0: the stationary probability is approached with damped
    /// oscillations.
    DampedOscillation,
    /// Zero diagonal with positive cross rates: the probability oscillates
    /// between its two initial values forever.
    SustainedOscillation,
}

impl TransitionMatrix {
    pub fn new(k11: f64, k12: f64, k21: f64, k22: f64) -> Result<Self> {
        check_finite("k11", k11)?;
        check_finite("k12", k12)?;
        check_finite("k21", k21)?;
        check_finite("k22", k22)?;
        Ok(Self { k11, k12, k21, k22 })
    }

    pub fn det(&self) -> f64 {
        self.k11 * self.k22 - self.k12 * self.k21
    }

    /// Row-major entries `[[k11, k12], [k21, k22]]`.
    pub fn entries(&self) -> [[f64; 2]; 2] {
        [[self.k11, self.k12], [self.k21, self.k22]]
    }

    /// One matrix-vector product on a raw signal pair.
    pub fn apply(&self, a: (f64, f64)) -> (f64, f64) {
        (
            self.k11 * a.0 + self.k12 * a.1,
            self.k21 * a.0 + self.k22 * a.1,
        )
    }

    fn require_classical(&self) -> Result<()> {
        if self.k11 < 0.0 || self.k12 < 0.0 || self.k21 < 0.0 || self.k22 < 0.0 {
            Err(Error::NegativeRates)
        } else {
            Ok(())
        }
    }

    /// Advance a signal vector by one transition.
    pub fn propagate_step(&self, a: &SignalVector) -> SignalVector {
        let (a1, a2) = self.apply((a.a1, a.a2));
        SignalVector { a1, a2, n: a.n + 1, tau: a.tau }
    }

    /// Advance a signal vector by `n` transitions.
    pub fn propagate_n(&self, a: &SignalVector, n: u32) -> SignalVector {
        let mut v = *a;
        for _ in 0..n {
            v = self.propagate_step(&v);
        }
        v
    }

    /// Propagate an initial state `n` steps with time step `tau`.
    pub fn propagate_initial(&self, c: &InitialState, n: u32, tau: f64) -> Result<SignalVector> {
        Ok(self.propagate_n(&SignalVector::from_initial(c, tau)?, n))
    }

    /// True iff both column sums are 1 (within [`STRUCTURAL_TOL`]) and all
    /// rates are nonnegative, i.e. the rates are transition probabilities.
    pub fn is_markov(&self) -> bool {
        self.k11 >= 0.0
            && self.k12 >= 0.0
            && self.k21 >= 0.0
            && self.k22 >= 0.0
            && (self.k11 + self.k21 - 1.0).abs() <= STRUCTURAL_TOL
            && (self.k12 + self.k22 - 1.0).abs() <= STRUCTURAL_TOL
    }

    /// Propagate a probability vector directly: `p_n = K^n p_0`.
    ///
    /// Valid only for Markov matrices; the caller supplies `p0` with
    /// nonnegative entries summing to 1.
    pub fn markov_propagate(&self, p0: (f64, f64), n: u32) -> Result<(f64, f64)> {
        if !self.is_markov() {
            return Err(Error::NotMarkov);
        }
        let mut p = p0;
        for _ in 0..n {
            p = self.apply(p);
        }
        Ok(p)
    }

    /// Classify the long-time behavior of the classical process.
    ///
    /// Structural cases take precedence: equal rows first, then the
    /// zero-diagonal swap structure, then the sign of the determinant.
    pub fn classify_dynamics(&self) -> Result<DynamicsClass> {
        self.require_classical()?;
        if self.k11 == 0.0 && self.k12 == 0.0 && self.k21 == 0.0 && self.k22 == 0.0 {
            return Err(Error::ZeroMatrix);
        }
        let eq = |x: f64, y: f64| (x - y).abs() <= STRUCTURAL_TOL;
        if eq(self.k11, self.k21) && eq(self.k12, self.k22) {
            return Ok(DynamicsClass::ImmediateStationary);
        }
        if self.k11.abs() <= STRUCTURAL_TOL
            && self.k22.abs() <= STRUCTURAL_TOL
            && self.k12 > STRUCTURAL_TOL
            && self.k21 > STRUCTURAL_TOL
        {
            return Ok(DynamicsClass::SustainedOscillation);
        }
        let det = self.det();
        if det > STRUCTURAL_TOL {
            Ok(DynamicsClass::MonotoneStationary)
        } else if det < -STRUCTURAL_TOL {
            Ok(DynamicsClass::DampedOscillation)
        } else {
            Err(Error::UnclassifiedDynamics)
        }
    }

    /// Stationary probability of the classical process, if one exists.
    ///
    /// Solves the fixed point of the probability evolution map, a quadratic
    /// in `P1*`, and returns the root in [0, 1]. Returns `None` for the
    /// sustained-oscillation structure (zero diagonal, positive cross
    /// rates), where no stationary value exists. When both roots lie in
    /// [0, 1] the one reached by iterating from (c1, c2) = (1, 0) is
    /// selected.
    pub fn stationary_probability(&self) -> Result<Option<(f64, f64)>> {
        self.require_classical()?;
        if self.k11 == 0.0 && self.k21 == 0.0 {
            return Err(Error::ZeroColumn { column: 1 });
        }
        if self.k12 == 0.0 && self.k22 == 0.0 {
            return Err(Error::ZeroColumn { column: 2 });
        }
        if self.k11.abs() <= STRUCTURAL_TOL
            && self.k22.abs() <= STRUCTURAL_TOL
            && self.k12 > STRUCTURAL_TOL
            && self.k21 > STRUCTURAL_TOL
        {
            return Ok(None);
        }

        // P1 <- (k11 P1 + k12 (1-P1)) / ((k11+k21) P1 + (k12+k22)(1-P1));
        // setting P1 equal on both sides gives q2 x^2 + q1 x + q0 = 0.
        let q2 = self.k11 + self.k21 - self.k12 - self.k22;
        let q1 = 2.0 * self.k12 + self.k22 - self.k11;
        let q0 = -self.k12;

        let iterated = self.iterate_probability(1.0, 256);
        let p1 = if q2.abs() <= STRUCTURAL_TOL && q1.abs() <= STRUCTURAL_TOL {
            // Degenerate 0 = 0: every probability is stationary (K = s*I);
            // the iteration tiebreak from (1, 0) applies.
            iterated
        } else {
            let roots = solve_quadratic(q2, q1, q0);
            let slack = 1e-9;
            let in_unit: Vec<f64> = roots
                .into_iter()
                .filter(|r| (-slack..=1.0 + slack).contains(r))
                .map(|r| r.clamp(0.0, 1.0))
                .collect();
            match in_unit.as_slice() {
                [] => iterated,
                [r] => *r,
                many => *many
                    .iter()
                    .min_by(|a, b| {
                        (*a - iterated).abs().total_cmp(&(*b - iterated).abs())
                    })
                    .expect("nonempty"),
            }
        };
        Ok(Some((p1, 1.0 - p1)))
    }

    /// Iterate the probability evolution map, which is bounded in [0, 1]
    /// and therefore never overflows, unlike raw multiplicities.
    fn iterate_probability(&self, p0: f64, steps: u32) -> f64 {
        let mut p = p0;
        for _ in 0..steps {
            let num = self.k11 * p + self.k12 * (1.0 - p);
            let den = (self.k11 + self.k21) * p + (self.k12 + self.k22) * (1.0 - p);
            p = num / den;
        }
        p
    }
}

/// Real roots of `a x^2 + b x + c = 0`, degenerating to the linear case.
fn solve_quadratic(a: f64, b: f64, c: f64) -> Vec<f64> {
    if a == 0.0 {
        if b == 0.0 {
            return Vec::new();
        }
        return vec![-c / b];
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Vec::new();
    }
    let sq = disc.sqrt();
    // Citardauq form on one root avoids cancellation.
    let q = -0.5 * (b + b.signum() * sq);
    if q == 0.0 {
        vec![0.0, 0.0]
    } else {
        vec![q / a, c / q]
    }
}

impl SignalVector {
    pub fn new(a1: f64, a2: f64, n: u32, tau: f64) -> Result<Self> {
        check_finite("a1", a1)?;
        check_finite("a2", a2)?;
        check_finite("tau", tau)?;
        if tau <= 0.0 {
            return Err(Error::NonPositive { name: "tau", value: tau });
        }
        Ok(Self { a1, a2, n, tau })
    }

    /// Step-zero vector carrying the initial multiplicities.
    pub fn from_initial(c: &InitialState, tau: f64) -> Result<Self> {
        Self::new(c.c1, c.c2, 0, tau)
    }

    /// Physical time of this observation layer.
    pub fn time(&self) -> f64 {
        f64::from(self.n) * self.tau
    }
}

impl InitialState {
    pub fn new(c1: f64, c2: f64) -> Result<Self> {
        check_finite("c1", c1)?;
        check_finite("c2", c2)?;
        if c1 * c1 + c2 * c2 == 0.0 {
            return Err(Error::ZeroInitialState);
        }
        Ok(Self { c1, c2 })
    }

    pub fn norm_sqr(&self) -> f64 {
        self.c1 * self.c1 + self.c2 * self.c2
    }

    /// Components scaled to unit Euclidean norm.
    pub fn normalized(&self) -> (f64, f64) {
        let norm = self.norm_sqr().sqrt();
        (self.c1 / norm, self.c2 / norm)
    }
}

/// Probability proportional to the transmitted signal itself.
///
/// Requires nonnegative signals with a positive total; a negative entry
/// means a signed vector reached the classical rule.
pub fn classical_probability(a: &SignalVector) -> Result<(f64, f64)> {
    if a.a1 < 0.0 || a.a2 < 0.0 {
        return Err(Error::NegativeClassicalSignal { a1: a.a1, a2: a.a2 });
    }
    let total = a.a1 + a.a2;
    if total == 0.0 {
        return Err(Error::ZeroTotalSignal);
    }
    Ok((a.a1 / total, a.a2 / total))
}

/// Probability proportional to the squared transmitted signal.
///
/// Invariant under sign flips of either component; rejects only the zero
/// vector.
pub fn born_probability(a: &SignalVector) -> Result<(f64, f64)> {
    let s1 = a.a1 * a.a1;
    let s2 = a.a2 * a.a2;
    let total = s1 + s2;
    if total == 0.0 {
        return Err(Error::ZeroSignalVector);
    }
    Ok((s1 / total, s2 / total))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(k11: f64, k12: f64, k21: f64, k22: f64) -> TransitionMatrix {
        TransitionMatrix::new(k11, k12, k21, k22).unwrap()
    }

    fn sig(a1: f64, a2: f64, n: u32) -> SignalVector {
        SignalVector::new(a1, a2, n, 1.0).unwrap()
    }

    fn init(c1: f64, c2: f64) -> InitialState {
        InitialState::new(c1, c2).unwrap()
    }

    #[test]
    fn step_all_ones() {
        let v = m(1.0, 1.0, 1.0, 1.0).propagate_step(&sig(1.0, 0.0, 0));
        assert_eq!((v.a1, v.a2, v.n), (1.0, 1.0, 1));
    }

    #[test]
    fn step_identity_keeps_signal() {
        let v = m(1.0, 0.0, 0.0, 1.0).propagate_step(&sig(0.3, 0.7, 5));
        assert_eq!((v.a1, v.a2, v.n), (0.3, 0.7, 6));
    }

    #[test]
    fn step_swap() {
        let v = m(0.0, 1.0, 1.0, 0.0).propagate_step(&sig(1.0, 0.0, 0));
        assert_eq!((v.a1, v.a2, v.n), (0.0, 1.0, 1));
    }

    #[test]
    fn propagate_three_steps_all_ones() {
        let v = m(1.0, 1.0, 1.0, 1.0)
            .propagate_initial(&init(1.0, 0.0), 3, 1.0)
            .unwrap();
        assert_eq!((v.a1, v.a2, v.n), (4.0, 4.0, 3));
    }

    #[test]
    fn propagate_zero_steps_is_identity() {
        let v = m(0.2, 0.9, 0.4, 0.1)
            .propagate_initial(&init(2.0, 3.0), 0, 1.0)
            .unwrap();
        assert_eq!((v.a1, v.a2, v.n), (2.0, 3.0, 0));
    }

    #[test]
    fn swap_squared_is_identity() {
        let v = m(0.0, 1.0, 1.0, 0.0)
            .propagate_initial(&init(1.0, 0.0), 2, 1.0)
            .unwrap();
        assert_eq!((v.a1, v.a2), (1.0, 0.0));
    }

    #[test]
    fn classical_probability_examples() {
        assert_eq!(classical_probability(&sig(4.0, 4.0, 3)).unwrap(), (0.5, 0.5));
        assert_eq!(classical_probability(&sig(1.0, 3.0, 1)).unwrap(), (0.25, 0.75));
        let c = init(2.0, 6.0);
        let v = SignalVector::from_initial(&c, 1.0).unwrap();
        assert_eq!(classical_probability(&v).unwrap(), (0.25, 0.75));
    }

    #[test]
    fn classical_probability_rejects_signed_and_zero() {
        assert_eq!(
            classical_probability(&sig(-1.0, 2.0, 0)),
            Err(Error::NegativeClassicalSignal { a1: -1.0, a2: 2.0 })
        );
        assert_eq!(classical_probability(&sig(0.0, 0.0, 0)), Err(Error::ZeroTotalSignal));
    }

    #[test]
    fn born_probability_examples() {
        assert_eq!(born_probability(&sig(1.0, -1.0, 0)).unwrap(), (0.5, 0.5));
        assert_eq!(born_probability(&sig(0.0, 5.0, 0)).unwrap(), (0.0, 1.0));
        let c1 = 0.825_f64;
        let c2 = (1.0 - c1 * c1).sqrt();
        let (p1, _) = born_probability(&sig(c1, c2, 0)).unwrap();
        assert!((p1 - 0.680625).abs() < 1e-15);
        assert_eq!(born_probability(&sig(0.0, 0.0, 0)), Err(Error::ZeroSignalVector));
    }

    #[test]
    fn stationary_symmetric_cases() {
        assert_eq!(
            m(1.0, 1.0, 1.0, 1.0).stationary_probability().unwrap(),
            Some((0.5, 0.5))
        );
        let (p1, p2) = m(2.0, 1.0, 1.0, 2.0).stationary_probability().unwrap().unwrap();
        assert!((p1 - 0.5).abs() <= 1e-12 && (p2 - 0.5).abs() <= 1e-12);
    }

    #[test]
    fn stationary_matches_long_iteration() {
        let k = m(2.0, 1.0, 1.0, 2.0);
        let (p1, _) = k.stationary_probability().unwrap().unwrap();
        let v = k.propagate_initial(&init(1.0, 0.0), 64, 1.0).unwrap();
        let (p1_iter, _) = classical_probability(&v).unwrap();
        assert!((p1 - p1_iter).abs() <= 1e-12);
    }

    #[test]
    fn stationary_none_for_pure_swap() {
        assert_eq!(m(0.0, 1.0, 1.0, 0.0).stationary_probability().unwrap(), None);
        assert_eq!(m(0.0, 2.0, 3.0, 0.0).stationary_probability().unwrap(), None);
    }

    #[test]
    fn stationary_rejects_zero_column_and_negative() {
        assert_eq!(
            m(0.0, 1.0, 0.0, 1.0).stationary_probability(),
            Err(Error::ZeroColumn { column: 1 })
        );
        assert_eq!(
            m(1.0, -1.0, 1.0, 1.0).stationary_probability(),
            Err(Error::NegativeRates)
        );
    }

    #[test]
    fn stationary_two_fixed_points_picks_the_reachable_one() {
        // [[2,0],[1,1]] has fixed points 0 and 1/2; from (1,0) the walk
        // converges to 1/2.
        let r = m(2.0, 0.0, 1.0, 1.0).stationary_probability().unwrap().unwrap();
        assert!((r.0 - 0.5).abs() <= 1e-9, "got {}", r.0);
    }

    #[test]
    fn markov_detection() {
        assert!(m(0.3, 0.6, 0.7, 0.4).is_markov());
        assert!(!m(1.0, 1.0, 1.0, 1.0).is_markov());
        assert!(m(0.0, 1.0, 1.0, 0.0).is_markov());
        assert!(!m(-0.5, 1.5, 1.5, -0.5).is_markov());
    }

    #[test]
    fn markov_propagation_examples() {
        assert_eq!(
            m(0.0, 1.0, 1.0, 0.0).markov_propagate((1.0, 0.0), 1).unwrap(),
            (0.0, 1.0)
        );
        let (p1, p2) = m(0.5, 0.5, 0.5, 0.5).markov_propagate((0.2, 0.8), 1).unwrap();
        assert!((p1 - 0.5).abs() <= 1e-15 && (p2 - 0.5).abs() <= 1e-15);
        let (p1, p2) = m(0.3, 0.6, 0.7, 0.4).markov_propagate((1.0, 0.0), 2).unwrap();
        assert!((p1 - 0.51).abs() <= 1e-15 && (p2 - 0.49).abs() <= 1e-15);
    }

    #[test]
    fn markov_propagation_agrees_with_signal_route() {
        let k = m(0.3, 0.6, 0.7, 0.4);
        let direct = k.markov_propagate((1.0, 0.0), 2).unwrap();
        let v = k.propagate_initial(&init(1.0, 0.0), 2, 1.0).unwrap();
        let via_signals = classical_probability(&v).unwrap();
        assert!((direct.0 - via_signals.0).abs() <= 1e-15);
    }

    #[test]
    fn markov_propagation_rejects_unnormalized() {
        assert_eq!(
            m(1.0, 1.0, 1.0, 1.0).markov_propagate((1.0, 0.0), 1),
            Err(Error::NotMarkov)
        );
    }

    #[test]
    fn dynamics_regimes() {
        assert_eq!(
            m(1.0, 1.0, 1.0, 1.0).classify_dynamics().unwrap(),
            DynamicsClass::ImmediateStationary
        );
        assert_eq!(
            m(2.0, 1.0, 1.0, 2.0).classify_dynamics().unwrap(),
            DynamicsClass::MonotoneStationary
        );
        assert_eq!(
            m(1.0, 2.0, 2.0, 1.0).classify_dynamics().unwrap(),
            DynamicsClass::DampedOscillation
        );
        assert_eq!(
            m(0.0, 1.0, 1.0, 0.0).classify_dynamics().unwrap(),
            DynamicsClass::SustainedOscillation
        );
    }

    #[test]
    fn dynamics_precedence_and_rejections() {
        // Equal rows beat the determinant sign.
        assert_eq!(
            m(1.0, 2.0, 1.0, 2.0).classify_dynamics().unwrap(),
            DynamicsClass::ImmediateStationary
        );
        // Proportional but unequal rows: det = 0 without the structures.
        assert_eq!(
            m(1.0, 2.0, 2.0, 4.0).classify_dynamics(),
            Err(Error::UnclassifiedDynamics)
        );
        assert_eq!(
            m(-1.0, 1.0, 1.0, 1.0).classify_dynamics(),
            Err(Error::NegativeRates)
        );
        assert_eq!(
            m(0.0, 0.0, 0.0, 0.0).classify_dynamics(),
            Err(Error::ZeroMatrix)
        );
    }

    #[test]
    fn rejects_non_finite_and_bad_tau() {
        assert!(TransitionMatrix::new(f64::NAN, 0.0, 0.0, 0.0).is_err());
        assert!(SignalVector::new(1.0, 0.0, 0, 0.0).is_err());
        assert!(SignalVector::new(1.0, 0.0, 0, -2.0).is_err());
        assert!(InitialState::new(0.0, 0.0).is_err());
    }
}
