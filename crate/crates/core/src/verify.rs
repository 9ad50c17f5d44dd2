//! Randomized property checks over the whole pipeline.
//!
//! Each suite draws seeded random configurations, evaluates one identity and
//! keeps the largest residual. The evaluators are plain function pointers so
//! a deliberately broken formula can be swapped in to confirm the suites
//! notice.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::compose::{transmission_probability, two_point_amplitudes};
use crate::direct_solver::solve_direct;
use crate::single_scatter::s_matrix;
use crate::u2param::{
    canonicalize, characteristic_matrix, decompose, ExtendedLength, PointInteraction, RawInteraction,
    U2Params,
};
use crate::{Result, ScatteringMatrix, TwoPointSolution};

pub type SMatrixFn = fn(&PointInteraction, f64) -> Result<ScatteringMatrix>;
pub type TwoPointFn = fn(&PointInteraction, &PointInteraction, f64) -> Result<TwoPointSolution>;
pub type TransmissionFn = fn(&PointInteraction, &PointInteraction, f64) -> Result<f64>;

#[derive(Debug, Clone, Copy)]
pub struct Evaluators {
    pub s_matrix: SMatrixFn,
    /// Closed-form amplitudes under test.
    pub two_point: TwoPointFn,
    /// Independent oracle for `two_point`.
    pub oracle: TwoPointFn,
    pub transmission: TransmissionFn,
}

impl Default for Evaluators {
    fn default() -> Self {
        Evaluators {
            s_matrix,
            two_point: two_point_amplitudes,
            oracle: solve_direct,
            transmission: transmission_probability,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Random configurations per suite.
    pub trials: usize,
    /// Wavenumbers per single interaction in the unitarity suite.
    pub k_per_interaction: usize,
    /// Two-point configurations in the `nu` suite.
    pub nu_configs: usize,
    /// Grid points per configuration in the `nu` suite.
    pub nu_grid: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 0,
            trials: 1000,
            k_per_interaction: 10,
            nu_configs: 100,
            nu_grid: 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyReport {
    pub name: String,
    pub samples: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    /// Evaluations that returned an error and so could not be checked.
    pub failures: usize,
    pub passed: bool,
}

impl PropertyReport {
    fn new(name: &str, tolerance: f64) -> Self {
        PropertyReport {
            name: name.into(),
            samples: 0,
            max_residual: 0.0,
            tolerance,
            failures: 0,
            passed: false,
        }
    }

    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    fn record(&mut self, residual: f64) {
        self.samples += 1;
        // NaN must count as a violation
        if !(residual <= self.max_residual) {
            self.max_residual = if residual.is_nan() { f64::INFINITY } else { residual };
        }
    }

    fn finish(mut self) -> Self {
        self.passed = self.failures == 0 && self.max_residual <= self.tolerance;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub config: VerifyConfig,
    pub properties: Vec<PropertyReport>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.properties.iter().all(|p| p.passed)
    }
}

/// A random canonical interaction with lengths in `(-5, 5)`. With
/// `infinite_rate > 0` each length is independently replaced by `+-inf`
/// with that probability.
pub fn random_interaction(rng: &mut impl Rng, infinite_rate: f64, xi: f64) -> PointInteraction {
    fn length(rng: &mut impl Rng, infinite_rate: f64) -> ExtendedLength {
        if infinite_rate > 0.0 && rng.gen_bool(infinite_rate) {
            if rng.gen_bool(0.5) {
                ExtendedLength::PositiveInfinite
            } else {
                ExtendedLength::NegativeInfinite
            }
        } else {
            ExtendedLength::Finite(rng.gen_range(-5.0..5.0))
        }
    }
    let a = length(rng, infinite_rate);
    let b = length(rng, infinite_rate);
    let mu = rng.gen_range(0.0..=PI);
    let nu = rng.gen_range(0.0..TAU);
    let raw = RawInteraction {
        l_plus: a,
        l_minus: b,
        mu,
        nu,
        xi,
    };
    canonicalize(raw).expect("sampled parameters are valid")
}

/// Two finite interactions with `xi1` in `(-3, 3)` and spacing in `(0.1, 5)`.
pub fn random_pair(rng: &mut impl Rng) -> (PointInteraction, PointInteraction) {
    let xi1 = rng.gen_range(-3.0..3.0);
    let d = rng.gen_range(0.1..5.0);
    (random_interaction(rng, 0.0, xi1), random_interaction(rng, 0.0, xi1 + d))
}

pub fn random_u2_params(rng: &mut impl Rng) -> U2Params {
    U2Params {
        theta_plus: rng.gen_range(0.0..TAU),
        theta_minus: rng.gen_range(0.0..TAU),
        mu: rng.gen_range(0.0..=PI),
        nu: rng.gen_range(0.0..TAU),
        l0: 1.0,
    }
}

fn random_k(rng: &mut impl Rng) -> f64 {
    // uniform in (0.01, 10]
    10.0 - rng.gen_range(0.0..9.99)
}

/// Closed-form amplitudes against the oracle, `max |difference|` over `A, B, C, D`.
pub fn oracle_equivalence(config: &VerifyConfig, ev: &Evaluators) -> PropertyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut report = PropertyReport::new("oracle_equivalence", 1e-9);
    for _ in 0..config.trials {
        let (p1, p2) = random_pair(&mut rng);
        let k = random_k(&mut rng);
        match ((ev.two_point)(&p1, &p2, k), (ev.oracle)(&p1, &p2, k)) {
            (Ok(x), Ok(y)) => report.record(
                [(x.a, y.a), (x.b, y.b), (x.c, y.c), (x.d, y.d)]
                    .iter()
                    .map(|(u, v)| (u - v).norm())
                    .fold(0.0, f64::max),
            ),
            _ => report.failures += 1,
        }
    }
    report.finish()
}

/// `|A|^2 + |D|^2 = 1` and `|B|^2 - |C|^2 = |D|^2` on the closed-form path.
pub fn flux(config: &VerifyConfig, ev: &Evaluators) -> PropertyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(1));
    let mut report = PropertyReport::new("flux", 1e-12);
    for _ in 0..config.trials {
        let (p1, p2) = random_pair(&mut rng);
        let k = random_k(&mut rng);
        match (ev.two_point)(&p1, &p2, k) {
            Ok(s) => report.record(s.flux_residuals().into_iter().fold(0.0, f64::max)),
            Err(_) => report.failures += 1,
        }
    }
    report.finish()
}

/// `|R|^2 + |T|^2 = 1` on both sides and `R_r conj(T_l) + T_r conj(R_l) = 0`,
/// with about one interaction in five carrying an infinite length.
pub fn unitarity(config: &VerifyConfig, ev: &Evaluators) -> PropertyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(2));
    let mut report = PropertyReport::new("unitarity", 1e-12);
    for _ in 0..config.trials {
        let xi = rng.gen_range(-3.0..3.0);
        let p = random_interaction(&mut rng, 0.1, xi);
        for _ in 0..config.k_per_interaction {
            let k = random_k(&mut rng);
            match (ev.s_matrix)(&p, k) {
                Ok(s) => report.record(s.unitarity_residuals().into_iter().fold(0.0, f64::max)),
                Err(_) => report.failures += 1,
            }
        }
    }
    report.finish()
}

/// `T2` at fixed lengths, `mu` and positions does not move when `nu1, nu2` are redrawn.
pub fn nu_invariance(config: &VerifyConfig, ev: &Evaluators) -> PropertyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(3));
    let mut report = PropertyReport::new("nu_invariance", 1e-12);
    for _ in 0..config.nu_configs {
        let (p1, p2) = random_pair(&mut rng);
        let q1 = p1.with_nu(rng.gen_range(0.0..TAU));
        let q2 = p2.with_nu(rng.gen_range(0.0..TAU));
        for j in 0..config.nu_grid {
            let k = 0.01 + (10.0 - 0.01) * (j + 1) as f64 / config.nu_grid as f64;
            match ((ev.transmission)(&p1, &p2, k), (ev.transmission)(&q1, &q2, k)) {
                (Ok(a), Ok(b)) => report.record((a - b).abs()),
                _ => report.failures += 1,
            }
        }
    }
    report.finish()
}

/// `decompose` inverts `characteristic_matrix`, and the two parameter
/// sets related by the double cover give the same matrix.
pub fn u2_round_trip(config: &VerifyConfig) -> [PropertyReport; 2] {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(4));
    let mut round = PropertyReport::new("u2_round_trip", 1e-10);
    let mut cover = PropertyReport::new("double_cover", 1e-12);
    for _ in 0..config.trials {
        let p = random_u2_params(&mut rng);
        let u = characteristic_matrix(&p);
        match decompose(u.matrix()) {
            Ok(q) => round.record(characteristic_matrix(&q).matrix().max_abs_diff(u.matrix())),
            Err(_) => round.failures += 1,
        }
        let twin = U2Params {
            theta_plus: p.theta_minus,
            theta_minus: p.theta_plus,
            mu: PI - p.mu,
            nu: p.nu + PI,
            l0: p.l0,
        };
        cover.record(characteristic_matrix(&twin).matrix().max_abs_diff(u.matrix()));
    }
    [round.finish(), cover.finish()]
}

/// Every suite, in a fixed order.
pub fn run_all(config: &VerifyConfig, ev: &Evaluators) -> VerifyReport {
    let [round, cover] = u2_round_trip(config);
    VerifyReport {
        config: *config,
        properties: vec![
            oracle_equivalence(config, ev),
            flux(config, ev),
            unitarity(config, ev),
            nu_invariance(config, ev),
            round,
            cover,
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::C64;

    fn small() -> VerifyConfig {
        VerifyConfig {
            seed: 3,
            trials: 200,
            k_per_interaction: 5,
            nu_configs: 20,
            nu_grid: 50,
        }
    }

    #[test]
    fn default_suites_pass() {
        let report = run_all(&small(), &Evaluators::default());
        for p in &report.properties {
            assert!(p.passed, "{p:?}");
            assert!(p.samples > 0);
        }
    }

    #[test]
    fn deterministic_for_a_seed() {
        let a = run_all(&small(), &Evaluators::default());
        let b = run_all(&small(), &Evaluators::default());
        assert_eq!(a, b);
    }

    fn wrong_sign_reflection(p: &PointInteraction, k: f64) -> Result<ScatteringMatrix> {
        let mut s = s_matrix(p, k)?;
        s.r_l = -s.r_l.conj();
        Ok(s)
    }

    fn leaky_amplitudes(p1: &PointInteraction, p2: &PointInteraction, k: f64) -> Result<TwoPointSolution> {
        let mut s = two_point_amplitudes(p1, p2, k)?;
        s.d *= C64::new(1.0 + 1e-6, 0.0);
        Ok(s)
    }

    fn nu_dependent(p1: &PointInteraction, p2: &PointInteraction, k: f64) -> Result<f64> {
        Ok(transmission_probability(p1, p2, k)? * (1.0 + 1e-3 * (p1.nu() - p2.nu()).cos()))
    }

    #[test]
    fn corrupted_formulas_are_caught() {
        let base = Evaluators::default();
        let report = unitarity(&small(), &Evaluators { s_matrix: wrong_sign_reflection, ..base });
        assert!(!report.passed);
        let report = flux(&small(), &Evaluators { two_point: leaky_amplitudes, ..base });
        assert!(!report.passed);
        let report = oracle_equivalence(&small(), &Evaluators { two_point: leaky_amplitudes, ..base });
        assert!(!report.passed);
        let report = nu_invariance(&small(), &Evaluators { transmission: nu_dependent, ..base });
        assert!(!report.passed);
    }

    #[test]
    fn nan_is_a_violation() {
        let mut r = PropertyReport::new("x", 1.0);
        r.record(0.5);
        r.record(f64::NAN);
        assert!(!r.finish().passed);
    }
}
