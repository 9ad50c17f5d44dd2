use std::f64::consts::PI;

use pointscatter::compose::{transmission_amplitude_closed_form, transmission_probability, two_point_amplitudes};
use pointscatter::direct_solver::solve_direct;
use pointscatter::resonance::{h_function, quartic_coefficients};
use pointscatter::single_scatter::s_matrix;
use pointscatter::{ExtendedLength, PointInteraction};
use proptest::prelude::*;

fn length() -> impl Strategy<Value = f64> {
    prop_oneof![-5.0..-0.05, 0.05..5.0]
}

fn interaction(xi: f64) -> impl Strategy<Value = PointInteraction> {
    (length(), length(), 0.05..PI - 0.05, 0.0..2.0 * PI).prop_map(move |(a, b, mu, nu)| {
        let (lp, lm) = if a >= b { (a, b) } else { (b, a) };
        PointInteraction::finite(lp, lm, mu, nu, xi).unwrap()
    })
}

fn pair() -> impl Strategy<Value = (PointInteraction, PointInteraction)> {
    (0.2..3.0f64).prop_flat_map(|d| (interaction(0.0), interaction(d)))
}

fn with_nu(p: &PointInteraction, nu: f64) -> PointInteraction {
    PointInteraction::new(p.l_plus(), p.l_minus(), p.mu(), nu, p.xi()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn s_matrix_is_unitary(p in interaction(0.0), k in 0.01..10.0f64) {
        let s = s_matrix(&p, k).unwrap();
        prop_assert!((s.r_r.norm_sqr() + s.t_r.norm_sqr() - 1.0).abs() < 1e-12);
        prop_assert!((s.r_l.norm_sqr() + s.t_l.norm_sqr() - 1.0).abs() < 1e-12);
        // columns orthogonal
        prop_assert!((s.r_r * s.t_l.conj() + s.t_r * s.r_l.conj()).norm() < 1e-12);
    }

    #[test]
    fn closed_form_matches_direct_solve((p1, p2) in pair(), k in 0.01..10.0f64) {
        let direct = solve_direct(&p1, &p2, k).unwrap();
        let series = two_point_amplitudes(&p1, &p2, k).unwrap();
        let closed = transmission_amplitude_closed_form(&p1, &p2, k).unwrap();
        prop_assert!((direct.d - series.d).norm() < 1e-9);
        prop_assert!((closed.norm_sqr() - direct.d.norm_sqr()).abs() < 1e-9);
    }

    #[test]
    fn transmission_ignores_nu((p1, p2) in pair(), k in 0.01..10.0f64, a in 0.0..2.0 * PI, b in 0.0..2.0 * PI) {
        let t = transmission_probability(&p1, &p2, k).unwrap();
        let u = transmission_probability(&with_nu(&p1, a), &with_nu(&p2, b), k).unwrap();
        prop_assert!((t - u).abs() < 1e-12);
    }

    #[test]
    fn quartic_roots_balance_h((p1, p2) in pair()) {
        let q = quartic_coefficients(&p1, &p2).unwrap();
        let scale = q.alpha.abs() + q.beta.abs() + q.gamma.abs();
        prop_assume!(scale > 1e-6);
        for k2 in q.roots_in_k_squared() {
            // stay away from double roots and grazing
            let slope = (4.0 * q.alpha * k2 + 2.0 * q.beta).abs() * k2;
            if !(1e-3..1e3).contains(&k2) || slope <= 1e-3 * scale {
                continue;
            }
            let h = h_function(&p1, &p2, k2.sqrt()).unwrap();
            prop_assert!((h.norm() - 1.0).abs() < 1e-8, "k2 = {k2}, |h| = {}", h.norm());
        }
    }
}

#[test]
fn infinite_lengths_are_accepted() {
    let p = PointInteraction::new(ExtendedLength::PositiveInfinite, ExtendedLength::Finite(0.0), 0.9, 0.0, 0.0).unwrap();
    let s = s_matrix(&p, 2.0).unwrap();
    assert!((s.t_r.norm_sqr() - 0.9_f64.sin().powi(2)).abs() < 1e-12);
}

#[test]
fn public_types_are_send_and_sync() {
    fn check<T: Send + Sync>() {}
    check::<PointInteraction>();
    check::<pointscatter::U2Params>();
    check::<pointscatter::ScatteringMatrix>();
    check::<pointscatter::TransferMatrix>();
    check::<pointscatter::TwoPointSolution>();
    check::<pointscatter::QuarticCoefficients>();
    check::<pointscatter::ResonanceClass>();
    check::<pointscatter::ResonanceRoot>();
    check::<pointscatter::Error>();
    check::<pointscatter::verify::VerifyReport>();
}
