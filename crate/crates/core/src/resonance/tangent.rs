use serde::Serialize;

use super::classify::{CaseIIISubcase, ResonanceClass, ResonanceKind};
use crate::single_scatter::check_wavenumber;
use crate::u2param::{sin_cos_mu, PointInteraction};
use crate::{Error, Result};

/// The equation `tan(k d) = N(k) / Dn(k)` that fixes the resonances of a
/// matched case. All of them are written in the lengths of interaction 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TangentEquation {
    /// Case I, `cos(mu1) = cos(mu2)`.
    FI,
    /// Case I, `cos(mu1) = -cos(mu2)`.
    GI,
    /// Case II, `cos(mu1) = cos(mu2)`: `sin(k d) = 0`.
    SinKd,
    /// Case II, `cos(mu1) = -cos(mu2)`.
    FII,
    FIII(CaseIIISubcase),
}

pub(crate) struct TangentContext {
    lp: f64,
    lm: f64,
    c1: f64,
    c2: f64,
}

impl TangentContext {
    pub fn new(p1: &PointInteraction, p2: &PointInteraction) -> Result<Self> {
        let (Some(lp), Some(lm)) = (p1.l_plus().finite_value(), p1.l_minus().finite_value()) else {
            return Err(Error::InfiniteLength);
        };
        Ok(TangentContext {
            lp,
            lm,
            c1: sin_cos_mu(p1.mu()).1,
            c2: sin_cos_mu(p2.mu()).1,
        })
    }
}

impl TangentEquation {
    /// `(N, Dn)` at `k`.
    pub(crate) fn parts(&self, ctx: &TangentContext, k: f64) -> (f64, f64) {
        let TangentContext { lp, lm, c1, c2 } = *ctx;
        let prod = lp * lm;
        let k2 = k * k;
        match self {
            Self::FI => (k * (lp + lm), 1.0 - k2 * prod),
            Self::GI => (
                k * ((lp + lm) * (1.0 + k2 * prod) + c1 * (lp - lm) * (1.0 - k2 * prod)),
                (1.0 - k2 * k2 * prod * prod) - k2 * c1 * (lp + lm) * (lp - lm),
            ),
            Self::SinKd => (0.0, 1.0),
            Self::FII => (k * c1 * (lp - lm), 1.0 + k2 * prod),
            Self::FIII(sub) => {
                let sign = match sub {
                    CaseIIISubcase::I | CaseIIISubcase::Iii => 1.0,
                    CaseIIISubcase::Ii | CaseIIISubcase::Iv => -1.0,
                };
                let x = (lp - lm) * c1 + sign * (lp + lm) * c2;
                match sub {
                    CaseIIISubcase::I | CaseIIISubcase::Ii => {
                        (k * lm * x - 2.0 * k * prod, x + 2.0 * k2 * lp * lm * lm)
                    }
                    CaseIIISubcase::Iii | CaseIIISubcase::Iv => {
                        (k * lp * x - 2.0 * k * prod, x + 2.0 * k2 * lp * lp * lm)
                    }
                }
            }
        }
    }
}

/// Picks the tangent equation for a matched case. The `cos(mu1) = +-cos(mu2)`
/// sub-branch is whichever sign is closer.
pub fn tangent_equation(
    class: &ResonanceClass,
    p1: &PointInteraction,
    p2: &PointInteraction,
) -> Result<TangentEquation> {
    let c1 = sin_cos_mu(p1.mu()).1;
    let c2 = sin_cos_mu(p2.mu()).1;
    let same = (c1 - c2).abs() <= (c1 + c2).abs();
    match class.kind {
        ResonanceKind::CaseI if same => Ok(TangentEquation::FI),
        ResonanceKind::CaseI => Ok(TangentEquation::GI),
        ResonanceKind::CaseII if same => Ok(TangentEquation::SinKd),
        ResonanceKind::CaseII => Ok(TangentEquation::FII),
        ResonanceKind::CaseIII(sub) => Ok(TangentEquation::FIII(sub)),
        _ => Err(Error::WrongClass),
    }
}

/// Right-hand side of `tan(k (xi2 - xi1)) = f(k)` for the matched case.
/// For case II with `cos(mu1) = cos(mu2)` the equation is `sin(k d) = 0`,
/// reported as `f = 0`.
pub fn resonance_rhs(
    class: &ResonanceClass,
    p1: &PointInteraction,
    p2: &PointInteraction,
    k: f64,
) -> Result<f64> {
    check_wavenumber(k)?;
    let eq = tangent_equation(class, p1, p2)?;
    let (n, dn) = eq.parts(&TangentContext::new(p1, p2)?, k);
    if dn.abs() < 1e-300 {
        return Err(Error::PoleAt(k));
    }
    Ok(n / dn)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resonance::{classify, h_function, DEFAULT_CLASSIFY_TOL};
    use crate::C64;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_6, PI};

    fn pi(lp: f64, lm: f64, mu: f64, xi: f64) -> PointInteraction {
        PointInteraction::finite(lp, lm, mu, 0.0, xi).unwrap()
    }

    fn rhs(p1: &PointInteraction, p2: &PointInteraction, k: f64) -> Result<f64> {
        resonance_rhs(&classify(p1, p2, DEFAULT_CLASSIFY_TOL), p1, p2, k)
    }

    /// `tan(phi / 2)` with `phi = arg h`: the tangent equation is `e^{2ikd} = h` halved.
    fn tan_half_arg_h(p1: &PointInteraction, p2: &PointInteraction, k: f64) -> f64 {
        let h: C64 = h_function(p1, p2, k).unwrap();
        (h.arg() / 2.0).tan()
    }

    #[test]
    fn f_one_at_unit_k() {
        let p = pi(0.5, -1.0, FRAC_PI_2, 0.0);
        assert!((rhs(&p, &p.at(1.0), 1.0).unwrap() + 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn symmetric_lengths_give_zero() {
        let p = pi(0.8, -0.8, 1.0, 0.0);
        for i in 1..50 {
            assert_eq!(rhs(&p, &p.at(1.0), 0.1 * i as f64).unwrap(), 0.0);
        }
    }

    #[test]
    fn case_two_same_cos_is_sin() {
        let p1 = pi(10.0, 1.0, FRAC_PI_3, 0.0);
        let p2 = pi(-1.0, -10.0, FRAC_PI_3, 1.0);
        let class = classify(&p1, &p2, DEFAULT_CLASSIFY_TOL);
        assert_eq!(tangent_equation(&class, &p1, &p2).unwrap(), TangentEquation::SinKd);
        assert_eq!(resonance_rhs(&class, &p1, &p2, 0.7).unwrap(), 0.0);
    }

    #[test]
    fn outside_a_case_is_an_error() {
        let p1 = pi(3.0, 1.0, FRAC_PI_2, 0.0);
        let p2 = pi(4.0, -4.0, FRAC_PI_2, 1.0);
        assert_eq!(rhs(&p1, &p2, 1.0), Err(Error::WrongClass));
    }

    #[test]
    fn pole_is_reported() {
        // 1 - k^2 L+ L- = 0 at k = 1
        let p = pi(2.0, 0.5, 1.0, 0.0);
        assert_eq!(rhs(&p, &p.at(1.0), 1.0), Err(Error::PoleAt(1.0)));
    }

    #[test]
    fn every_form_agrees_with_h() {
        let s = 3.0_f64.sqrt();
        let cases = [
            (pi(0.5, -1.0, FRAC_PI_3, 0.0), pi(0.5, -1.0, FRAC_PI_3, 1.0)),
            (pi(1.0, -0.5, FRAC_PI_3, 0.0), pi(1.0, -0.5, 2.0 * FRAC_PI_3, 1.0)),
            (pi(10.0, 1.0, FRAC_PI_3, 0.0), pi(-1.0, -10.0, 2.0 * FRAC_PI_3, 1.0)),
            (
                pi((1.0 + s) / 2.0, (1.0 - s) / 2.0, FRAC_PI_6, 0.0),
                pi((1.0 - s) / 2.0, -(1.0 + s) / 2.0, FRAC_PI_3, 1.0),
            ),
            (
                pi((1.0 + s) / 2.0, (1.0 - s) / 2.0, FRAC_PI_6, 0.0),
                pi((1.0 - s) / 2.0, -(1.0 + s) / 2.0, PI - FRAC_PI_3, 1.0),
            ),
            (
                pi((1.0 + s) / 2.0, (1.0 - s) / 2.0, FRAC_PI_6, 0.0),
                pi((1.0 + s) / 2.0, -(1.0 - s) / 2.0, FRAC_PI_3, 1.0),
            ),
            (
                pi(-(1.0 - s) / 2.0, -(1.0 + s) / 2.0, FRAC_PI_6, 0.0),
                pi((1.0 + s) / 2.0, -(1.0 - s) / 2.0, FRAC_PI_3, 1.0),
            ),
            (
                pi(-(1.0 - s) / 2.0, -(1.0 + s) / 2.0, FRAC_PI_6, 0.0),
                pi((1.0 + s) / 2.0, -(1.0 - s) / 2.0, 2.0 * FRAC_PI_3, 1.0),
            ),
            (
                pi(-(1.0 - s) / 2.0, -(1.0 + s) / 2.0, FRAC_PI_6, 0.0),
                pi((1.0 - s) / 2.0, -(1.0 + s) / 2.0, FRAC_PI_3, 1.0),
            ),
        ];
        for (p1, p2) in cases {
            let class = classify(&p1, &p2, DEFAULT_CLASSIFY_TOL);
            assert!(class.kind.is_family(), "{p1:?} {p2:?} {:?}", class.kind);
            for i in 1..80 {
                let k = 0.0731 * i as f64;
                let Ok(f) = resonance_rhs(&class, &p1, &p2, k) else {
                    continue;
                };
                let t = tan_half_arg_h(&p1, &p2, k);
                let scale = 1.0 + f.abs().max(t.abs());
                assert!(
                    (f - t).abs() <= 1e-9 * scale * scale,
                    "{:?} k={k}: {f} vs {t}",
                    class.kind
                );
            }
        }
    }
}
