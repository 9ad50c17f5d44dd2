//! Perfect transmission through two point interactions.
//!
//! The reflection amplitude `A` vanishes exactly when
//! `R2_l = conj(R1_r)`. In the lengths this reads `e^{2ik(xi2 - xi1)} = h(k)`,
//! which has solutions only where `|h| = 1`, i.e. where
//! `alpha k^4 + beta k^2 + gamma = 0`. When all three coefficients vanish
//! the condition holds for every `k` and the resonances form infinite
//! families (cases I, II, III); otherwise at most two isolated `k` values
//! can resonate, and only for tuned spacings.

mod classify;
mod roots;
mod tangent;

use serde::Serialize;

pub use classify::{
    classify, incidental_resonance, CaseIIISubcase, CaseMatch, EqualityCheck, IncidentalResonance,
    ResonanceClass, ResonanceKind, DEFAULT_CLASSIFY_TOL, SPACING_COUNT,
};
pub use roots::{find_resonances, ResonanceRoot, DEFAULT_SCAN_GRID, T2_ACCEPT_TOL};
pub use tangent::{resonance_rhs, tangent_equation, TangentEquation};

use crate::compose::check_ordering;
use crate::single_scatter::{check_wavenumber, s_matrix, Factors};
use crate::u2param::{sin_cos_mu, PointInteraction};
use crate::{Error, Result, C64};

/// `check_resonance` holds when `|R2_l - conj(R1_r)|` is at most this.
pub const RESONANCE_TOL: f64 = 1e-9;

/// `(holds, |R2_l - conj(R1_r)|)` at wavenumber `k`.
pub fn check_resonance(p1: &PointInteraction, p2: &PointInteraction, k: f64) -> Result<(bool, f64)> {
    let residual = resonance_residual(p1, p2, k)?;
    Ok((residual <= RESONANCE_TOL, residual))
}

pub(crate) fn resonance_residual(p1: &PointInteraction, p2: &PointInteraction, k: f64) -> Result<f64> {
    check_wavenumber(k)?;
    let s1 = s_matrix(p1, k)?;
    let s2 = s_matrix(p2, k)?;
    Ok((s2.r_l - s1.r_r.conj()).norm())
}

/// Right-hand side of `e^{2ik(xi2 - xi1)} = h`:
///
/// ```text
///        (1 + ikL2+)(1 + ikL2-) {(1 + k^2 L1+ L1-) + ik cos(mu1)(L1+ - L1-)}
/// h = ----------------------------------------------------------------------
///        (1 - ikL1+)(1 - ikL1-) {(1 + k^2 L2+ L2-) + ik cos(mu2)(L2+ - L2-)}
/// ```
///
/// Independent of the positions and of `nu`.
pub fn h_function(p1: &PointInteraction, p2: &PointInteraction, k: f64) -> Result<C64> {
    check_wavenumber(k)?;
    let f1 = Factors::new(p1, k);
    let f2 = Factors::new(p2, k);
    let den = f1.den.conj() * f2.left_numerator();
    if den.norm() < 1e-300 {
        return Err(Error::DegenerateDenominator {
            k,
            magnitude: den.norm(),
        });
    }
    Ok(f2.den * f1.left_numerator() / den)
}

/// Coefficients of `alpha k^4 + beta k^2 + gamma = 0`, equivalent to `|h| = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuarticCoefficients {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl QuarticCoefficients {
    pub fn evaluate(&self, k: f64) -> f64 {
        let k2 = k * k;
        (self.alpha * k2 + self.beta) * k2 + self.gamma
    }

    /// Real roots in `k^2`, ascending. Empty when there are none, or when
    /// every coefficient is zero.
    pub fn roots_in_k_squared(&self) -> Vec<f64> {
        let QuarticCoefficients { alpha, beta, gamma } = *self;
        let mut roots = if alpha == 0.0 {
            if beta == 0.0 {
                Vec::new()
            } else {
                vec![-gamma / beta]
            }
        } else {
            let disc = beta * beta - 4.0 * alpha * gamma;
            if disc < 0.0 {
                Vec::new()
            } else {
                let q = -0.5 * (beta + beta.signum() * disc.sqrt());
                if q == 0.0 {
                    vec![0.0]
                } else {
                    vec![q / alpha, gamma / q]
                }
            }
        };
        roots.sort_by(f64::total_cmp);
        roots.dedup();
        roots
    }
}

/// The two subtracted terms of each coefficient, `(interaction-2 term, interaction-1 term)`.
pub(crate) fn quartic_terms(p1: &PointInteraction, p2: &PointInteraction) -> Result<[(f64, f64); 3]> {
    let (Some(a1), Some(b1), Some(a2), Some(b2)) = (
        p1.l_plus().finite_value(),
        p1.l_minus().finite_value(),
        p2.l_plus().finite_value(),
        p2.l_minus().finite_value(),
    ) else {
        return Err(Error::InfiniteLength);
    };
    let s1 = sin_cos_mu(p1.mu()).0;
    let s2 = sin_cos_mu(p2.mu()).0;
    let w1 = s1 * s1 * (a1 - b1) * (a1 - b1);
    let w2 = s2 * s2 * (a2 - b2) * (a2 - b2);
    let prod1 = a1 * b1;
    let prod2 = a2 * b2;
    Ok([
        (w2 * prod1 * prod1, w1 * prod2 * prod2),
        (w2 * (a1 * a1 + b1 * b1), w1 * (a2 * a2 + b2 * b2)),
        (w2, w1),
    ])
}

/// Exact `alpha`, `beta`, `gamma` for finite lengths.
pub fn quartic_coefficients(p1: &PointInteraction, p2: &PointInteraction) -> Result<QuarticCoefficients> {
    let [a, b, g] = quartic_terms(p1, p2)?;
    Ok(QuarticCoefficients {
        alpha: a.0 - a.1,
        beta: b.0 - b.1,
        gamma: g.0 - g.1,
    })
}

/// Round-trip factor `R1_r R2_l` at `k`; real and equal to `|R1_r|^2` at a resonance.
pub fn round_trip(p1: &PointInteraction, p2: &PointInteraction, k: f64) -> Result<C64> {
    check_ordering(p1, p2)?;
    let s1 = s_matrix(p1, k)?;
    let s2 = s_matrix(p2, k)?;
    Ok(s1.r_r * s2.r_l)
}
