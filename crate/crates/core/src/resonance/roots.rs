use serde::Serialize;

use super::classify::{classify, ResonanceKind, DEFAULT_CLASSIFY_TOL};
use super::tangent::{tangent_equation, TangentContext};
use super::{h_function, resonance_residual};
use crate::compose::{check_ordering, transmission_probability};
use crate::u2param::PointInteraction;
use crate::{Error, Result, C64};

/// Default number of points in the dense residual scan.
pub const DEFAULT_SCAN_GRID: usize = 20_000;

/// A root is accepted when `|1 - T2| <= T2_ACCEPT_TOL`.
pub const T2_ACCEPT_TOL: f64 = 1e-9;

const BISECTION_TOL: f64 = 1e-13;
const PHASE_TOL: f64 = 1e-6;
const MERGE_REL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResonanceRoot {
    pub k: f64,
    #[serde(rename = "residual_T2")]
    pub residual_t2: f64,
    /// `round(k d / pi)` for roots of the tangent equation; `None` for roots
    /// found only by the residual scan.
    pub branch: Option<i64>,
}

fn accept(p1: &PointInteraction, p2: &PointInteraction, k: f64, branch: Option<i64>) -> Option<ResonanceRoot> {
    let t2 = transmission_probability(p1, p2, k).ok()?;
    let residual_t2 = (1.0 - t2).abs();
    (residual_t2 <= T2_ACCEPT_TOL).then_some(ResonanceRoot {
        k,
        residual_t2,
        branch,
    })
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, mut f_lo: f64) -> f64 {
    while hi - lo > BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let inv_phi = 0.5 * (5.0_f64.sqrt() - 1.0);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > BISECTION_TOL.max(4.0 * f64::EPSILON * b.abs()) {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    if fc <= fd {
        c
    } else {
        d
    }
}

/// Roots of `G(k) = Dn sin(kd) - N cos(kd)`, the pole-free form of
/// `tan(kd) = N/Dn`, kept only where `e^{2ikd} = h` (not `-h`) and `T2 = 1`.
fn tangent_roots(
    p1: &PointInteraction,
    p2: &PointInteraction,
    grid_k: &[f64],
) -> Result<Vec<ResonanceRoot>> {
    let class = classify(p1, p2, DEFAULT_CLASSIFY_TOL);
    if !class.kind.is_family() {
        return Ok(Vec::new());
    }
    let eq = tangent_equation(&class, p1, p2)?;
    let ctx = TangentContext::new(p1, p2)?;
    let d = p2.xi() - p1.xi();
    let g = |k: f64| {
        let (n, dn) = eq.parts(&ctx, k);
        let (s, c) = (k * d).sin_cos();
        dn * s - n * c
    };
    let values: Vec<f64> = grid_k.iter().map(|&k| g(k)).collect();
    let mut candidates = Vec::new();
    for j in 0..grid_k.len() {
        if values[j] == 0.0 {
            candidates.push(grid_k[j]);
        } else if j + 1 < grid_k.len() && values[j + 1] != 0.0 && (values[j] < 0.0) != (values[j + 1] < 0.0) {
            candidates.push(bisect(g, grid_k[j], grid_k[j + 1], values[j]));
        }
    }
    let mut roots = Vec::new();
    for k in candidates {
        if let Ok(h) = h_function(p1, p2, k) {
            if (C64::from_polar(1.0, 2.0 * k * d) - h).norm() > PHASE_TOL * h.norm().max(1.0) {
                continue;
            }
        }
        let branch = (k * d / std::f64::consts::PI).round() as i64;
        roots.extend(accept(p1, p2, k, Some(branch)));
    }
    Ok(roots)
}

/// Local minima of `|R2_l - conj(R1_r)|` on the grid, refined by golden section.
fn scan_roots(p1: &PointInteraction, p2: &PointInteraction, grid_k: &[f64]) -> Vec<ResonanceRoot> {
    let r = |k: f64| resonance_residual(p1, p2, k).unwrap_or(f64::INFINITY);
    let values: Vec<f64> = grid_k.iter().map(|&k| r(k)).collect();
    let n = grid_k.len();
    let mut roots = Vec::new();
    for j in 0..n {
        let left = if j > 0 { values[j - 1] } else { f64::INFINITY };
        let right = if j + 1 < n { values[j + 1] } else { f64::INFINITY };
        let v = values[j];
        if !(v <= left && v <= right && (v < left || v < right)) {
            continue;
        }
        let a = grid_k[j.saturating_sub(1)];
        let b = grid_k[(j + 1).min(n - 1)];
        let k = golden_min(r, a, b);
        roots.extend(accept(p1, p2, k, None));
    }
    roots
}

/// Every `k` in `[k_min, k_max]` with `T2(k) >= 1 - 1e-9`.
///
/// Classified pairs are solved through their tangent equation, bracketed on
/// `grid` points and bisected to `1e-13`. A dense scan of the resonance
/// residual always runs as well, catching coincident single-interaction
/// transparency and isolated roots. Results are merged and sorted by `k`.
pub fn find_resonances(
    p1: &PointInteraction,
    p2: &PointInteraction,
    k_min: f64,
    k_max: f64,
    grid: usize,
) -> Result<Vec<ResonanceRoot>> {
    if !(k_min > 0.0 && k_min.is_finite() && k_max > k_min && k_max.is_finite() && grid >= 2) {
        return Err(Error::InvalidRange { k_min, k_max, grid });
    }
    check_ordering(p1, p2)?;
    if classify(p1, p2, DEFAULT_CLASSIFY_TOL).kind == ResonanceKind::Wall {
        return Ok(Vec::new());
    }
    let step = (k_max - k_min) / (grid - 1) as f64;
    let grid_k: Vec<f64> = (0..grid)
        .map(|j| if j + 1 == grid { k_max } else { k_min + step * j as f64 })
        .collect();

    let mut all = tangent_roots(p1, p2, &grid_k)?;
    all.extend(scan_roots(p1, p2, &grid_k));
    all.retain(|r| r.k >= k_min && r.k <= k_max);
    all.sort_by(|a, b| a.k.total_cmp(&b.k).then(b.branch.is_some().cmp(&a.branch.is_some())));

    let mut merged: Vec<ResonanceRoot> = Vec::with_capacity(all.len());
    for root in all {
        match merged.last_mut() {
            Some(last) if (root.k - last.k).abs() <= MERGE_REL * root.k.abs().max(last.k.abs()) => {
                if last.branch.is_none() && root.branch.is_some() {
                    *last = root;
                }
            }
            _ => merged.push(root),
        }
    }
    Ok(merged)
}
