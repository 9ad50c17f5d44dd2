//! Two point interactions at `xi1 < xi2`, wave incoming from the left.
//!
//! The wavefunction is `e^{ikx} + A e^{-ikx}` left of `xi1`,
//! `B e^{ikx} + C e^{-ikx}` between the interactions and `D e^{ikx}` right
//! of `xi2`. The amplitudes follow from the two S-matrices; the
//! transmission probability also has a closed form in the lengths, used as
//! an independent evaluation path.

use crate::matrix::Mat2;
use crate::single_scatter::{check_wavenumber, s_matrix, transfer_matrix, Factors, TransferMatrix};
use crate::u2param::PointInteraction;
use crate::{Error, Result, C64};

/// `|1 - R1_r R2_l|` below this is treated as a vanishing denominator.
pub const DENOMINATOR_FLOOR: f64 = 1e-14;

pub const DEFAULT_SERIES_TERMS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPointSolution {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
    pub k: f64,
}

impl TwoPointSolution {
    /// Residuals of `1 - |A|^2 = |D|^2` and `|B|^2 - |C|^2 = |D|^2`.
    ///
    /// The second is measured relative to `max(1, |B|^2)`, since `B` and `C`
    /// grow without bound as the round trip approaches unit modulus.
    pub fn flux_residuals(&self) -> [f64; 2] {
        let d2 = self.d.norm_sqr();
        let b2 = self.b.norm_sqr();
        [
            (1.0 - self.a.norm_sqr() - d2).abs(),
            (b2 - self.c.norm_sqr() - d2).abs() / b2.max(1.0),
        ]
    }

    pub fn transmission(&self) -> f64 {
        self.d.norm_sqr()
    }

    /// Wavefunction value and derivative at `x`.
    pub fn wavefunction(&self, x: f64, xi1: f64, xi2: f64) -> (C64, C64) {
        let ik = C64::new(0.0, self.k);
        let fwd = C64::from_polar(1.0, self.k * x);
        let bwd = fwd.conj();
        let (right, left) = if x < xi1 {
            (C64::new(1.0, 0.0), self.a)
        } else if x < xi2 {
            (self.b, self.c)
        } else {
            (self.d, C64::new(0.0, 0.0))
        };
        (right * fwd + left * bwd, ik * (right * fwd - left * bwd))
    }

    /// Probability current `Im(conj(psi) psi')` at `x` (units of hbar/m).
    pub fn current(&self, x: f64, xi1: f64, xi2: f64) -> f64 {
        let (psi, dpsi) = self.wavefunction(x, xi1, xi2);
        (psi.conj() * dpsi).im
    }
}

pub(crate) fn check_ordering(p1: &PointInteraction, p2: &PointInteraction) -> Result<()> {
    if p1.xi() < p2.xi() {
        Ok(())
    } else {
        Err(Error::BadOrdering {
            left: p1.xi(),
            right: p2.xi(),
        })
    }
}

/// Amplitudes `A, B, C, D` composed from the single-interaction S-matrices.
pub fn two_point_amplitudes(
    p1: &PointInteraction,
    p2: &PointInteraction,
    k: f64,
) -> Result<TwoPointSolution> {
    check_wavenumber(k)?;
    check_ordering(p1, p2)?;
    let s1 = s_matrix(p1, k)?;
    let s2 = s_matrix(p2, k)?;
    let den = C64::new(1.0, 0.0) - s1.r_r * s2.r_l;
    if den.norm() < DENOMINATOR_FLOOR {
        return Err(Error::DegenerateDenominator {
            k,
            magnitude: den.norm(),
        });
    }
    Ok(TwoPointSolution {
        a: (s1.r_l * den + s1.t_l * s1.t_r * s2.r_l) / den,
        b: s1.t_l / den,
        c: s1.t_l * s2.r_l / den,
        d: s1.t_l * s2.t_l / den,
        k,
    })
}

/// The closed-form denominator
/// `(1+ikL1+)(1+ikL1-)(1+ikL2+)(1+ikL2-) - n1 n2 e^{2ik(xi2-xi1)}`
/// in homogeneous coordinates, together with its normalization
/// `|(1+ikL1+)(1+ikL1-)(1+ikL2+)(1+ikL2-)|`.
pub(crate) fn delta(p1: &PointInteraction, p2: &PointInteraction, k: f64) -> (C64, f64) {
    let f1 = Factors::new(p1, k);
    let f2 = Factors::new(p2, k);
    let spacing = p2.xi() - p1.xi();
    let phase = C64::from_polar(1.0, 2.0 * k * spacing);
    let value = f1.den * f2.den - f1.right_numerator() * f2.left_numerator() * phase;
    (value, (f1.den_norm_sqr * f2.den_norm_sqr).sqrt())
}

/// Transmission amplitude `D` from the closed form in the lengths.
pub fn transmission_amplitude_closed_form(
    p1: &PointInteraction,
    p2: &PointInteraction,
    k: f64,
) -> Result<C64> {
    check_wavenumber(k)?;
    check_ordering(p1, p2)?;
    let (value, scale) = delta(p1, p2, k);
    if value.norm() < DENOMINATOR_FLOOR * scale {
        return Err(Error::DegenerateDenominator {
            k,
            magnitude: value.norm() / scale,
        });
    }
    let f1 = Factors::new(p1, k);
    let f2 = Factors::new(p2, k);
    Ok(-C64::from_polar(f1.odd_sin * f2.odd_sin, -(p1.nu() + p2.nu())) / value)
}

/// `T2 = k^4 sin^2(mu1) sin^2(mu2) (L1+ - L1-)^2 (L2+ - L2-)^2 / |Delta|^2`.
///
/// Contains no `nu`, so it is exactly invariant under changes of either.
pub fn transmission_probability(p1: &PointInteraction, p2: &PointInteraction, k: f64) -> Result<f64> {
    check_wavenumber(k)?;
    check_ordering(p1, p2)?;
    let f1 = Factors::new(p1, k);
    let f2 = Factors::new(p2, k);
    let num = f1.odd_sin * f2.odd_sin;
    if num == 0.0 {
        // a wall transmits nothing even where the cavity between them rings
        return Ok(0.0);
    }
    let (value, scale) = delta(p1, p2, k);
    if value.norm() < DENOMINATOR_FLOOR * scale {
        return Err(Error::DegenerateDenominator {
            k,
            magnitude: value.norm() / scale,
        });
    }
    Ok(num * num / value.norm_sqr())
}

/// Product of single transfer matrices, later interactions on the left.
pub fn chain_transfer(interactions: &[PointInteraction], k: f64) -> Result<TransferMatrix> {
    check_wavenumber(k)?;
    for pair in interactions.windows(2) {
        check_ordering(&pair[0], &pair[1])?;
    }
    let mut total = TransferMatrix::identity(k);
    for p in interactions {
        let t = transfer_matrix(p, k)?;
        total.m = t.m * total.m;
    }
    Ok(total)
}

/// Left reflection and right transmission `(A, D)` for unit incidence
/// from the left, from a chained transfer matrix: `(D, 0) = M (1, A)`.
pub fn amplitudes_from_transfer(m: &Mat2) -> (C64, C64) {
    let [[m11, m12], [m21, m22]] = m.m;
    let a = -m21 / m22;
    (a, m11 + m12 * a)
}

/// Two-point amplitudes by the transfer-matrix route.
pub fn two_point_from_chain(
    p1: &PointInteraction,
    p2: &PointInteraction,
    k: f64,
) -> Result<TwoPointSolution> {
    let first = transfer_matrix(p1, k)?;
    let total = chain_transfer(&[*p1, *p2], k)?;
    let (a, d) = amplitudes_from_transfer(&total.m);
    let (b, c) = first.apply(C64::new(1.0, 0.0), a);
    Ok(TwoPointSolution { a, b, c, d, k })
}

/// `D` as a sum over paths bouncing between the interactions:
/// `D = T1_l T2_l (1 + r + r^2 + ...)` with round trip `r = R1_r R2_l`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesExpansion {
    pub ratio: C64,
    pub prefactor: C64,
    pub partial_sums: Vec<C64>,
    /// `false` when `|ratio| >= 1 - 1e-12`; the partial sums are still filled in.
    pub converges: bool,
}

impl SeriesExpansion {
    /// `|ratio|^n / (1 - |ratio|) |prefactor|` for `n` summed terms.
    pub fn truncation_bound(&self) -> f64 {
        let r = self.ratio.norm();
        if !self.converges {
            return f64::INFINITY;
        }
        r.powi(self.partial_sums.len() as i32) / (1.0 - r) * self.prefactor.norm()
    }

    pub fn last(&self) -> C64 {
        *self.partial_sums.last().expect("at least one term")
    }
}

pub fn interference_series(
    p1: &PointInteraction,
    p2: &PointInteraction,
    k: f64,
    n_terms: usize,
) -> Result<SeriesExpansion> {
    check_wavenumber(k)?;
    check_ordering(p1, p2)?;
    if n_terms == 0 {
        return Err(Error::InvalidParameter("series needs at least one term".into()));
    }
    let s1 = s_matrix(p1, k)?;
    let s2 = s_matrix(p2, k)?;
    let ratio = s1.r_r * s2.r_l;
    let prefactor = s1.t_l * s2.t_l;
    let mut partial_sums = Vec::with_capacity(n_terms);
    let mut power = C64::new(1.0, 0.0);
    let mut sum = C64::new(0.0, 0.0);
    for _ in 0..n_terms {
        sum += power;
        partial_sums.push(prefactor * sum);
        power *= ratio;
    }
    Ok(SeriesExpansion {
        ratio,
        prefactor,
        partial_sums,
        converges: ratio.norm() < 1.0 - 1e-12,
    })
}
