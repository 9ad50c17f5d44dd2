//! Scattering of a plane wave by a single point interaction.
//!
//! With `phi(x) = phi_i e^{ikx} + phi_o e^{-ikx}` left of the interaction
//! and `phi_i' e^{-ikx} + phi_o' e^{ikx}` right of it, the S-matrix maps
//! `(phi_i', phi_i)` to `(phi_o', phi_o)`:
//!
//! ```text
//! S = | R_r  T_l |
//!     | T_r  R_l |
//! ```

use crate::matrix::Mat2;
use crate::u2param::{sin_cos_mu, PointInteraction};
use crate::{Error, Result, C64};

/// Below this `|T_r|` the interaction counts as a perfect wall.
pub const OPAQUE_THRESHOLD: f64 = 1e-14;

pub(crate) fn check_wavenumber(k: f64) -> Result<()> {
    if k > 0.0 && k.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveWavenumber(k))
    }
}

/// Building blocks shared by every closed-form amplitude, evaluated in
/// homogeneous length coordinates so infinite lengths stay exact.
///
/// For finite lengths these are
/// `den = (1 + ik L+)(1 + ik L-)`, `even = 1 + k^2 L+ L-`,
/// `odd_cos = k cos(mu) (L+ - L-)`, `odd_sin = k sin(mu) (L+ - L-)`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Factors {
    pub den: C64,
    pub den_norm_sqr: f64,
    pub even: f64,
    pub odd_cos: f64,
    pub odd_sin: f64,
}

impl Factors {
    pub fn new(p: &PointInteraction, k: f64) -> Self {
        let (ap, bp) = p.l_plus().homogeneous();
        let (am, bm) = p.l_minus().homogeneous();
        let (s, c) = sin_cos_mu(p.mu());
        let gap = ap * bm - am * bp;
        let fp = C64::new(bp, k * ap);
        let fm = C64::new(bm, k * am);
        Factors {
            den: fp * fm,
            den_norm_sqr: fp.norm_sqr() * fm.norm_sqr(),
            even: bp * bm + k * k * ap * am,
            odd_cos: k * c * gap,
            odd_sin: k * s * gap,
        }
    }

    /// `(1 + k^2 L+ L-) - ik cos(mu) (L+ - L-)`, numerator of `-R_r` before the position phase.
    pub fn right_numerator(&self) -> C64 {
        C64::new(self.even, -self.odd_cos)
    }

    /// `(1 + k^2 L+ L-) + ik cos(mu) (L+ - L-)`.
    pub fn left_numerator(&self) -> C64 {
        C64::new(self.even, self.odd_cos)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringMatrix {
    pub r_r: C64,
    pub r_l: C64,
    pub t_r: C64,
    pub t_l: C64,
    pub k: f64,
}

impl ScatteringMatrix {
    pub fn as_matrix(&self) -> Mat2 {
        Mat2::new(self.r_r, self.t_l, self.t_r, self.r_l)
    }

    /// Outgoing `(phi_o', phi_o)` for incoming `(phi_i', phi_i)`.
    pub fn apply(&self, incoming_right: C64, incoming_left: C64) -> (C64, C64) {
        let [out_right, out_left] = self.as_matrix().apply([incoming_right, incoming_left]);
        (out_right, out_left)
    }

    /// Residuals of `|R_r|^2 + |T_r|^2 = 1`, `|R_l|^2 + |T_l|^2 = 1` and
    /// `conj(T_l) R_r + conj(R_l) T_r = 0`.
    pub fn unitarity_residuals(&self) -> [f64; 3] {
        [
            (self.r_r.norm_sqr() + self.t_r.norm_sqr() - 1.0).abs(),
            (self.r_l.norm_sqr() + self.t_l.norm_sqr() - 1.0).abs(),
            (self.t_l.conj() * self.r_r + self.r_l.conj() * self.t_r).norm(),
        ]
    }
}

/// The four scattering amplitudes at wavenumber `k`, including the
/// `e^{-+2ik xi}` position phases of the reflection amplitudes.
pub fn s_matrix(p: &PointInteraction, k: f64) -> Result<ScatteringMatrix> {
    check_wavenumber(k)?;
    let f = Factors::new(p, k);
    let i = C64::i();
    let xi_phase = C64::from_polar(1.0, 2.0 * k * p.xi());
    Ok(ScatteringMatrix {
        r_r: -f.right_numerator() / f.den * xi_phase.conj(),
        r_l: -f.left_numerator() / f.den * xi_phase,
        t_r: i * C64::from_polar(f.odd_sin, p.nu()) / f.den,
        t_l: i * C64::from_polar(f.odd_sin, -p.nu()) / f.den,
        k,
    })
}

/// Transmission and reflection probabilities `(T1, R1)`.
///
/// Evaluated from the closed forms, which do not involve `nu` or `xi`.
pub fn probabilities(p: &PointInteraction, k: f64) -> Result<(f64, f64)> {
    check_wavenumber(k)?;
    let f = Factors::new(p, k);
    let t = f.odd_sin * f.odd_sin / f.den_norm_sqr;
    let r = (f.even * f.even + f.odd_cos * f.odd_cos) / f.den_norm_sqr;
    Ok((t, r))
}

/// Maps `(phi_i, phi_o)` on the left to `(phi_o', phi_i')` on the right.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMatrix {
    pub m: Mat2,
    pub k: f64,
}

impl TransferMatrix {
    pub fn identity(k: f64) -> Self {
        TransferMatrix {
            m: Mat2::identity(),
            k,
        }
    }

    pub fn apply(&self, incoming_left: C64, outgoing_left: C64) -> (C64, C64) {
        let [out_right, in_right] = self.m.apply([incoming_left, outgoing_left]);
        (out_right, in_right)
    }
}

/// Transfer matrix built from the scattering amplitudes:
///
/// ```text
/// T = | 1/conj(T_l)   R_r/T_r |
///     | -R_l/T_r      1/T_r   |
/// ```
pub fn transfer_matrix(p: &PointInteraction, k: f64) -> Result<TransferMatrix> {
    let s = s_matrix(p, k)?;
    let transmission = s.t_r.norm();
    if transmission < OPAQUE_THRESHOLD {
        return Err(Error::OpaqueInteraction { k, transmission });
    }
    let one = C64::new(1.0, 0.0);
    Ok(TransferMatrix {
        m: Mat2::new(one / s.t_l.conj(), s.r_r / s.t_r, -s.r_l / s.t_r, one / s.t_r),
        k,
    })
}

/// Closed-form inverse of [`transfer_matrix`]:
///
/// ```text
/// T^-1 = | 1/T_l       -R_r/T_l     |
///        | R_l/T_l      1/conj(T_r) |
/// ```
pub fn inverse_transfer_matrix(p: &PointInteraction, k: f64) -> Result<TransferMatrix> {
    let s = s_matrix(p, k)?;
    let transmission = s.t_l.norm();
    if transmission < OPAQUE_THRESHOLD {
        return Err(Error::OpaqueInteraction { k, transmission });
    }
    let one = C64::new(1.0, 0.0);
    Ok(TransferMatrix {
        m: Mat2::new(one / s.t_l, -s.r_r / s.t_l, s.r_l / s.t_l, one / s.t_r.conj()),
        k,
    })
}
