//! U(2) parametrization of a point interaction.
//!
//! A point interaction at `x = xi` imposes
//! `(U - I) Phi + i L0 (U + I) Phi' = 0` on the boundary values of the
//! wavefunction, with `U = V^dagger diag(e^{i theta+}, e^{i theta-}) V` and
//! `V = exp(i mu/2 sigma_2) exp(i nu/2 sigma_3)`. Only the combinations
//! `L(+-) = L0 cot(theta+-/2)` enter the connection conditions, so the
//! length form `(L+, L-, mu, nu)` is the working representation and `L0`
//! is normalized to 1.
//!
//! Swapping `theta+` and `theta-` while sending `mu -> pi - mu`,
//! `nu -> nu + pi` leaves `U` unchanged; [`canonicalize`] uses this to
//! enforce `L+ >= L-`.

use std::cmp::Ordering;
use std::f64::consts::{PI, TAU};
use std::fmt;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::matrix::Mat2;
use crate::{Error, Result, C64};

/// Wraps an angle into `[0, 2pi)`.
pub fn wrap_angle(theta: f64) -> f64 {
    let w = theta.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// `(sin mu, cos mu)` with the quarter-turn points snapped to exact values.
///
/// Walls at `mu = pi` then transmit exactly nothing and `mu = pi/2` has an
/// exactly vanishing cosine.
pub(crate) fn sin_cos_mu(mu: f64) -> (f64, f64) {
    if mu == 0.0 {
        (0.0, 1.0)
    } else if mu == PI {
        (0.0, -1.0)
    } else if mu == std::f64::consts::FRAC_PI_2 {
        (1.0, 0.0)
    } else {
        mu.sin_cos()
    }
}

/// A length on the extended real line.
///
/// The infinite tags are first-class values: formulas pick their limit form
/// from the tag, never from the magnitude of a float.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedLength {
    Finite(f64),
    PositiveInfinite,
    NegativeInfinite,
}

impl ExtendedLength {
    /// Maps IEEE infinities onto the tags; rejects NaN.
    pub fn from_f64(value: f64) -> Result<Self> {
        if value.is_nan() {
            Err(Error::InvalidParameter("length is NaN".into()))
        } else if value == f64::INFINITY {
            Ok(ExtendedLength::PositiveInfinite)
        } else if value == f64::NEG_INFINITY {
            Ok(ExtendedLength::NegativeInfinite)
        } else {
            Ok(ExtendedLength::Finite(value))
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtendedLength::Finite(_))
    }

    pub fn finite_value(&self) -> Option<f64> {
        match *self {
            ExtendedLength::Finite(v) => Some(v),
            _ => None,
        }
    }

    /// The value as an `f64`, with the tags mapped to IEEE infinities.
    pub fn to_f64(&self) -> f64 {
        match *self {
            ExtendedLength::Finite(v) => v,
            ExtendedLength::PositiveInfinite => f64::INFINITY,
            ExtendedLength::NegativeInfinite => f64::NEG_INFINITY,
        }
    }

    /// Homogeneous coordinates `(a, b)` with `L = a / b`.
    ///
    /// Finite lengths give `(L, 1)`, the infinite tags `(+-1, 0)`. Every
    /// amplitude is a ratio of expressions linear in `(a, b)` for each
    /// length, so substituting these pairs yields the exact limits.
    pub fn homogeneous(&self) -> (f64, f64) {
        match *self {
            ExtendedLength::Finite(v) => (v, 1.0),
            ExtendedLength::PositiveInfinite => (1.0, 0.0),
            ExtendedLength::NegativeInfinite => (-1.0, 0.0),
        }
    }

    fn rank(&self) -> (i8, f64) {
        match *self {
            ExtendedLength::NegativeInfinite => (-1, 0.0),
            ExtendedLength::Finite(v) => (0, v),
            ExtendedLength::PositiveInfinite => (1, 0.0),
        }
    }
}

impl std::ops::Neg for ExtendedLength {
    type Output = ExtendedLength;

    fn neg(self) -> ExtendedLength {
        match self {
            ExtendedLength::Finite(v) => ExtendedLength::Finite(-v),
            ExtendedLength::PositiveInfinite => ExtendedLength::NegativeInfinite,
            ExtendedLength::NegativeInfinite => ExtendedLength::PositiveInfinite,
        }
    }
}

impl PartialOrd for ExtendedLength {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        let (ra, va) = self.rank();
        let (rb, vb) = other.rank();
        match ra.cmp(&rb) {
            Ordering::Equal => va.partial_cmp(&vb),
            ord => Some(ord),
        }
    }
}

impl fmt::Display for ExtendedLength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedLength::Finite(v) => write!(f, "{v}"),
            ExtendedLength::PositiveInfinite => f.write_str("inf"),
            ExtendedLength::NegativeInfinite => f.write_str("-inf"),
        }
    }
}

impl std::str::FromStr for ExtendedLength {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "+inf" | "Infinity" | "+Infinity" => Ok(ExtendedLength::PositiveInfinite),
            "-inf" | "-Infinity" => Ok(ExtendedLength::NegativeInfinite),
            other => {
                let v: f64 = other
                    .parse()
                    .map_err(|_| Error::InvalidParameter(format!("cannot parse length {other:?}")))?;
                ExtendedLength::from_f64(v)
            }
        }
    }
}

impl Serialize for ExtendedLength {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match *self {
            ExtendedLength::Finite(v) => serializer.serialize_f64(v),
            ExtendedLength::PositiveInfinite => serializer.serialize_str("inf"),
            ExtendedLength::NegativeInfinite => serializer.serialize_str("-inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtendedLength {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct LengthVisitor;

        impl Visitor<'_> for LengthVisitor {
            type Value = ExtendedLength;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number, \"inf\" or \"-inf\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Self::Value, E> {
                ExtendedLength::from_f64(v).map_err(E::custom)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Self::Value, E> {
                Ok(ExtendedLength::Finite(v as f64))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Self::Value, E> {
                Ok(ExtendedLength::Finite(v as f64))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Self::Value, E> {
                v.parse().map_err(E::custom)
            }
        }

        deserializer.deserialize_any(LengthVisitor)
    }
}

/// Angle form `(theta+, theta-, mu, nu, L0)` of the characteristic matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct U2Params {
    pub theta_plus: f64,
    pub theta_minus: f64,
    pub mu: f64,
    pub nu: f64,
    #[serde(rename = "L0", default = "default_l0")]
    pub l0: f64,
}

fn default_l0() -> f64 {
    1.0
}

impl U2Params {
    /// Validates ranges: thetas and nu in `[0, 2pi)`, mu in `[0, pi]`, `L0 > 0`.
    pub fn new(theta_plus: f64, theta_minus: f64, mu: f64, nu: f64, l0: f64) -> Result<Self> {
        let p = U2Params {
            theta_plus,
            theta_minus,
            mu,
            nu,
            l0,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("theta_plus", self.theta_plus),
            ("theta_minus", self.theta_minus),
            ("nu", self.nu),
        ] {
            if !(0.0..TAU).contains(&v) {
                return Err(Error::InvalidParameter(format!("{name} = {v} outside [0, 2pi)")));
            }
        }
        check_mu(self.mu)?;
        if !(self.l0.is_finite() && self.l0 > 0.0) {
            return Err(Error::InvalidParameter(format!("L0 = {} must be positive", self.l0)));
        }
        Ok(())
    }

    /// Re-expresses the same matrix-equivalent interaction with `L0 = 1`.
    pub fn normalized(&self) -> U2Params {
        let (lp, lm) = lengths_from_angles(self);
        U2Params {
            theta_plus: angle_from_length(lp),
            theta_minus: angle_from_length(lm),
            mu: self.mu,
            nu: self.nu,
            l0: 1.0,
        }
    }
}

fn check_mu(mu: f64) -> Result<()> {
    if (0.0..=PI).contains(&mu) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("mu = {mu} outside [0, pi]")))
    }
}

/// `L(+-) = L0 cot(theta+-/2)`.
pub fn lengths_from_angles(p: &U2Params) -> (ExtendedLength, ExtendedLength) {
    (
        length_from_angle(p.theta_plus, p.l0),
        length_from_angle(p.theta_minus, p.l0),
    )
}

fn length_from_angle(theta: f64, l0: f64) -> ExtendedLength {
    let theta = wrap_angle(theta);
    if theta == 0.0 {
        ExtendedLength::PositiveInfinite
    } else if theta == PI {
        ExtendedLength::Finite(0.0)
    } else {
        let half = 0.5 * theta;
        ExtendedLength::Finite(l0 * half.cos() / half.sin())
    }
}

/// Inverse of `L = cot(theta/2)` at `L0 = 1`, landing in `[0, 2pi)`.
pub fn angle_from_length(l: ExtendedLength) -> f64 {
    match l {
        ExtendedLength::Finite(0.0) => PI,
        ExtendedLength::Finite(v) => wrap_angle(2.0 * 1.0_f64.atan2(v)),
        ExtendedLength::PositiveInfinite | ExtendedLength::NegativeInfinite => 0.0,
    }
}

/// A 2x2 matrix known to be unitary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitaryMatrix2(Mat2);

impl UnitaryMatrix2 {
    pub const DEFAULT_TOLERANCE: f64 = 1e-12;

    pub fn new(m: Mat2) -> Result<Self> {
        Self::with_tolerance(m, Self::DEFAULT_TOLERANCE)
    }

    pub fn with_tolerance(m: Mat2, tol: f64) -> Result<Self> {
        let dev = unitarity_deviation(&m);
        if dev <= tol {
            Ok(UnitaryMatrix2(m))
        } else {
            Err(Error::NotUnitary { max_deviation: dev })
        }
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.0
    }
}

/// Max entrywise `|U^dagger U - I|`.
pub fn unitarity_deviation(m: &Mat2) -> f64 {
    (m.adjoint() * *m).max_abs_diff(&Mat2::identity())
}

/// The explicit characteristic matrix.
pub fn characteristic_matrix(p: &U2Params) -> UnitaryMatrix2 {
    let ep = C64::from_polar(1.0, p.theta_plus);
    let em = C64::from_polar(1.0, p.theta_minus);
    let (s, c) = sin_cos_mu(p.mu);
    let sum = (ep + em) * 0.5;
    let diff = (ep - em) * 0.5;
    let m = Mat2::new(
        sum + diff * c,
        C64::from_polar(s, -p.nu) * diff,
        C64::from_polar(s, p.nu) * diff,
        sum - diff * c,
    );
    UnitaryMatrix2(m)
}

/// Recovers canonical angle parameters (`L0 = 1`) from a unitary matrix.
///
/// The eigenphases are ordered so that `L+ >= L-`. Degenerate eigenvalues
/// return `mu = nu = 0`.
pub fn decompose(u: &Mat2) -> Result<U2Params> {
    let dev = unitarity_deviation(u);
    if dev > 1e-10 {
        return Err(Error::NotUnitary { max_deviation: dev });
    }
    let [[a, b], [c, d]] = u.m;
    let mean = (a + d) * 0.5;
    let half_gap = (a - d) * 0.5;
    let spread = (half_gap * half_gap + b * c).sqrt();

    if spread.norm() <= 1e-14 {
        let theta = wrap_angle(mean.arg());
        return Ok(U2Params {
            theta_plus: theta,
            theta_minus: theta,
            mu: 0.0,
            nu: 0.0,
            l0: 1.0,
        });
    }

    let up = mean + spread;
    let down = mean - spread;
    let phase_up = wrap_angle(up.arg());
    let phase_down = wrap_angle(down.arg());
    // cot(theta/2) decreases on [0, 2pi), so L+ >= L- means theta+ <= theta-
    let (theta_plus, theta_minus, delta) = if phase_up <= phase_down {
        (phase_up, phase_down, spread)
    } else {
        (phase_down, phase_up, -spread)
    };

    // (U - mean I) / delta = n . sigma with n a real unit vector
    let n3 = ((a - d) * 0.5 / delta).re;
    let n_perp = (c / delta + (b / delta).conj()) * 0.5;
    let mu = n_perp.norm().atan2(n3);
    let nu = if n_perp.norm() <= 1e-15 {
        0.0
    } else {
        wrap_angle(n_perp.arg())
    };

    Ok(U2Params {
        theta_plus,
        theta_minus,
        mu,
        nu,
        l0: 1.0,
    })
}

/// Length-form parameters of one point interaction, plus its position.
///
/// Constructed values are canonical: `L+ >= L-`, `mu` in `[0, pi]`, `nu`
/// wrapped into `[0, 2pi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointInteraction {
    #[serde(rename = "L_plus")]
    l_plus: ExtendedLength,
    #[serde(rename = "L_minus")]
    l_minus: ExtendedLength,
    mu: f64,
    nu: f64,
    xi: f64,
}

impl PointInteraction {
    /// Builds a canonical interaction; fails if `L+ < L-`.
    pub fn new(
        l_plus: ExtendedLength,
        l_minus: ExtendedLength,
        mu: f64,
        nu: f64,
        xi: f64,
    ) -> Result<Self> {
        let raw = RawInteraction {
            l_plus,
            l_minus,
            mu,
            nu,
            xi,
        };
        raw.validate()?;
        if l_plus < l_minus {
            return Err(Error::InvalidParameter(format!(
                "non-canonical lengths: L+ = {l_plus} < L- = {l_minus}"
            )));
        }
        Ok(PointInteraction {
            l_plus,
            l_minus,
            mu,
            nu: wrap_angle(nu),
            xi,
        })
    }

    /// Finite-length shorthand, canonicalizing if needed.
    pub fn finite(l_plus: f64, l_minus: f64, mu: f64, nu: f64, xi: f64) -> Result<Self> {
        canonicalize(RawInteraction {
            l_plus: ExtendedLength::from_f64(l_plus)?,
            l_minus: ExtendedLength::from_f64(l_minus)?,
            mu,
            nu,
            xi,
        })
    }

    pub fn from_angles(p: &U2Params, xi: f64) -> Result<Self> {
        p.validate()?;
        let (l_plus, l_minus) = lengths_from_angles(p);
        canonicalize(RawInteraction {
            l_plus,
            l_minus,
            mu: p.mu,
            nu: p.nu,
            xi,
        })
    }

    /// Angle form with `L0 = 1`.
    pub fn to_angles(&self) -> U2Params {
        U2Params {
            theta_plus: angle_from_length(self.l_plus),
            theta_minus: angle_from_length(self.l_minus),
            mu: self.mu,
            nu: self.nu,
            l0: 1.0,
        }
    }

    pub fn characteristic_matrix(&self) -> UnitaryMatrix2 {
        characteristic_matrix(&self.to_angles())
    }

    pub fn l_plus(&self) -> ExtendedLength {
        self.l_plus
    }

    pub fn l_minus(&self) -> ExtendedLength {
        self.l_minus
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn has_finite_lengths(&self) -> bool {
        self.l_plus.is_finite() && self.l_minus.is_finite()
    }

    /// Returns a copy at a different position.
    pub fn at(&self, xi: f64) -> Self {
        PointInteraction { xi, ..*self }
    }

    /// Returns a copy with a different `nu`.
    pub fn with_nu(&self, nu: f64) -> Self {
        PointInteraction {
            nu: wrap_angle(nu),
            ..*self
        }
    }

    /// `L+ = L-` or `mu` in `{0, pi}`: nothing is transmitted at any `k`.
    pub fn is_wall(&self) -> bool {
        self.l_plus == self.l_minus || sin_cos_mu(self.mu).0 == 0.0
    }
}

/// Parameters whose lengths may violate `L+ >= L-`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawInteraction {
    pub l_plus: ExtendedLength,
    pub l_minus: ExtendedLength,
    pub mu: f64,
    pub nu: f64,
    pub xi: f64,
}

impl RawInteraction {
    fn validate(&self) -> Result<()> {
        check_mu(self.mu)?;
        if !self.nu.is_finite() {
            return Err(Error::InvalidParameter(format!("nu = {} is not finite", self.nu)));
        }
        if !self.xi.is_finite() {
            return Err(Error::InvalidParameter(format!("xi = {} is not finite", self.xi)));
        }
        for l in [self.l_plus, self.l_minus] {
            if let ExtendedLength::Finite(v) = l {
                if !v.is_finite() {
                    return Err(Error::InvalidParameter(format!("length {v} is not finite")));
                }
            }
        }
        Ok(())
    }
}

/// Enforces `L+ >= L-` by the swap `(L+, L-, mu, nu) -> (L-, L+, pi - mu, nu + pi)`,
/// which leaves the characteristic matrix unchanged.
pub fn canonicalize(raw: RawInteraction) -> Result<PointInteraction> {
    raw.validate()?;
    if raw.l_plus >= raw.l_minus {
        return PointInteraction::new(raw.l_plus, raw.l_minus, raw.mu, raw.nu, raw.xi);
    }
    PointInteraction::new(
        raw.l_minus,
        raw.l_plus,
        PI - raw.mu,
        wrap_angle(raw.nu + PI),
        raw.xi,
    )
}

/// JSON parameter record for one interaction, in length or angle form.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum InteractionSpec {
    Lengths {
        #[serde(rename = "L_plus")]
        l_plus: ExtendedLength,
        #[serde(rename = "L_minus")]
        l_minus: ExtendedLength,
        mu: f64,
        #[serde(default)]
        nu: f64,
        #[serde(default)]
        xi: f64,
    },
    Angles {
        theta_plus: f64,
        theta_minus: f64,
        mu: f64,
        #[serde(default)]
        nu: f64,
        #[serde(rename = "L0", default = "default_l0")]
        l0: f64,
        #[serde(default)]
        xi: f64,
    },
}

impl InteractionSpec {
    pub fn to_interaction(&self) -> Result<PointInteraction> {
        match *self {
            InteractionSpec::Lengths {
                l_plus,
                l_minus,
                mu,
                nu,
                xi,
            } => canonicalize(RawInteraction {
                l_plus,
                l_minus,
                mu,
                nu,
                xi,
            }),
            InteractionSpec::Angles {
                theta_plus,
                theta_minus,
                mu,
                nu,
                l0,
                xi,
            } => {
                let p = U2Params::new(
                    wrap_angle(theta_plus),
                    wrap_angle(theta_minus),
                    mu,
                    wrap_angle(nu),
                    l0,
                )?;
                PointInteraction::from_angles(&p, xi)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_params(rng: &mut ChaCha8Rng) -> U2Params {
        U2Params {
            theta_plus: rng.gen_range(0.0..TAU),
            theta_minus: rng.gen_range(0.0..TAU),
            mu: rng.gen_range(0.0..=PI),
            nu: rng.gen_range(0.0..TAU),
            l0: 1.0,
        }
    }

    fn params(tp: f64, tm: f64, mu: f64, nu: f64) -> U2Params {
        U2Params::new(tp, tm, mu, nu, 1.0).unwrap()
    }

    #[test]
    fn lengths_at_special_angles() {
        let (l, _) = lengths_from_angles(&params(PI, 0.0, 0.0, 0.0));
        assert_eq!(l, ExtendedLength::Finite(0.0));
        let (l, _) = lengths_from_angles(&params(FRAC_PI_2, 0.0, 0.0, 0.0));
        assert!((l.finite_value().unwrap() - 1.0).abs() < 1e-15);
        let (l, _) = lengths_from_angles(&params(0.0, 0.0, 0.0, 0.0));
        assert_eq!(l, ExtendedLength::PositiveInfinite);
        let (l, _) = lengths_from_angles(&params(1.5 * PI, 0.0, 0.0, 0.0));
        assert!((l.finite_value().unwrap() + 1.0).abs() < 1e-15);
    }

    #[test]
    fn lengths_decrease_with_angle() {
        let mut prev = ExtendedLength::PositiveInfinite;
        for i in 1..2000 {
            let theta = TAU * i as f64 / 2000.0;
            let (l, _) = lengths_from_angles(&params(theta, 0.0, 0.0, 0.0));
            assert!(l < prev, "not decreasing at theta = {theta}");
            prev = l;
        }
    }

    #[test]
    fn l0_is_absorbed_by_normalization() {
        let p = U2Params::new(1.0, 4.0, 0.7, 2.0, 3.5).unwrap();
        let q = p.normalized();
        assert_eq!(q.l0, 1.0);
        let (a, b) = lengths_from_angles(&p);
        let (c, d) = lengths_from_angles(&q);
        assert!((a.to_f64() - c.to_f64()).abs() < 1e-12);
        assert!((b.to_f64() - d.to_f64()).abs() < 1e-12);
    }

    #[test]
    fn diagonal_when_mu_zero() {
        let u = characteristic_matrix(&params(0.4, 2.2, 0.0, 1.3));
        let m = u.matrix().m;
        assert!((m[0][0] - C64::from_polar(1.0, 0.4)).norm() < 1e-15);
        assert!((m[1][1] - C64::from_polar(1.0, 2.2)).norm() < 1e-15);
        assert_eq!(m[0][1], C64::new(0.0, 0.0));
        assert_eq!(m[1][0], C64::new(0.0, 0.0));
    }

    #[test]
    fn scalar_when_thetas_equal() {
        let u = characteristic_matrix(&params(1.1, 1.1, 0.9, 4.0));
        let expected = Mat2::scaled_identity(C64::from_polar(1.0, 1.1));
        assert!(u.matrix().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn characteristic_matrix_matches_conjugation_form() {
        // V^dagger D V with V = exp(i mu/2 sigma_2) exp(i nu/2 sigma_3), built by hand
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let p = random_params(&mut rng);
            let (s, c) = (0.5 * p.mu).sin_cos();
            let rot = Mat2::new(
                C64::new(c, 0.0),
                C64::new(s, 0.0),
                C64::new(-s, 0.0),
                C64::new(c, 0.0),
            );
            let phase = Mat2::new(
                C64::from_polar(1.0, 0.5 * p.nu),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
                C64::from_polar(1.0, -0.5 * p.nu),
            );
            let v = rot * phase;
            let d = Mat2::new(
                C64::from_polar(1.0, p.theta_plus),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
                C64::from_polar(1.0, p.theta_minus),
            );
            let expected = v.adjoint() * d * v;
            assert!(characteristic_matrix(&p).matrix().max_abs_diff(&expected) < 1e-14);
        }
    }

    #[test]
    fn random_characteristic_matrices_are_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let p = random_params(&mut rng);
            assert!(unitarity_deviation(characteristic_matrix(&p).matrix()) < 1e-12);
        }
    }

    #[test]
    fn canonicalize_leaves_ordered_input() {
        let raw = RawInteraction {
            l_plus: ExtendedLength::Finite(2.0),
            l_minus: ExtendedLength::Finite(1.0),
            mu: 0.3,
            nu: 1.0,
            xi: 0.5,
        };
        let p = canonicalize(raw).unwrap();
        assert_eq!(p.l_plus(), raw.l_plus);
        assert_eq!(p.l_minus(), raw.l_minus);
        assert_eq!(p.mu(), raw.mu);
        assert_eq!(p.nu(), raw.nu);
    }

    #[test]
    fn canonicalize_swaps_and_rotates() {
        let raw = RawInteraction {
            l_plus: ExtendedLength::Finite(1.0),
            l_minus: ExtendedLength::Finite(2.0),
            mu: PI / 3.0,
            nu: 0.0,
            xi: 0.0,
        };
        let p = canonicalize(raw).unwrap();
        assert_eq!(p.l_plus(), ExtendedLength::Finite(2.0));
        assert_eq!(p.l_minus(), ExtendedLength::Finite(1.0));
        assert!((p.mu() - 2.0 * PI / 3.0).abs() < 1e-15);
        assert!((p.nu() - PI).abs() < 1e-15);

        // both orderings describe the same matrix
        let unordered = U2Params {
            theta_plus: angle_from_length(raw.l_plus),
            theta_minus: angle_from_length(raw.l_minus),
            mu: raw.mu,
            nu: raw.nu,
            l0: 1.0,
        };
        let a = characteristic_matrix(&unordered);
        let b = p.characteristic_matrix();
        assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-12);
    }

    #[test]
    fn canonical_order_with_infinite_tags() {
        let p = PointInteraction::finite(f64::NEG_INFINITY, 0.0, 0.4, 0.0, 0.0).unwrap();
        assert_eq!(p.l_plus(), ExtendedLength::Finite(0.0));
        assert_eq!(p.l_minus(), ExtendedLength::NegativeInfinite);
        assert!(PointInteraction::new(
            ExtendedLength::Finite(3.0),
            ExtendedLength::PositiveInfinite,
            0.1,
            0.0,
            0.0
        )
        .is_err());
    }

    #[test]
    fn double_cover_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let p = random_params(&mut rng);
            let swapped = U2Params {
                theta_plus: p.theta_minus,
                theta_minus: p.theta_plus,
                mu: PI - p.mu,
                nu: wrap_angle(p.nu + PI),
                l0: 1.0,
            };
            let a = characteristic_matrix(&p);
            let b = characteristic_matrix(&swapped);
            assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-12);
        }
    }

    #[test]
    fn decompose_diagonal() {
        let i = C64::new(0.0, 1.0);
        let u = Mat2::new(i, C64::new(0.0, 0.0), C64::new(0.0, 0.0), -i);
        let p = decompose(&u).unwrap();
        assert!((p.theta_plus - FRAC_PI_2).abs() < 1e-15);
        assert!((p.theta_minus - 1.5 * PI).abs() < 1e-15);
        assert_eq!(p.mu, 0.0);
        assert_eq!(p.nu, 0.0);
    }

    #[test]
    fn decompose_scalar() {
        let u = Mat2::scaled_identity(C64::from_polar(1.0, PI / 3.0));
        let p = decompose(&u).unwrap();
        assert!((p.theta_plus - PI / 3.0).abs() < 1e-15);
        assert!((p.theta_minus - PI / 3.0).abs() < 1e-15);
        assert_eq!((p.mu, p.nu), (0.0, 0.0));
    }

    #[test]
    fn decompose_rejects_non_unitary() {
        let u = Mat2::scaled_identity(C64::new(1.1, 0.0));
        assert!(matches!(decompose(&u), Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn decompose_roundtrip_is_canonical() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let p = random_params(&mut rng);
            let u = characteristic_matrix(&p);
            let q = decompose(u.matrix()).unwrap();
            q.validate().unwrap();
            let v = characteristic_matrix(&q);
            assert!(u.matrix().max_abs_diff(v.matrix()) < 1e-10);
            let (lp, lm) = lengths_from_angles(&q);
            assert!(lp >= lm);
        }
    }

    #[test]
    fn length_and_angle_forms_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let p = random_params(&mut rng);
            let pi_ = PointInteraction::from_angles(&p, 0.0).unwrap();
            assert!(pi_.l_plus() >= pi_.l_minus());
            let a = characteristic_matrix(&p);
            let b = pi_.characteristic_matrix();
            assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-12);
        }
    }

    #[test]
    fn json_length_form() {
        let spec: InteractionSpec = serde_json::from_str(
            r#"{"L_plus": "inf", "L_minus": -2, "mu": 1.0, "nu": 0.5, "xi": 1.5}"#,
        )
        .unwrap();
        let p = spec.to_interaction().unwrap();
        assert_eq!(p.l_plus(), ExtendedLength::PositiveInfinite);
        assert_eq!(p.l_minus(), ExtendedLength::Finite(-2.0));
        assert_eq!(p.xi(), 1.5);
    }

    #[test]
    fn json_angle_form() {
        let spec: InteractionSpec = serde_json::from_str(
            r#"{"theta_plus": 3.141592653589793, "theta_minus": 0.0, "mu": 1.0, "nu": 0.0}"#,
        )
        .unwrap();
        let p = spec.to_interaction().unwrap();
        // L+ = 0, L- = inf: canonical form swaps them
        assert_eq!(p.l_plus(), ExtendedLength::PositiveInfinite);
        assert_eq!(p.l_minus(), ExtendedLength::Finite(0.0));
        assert!((p.mu() - (PI - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn json_rejects_bad_length() {
        let r: std::result::Result<InteractionSpec, _> =
            serde_json::from_str(r#"{"L_plus": "big", "L_minus": 0, "mu": 1.0, "nu": 0.0}"#);
        assert!(r.is_err());
    }

    #[test]
    fn extended_length_serializes_tags() {
        let v = serde_json::to_string(&[
            ExtendedLength::Finite(1.5),
            ExtendedLength::PositiveInfinite,
            ExtendedLength::NegativeInfinite,
        ])
        .unwrap();
        assert_eq!(v, r#"[1.5,"inf","-inf"]"#);
    }
}
