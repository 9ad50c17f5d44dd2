//! Brute-force two-interaction solver.
//!
//! Substitutes the piecewise plane-wave ansatz straight into the
//! connection conditions at both interactions and solves the resulting
//! 4x4 linear system for `(A, B, C, D)`. None of the closed-form S-matrix
//! amplitudes are used, so this is an independent check on `compose`.

use nalgebra::{Matrix4, Vector4};

use crate::compose::{check_ordering, TwoPointSolution};
use crate::single_scatter::check_wavenumber;
use crate::u2param::PointInteraction;
use crate::{Error, Result, C64};

/// Systems with a larger 1-norm condition estimate are rejected.
pub const MAX_CONDITION: f64 = 1e12;

/// Four connection conditions in the unknowns `(A, B, C, D)`.
///
/// Rows 0-1 come from the interaction at `xi1`, rows 2-3 from `xi2`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem4 {
    pub matrix: Matrix4<C64>,
    pub rhs: Vector4<C64>,
    /// `||M||_1 ||M^-1||_1`, infinite when `M` is singular.
    pub condition: f64,
}

impl LinearSystem4 {
    /// `max_i |(M x - rhs)_i|` relative to `max(1, max_i |rhs_i|)`.
    pub fn relative_residual(&self, x: &Vector4<C64>) -> f64 {
        let r = self.matrix * x - self.rhs;
        let worst = r.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let scale = self.rhs.iter().map(|z| z.norm()).fold(1.0, f64::max);
        worst / scale
    }
}

/// An affine expression `constant + sum_j coef[j] * unknown[j]`.
#[derive(Debug, Clone, Copy, Default)]
struct Affine {
    coef: [C64; 4],
    constant: C64,
}

impl Affine {
    fn term(index: usize, value: C64) -> Self {
        let mut a = Affine::default();
        a.coef[index] = value;
        a
    }

    fn plus(mut self, other: Affine) -> Self {
        for j in 0..4 {
            self.coef[j] += other.coef[j];
        }
        self.constant += other.constant;
        self
    }

    fn times(mut self, z: C64) -> Self {
        for c in &mut self.coef {
            *c *= z;
        }
        self.constant *= z;
        self
    }
}

const A: usize = 0;
const B: usize = 1;
const C: usize = 2;
const D: usize = 3;

/// Boundary values `(phi(xi+), phi(xi-), phi'(xi+), phi'(xi-))`.
struct Boundary {
    value_right: Affine,
    value_left: Affine,
    slope_right: Affine,
    slope_left: Affine,
}

/// A plane-wave pair `u e^{ikx} + v e^{-ikx}` evaluated at `x`, value and slope.
fn plane_waves(k: f64, x: f64, forward: Affine, backward: Affine) -> (Affine, Affine) {
    let e = C64::from_polar(1.0, k * x);
    let ik = C64::new(0.0, k);
    let value = forward.times(e).plus(backward.times(e.conj()));
    let slope = forward.times(ik * e).plus(backward.times(-ik * e.conj()));
    (value, slope)
}

/// Rows of the two connection conditions, each multiplied through by the
/// homogeneous denominator of its length so infinite lengths stay finite.
fn connection_rows(p: &PointInteraction, at: &Boundary) -> [Affine; 2] {
    let (ap, bp) = p.l_plus().homogeneous();
    let (am, bm) = p.l_minus().homogeneous();
    let (s, c) = (0.5 * p.mu()).sin_cos();
    let e = C64::from_polar(1.0, p.nu());
    let ec = e * c;
    let es = e * s;
    let real = |x: f64| C64::new(x, 0.0);

    // b+ (e c phi+ + s phi-) + a+ (e c phi'+ - s phi'-) = 0
    let first = at
        .value_right
        .times(ec * bp)
        .plus(at.value_left.times(real(s * bp)))
        .plus(at.slope_right.times(ec * ap))
        .plus(at.slope_left.times(real(-s * ap)));
    // b- (-e s phi+ + c phi-) - a- (e s phi'+ + c phi'-) = 0
    let second = at
        .value_right
        .times(-es * bm)
        .plus(at.value_left.times(real(c * bm)))
        .plus(at.slope_right.times(-es * am))
        .plus(at.slope_left.times(real(-c * am)));
    [first, second]
}

/// Builds the 4x4 system for unit incidence from the left.
pub fn assemble(p1: &PointInteraction, p2: &PointInteraction, k: f64) -> Result<LinearSystem4> {
    check_wavenumber(k)?;
    check_ordering(p1, p2)?;
    let one = C64::new(1.0, 0.0);
    let incoming = Affine {
        constant: one,
        ..Affine::default()
    };

    let (left_value, left_slope) = plane_waves(k, p1.xi(), incoming, Affine::term(A, one));
    let (mid1_value, mid1_slope) = plane_waves(k, p1.xi(), Affine::term(B, one), Affine::term(C, one));
    let (mid2_value, mid2_slope) = plane_waves(k, p2.xi(), Affine::term(B, one), Affine::term(C, one));
    let (right_value, right_slope) = plane_waves(k, p2.xi(), Affine::term(D, one), Affine::default());

    let at1 = Boundary {
        value_right: mid1_value,
        value_left: left_value,
        slope_right: mid1_slope,
        slope_left: left_slope,
    };
    let at2 = Boundary {
        value_right: right_value,
        value_left: mid2_value,
        slope_right: right_slope,
        slope_left: mid2_slope,
    };
    let [r0, r1] = connection_rows(p1, &at1);
    let [r2, r3] = connection_rows(p2, &at2);

    let mut matrix = Matrix4::<C64>::zeros();
    let mut rhs = Vector4::<C64>::zeros();
    for (i, row) in [r0, r1, r2, r3].iter().enumerate() {
        let scale = row.coef.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let scale = if scale > 0.0 { 1.0 / scale } else { 1.0 };
        for j in 0..4 {
            matrix[(i, j)] = row.coef[j] * scale;
        }
        rhs[i] = -row.constant * scale;
    }
    let condition = match matrix.try_inverse() {
        Some(inv) => one_norm(&matrix) * one_norm(&inv),
        None => f64::INFINITY,
    };
    Ok(LinearSystem4 {
        matrix,
        rhs,
        condition,
    })
}

fn one_norm(m: &Matrix4<C64>) -> f64 {
    m.column_iter()
        .map(|col| col.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Solves the assembled system by LU with partial pivoting.
#[allow(clippy::neg_cmp_op_on_partial_ord)] // NaN condition must fail
pub fn solve_direct(p1: &PointInteraction, p2: &PointInteraction, k: f64) -> Result<TwoPointSolution> {
    let system = assemble(p1, p2, k)?;
    if !(system.condition < MAX_CONDITION) {
        return Err(Error::IllConditioned {
            condition: system.condition,
        });
    }
    let x = system
        .matrix
        .lu()
        .solve(&system.rhs)
        .ok_or(Error::IllConditioned {
            condition: f64::INFINITY,
        })?;
    Ok(TwoPointSolution {
        a: x[A],
        b: x[B],
        c: x[C],
        d: x[D],
        k,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compose::two_point_amplitudes;
    use crate::u2param::ExtendedLength::*;
    use std::f64::consts::{FRAC_PI_2, PI, TAU};

    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_pair(rng: &mut ChaCha8Rng) -> (PointInteraction, PointInteraction) {
        let mut one = |xi: f64| {
            PointInteraction::finite(
                rng.gen_range(-5.0..5.0),
                rng.gen_range(-5.0..5.0),
                rng.gen_range(0.0..=PI),
                rng.gen_range(0.0..TAU),
                xi,
            )
            .unwrap()
        };
        let p1 = one(0.3);
        let p2 = one(2.1);
        (p1, p2)
    }

    #[test]
    fn wall_at_second_point_stops_transmission() {
        let p1 = PointInteraction::finite(1.0, -0.4, 1.0, 0.5, 0.0).unwrap();
        let p2 = PointInteraction::finite(0.3, 0.3, 0.7, 0.0, 1.5).unwrap();
        let s = solve_direct(&p1, &p2, 1.1).unwrap();
        assert!(s.d.norm() < 1e-14);
        assert!((s.a.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn wall_at_first_point_reflects_totally() {
        let p1 = PointInteraction::finite(2.0, 2.0, 1.0, 0.5, 0.0).unwrap();
        let p2 = PointInteraction::finite(1.0, -0.5, 0.7, 0.0, 1.5).unwrap();
        let s = solve_direct(&p1, &p2, 0.9).unwrap();
        assert!(s.d.norm() < 1e-14);
        assert!((s.a.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fig9_configuration_transmits() {
        let k = 1.25_f64.sqrt();
        let d = (PI - (k / 2.0).atan()) / k;
        let p1 = PointInteraction::finite(3.0, 1.0, FRAC_PI_2, 0.0, 0.0).unwrap();
        let p2 = PointInteraction::finite(4.0, -4.0, FRAC_PI_2, 0.0, d).unwrap();
        let s = solve_direct(&p1, &p2, k).unwrap();
        assert!((s.d.norm_sqr() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn pair_of_transparent_points() {
        // mu = pi/2, L+ = -L- = L: each point alone is transparent at k = 1/|L|
        let l = 0.8;
        let p1 = PointInteraction::finite(l, -l, FRAC_PI_2, 0.0, 0.0).unwrap();
        let p2 = PointInteraction::finite(l, -l, FRAC_PI_2, 1.0, 2.3).unwrap();
        let s = solve_direct(&p1, &p2, 1.0 / l).unwrap();
        assert!(s.a.norm() < 1e-12);
        assert!((s.d.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn matches_composed_amplitudes() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..1000 {
            let (p1, p2) = random_pair(&mut rng);
            let k = rng.gen_range(0.01..10.0);
            let system = assemble(&p1, &p2, k).unwrap();
            let direct = solve_direct(&p1, &p2, k).unwrap();
            let x = Vector4::new(direct.a, direct.b, direct.c, direct.d);
            assert!(system.relative_residual(&x) < 1e-10);
            let [f1, f2] = direct.flux_residuals();
            assert!(f1 < 1e-9 && f2 < 1e-9);
            if system.condition < 1e8 {
                let closed = two_point_amplitudes(&p1, &p2, k).unwrap();
                for (u, v) in [
                    (direct.a, closed.a),
                    (direct.b, closed.b),
                    (direct.c, closed.c),
                    (direct.d, closed.d),
                ] {
                    assert!((u - v).norm() < 1e-9, "{u} vs {v}");
                }
            }
        }
    }

    #[test]
    fn infinite_lengths_stay_finite() {
        let p1 = PointInteraction::new(PositiveInfinite, Finite(0.0), 1.0, 0.2, 0.0).unwrap();
        let p2 = PointInteraction::new(Finite(0.0), NegativeInfinite, 2.0, 1.0, 1.0).unwrap();
        let k = 1.7;
        let direct = solve_direct(&p1, &p2, k).unwrap();
        let closed = two_point_amplitudes(&p1, &p2, k).unwrap();
        assert!((direct.d - closed.d).norm() < 1e-12);
        assert!((direct.a - closed.a).norm() < 1e-12);
    }

    #[test]
    fn current_is_constant_across_regions() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..200 {
            let (p1, p2) = random_pair(&mut rng);
            let k = rng.gen_range(0.01..10.0);
            let s = solve_direct(&p1, &p2, k).unwrap();
            let left = s.current(p1.xi() - 0.37, p1.xi(), p2.xi());
            let middle = s.current(0.5 * (p1.xi() + p2.xi()), p1.xi(), p2.xi());
            let right = s.current(p2.xi() + 1.3, p1.xi(), p2.xi());
            let scale = k * s.b.norm_sqr().max(1.0);
            assert!((left - middle).abs() <= 1e-10 * scale);
            assert!((middle - right).abs() <= 1e-10 * scale);
        }
    }

    #[test]
    fn rejects_bad_ordering() {
        let p = PointInteraction::finite(1.0, 0.0, 1.0, 0.0, 1.0).unwrap();
        assert!(matches!(assemble(&p, &p, 1.0), Err(Error::BadOrdering { .. })));
    }
}
