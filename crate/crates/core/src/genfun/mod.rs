//! Exact generating-function engine.
//!
//! Solves, order by order in z, the recurrence defining the graded series
//! Φ₀ in (z, u, v, w): the coefficient of z^m u^{k−n−s} v^{n−s} w^{2s−2} is
//! the interpolated admissible nested-sum contribution of weight k, depth n
//! and height s whose outer summation variable equals m. Coefficients live
//! in ℚ[r]. The [`oracle`] submodule recomputes the same coefficients by
//! direct enumeration, entirely independently of the solver.

pub mod oracle;

use num::BigRational;
use thiserror::Error;

use crate::level::Level;
use crate::ring::{big_int_rational, RPoly, RPolynomial};
use crate::series::{SeriesBounds, SeriesError, UvwSeries, ZSeries};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenfunError {
    #[error("index must have at least one part")]
    EmptyIndex,
    #[error("z-order must be at least 1")]
    ZeroOrder,
    #[error("w-exponent {0} is odd; graded monomials carry even powers of w")]
    OddWExponent(usize),
    #[error("no graded monomial has weight={k}, depth={n}, height={s}; need k >= n+s and n >= s >= 1")]
    ShapeOutOfRange { k: u32, n: u32, s: u32 },
    #[error("shape (weight={k}, depth={n}, height={s}) lies outside both derivative-relation regions")]
    NoApplicableRelation { k: u32, n: u32, s: u32 },
    #[error("z-order {m} exceeds the solved bound {bound}")]
    ZOrderBound { m: usize, bound: usize },
    #[error("z-bound {m_max} too small for level modulus {modulus}; need at least modulus + 2")]
    BoundTooSmall { m_max: usize, modulus: u32 },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Monomial u^i v^j w^l carrying shape (weight k, depth n, height s):
/// i = k−n−s, j = n−s, l = 2s−2. Defined for k >= n+s, n >= s >= 1.
pub fn shape_to_monomial(k: u32, n: u32, s: u32) -> Result<(usize, usize, usize), GenfunError> {
    if s < 1 || n < s || k < n + s {
        return Err(GenfunError::ShapeOutOfRange { k, n, s });
    }
    Ok(((k - n - s) as usize, (n - s) as usize, (2 * s - 2) as usize))
}

/// Inverse of [`shape_to_monomial`]: k = i+j+l+2, n = j+l/2+1, s = l/2+1.
pub fn monomial_to_shape(i: usize, j: usize, l: usize) -> Result<(u32, u32, u32), GenfunError> {
    if !l.is_multiple_of(2) {
        return Err(GenfunError::OddWExponent(l));
    }
    let s = (l / 2 + 1) as u32;
    let n = j as u32 + s;
    let k = i as u32 + n + s;
    Ok((k, n, s))
}

/// Builds a (u, v, w) polynomial from (monomial, coefficient) pairs, dropping
/// any term outside the bounds (quotient-ring embedding).
fn poly_in_uvw(bounds: SeriesBounds, terms: &[((usize, usize, usize), RPoly)]) -> UvwSeries<RPoly> {
    let mut s = UvwSeries::zero(bounds, &RPoly::zero());
    for ((i, j, l), c) in terms {
        s.add_term_truncating(*i, *j, *l, c);
    }
    s
}

fn rp(coeffs: &[BigRational]) -> RPoly {
    RPolynomial::from_coeffs(coeffs.to_vec())
}

/// Transfer numerator at pivot c: c(c − u + v − vr) − (1−r)(uv − w²).
fn shift_numerator(c: i64, bounds: SeriesBounds) -> UvwSeries<RPoly> {
    let q = big_int_rational;
    poly_in_uvw(
        bounds,
        &[
            ((0, 0, 0), rp(&[q(c * c)])),
            ((1, 0, 0), rp(&[q(-c)])),
            ((0, 1, 0), rp(&[q(c), q(-c)])),
            ((1, 1, 0), rp(&[q(-1), q(1)])),
            ((0, 0, 2), rp(&[q(1), q(-1)])),
        ],
    )
}

/// Pivot denominator at order c: c(c − u − vr) + r(uv − w²).
fn pivot_denominator(c: i64, bounds: SeriesBounds) -> UvwSeries<RPoly> {
    let q = big_int_rational;
    poly_in_uvw(
        bounds,
        &[
            ((0, 0, 0), rp(&[q(c * c)])),
            ((1, 0, 0), rp(&[q(-c)])),
            ((0, 1, 0), rp(&[q(0), q(-c)])),
            ((1, 1, 0), rp(&[q(0), q(1)])),
            ((0, 0, 2), rp(&[q(0), q(-1)])),
        ],
    )
}

/// Solved truncated generating series: one (u, v, w) polynomial over ℚ[r]
/// per z-order 0..=M, zero away from the level's progression.
#[derive(Debug, Clone)]
pub struct Phi0Solution {
    level: Level,
    bounds: SeriesBounds,
    series: ZSeries<UvwSeries<RPoly>>,
}

impl Phi0Solution {
    pub fn level(&self) -> Level {
        self.level
    }

    pub fn bounds(&self) -> SeriesBounds {
        self.bounds
    }

    pub fn z_bound(&self) -> usize {
        self.series.bound()
    }

    pub fn series(&self) -> &ZSeries<UvwSeries<RPoly>> {
        &self.series
    }

    pub fn z_coeff(&self, m: usize) -> Result<&UvwSeries<RPoly>, GenfunError> {
        if m > self.series.bound() {
            return Err(GenfunError::ZOrderBound { m, bound: self.series.bound() });
        }
        Ok(self.series.coeff(m))
    }

    /// Coefficient of z^m u^{k−n−s} v^{n−s} w^{2s−2}: the solver's value for
    /// the admissible graded sum X₀ʳ of shape (k, n, s) at outer value m.
    pub fn x0_coeff(&self, k: u32, n: u32, s: u32, m: usize) -> Result<RPoly, GenfunError> {
        let (i, j, l) = shape_to_monomial(k, n, s)?;
        if !self.bounds.retains(i, j, l) {
            return Err(GenfunError::Series(SeriesError::OutOfBounds { i, j, l }));
        }
        Ok(self.z_coeff(m)?.coeff(i, j, l))
    }
}

/// Solves the defining recurrence through z^m_max with per-variable bounds
/// (du, dv, dw): den(a)·q_a = 1 and den(m)·q_m = num(m−N)·q_{m−N} along the
/// progression, q_m = 0 elsewhere.
pub fn solve_phi0(
    level: Level,
    m_max: usize,
    du: usize,
    dv: usize,
    dw: usize,
) -> Result<Phi0Solution, GenfunError> {
    solve_phi0_bounded(level, m_max, SeriesBounds::boxed(du, dv, dw))
}

/// [`solve_phi0`] with explicit bounds; a total-degree cap keeps wide sweeps
/// cheap when only shapes with k <= cap+2 are read back.
pub fn solve_phi0_bounded(
    level: Level,
    m_max: usize,
    bounds: SeriesBounds,
) -> Result<Phi0Solution, GenfunError> {
    let step = level.modulus() as usize;
    if m_max < step + 2 {
        return Err(GenfunError::BoundTooSmall { m_max, modulus: level.modulus() });
    }
    let zero_uvw = UvwSeries::zero(bounds, &RPoly::zero());
    let mut series = ZSeries::zero(m_max, &zero_uvw);
    let a = level.residue() as usize;
    let mut q = pivot_denominator(a as i64, bounds).reciprocal()?;
    series.set_coeff(a, q.clone())?;
    let mut m = a + step;
    while m <= m_max {
        q = q.try_mul(&shift_numerator((m - step) as i64, bounds))?;
        q = q.try_mul(&pivot_denominator(m as i64, bounds).reciprocal()?)?;
        series.set_coeff(m, q.clone())?;
        m += step;
    }
    Ok(Phi0Solution { level, bounds, series })
}

/// Applies the defining differential operator to a candidate series and
/// subtracts the forcing term z^a:
///
/// z²(1−z^N)·Φ″ + z[(1−u)(1−z^N) − v(r+(1−r)z^N)]·Φ′ + (r+(1−r)z^N)(uv−w²)·Φ − z^a.
///
/// For input solved through z^M the residual is reported through order M−N.
/// A correct solution yields the zero series; the zero series yields −z^a.
pub fn ode_residual(
    level: Level,
    phi: &ZSeries<UvwSeries<RPoly>>,
) -> Result<ZSeries<UvwSeries<RPoly>>, GenfunError> {
    let step = level.modulus() as usize;
    let m_max = phi.bound();
    if m_max < step + 2 {
        return Err(GenfunError::BoundTooSmall { m_max, modulus: level.modulus() });
    }
    let bounds = phi.coeff(0).bounds();
    let q = big_int_rational;

    let one_minus_u = poly_in_uvw(
        bounds,
        &[((0, 0, 0), rp(&[q(1)])), ((1, 0, 0), rp(&[q(-1)]))],
    );
    let v_r = poly_in_uvw(bounds, &[((0, 1, 0), rp(&[q(0), q(1)]))]);
    let v_one_minus_r = poly_in_uvw(bounds, &[((0, 1, 0), rp(&[q(1), q(-1)]))]);
    let uv_w2_r = poly_in_uvw(
        bounds,
        &[((1, 1, 0), rp(&[q(0), q(1)])), ((0, 0, 2), rp(&[q(0), q(-1)]))],
    );
    let uv_w2_one_minus_r = poly_in_uvw(
        bounds,
        &[((1, 1, 0), rp(&[q(1), q(-1)])), ((0, 0, 2), rp(&[q(-1), q(1)]))],
    );

    let d1 = phi.derivative();
    let d2 = d1.derivative();
    // z²(1−z^N)Φ″
    let curvature = d2
        .shifted(2)
        .try_sub(&d2.shifted(step + 2).truncated(m_max))?;
    // zΦ′ and z^{N+1}Φ′
    let z_d1 = d1.shifted(1);
    let zn_d1 = d1.shifted(step + 1).truncated(m_max);
    let drift_u = z_d1.try_sub(&zn_d1)?.scale(&one_minus_u);
    let drift_v = z_d1.scale(&v_r).try_add(&zn_d1.scale(&v_one_minus_r))?;
    let potential = phi
        .scale(&uv_w2_r)
        .try_add(&phi.shifted(step).truncated(m_max).scale(&uv_w2_one_minus_r))?;

    let mut forcing = ZSeries::zero(m_max, &UvwSeries::zero(bounds, &RPoly::zero()));
    forcing.set_coeff(
        level.residue() as usize,
        UvwSeries::one(bounds, &RPoly::zero()),
    )?;

    let residual = curvature
        .try_add(&drift_u)?
        .try_sub(&drift_v)?
        .try_add(&potential)?
        .try_sub(&forcing)?;
    Ok(residual.truncated(m_max - step))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{big_rational, CoefficientRing};

    fn lv(n: u32, a: u32) -> Level {
        Level::new(n, a).unwrap()
    }

    fn constant_of(p: &RPoly) -> BigRational {
        assert_eq!(p.degree().map_or(0, |d| d), 0, "expected constant, got {}", p.coeff_string());
        p.coeff(0)
    }

    #[test]
    fn shape_monomial_roundtrip() {
        for k in 0..=9u32 {
            for n in 0..=9u32 {
                for s in 0..=9u32 {
                    match shape_to_monomial(k, n, s) {
                        Ok((i, j, l)) => {
                            assert!(s >= 1 && n >= s && k >= n + s);
                            assert_eq!(monomial_to_shape(i, j, l).unwrap(), (k, n, s));
                        }
                        Err(GenfunError::ShapeOutOfRange { .. }) => {
                            assert!(s < 1 || n < s || k < n + s);
                        }
                        Err(e) => panic!("unexpected error {e}"),
                    }
                }
            }
        }
        assert_eq!(shape_to_monomial(2, 1, 1).unwrap(), (0, 0, 0));
        assert_eq!(shape_to_monomial(7, 3, 2).unwrap(), (2, 1, 2));
        assert!(matches!(
            monomial_to_shape(0, 0, 3),
            Err(GenfunError::OddWExponent(3))
        ));
    }

    #[test]
    fn pivot_series_constants_level_2_1() {
        let sol = solve_phi0(lv(2, 1), 6, 2, 2, 2).unwrap();
        // constant (u=v=w=0) coefficients 1/a^2 * prod (m-N)^2/m^2 = 1/m^2
        assert_eq!(constant_of(&sol.x0_coeff(2, 1, 1, 1).unwrap()), big_rational(1, 1));
        assert_eq!(constant_of(&sol.x0_coeff(2, 1, 1, 3).unwrap()), big_rational(1, 9));
        assert_eq!(constant_of(&sol.x0_coeff(2, 1, 1, 5).unwrap()), big_rational(1, 25));
        // off-progression orders vanish identically
        assert!(sol.z_coeff(2).unwrap().ring_is_zero());
        assert!(sol.z_coeff(4).unwrap().ring_is_zero());
        assert!(sol.z_coeff(0).unwrap().ring_is_zero());
    }

    #[test]
    fn solver_rejects_tiny_bound() {
        assert!(matches!(
            solve_phi0(lv(4, 3), 5, 1, 1, 1),
            Err(GenfunError::BoundTooSmall { m_max: 5, modulus: 4 })
        ));
        assert!(solve_phi0(lv(4, 3), 6, 1, 1, 1).is_ok());
    }

    #[test]
    fn x0_coeff_validates_access() {
        let sol = solve_phi0(lv(2, 1), 8, 1, 1, 0).unwrap();
        assert!(matches!(
            sol.x0_coeff(2, 1, 1, 9),
            Err(GenfunError::ZOrderBound { m: 9, bound: 8 })
        ));
        assert!(matches!(
            sol.x0_coeff(3, 1, 0, 2),
            Err(GenfunError::ShapeOutOfRange { .. })
        ));
        assert!(matches!(
            sol.x0_coeff(6, 1, 1, 2),
            Err(GenfunError::Series(SeriesError::OutOfBounds { .. }))
        ));
        // w-degree 2 needs s = 2 shapes; dw = 0 cannot hold them
        assert!(matches!(
            sol.x0_coeff(4, 2, 2, 4),
            Err(GenfunError::Series(SeriesError::OutOfBounds { .. }))
        ));
    }

    #[test]
    fn odd_w_coefficients_vanish() {
        let sol = solve_phi0(lv(3, 2), 11, 2, 2, 3).unwrap();
        for m in 0..=11 {
            let c = sol.z_coeff(m).unwrap();
            for (_, _, l, _) in c.iter_nonzero() {
                assert_eq!(l % 2, 0, "odd w-power at order {m}");
            }
        }
    }

    #[test]
    fn r_degree_bounded_by_depth() {
        // the shape (k,n,s) coefficient is built from depth-n indices, whose
        // interpolation terms carry r-exponents < n = j + s
        let sol = solve_phi0(lv(2, 1), 15, 3, 3, 4).unwrap();
        for m in 0..=15usize {
            let c = sol.z_coeff(m).unwrap();
            for (_, j, l, poly) in c.iter_nonzero() {
                let s = l / 2 + 1;
                if let Some(d) = poly.degree() {
                    assert!(d < j + s, "r-degree {d} too high at v^{j} w^{l}");
                }
            }
        }
    }

    #[test]
    fn ode_residual_vanishes_for_solution() {
        let sol = solve_phi0(lv(2, 1), 21, 2, 2, 2).unwrap();
        let res = ode_residual(sol.level(), sol.series()).unwrap();
        assert_eq!(res.bound(), 19);
        assert!(res.is_zero());

        let sol = solve_phi0_bounded(lv(1, 1), 10, SeriesBounds::capped(3, 3, 2, 3)).unwrap();
        let res = ode_residual(sol.level(), sol.series()).unwrap();
        assert_eq!(res.bound(), 9);
        assert!(res.is_zero());
    }

    #[test]
    fn ode_residual_of_zero_series_is_minus_forcing() {
        let bounds = SeriesBounds::boxed(1, 1, 2);
        let zero = ZSeries::zero(10, &UvwSeries::zero(bounds, &RPoly::zero()));
        let res = ode_residual(lv(2, 1), &zero).unwrap();
        for (m, c) in res.iter() {
            if m == 1 {
                let got = c.coeff(0, 0, 0);
                assert_eq!(constant_of(&got), big_rational(-1, 1));
                assert_eq!(c.iter_nonzero().count(), 1);
            } else {
                assert!(c.ring_is_zero(), "unexpected residual at order {m}");
            }
        }
    }

    #[test]
    fn ode_residual_flags_perturbations() {
        // changing a single solved coefficient must surface in the residual
        let sol = solve_phi0(lv(2, 1), 15, 1, 1, 2).unwrap();
        let mut phi = sol.series().clone();
        let mut bad = phi.coeff(5).clone();
        let bumped = bad
            .coeff(0, 0, 0)
            .ring_add(&RPolynomial::constant(big_rational(1, 1000000)));
        bad.set_coeff(0, 0, 0, bumped).unwrap();
        phi.set_coeff(5, bad).unwrap();
        let res = ode_residual(lv(2, 1), &phi).unwrap();
        assert!(!res.is_zero());
    }
}
