//! Truncated series in (u, v, w) over an abstract coefficient ring.

use num::BigRational;
use serde::Serialize;

use super::SeriesError;
use crate::ring::CoefficientRing;

/// Per-variable degree bounds plus an optional total-degree cap. With a cap,
/// monomials with i+j+l beyond it are identified with zero (quotient-ring
/// semantics); arithmetic stays exact for every retained monomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeriesBounds {
    pub du: usize,
    pub dv: usize,
    pub dw: usize,
    pub total: Option<usize>,
}

impl SeriesBounds {
    pub fn boxed(du: usize, dv: usize, dw: usize) -> Self {
        SeriesBounds { du, dv, dw, total: None }
    }

    pub fn capped(du: usize, dv: usize, dw: usize, total: usize) -> Self {
        SeriesBounds { du, dv, dw, total: Some(total) }
    }

    pub fn retains(&self, i: usize, j: usize, l: usize) -> bool {
        i <= self.du
            && j <= self.dv
            && l <= self.dw
            && self.total.map_or(true, |t| i + j + l <= t)
    }

    /// Largest total degree of a retained monomial.
    pub fn max_total(&self) -> usize {
        let boxed = self.du + self.dv + self.dw;
        self.total.map_or(boxed, |t| t.min(boxed))
    }

    fn describe(&self) -> String {
        match self.total {
            Some(t) => format!("(du={}, dv={}, dw={}, total<={})", self.du, self.dv, self.dw, t),
            None => format!("(du={}, dv={}, dw={})", self.du, self.dv, self.dw),
        }
    }
}

/// One rendered series term, as emitted in JSON reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeriesTerm {
    pub monomial: String,
    pub coeff: String,
}

/// Dense truncated series. The constant term is always stored, so the series
/// carries a usable prototype of its coefficient ring.
#[derive(Debug, Clone)]
pub struct UvwSeries<C> {
    bounds: SeriesBounds,
    coeffs: Vec<C>,
}

impl<C: CoefficientRing> UvwSeries<C> {
    pub fn zero(bounds: SeriesBounds, proto: &C) -> Self {
        let len = (bounds.du + 1) * (bounds.dv + 1) * (bounds.dw + 1);
        UvwSeries {
            bounds,
            coeffs: vec![proto.zero_like(); len],
        }
    }

    pub fn one(bounds: SeriesBounds, proto: &C) -> Self {
        let mut s = Self::zero(bounds, proto);
        s.coeffs[0] = proto.one_like();
        s
    }

    /// Single-term series; errors if the monomial is not retained rather than
    /// truncating silently.
    pub fn monomial(
        bounds: SeriesBounds,
        proto: &C,
        (i, j, l): (usize, usize, usize),
        c: C,
    ) -> Result<Self, SeriesError> {
        if !bounds.retains(i, j, l) {
            return Err(SeriesError::OutOfBounds { i, j, l });
        }
        let mut s = Self::zero(bounds, proto);
        let at = s.flat(i, j, l);
        s.coeffs[at] = c;
        Ok(s)
    }

    pub fn bounds(&self) -> SeriesBounds {
        self.bounds
    }

    fn proto(&self) -> &C {
        &self.coeffs[0]
    }

    fn flat(&self, i: usize, j: usize, l: usize) -> usize {
        (i * (self.bounds.dv + 1) + j) * (self.bounds.dw + 1) + l
    }

    /// Coefficient of u^i v^j w^l; zero outside the retained region.
    pub fn coeff(&self, i: usize, j: usize, l: usize) -> C {
        if self.bounds.retains(i, j, l) {
            self.coeffs[self.flat(i, j, l)].clone()
        } else {
            self.proto().zero_like()
        }
    }

    pub fn set_coeff(&mut self, i: usize, j: usize, l: usize, c: C) -> Result<(), SeriesError> {
        if !self.bounds.retains(i, j, l) {
            return Err(SeriesError::OutOfBounds { i, j, l });
        }
        let at = self.flat(i, j, l);
        self.coeffs[at] = c;
        Ok(())
    }

    /// Adds c * u^i v^j w^l, dropping the term if it is not retained. This is
    /// the quotient-ring embedding used when a polynomial with known shape is
    /// pushed into a capped series.
    pub fn add_term_truncating(&mut self, i: usize, j: usize, l: usize, c: &C) {
        if self.bounds.retains(i, j, l) {
            let at = self.flat(i, j, l);
            self.coeffs[at] = self.coeffs[at].ring_add(c);
        }
    }

    /// Retained monomials with nonzero coefficient, lexicographic in (i,j,l).
    pub fn iter_nonzero(&self) -> impl Iterator<Item = (usize, usize, usize, &C)> {
        let b = self.bounds;
        (0..=b.du)
            .flat_map(move |i| (0..=b.dv).map(move |j| (i, j)))
            .flat_map(move |(i, j)| (0..=b.dw).map(move |l| (i, j, l)))
            .filter_map(move |(i, j, l)| {
                if !b.retains(i, j, l) {
                    return None;
                }
                let c = &self.coeffs[self.flat(i, j, l)];
                if c.ring_is_zero() {
                    None
                } else {
                    Some((i, j, l, c))
                }
            })
    }

    fn check_bounds(&self, rhs: &Self) -> Result<(), SeriesError> {
        if self.bounds != rhs.bounds {
            return Err(SeriesError::BoundMismatch(
                self.bounds.describe(),
                rhs.bounds.describe(),
            ));
        }
        Ok(())
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self, SeriesError> {
        self.check_bounds(rhs)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a.ring_add(b))
            .collect();
        Ok(UvwSeries { bounds: self.bounds, coeffs })
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self, SeriesError> {
        self.try_add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        UvwSeries {
            bounds: self.bounds,
            coeffs: self.coeffs.iter().map(|c| c.ring_neg()).collect(),
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        UvwSeries {
            bounds: self.bounds,
            coeffs: self.coeffs.iter().map(|a| a.ring_mul(c)).collect(),
        }
    }

    pub fn scale_rational(&self, q: &BigRational) -> Self {
        self.scale(&self.proto().embed_rational(q))
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self, SeriesError> {
        self.check_bounds(rhs)?;
        let a: Vec<_> = self.iter_nonzero().collect();
        let b: Vec<_> = rhs.iter_nonzero().collect();
        let mut out = Self::zero(self.bounds, self.proto());
        for &(i1, j1, l1, ca) in &a {
            for &(i2, j2, l2, cb) in &b {
                let (i, j, l) = (i1 + i2, j1 + j2, l1 + l2);
                if out.bounds.retains(i, j, l) {
                    let at = out.flat(i, j, l);
                    out.coeffs[at] = out.coeffs[at].ring_add(&ca.ring_mul(cb));
                }
            }
        }
        Ok(out)
    }

    /// Multiplicative inverse, solved degree layer by degree layer; needs an
    /// invertible constant term.
    pub fn reciprocal(&self) -> Result<Self, SeriesError> {
        let inv0 = self
            .coeff(0, 0, 0)
            .ring_inv()
            .ok_or(SeriesError::NonInvertibleConstant)?;
        let mut out = Self::zero(self.bounds, self.proto());
        out.coeffs[0] = inv0.clone();
        let nonzero: Vec<(usize, usize, usize, C)> = self
            .iter_nonzero()
            .filter(|&(i, j, l, _)| (i, j, l) != (0, 0, 0))
            .map(|(i, j, l, c)| (i, j, l, c.clone()))
            .collect();
        for d in 1..=self.bounds.max_total() {
            for i in 0..=self.bounds.du.min(d) {
                for j in 0..=self.bounds.dv.min(d - i) {
                    let l = d - i - j;
                    if !self.bounds.retains(i, j, l) {
                        continue;
                    }
                    let mut acc = self.proto().zero_like();
                    for (i2, j2, l2, c2) in &nonzero {
                        if *i2 > i || *j2 > j || *l2 > l {
                            continue;
                        }
                        let prev = out.coeff(i - i2, j - j2, l - l2);
                        if prev.ring_is_zero() {
                            continue;
                        }
                        acc = acc.ring_add(&c2.ring_mul(&prev));
                    }
                    if !acc.ring_is_zero() {
                        let at = out.flat(i, j, l);
                        out.coeffs[at] = inv0.ring_mul(&acc).ring_neg();
                    }
                }
            }
        }
        Ok(out)
    }

    /// exp of a series with zero constant term: sum of a^m / m! over the
    /// retained total degrees.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        if !self.coeff(0, 0, 0).ring_is_zero() {
            return Err(SeriesError::NonzeroConstantTerm);
        }
        let mut out = Self::one(self.bounds, self.proto());
        let mut term = Self::one(self.bounds, self.proto());
        for m in 1..=self.bounds.max_total() {
            term = term.try_mul(self)?;
            term = term.scale_rational(&BigRational::new(1.into(), (m as i64).into()));
            if term.iter_nonzero().next().is_none() {
                break;
            }
            out = out.try_add(&term)?;
        }
        Ok(out)
    }

    /// Rendered nonzero terms in deterministic order.
    pub fn to_terms(&self) -> Vec<SeriesTerm> {
        self.iter_nonzero()
            .map(|(i, j, l, c)| SeriesTerm {
                monomial: monomial_string(i, j, l),
                coeff: c.coeff_string(),
            })
            .collect()
    }
}

fn monomial_string(i: usize, j: usize, l: usize) -> String {
    let mut out = String::new();
    for (sym, e) in [("u", i), ("v", j), ("w", l)] {
        if e == 0 {
            continue;
        }
        if !out.is_empty() {
            out.push(' ');
        }
        if e == 1 {
            out.push_str(sym);
        } else {
            out.push_str(&format!("{sym}^{e}"));
        }
    }
    if out.is_empty() {
        out.push('1');
    }
    out
}

impl<C: CoefficientRing> CoefficientRing for UvwSeries<C> {
    fn zero_like(&self) -> Self {
        Self::zero(self.bounds, self.proto())
    }
    fn one_like(&self) -> Self {
        Self::one(self.bounds, self.proto())
    }
    /// Panics on bound mismatch; fallible callers use `try_add`.
    fn ring_add(&self, rhs: &Self) -> Self {
        self.try_add(rhs).expect("series bound mismatch in ring_add")
    }
    fn ring_neg(&self) -> Self {
        self.neg()
    }
    /// Panics on bound mismatch; fallible callers use `try_mul`.
    fn ring_mul(&self, rhs: &Self) -> Self {
        self.try_mul(rhs).expect("series bound mismatch in ring_mul")
    }
    fn ring_inv(&self) -> Option<Self> {
        self.reciprocal().ok()
    }
    fn embed_rational(&self, q: &BigRational) -> Self {
        let mut s = Self::zero(self.bounds, self.proto());
        s.coeffs[0] = self.proto().embed_rational(q);
        s
    }
    fn ring_is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.ring_is_zero())
    }
    fn ring_eq(&self, rhs: &Self) -> bool {
        self.bounds == rhs.bounds
            && self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .all(|(a, b)| a.ring_eq(b))
    }
    fn coeff_string(&self) -> String {
        let terms = self.to_terms();
        if terms.is_empty() {
            return "0".to_owned();
        }
        terms
            .iter()
            .map(|t| format!("({})*{}", t.coeff, t.monomial))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{big_int_rational, big_rational};
    use num::{BigRational, One, Zero};

    type S = UvwSeries<BigRational>;

    fn zero_q() -> BigRational {
        BigRational::zero()
    }

    fn mk(bounds: SeriesBounds, terms: &[(usize, usize, usize, i64, i64)]) -> S {
        let mut s = S::zero(bounds, &zero_q());
        for &(i, j, l, n, d) in terms {
            s.set_coeff(i, j, l, big_rational(n, d)).unwrap();
        }
        s
    }

    #[test]
    fn mul_example_box() {
        let b = SeriesBounds::boxed(2, 1, 0);
        // (1 + u)(1 - u) = 1 - u^2
        let a = mk(b, &[(0, 0, 0, 1, 1), (1, 0, 0, 1, 1)]);
        let c = mk(b, &[(0, 0, 0, 1, 1), (1, 0, 0, -1, 1)]);
        let p = a.try_mul(&c).unwrap();
        let want = mk(b, &[(0, 0, 0, 1, 1), (2, 0, 0, -1, 1)]);
        assert!(p.ring_eq(&want));
    }

    #[test]
    fn mul_truncates_at_box_and_cap() {
        let b = SeriesBounds::boxed(1, 0, 0);
        let a = mk(b, &[(1, 0, 0, 1, 1)]);
        // u*u leaves the box entirely
        assert!(a.try_mul(&a).unwrap().ring_is_zero());

        let capped = SeriesBounds::capped(2, 2, 0, 2);
        let x = {
            let mut s = S::zero(capped, &zero_q());
            s.set_coeff(1, 0, 0, big_int_rational(1)).unwrap();
            s.set_coeff(0, 1, 0, big_int_rational(1)).unwrap();
            s
        };
        let sq = x.try_mul(&x).unwrap();
        // (u+v)^2 = u^2 + 2uv + v^2, all retained at total degree 2
        assert_eq!(sq.coeff(1, 1, 0), big_int_rational(2));
        let cube = sq.try_mul(&x).unwrap();
        // total degree 3 exceeds the cap
        assert!(cube.ring_is_zero());
    }

    #[test]
    fn cap_rejects_out_of_cap_monomial() {
        let b = SeriesBounds::capped(3, 3, 3, 2);
        assert_eq!(
            S::monomial(b, &zero_q(), (1, 1, 1), BigRational::one()).unwrap_err(),
            SeriesError::OutOfBounds { i: 1, j: 1, l: 1 }
        );
        assert!(S::monomial(b, &zero_q(), (1, 1, 0), BigRational::one()).is_ok());
    }

    #[test]
    fn bound_mismatch_is_hard_error() {
        let a = S::one(SeriesBounds::boxed(1, 1, 0), &zero_q());
        let b = S::one(SeriesBounds::boxed(1, 1, 1), &zero_q());
        assert!(matches!(a.try_add(&b), Err(SeriesError::BoundMismatch(..))));
        assert!(matches!(a.try_mul(&b), Err(SeriesError::BoundMismatch(..))));
        let c = S::one(SeriesBounds::capped(1, 1, 0, 1), &zero_q());
        assert!(matches!(a.try_add(&c), Err(SeriesError::BoundMismatch(..))));
    }

    #[test]
    fn reciprocal_multiplies_back_to_one() {
        let b = SeriesBounds::capped(3, 2, 2, 4);
        let mut a = S::one(b, &zero_q());
        a.set_coeff(1, 0, 0, big_rational(-1, 2)).unwrap();
        a.set_coeff(0, 1, 0, big_int_rational(3)).unwrap();
        a.set_coeff(0, 0, 2, big_rational(1, 5)).unwrap();
        a.set_coeff(1, 1, 0, big_rational(7, 3)).unwrap();
        let a = a.scale_rational(&big_rational(4, 9));
        let inv = a.reciprocal().unwrap();
        let prod = a.try_mul(&inv).unwrap();
        assert!(prod.ring_eq(&S::one(b, &zero_q())));
    }

    #[test]
    fn reciprocal_needs_invertible_constant() {
        let b = SeriesBounds::boxed(2, 0, 0);
        let a = mk(b, &[(1, 0, 0, 1, 1)]);
        assert_eq!(a.reciprocal().unwrap_err(), SeriesError::NonInvertibleConstant);
    }

    #[test]
    fn geometric_series_reciprocal() {
        // 1/(1 - u) = 1 + u + u^2 + u^3
        let b = SeriesBounds::boxed(3, 0, 0);
        let a = mk(b, &[(0, 0, 0, 1, 1), (1, 0, 0, -1, 1)]);
        let inv = a.reciprocal().unwrap();
        for i in 0..=3 {
            assert_eq!(inv.coeff(i, 0, 0), big_int_rational(1));
        }
    }

    #[test]
    fn exp_matches_hand_expansion() {
        // exp(u + v) through total degree 3
        let b = SeriesBounds::capped(3, 3, 0, 3);
        let x = mk(b, &[(1, 0, 0, 1, 1), (0, 1, 0, 1, 1)]);
        let e = x.exp().unwrap();
        assert_eq!(e.coeff(0, 0, 0), big_int_rational(1));
        assert_eq!(e.coeff(1, 0, 0), big_int_rational(1));
        assert_eq!(e.coeff(1, 1, 0), big_int_rational(1));
        assert_eq!(e.coeff(2, 0, 0), big_rational(1, 2));
        assert_eq!(e.coeff(3, 0, 0), big_rational(1, 6));
        assert_eq!(e.coeff(2, 1, 0), big_rational(1, 2));
    }

    #[test]
    fn exp_rejects_constant_term() {
        let b = SeriesBounds::boxed(1, 0, 0);
        let a = S::one(b, &zero_q());
        assert_eq!(a.exp().unwrap_err(), SeriesError::NonzeroConstantTerm);
    }

    #[test]
    fn exp_additivity_randomized() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed_0001);
        let b = SeriesBounds::capped(4, 3, 2, 4);
        for _ in 0..10 {
            let mut x = S::zero(b, &zero_q());
            let mut y = S::zero(b, &zero_q());
            for i in 0..=4usize {
                for j in 0..=3usize {
                    for l in 0..=2usize {
                        if i + j + l == 0 || !b.retains(i, j, l) {
                            continue;
                        }
                        x.set_coeff(i, j, l, big_rational(rng.gen_range(-6..=6), 3)).unwrap();
                        y.set_coeff(i, j, l, big_rational(rng.gen_range(-6..=6), 4)).unwrap();
                    }
                }
            }
            let lhs = x.try_add(&y).unwrap().exp().unwrap();
            let rhs = x.exp().unwrap().try_mul(&y.exp().unwrap()).unwrap();
            assert!(lhs.ring_eq(&rhs));
        }
    }

    #[test]
    fn term_rendering() {
        let b = SeriesBounds::boxed(2, 1, 2);
        let s = mk(b, &[(0, 0, 0, 1, 1), (2, 1, 0, -3, 4), (0, 0, 2, 1, 5)]);
        let terms = s.to_terms();
        assert_eq!(terms[0].monomial, "1");
        assert_eq!(terms[0].coeff, "1");
        assert_eq!(terms[1].monomial, "w^2");
        assert_eq!(terms[1].coeff, "1/5");
        assert_eq!(terms[2].monomial, "u^2 v");
        assert_eq!(terms[2].coeff, "-3/4");
    }
}
