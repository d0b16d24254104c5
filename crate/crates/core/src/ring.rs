//! Coefficient-ring abstraction shared by the series kernel.
//!
//! The generating-function layer runs the same series algebra over several
//! coefficient rings: exact rationals, polynomials in the interpolation
//! parameter r, error-carrying reals, and truncated series over any of those.
//! Operations are value-based (`zero_like` instead of a static zero) because
//! some rings carry runtime shape, such as series bounds or a working scale,
//! that a static constructor cannot know.

use std::fmt;

use num::{BigRational, One, Signed, Zero};

pub trait CoefficientRing: Clone + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn ring_add(&self, rhs: &Self) -> Self;
    fn ring_neg(&self) -> Self;
    fn ring_mul(&self, rhs: &Self) -> Self;
    /// Multiplicative inverse, when `self` has one in the ring.
    fn ring_inv(&self) -> Option<Self>;
    /// Embeds an exact rational scalar, shaped like `self`.
    fn embed_rational(&self, q: &BigRational) -> Self;
    fn ring_is_zero(&self) -> bool;
    /// Semantic equality: exact for exact rings, within error bounds for
    /// approximate ones.
    fn ring_eq(&self, rhs: &Self) -> bool;
    /// Rendering used by series printers and JSON emitters.
    fn coeff_string(&self) -> String;

    fn ring_sub(&self, rhs: &Self) -> Self {
        self.ring_add(&rhs.ring_neg())
    }
}

impl CoefficientRing for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn ring_add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn ring_neg(&self) -> Self {
        -self
    }
    fn ring_mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn ring_inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
    fn embed_rational(&self, q: &BigRational) -> Self {
        q.clone()
    }
    fn ring_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn ring_eq(&self, rhs: &Self) -> bool {
        self == rhs
    }
    fn coeff_string(&self) -> String {
        rational_string(self)
    }
}

pub fn rational_string(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Dense polynomial in the interpolation parameter r.
///
/// Canonical form: at least one stored coefficient (so a ring prototype is
/// always available) and no trailing zero coefficient unless the polynomial
/// is zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RPolynomial<C> {
    coeffs: Vec<C>,
}

impl<C: CoefficientRing> RPolynomial<C> {
    pub fn constant(c: C) -> Self {
        RPolynomial { coeffs: vec![c] }
    }

    /// Coefficients in ascending degree; must be nonempty.
    pub fn from_coeffs(coeffs: Vec<C>) -> Self {
        assert!(!coeffs.is_empty(), "RPolynomial needs at least one coefficient");
        let mut p = RPolynomial { coeffs };
        p.trim();
        p
    }

    /// c * r^degree.
    pub fn monomial(c: C, degree: usize) -> Self {
        let mut coeffs = Vec::with_capacity(degree + 1);
        for _ in 0..degree {
            coeffs.push(c.zero_like());
        }
        coeffs.push(c);
        let mut p = RPolynomial { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.len() > 1 && self.coeffs.last().unwrap().ring_is_zero() {
            self.coeffs.pop();
        }
    }

    fn proto(&self) -> &C {
        &self.coeffs[0]
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    /// Coefficient of r^e (zero beyond the stored degree).
    pub fn coeff(&self, e: usize) -> C {
        self.coeffs
            .get(e)
            .cloned()
            .unwrap_or_else(|| self.proto().zero_like())
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.ring_is_zero() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    /// Horner evaluation at a point of the coefficient ring.
    pub fn eval(&self, x: &C) -> C {
        let mut acc = self.coeffs.last().expect("nonempty").clone();
        for c in self.coeffs.iter().rev().skip(1) {
            acc = acc.ring_mul(x).ring_add(c);
        }
        acc
    }
}

impl RPolynomial<BigRational> {
    pub fn from_rationals(coeffs: Vec<BigRational>) -> Self {
        Self::from_coeffs(coeffs)
    }

    pub fn rational_constant(q: BigRational) -> Self {
        Self::constant(q)
    }

    pub fn zero() -> Self {
        Self::constant(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }
}

impl<C: CoefficientRing> CoefficientRing for RPolynomial<C> {
    fn zero_like(&self) -> Self {
        RPolynomial::constant(self.proto().zero_like())
    }

    fn one_like(&self) -> Self {
        RPolynomial::constant(self.proto().one_like())
    }

    fn ring_add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for e in 0..n {
            coeffs.push(self.coeff(e).ring_add(&rhs.coeff(e)));
        }
        RPolynomial::from_coeffs(coeffs)
    }

    fn ring_neg(&self) -> Self {
        RPolynomial {
            coeffs: self.coeffs.iter().map(|c| c.ring_neg()).collect(),
        }
    }

    fn ring_mul(&self, rhs: &Self) -> Self {
        let zero = self.proto().zero_like();
        let n = self.coeffs.len() + rhs.coeffs.len() - 1;
        let mut coeffs = vec![zero; n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.ring_is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.ring_is_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].ring_add(&a.ring_mul(b));
            }
        }
        RPolynomial::from_coeffs(coeffs)
    }

    fn ring_inv(&self) -> Option<Self> {
        // Only degree-0 polynomials with invertible scalar are units.
        match self.degree() {
            Some(0) => self.coeffs[0].ring_inv().map(RPolynomial::constant),
            _ => None,
        }
    }

    fn embed_rational(&self, q: &BigRational) -> Self {
        RPolynomial::constant(self.proto().embed_rational(q))
    }

    fn ring_is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.ring_is_zero())
    }

    fn ring_eq(&self, rhs: &Self) -> bool {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        (0..n).all(|e| self.coeff(e).ring_eq(&rhs.coeff(e)))
    }

    fn coeff_string(&self) -> String {
        let mut out = String::new();
        for (e, c) in self.coeffs.iter().enumerate() {
            if c.ring_is_zero() && self.coeffs.len() > 1 {
                continue;
            }
            let mut piece = c.coeff_string();
            let negative = piece.starts_with('-');
            if negative {
                piece.remove(0);
            }
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            out.push_str(&piece);
            match e {
                0 => {}
                1 => out.push_str("*r"),
                _ => out.push_str(&format!("*r^{e}")),
            }
        }
        out
    }
}

/// Exact rational polynomial in r; the workhorse coefficient of the exact
/// generating-function layer.
pub type RPoly = RPolynomial<BigRational>;

pub fn big_rational(num: i64, den: i64) -> BigRational {
    BigRational::new(num.into(), den.into())
}

pub fn big_int_rational(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// |q| as an f64 upper bound (used when folding exact values into error
/// budgets). Conservative: inflates by 1 part in 1e9.
pub fn rational_abs_upper(q: &BigRational) -> f64 {
    use num::ToPrimitive;
    let v = q.abs().to_f64().unwrap_or(f64::INFINITY);
    if v.is_nan() {
        return f64::INFINITY;
    }
    v * (1.0 + 1e-9) + 1e-300
}
