//! Arbitrary-precision fixed-point reals carrying a running error bound.
//!
//! A value is mant * 10^(-scale) together with an f64 upper bound `err` on
//! the absolute distance to the quantity it represents. Every operation
//! rounds the mantissa back to the working scale and grows `err`
//! conservatively, so a result is always certified to lie within `err` of the
//! exact result of the same operations on the exact inputs.
//!
//! Scales are decimal digits after the point. Callers pick the working scale
//! (typically requested precision plus a guard) when creating values;
//! arithmetic keeps the larger scale of its operands.

use std::cmp::Ordering;
use std::fmt;

use num::integer::Integer;
use num::{BigInt, BigRational, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::ring::CoefficientRing;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RealError {
    #[error("division by a value indistinguishable from zero")]
    DivisionByNearZero,
    #[error("logarithm of a value not certified positive")]
    NonPositiveLog,
    #[error("argument outside supported domain: {0}")]
    Domain(String),
    #[error("malformed decimal literal {0:?}")]
    ParseDecimal(String),
}

#[derive(Debug, Clone)]
pub struct BigReal {
    mant: BigInt,
    scale: u32,
    err: f64,
}

fn pow10(n: u32) -> BigInt {
    BigInt::from(10u32).pow(n)
}

fn ulp(scale: u32) -> f64 {
    10f64.powi(-(scale as i32))
}

/// Nudges an f64 upward so it stays an upper bound after rounding; an exact
/// zero needs no guard and must stay exact for the series layer.
fn up(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * (1.0 + 1e-9) + 1e-320
    }
}

/// Round-to-nearest division, assuming b > 0.
fn round_div(a: &BigInt, b: &BigInt) -> (BigInt, bool) {
    let (q, r) = a.div_rem(b);
    if r.is_zero() {
        return (q, true);
    }
    let twice: BigInt = &r * 2;
    let q = match twice.magnitude().cmp(b.magnitude()) {
        Ordering::Less => q,
        _ => {
            if r.is_negative() {
                q - 1
            } else {
                q + 1
            }
        }
    };
    (q, false)
}

impl BigReal {
    pub fn zero(scale: u32) -> Self {
        BigReal { mant: BigInt::zero(), scale, err: 0.0 }
    }

    pub fn one(scale: u32) -> Self {
        Self::from_int(1, scale)
    }

    pub fn from_int(v: i64, scale: u32) -> Self {
        BigReal { mant: BigInt::from(v) * pow10(scale), scale, err: 0.0 }
    }

    pub fn from_bigint(v: &BigInt, scale: u32) -> Self {
        BigReal { mant: v * pow10(scale), scale, err: 0.0 }
    }

    /// Rounds an exact rational to the given scale; err is zero when the
    /// rational is exactly representable, else one ulp.
    pub fn from_ratio(q: &BigRational, scale: u32) -> Self {
        let num = q.numer() * pow10(scale);
        let (mant, exact) = round_div(&num, q.denom());
        BigReal { mant, scale, err: if exact { 0.0 } else { ulp(scale) } }
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn err(&self) -> f64 {
        self.err
    }

    pub fn with_err_added(mut self, extra: f64) -> Self {
        self.err = up(self.err + extra);
        self
    }

    /// The represented value as an exact rational (ignores err).
    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.mant.clone(), pow10(self.scale))
    }

    pub fn rescale(&self, new_scale: u32) -> Self {
        match new_scale.cmp(&self.scale) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => BigReal {
                mant: &self.mant * pow10(new_scale - self.scale),
                scale: new_scale,
                err: self.err,
            },
            Ordering::Less => {
                let (mant, exact) = round_div(&self.mant, &pow10(self.scale - new_scale));
                let err = if exact { self.err } else { up(self.err + ulp(new_scale)) };
                BigReal { mant, scale: new_scale, err }
            }
        }
    }

    /// Upper bound on |represented value|.
    pub fn mag_upper(&self) -> f64 {
        let m = self.mant.magnitude().to_f64().unwrap_or(f64::INFINITY);
        if m.is_nan() {
            return f64::INFINITY;
        }
        up(m) * up(ulp(self.scale))
    }

    /// Lower bound on |represented value|.
    pub fn mag_lower(&self) -> f64 {
        let m = self.mant.magnitude().to_f64().unwrap_or(f64::INFINITY);
        if !m.is_finite() {
            return f64::MAX;
        }
        (m * (1.0 - 1e-9)) * (ulp(self.scale) * (1.0 - 1e-9))
    }

    /// Upper bound on |true value|, error included.
    pub fn abs_upper(&self) -> f64 {
        up(self.mag_upper() + self.err)
    }

    /// Lower bound on |true value|, error included (clamped at zero).
    pub fn abs_lower(&self) -> f64 {
        (self.mag_lower() - self.err).max(0.0)
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_mant_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn approx_f64(&self) -> f64 {
        let m = self.mant.to_f64().unwrap_or(f64::NAN);
        m * ulp(self.scale)
    }

    pub fn neg(&self) -> Self {
        BigReal { mant: -&self.mant, scale: self.scale, err: self.err }
    }

    pub fn abs(&self) -> Self {
        BigReal { mant: self.mant.abs(), scale: self.scale, err: self.err }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let scale = self.scale.max(rhs.scale);
        let a = if self.scale == scale { self.mant.clone() } else { &self.mant * pow10(scale - self.scale) };
        let b = if rhs.scale == scale { rhs.mant.clone() } else { &rhs.mant * pow10(scale - rhs.scale) };
        BigReal { mant: a + b, scale, err: up(self.err + rhs.err) }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let scale = self.scale.max(rhs.scale);
        let drop = self.scale + rhs.scale - scale;
        let prod = &self.mant * &rhs.mant;
        let (mant, exact) = if drop == 0 { (prod, true) } else { round_div(&prod, &pow10(drop)) };
        let mut err = self.mag_upper() * rhs.err + rhs.mag_upper() * self.err + self.err * rhs.err;
        if !exact {
            err += ulp(scale);
        }
        BigReal { mant, scale, err: up(err) }
    }

    pub fn mul_int(&self, k: i64) -> Self {
        BigReal {
            mant: &self.mant * BigInt::from(k),
            scale: self.scale,
            err: up(self.err * (k.abs() as f64)),
        }
    }

    /// Division at the larger operand scale; fails when the divisor is not
    /// certified away from zero.
    pub fn div(&self, rhs: &Self) -> Result<Self, RealError> {
        let bl = rhs.mag_lower() - rhs.err;
        if bl <= 0.0 {
            return Err(RealError::DivisionByNearZero);
        }
        let scale = self.scale.max(rhs.scale);
        // value = (ma / mb) * 10^(sb - sa); mant_out = ma * 10^(scale + sb - sa) / mb
        let shift = scale + rhs.scale - self.scale;
        let num = &self.mant * pow10(shift);
        let mb = rhs.mant.clone();
        let (mant, exact) = if mb.is_negative() {
            let (q, e) = round_div(&-num, &-&mb);
            (q, e)
        } else {
            round_div(&num, &mb)
        };
        let au = up(self.mag_upper() + self.err);
        let mut err = self.err / bl + au * rhs.err / (bl * bl);
        if !exact {
            err += ulp(scale);
        }
        Ok(BigReal { mant, scale, err: up(err) })
    }

    pub fn div_int(&self, k: u64) -> Self {
        let kb = BigInt::from(k);
        let (mant, exact) = round_div(&self.mant, &kb);
        let mut err = self.err / (k as f64);
        if !exact {
            err += ulp(self.scale);
        }
        BigReal { mant, scale: self.scale, err: up(err) }
    }

    pub fn recip(&self) -> Result<Self, RealError> {
        Self::one(self.scale).div(self)
    }

    pub fn powi(&self, e: u32) -> Self {
        let mut acc = Self::one(self.scale);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Compares the represented values (errors ignored).
    pub fn cmp_value(&self, rhs: &Self) -> Ordering {
        let scale = self.scale.max(rhs.scale);
        let a = &self.mant * pow10(scale - self.scale);
        let b = &rhs.mant * pow10(scale - rhs.scale);
        a.cmp(&b)
    }

    /// |self - rhs| <= tol, error bounds included.
    pub fn within(&self, rhs: &Self, tol: f64) -> bool {
        self.sub(rhs).abs_upper() <= tol
    }

    /// exp with the running error bound threaded through.
    pub fn exp(&self) -> Result<Self, RealError> {
        if self.abs_upper() > 400.0 {
            return Err(RealError::Domain("exp argument larger than 400".into()));
        }
        let s = self.scale;
        let g = s + 14;
        // halve until |y| <= 1/2; dividing by 2 is exact in decimal (mant*5, scale+1)
        let mut k = 0u32;
        let mut xu = self.mag_upper() + self.err;
        while xu > 0.5 {
            xu /= 2.0;
            k += 1;
        }
        let y = BigReal {
            mant: &self.mant * BigInt::from(5u32).pow(k),
            scale: s + k,
            err: up(self.err * 2f64.powi(-(k as i32))),
        }
        .rescale(g + k);
        let mut sum = BigReal::one(g + k);
        let mut term = BigReal::one(g + k);
        let stop = ulp(g + 2);
        for j in 1..500u64 {
            term = term.mul(&y).div_int(j);
            sum = sum.add(&term);
            if term.abs_upper() < stop {
                // |y| <= 1/2 makes the tail at most the last term
                sum = sum.with_err_added(term.abs_upper());
                break;
            }
        }
        let mut out = sum;
        for _ in 0..k {
            out = out.mul(&out);
        }
        Ok(out.rescale(s))
    }

    /// Natural log; the argument must be certified positive by its error
    /// bound.
    pub fn ln(&self) -> Result<Self, RealError> {
        if self.is_negative() || self.mag_lower() - self.err <= 0.0 {
            return Err(RealError::NonPositiveLog);
        }
        let s = self.scale;
        let g = s + 14;
        let v = self.approx_f64();
        let q = v.log2().round() as i32;
        // t = self / 2^q lands in roughly [0.7, 1.42]
        let t = if q >= 0 {
            BigReal {
                mant: &self.mant * BigInt::from(5u32).pow(q as u32),
                scale: s + q as u32,
                err: up(self.err * 2f64.powi(-q)),
            }
        } else {
            BigReal {
                mant: &self.mant * BigInt::from(2u32).pow((-q) as u32),
                scale: s,
                err: up(self.err * 2f64.powi(-q)),
            }
        }
        .rescale(g);
        let one = BigReal::one(g);
        let u = t.sub(&one).div(&t.add(&one))?;
        let u2 = u.mul(&u);
        let mut term = u.clone();
        let mut sum = u.clone();
        let stop = ulp(g + 2);
        for j in (3..999u64).step_by(2) {
            term = term.mul(&u2);
            sum = sum.add(&term.div_int(j));
            if term.abs_upper() < stop {
                // geometric tail: u^2 <= 0.04 keeps it below half the last term
                sum = sum.with_err_added(term.abs_upper());
                break;
            }
        }
        let mut out = sum.mul_int(2);
        if q != 0 {
            out = out.add(&constants::log2(g).mul_int(q as i64));
        }
        Ok(out.rescale(s))
    }

    /// self^e = exp(e ln self); self must be certified positive.
    pub fn pow_real(&self, e: &Self) -> Result<Self, RealError> {
        let scale = self.scale.max(e.scale);
        self.rescale(scale).ln()?.mul(e).exp()
    }

    /// Decimal rendering with `digits` digits after the point.
    pub fn to_string_digits(&self, digits: u32) -> String {
        let r = self.rescale(digits);
        let neg = r.mant.is_negative();
        let digits_str = r.mant.magnitude().to_string();
        let digits_n = digits as usize;
        let padded = if digits_str.len() <= digits_n {
            format!("{}{}", "0".repeat(digits_n + 1 - digits_str.len()), digits_str)
        } else {
            digits_str
        };
        let split = padded.len() - digits_n;
        let (int_part, frac_part) = padded.split_at(split);
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        out.push_str(int_part);
        if digits_n > 0 {
            out.push('.');
            out.push_str(frac_part);
        }
        out
    }

    /// Parses a plain decimal literal; the scale is the number of fractional
    /// digits in the text.
    pub fn from_decimal_str(text: &str) -> Result<Self, RealError> {
        let bad = || RealError::ParseDecimal(text.to_owned());
        let t = text.trim();
        let (neg, rest) = match t.strip_prefix('-') {
            Some(r) => (true, r),
            None => (false, t.strip_prefix('+').unwrap_or(t)),
        };
        if rest.is_empty() {
            return Err(bad());
        }
        let (int_part, frac_part) = match rest.split_once('.') {
            Some((i, f)) => (i, f),
            None => (rest, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        if !int_part.chars().all(|c| c.is_ascii_digit())
            || !frac_part.chars().all(|c| c.is_ascii_digit())
        {
            return Err(bad());
        }
        let mut digits = String::with_capacity(int_part.len() + frac_part.len());
        digits.push_str(int_part);
        digits.push_str(frac_part);
        if digits.is_empty() {
            return Err(bad());
        }
        let mut mant: BigInt = digits.parse().map_err(|_| bad())?;
        if neg {
            mant = -mant;
        }
        Ok(BigReal { mant, scale: frac_part.len() as u32, err: 0.0 })
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_digits(self.scale))
    }
}

impl CoefficientRing for BigReal {
    fn zero_like(&self) -> Self {
        BigReal::zero(self.scale)
    }
    fn one_like(&self) -> Self {
        BigReal::one(self.scale)
    }
    fn ring_add(&self, rhs: &Self) -> Self {
        self.add(rhs)
    }
    fn ring_neg(&self) -> Self {
        self.neg()
    }
    fn ring_mul(&self, rhs: &Self) -> Self {
        self.mul(rhs)
    }
    fn ring_inv(&self) -> Option<Self> {
        self.recip().ok()
    }
    fn embed_rational(&self, q: &BigRational) -> Self {
        BigReal::from_ratio(q, self.scale)
    }
    /// Exact zero only: a value 0 +- err may still be nonzero, and skipping
    /// it in products would drop its error contribution.
    fn ring_is_zero(&self) -> bool {
        self.mant.is_zero() && self.err == 0.0
    }
    /// Equality up to the tracked error bounds plus two ulps.
    fn ring_eq(&self, rhs: &Self) -> bool {
        let d = self.sub(rhs);
        d.mag_upper() <= up(d.err + 2.0 * ulp(d.scale))
    }
    fn coeff_string(&self) -> String {
        self.to_string_digits(self.scale)
    }
}

/// Certified constants. Each primary series has an independent cross-check
/// used by the constants verification check.
pub mod constants {
    use super::*;

    /// Alternating Gregory series for atan(1/x), summed in scaled integers.
    /// Returns the scaled value and an error bound in ulps of the scale.
    fn atan_recip_scaled(x: u64, scale: u32) -> (BigInt, f64) {
        let xx = BigInt::from(x) * BigInt::from(x);
        let mut d = pow10(scale) / BigInt::from(x);
        let mut sum = BigInt::zero();
        let mut j = 0u64;
        let mut terms = 0u64;
        while !d.is_zero() {
            let t = &d / BigInt::from(2 * j + 1);
            if j.is_multiple_of(2) {
                sum += &t;
            } else {
                sum -= &t;
            }
            d = &d / &xx;
            j += 1;
            terms += 1;
        }
        // floor errors compound to < 3 units per term; alternating tail < 1
        (sum, 3.0 * terms as f64 + 2.0)
    }

    /// atanh(1/x) = sum 1/((2j+1) x^(2j+1)) for x >= 2, scaled integers.
    fn atanh_recip_scaled(x: u64, scale: u32) -> (BigInt, f64) {
        let xx = BigInt::from(x) * BigInt::from(x);
        let mut d = pow10(scale) / BigInt::from(x);
        let mut sum = BigInt::zero();
        let mut j = 0u64;
        let mut terms = 0u64;
        while !d.is_zero() {
            sum += &d / BigInt::from(2 * j + 1);
            d = &d / &xx;
            j += 1;
            terms += 1;
        }
        (sum, 3.0 * terms as f64 + 2.0)
    }

    fn assemble(scale: u32, guarded: BigInt, err_units: f64, guard: u32) -> BigReal {
        BigReal {
            mant: guarded,
            scale: scale + guard,
            err: up(err_units * ulp(scale + guard)),
        }
        .rescale(scale)
    }

    /// pi from Machin's formula 16 atan(1/5) - 4 atan(1/239).
    pub fn pi(scale: u32) -> BigReal {
        let g = 12;
        let (a5, e5) = atan_recip_scaled(5, scale + g);
        let (a239, e239) = atan_recip_scaled(239, scale + g);
        assemble(scale, a5 * 16 - a239 * 4, 16.0 * e5 + 4.0 * e239, g)
    }

    /// Independent cross-check: pi = 4 (atan(1/2) + atan(1/3)).
    pub fn pi_crosscheck(scale: u32) -> BigReal {
        let g = 12;
        let (a2, e2) = atan_recip_scaled(2, scale + g);
        let (a3, e3) = atan_recip_scaled(3, scale + g);
        assemble(scale, (a2 + a3) * 4, 4.0 * (e2 + e3), g)
    }

    /// log 2 = 2 atanh(1/3).
    pub fn log2(scale: u32) -> BigReal {
        let g = 12;
        let (a3, e3) = atanh_recip_scaled(3, scale + g);
        assemble(scale, a3 * 2, 2.0 * e3 + 1.0, g)
    }

    /// Independent cross-check: log 2 = sum_j 1/(j 2^j).
    pub fn log2_crosscheck(scale: u32) -> BigReal {
        let g = 12;
        let s = scale + g;
        let mut d = pow10(s);
        let mut sum = BigInt::zero();
        let mut j = 0u64;
        let mut terms = 0u64;
        while !d.is_zero() {
            d = &d / BigInt::from(2u32);
            j += 1;
            if d.is_zero() {
                break;
            }
            sum += &d / BigInt::from(j);
            terms += 1;
        }
        assemble(scale, sum, 3.0 * terms as f64 + 2.0, g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::big_rational;

    const PI60: &str = "3.141592653589793238462643383279502884197169399375105820974945";
    const LOG2_60: &str = "0.693147180559945309417232121458176568075500134360255254120680";

    fn assert_close_str(v: &BigReal, want: &str, digits: u32) {
        let w = BigReal::from_decimal_str(want).unwrap();
        let d = v.sub(&w).abs_upper();
        assert!(
            d <= up(v.err() + 2.0 * ulp(digits)),
            "value {} differs from {} by {:e} (err bound {:e})",
            v.to_string_digits(digits),
            want,
            d,
            v.err()
        );
    }

    #[test]
    fn ratio_roundtrip_and_rescale() {
        let q = big_rational(-22, 7);
        let r = BigReal::from_ratio(&q, 40);
        assert!(r.err() > 0.0 && r.err() <= 2.0 * ulp(40));
        let exact = BigReal::from_ratio(&big_rational(3, 8), 40);
        assert_eq!(exact.err(), 0.0);
        assert_eq!(exact.to_string_digits(5), "0.37500");
        let down = r.rescale(10);
        assert_eq!(down.to_string_digits(10), "-3.1428571429");
    }

    #[test]
    fn field_ops_track_errors() {
        let a = BigReal::from_ratio(&big_rational(1, 3), 30);
        let b = BigReal::from_ratio(&big_rational(1, 7), 30);
        let s = a.add(&b); // 10/21
        assert_close_str(&s, "0.476190476190476190476190476190", 28);
        let p = a.mul(&b); // 1/21
        assert_close_str(&p, "0.047619047619047619047619047619", 28);
        let d = a.div(&b).unwrap(); // 7/3
        assert_close_str(&d, "2.333333333333333333333333333333", 28);
        assert!(s.err() < 1e-28 && p.err() < 1e-28 && d.err() < 1e-28);
    }

    #[test]
    fn division_by_near_zero_is_rejected(){
        let a = BigReal::one(20);
        let tiny = BigReal::zero(20).with_err_added(1e-10);
        assert_eq!(a.div(&tiny).unwrap_err(), RealError::DivisionByNearZero);
    }

    #[test]
    fn powi_matches_rational_power() {
        let a = BigReal::from_ratio(&big_rational(7, 5), 35);
        let p = a.powi(9);
        let want = BigReal::from_ratio(&big_rational(7, 5).pow(9), 35);
        assert!(p.within(&want, 1e-30));
        assert_eq!(a.powi(0).to_string_digits(3), "1.000");
    }

    #[test]
    fn pi_and_log2_against_frozen_digits() {
        let pi = constants::pi(50);
        assert!(pi.err() <= 1e-49, "pi err {:e}", pi.err());
        assert_close_str(&pi, PI60, 50);
        let l2 = constants::log2(50);
        assert!(l2.err() <= 1e-49);
        assert_close_str(&l2, LOG2_60, 50);
    }

    #[test]
    fn independent_constant_series_agree() {
        let a = constants::pi(45);
        let b = constants::pi_crosscheck(45);
        assert!(a.within(&b, 1e-44));
        let c = constants::log2(45);
        let d = constants::log2_crosscheck(45);
        assert!(c.within(&d, 1e-44));
    }

    #[test]
    fn exp_and_ln_against_frozen_digits() {
        let third = BigReal::from_ratio(&big_rational(1, 3), 45);
        let e = third.exp().unwrap();
        assert_close_str(&e, "1.395612425086089528628125319602586837597906515", 43);
        assert!(e.err() < 1e-40);

        let x = BigReal::from_ratio(&big_rational(7, 5), 45);
        let l = x.ln().unwrap();
        assert_close_str(&l, "0.336472236621212930504593410216992090111483375", 43);
        assert!(l.err() < 1e-40);

        // round trip
        let back = l.exp().unwrap();
        assert!(back.within(&x, 1e-38));
    }

    #[test]
    fn exp_ln_edge_cases() {
        assert_eq!(
            BigReal::from_int(-3, 20).ln().unwrap_err(),
            RealError::NonPositiveLog
        );
        assert_eq!(
            BigReal::zero(20).ln().unwrap_err(),
            RealError::NonPositiveLog
        );
        let big = BigReal::from_int(500, 10);
        assert!(matches!(big.exp(), Err(RealError::Domain(_))));
        // exp(0) = 1 exactly within error
        let z = BigReal::zero(30).exp().unwrap();
        assert!(z.within(&BigReal::one(30), 1e-28));
        // exp of a negative value
        let m = BigReal::from_int(-2, 40).exp().unwrap();
        assert_close_str(&m, "0.1353352832366126918939994949724844034076", 38);
    }

    #[test]
    fn pow_real_consistency() {
        // 2^10 = 1024 via exp/ln
        let two = BigReal::from_int(2, 40);
        let ten = BigReal::from_int(10, 40);
        let p = two.pow_real(&ten).unwrap();
        assert!(p.within(&BigReal::from_int(1024, 40), 1e-30));
        // y^(1/2) squared returns y
        let y = BigReal::from_int(7, 40);
        let half = BigReal::from_ratio(&big_rational(1, 2), 40);
        let r = y.pow_real(&half).unwrap();
        assert!(r.mul(&r).within(&y, 1e-30));
    }

    #[test]
    fn sum_with_alternating_signs_keeps_bound() {
        // catastrophic cancellation must widen nothing: errors add linearly
        let a = BigReal::from_ratio(&big_rational(1, 3), 30);
        let d = a.sub(&a);
        assert!(d.is_mant_zero());
        assert!(d.err() <= 3.0 * ulp(30));
    }

    #[test]
    fn parse_and_render() {
        let v = BigReal::from_decimal_str("-12.0450").unwrap();
        assert_eq!(v.scale(), 4);
        assert_eq!(v.to_string_digits(4), "-12.0450");
        assert_eq!(v.to_string_digits(2), "-12.05");
        assert_eq!(v.to_string_digits(0), "-12");
        let w = BigReal::from_decimal_str("0.5").unwrap();
        assert_eq!(w.to_string_digits(3), "0.500");
        assert!(BigReal::from_decimal_str("").is_err());
        assert!(BigReal::from_decimal_str("1.2.3").is_err());
        assert!(BigReal::from_decimal_str("12a").is_err());
        assert!(BigReal::from_decimal_str(".25").is_ok());
        assert!(BigReal::from_decimal_str("3.").is_ok());
    }

    #[test]
    fn ring_impl_details() {
        let a = BigReal::from_ratio(&big_rational(2, 3), 25);
        assert!(a.embed_rational(&big_rational(5, 4)).within(&BigReal::from_ratio(&big_rational(5, 4), 25), 1e-20));
        let near_zero = BigReal::zero(25).with_err_added(1e-9);
        assert!(!near_zero.ring_is_zero());
        assert!(BigReal::zero(25).ring_is_zero());
        assert!(near_zero.ring_inv().is_none());
        let b = a.add(&BigReal::zero(25).with_err_added(1e-20));
        assert!(a.ring_eq(&b));
    }

    #[test]
    fn value_comparisons() {
        let a = BigReal::from_ratio(&big_rational(1, 3), 20);
        let b = BigReal::from_ratio(&big_rational(1, 3), 35);
        assert_eq!(a.cmp_value(&b), Ordering::Less); // 0.33..3 < 0.33..33
        assert_eq!(a.cmp_value(&a.clone()), Ordering::Equal);
        assert!(BigReal::from_int(-1, 5).is_negative());
    }
}
