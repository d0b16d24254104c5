//! Certified tail expansions for nested progression sums.
//!
//! A nested tail Σ_{m_1 > … > m_i > M} Π m_j^{-k_j} (every chain element past
//! the cutoff) is represented as a finite power series in 1/z — z being the
//! first progression point past M — plus one explicit remainder monomial
//! bounding everything discarded. Three primitives build every tail:
//!
//! * `ptw(s)` — Euler–Maclaurin expansion of Σ_{m ≥ z} m^{-s} over the
//!   progression, remainder bounded by the first omitted Bernoulli term
//!   (the summand is completely monotone).
//! * `shift` — re-expands F(z+N) in powers of 1/z (binomial series; with
//!   z ≥ 2N(cap+1) the series alternates with decreasing magnitudes, so the
//!   truncation error is bounded by the first omitted term).
//! * `compose(F, s)` — Σ_{m ≥ z} m^{-s}·F(m), mapping each retained power
//!   through `ptw` and pushing F's remainder through the crude integral bound.
//!
//! All coefficients are exact rationals; rounding enters only at the final
//! evaluation, so the reported error is the remainder monomial plus one ulp.

use std::collections::BTreeMap;

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::bernoulli::{bernoulli, binomial};
use crate::bigreal::BigReal;
use crate::ring::rational_abs_upper;

/// F(z) = Σ_e terms[e]·z^{-e} ± rem_coeff·z^{-rem_exp}, valid for progression
/// points z ≥ x_min of the owning builder.
pub(crate) struct TailExpansion {
    terms: BTreeMap<u32, BigRational>,
    rem_coeff: BigRational,
    rem_exp: u32,
}

impl TailExpansion {
    fn empty(rem_exp: u32) -> Self {
        TailExpansion {
            terms: BTreeMap::new(),
            rem_coeff: BigRational::zero(),
            rem_exp,
        }
    }
}

pub(crate) struct TailBuilder {
    step: u64,
    e_cap: u32,
    x_min: u64,
}

impl TailBuilder {
    /// `step` is the progression modulus, `e_cap` the largest retained power
    /// of 1/z, `x_min` the smallest point expansions will be evaluated at.
    /// The alternating-series argument behind `shift` needs
    /// x_min ≥ 2·step·(e_cap+1); callers guarantee it by construction.
    pub(crate) fn new(step: u64, e_cap: u32, x_min: u64) -> Self {
        assert!(
            x_min >= 2 * step * (e_cap as u64 + 1),
            "evaluation point too small for the requested expansion order"
        );
        TailBuilder { step, e_cap, x_min }
    }

    /// Folds a |c|·z^{-e} bound into the running remainder of `out`,
    /// weakening the exponent to out.rem_exp via powers of 1/x_min.
    fn fold_remainder(&self, out: &mut TailExpansion, coeff: &BigRational, exp: u32) {
        if coeff.is_zero() {
            return;
        }
        let mut c = coeff.abs();
        if exp > out.rem_exp {
            c /= BigRational::from_integer(BigInt::from(self.x_min).pow(exp - out.rem_exp));
        } else if exp < out.rem_exp {
            // Strengthen the stored remainder exponent down to `exp` first.
            let shift = BigRational::from_integer(BigInt::from(self.x_min).pow(out.rem_exp - exp));
            out.rem_coeff = &out.rem_coeff / shift;
            out.rem_exp = exp;
        }
        out.rem_coeff += c;
    }

    fn add_term(&self, out: &mut TailExpansion, coeff: BigRational, exp: u32) {
        if coeff.is_zero() {
            return;
        }
        if exp <= self.e_cap {
            *out.terms.entry(exp).or_insert_with(BigRational::zero) += coeff;
        } else {
            self.fold_remainder(out, &coeff, exp);
        }
    }

    /// Euler–Maclaurin expansion of Σ_{m ≥ z, m in the progression} m^{-s}.
    pub(crate) fn ptw(&self, s: u32) -> TailExpansion {
        assert!(s >= 2, "progression tails need exponent at least 2");
        let mut out = TailExpansion::empty(self.e_cap + 1);
        let n = BigInt::from(self.step);
        // Leading integral and boundary terms.
        self.add_term(
            &mut out,
            BigRational::new(BigInt::one(), &n * BigInt::from(s as u64 - 1)),
            s - 1,
        );
        self.add_term(&mut out, BigRational::new(BigInt::one(), BigInt::from(2)), s);
        // Bernoulli corrections B_{2i}/(2i)!·N^{2i-1}·(s)_{2i-1}·z^{-(s+2i-1)}
        // until the exponent passes e_cap; the remainder of the completely
        // monotone summand is bounded by the first term not added.
        let mut i = 1usize;
        let mut fact = BigInt::from(2);
        let mut rising = BigInt::from(s);
        let mut n_pow = n.clone();
        let n2 = &n * &n;
        loop {
            let exp = s + 2 * i as u32 - 1;
            let coeff = bernoulli(2 * i) * BigRational::new(&rising * &n_pow, fact.clone());
            if exp > self.e_cap {
                self.fold_remainder(&mut out, &coeff, exp);
                break;
            }
            self.add_term(&mut out, coeff, exp);
            i += 1;
            let two_i = 2 * i as u64;
            fact *= BigInt::from((two_i - 1) * two_i);
            rising *= BigInt::from((s as u64 + two_i - 3) * (s as u64 + two_i - 2));
            n_pow *= &n2;
        }
        out
    }

    /// Coefficient and exponent of the crude bound
    /// Σ_{m ≥ z} m^{-s} ≤ (1/(N(s-1)) + 1/x_min)·z^{-(s-1)}.
    fn ptw_bound(&self, s: u32) -> (BigRational, u32) {
        assert!(s >= 2);
        let c = BigRational::new(BigInt::one(), BigInt::from(self.step * (s as u64 - 1)))
            + BigRational::new(BigInt::one(), BigInt::from(self.x_min));
        (c, s - 1)
    }

    /// F(z+N) re-expanded in powers of 1/z.
    pub(crate) fn shift(&self, f: &TailExpansion) -> TailExpansion {
        let mut out = TailExpansion::empty(f.rem_exp);
        // (z+N)^{-rem_exp} ≤ z^{-rem_exp}, so the remainder carries over.
        out.rem_coeff = f.rem_coeff.clone();
        let n = BigInt::from(self.step);
        for (&e, c) in &f.terms {
            // (z+N)^{-e} = Σ_t (-1)^t C(e-1+t, t) N^t z^{-(e+t)}; magnitudes
            // decrease because x_min ≥ 2N(e_cap+1), so the first omitted
            // term bounds the truncation (doubled for safety).
            let mut t = 0u32;
            let mut n_pow = BigInt::one();
            loop {
                let exp = e + t;
                let binom = binomial((e - 1 + t) as usize, t as usize);
                let mut coeff = c * BigRational::from_integer(&binom * &n_pow);
                if t % 2 == 1 {
                    coeff = -coeff;
                }
                if exp > self.e_cap {
                    self.fold_remainder(&mut out, &(coeff * BigInt::from(2)), exp);
                    break;
                }
                self.add_term(&mut out, coeff, exp);
                t += 1;
                n_pow *= &n;
            }
        }
        out
    }

    /// G(z) = Σ_{m ≥ z, m in the progression} m^{-s}·F(m).
    pub(crate) fn compose(&self, f: &TailExpansion, s: u32) -> TailExpansion {
        let mut out = TailExpansion::empty(f.rem_exp + s - 1);
        for (&e, c) in &f.terms {
            let piece = self.ptw(s + e);
            for (&pe, pc) in &piece.terms {
                self.add_term(&mut out, c * pc, pe);
            }
            self.fold_remainder(&mut out, &(c.abs() * &piece.rem_coeff), piece.rem_exp);
        }
        if !f.rem_coeff.is_zero() {
            let (bc, be) = self.ptw_bound(s + f.rem_exp);
            self.fold_remainder(&mut out, &(&f.rem_coeff * bc), be);
        }
        out
    }

    /// Numeric value at a progression point z ≥ x_min; the remainder monomial
    /// lands in the error bound.
    pub(crate) fn eval(&self, f: &TailExpansion, z: u64, scale: u32) -> BigReal {
        debug_assert!(z >= self.x_min);
        let zb = BigInt::from(z);
        let mut acc = BigRational::zero();
        let mut e_prev = 0u32;
        let mut z_pow = BigInt::one();
        for (&e, c) in &f.terms {
            z_pow *= zb.pow(e - e_prev);
            e_prev = e;
            acc += c / BigRational::from_integer(z_pow.clone());
        }
        let rem = &f.rem_coeff / BigRational::from_integer(zb.pow(f.rem_exp));
        BigReal::from_ratio(&acc, scale).with_err_added(rational_abs_upper(&rem))
    }
}
