//! Numeric sides of the closed-form identities: the exponential generating
//! function for maximal-height interpolated values, the generating function
//! for repeated-2 indices, and the two sides of the weighted sum identity
//! relating level (2a, a) values of fixed weight to log-2 polynomials in
//! depth-one values.

use std::collections::HashMap;

use num::{BigInt, BigRational, One, Zero};

use crate::bigreal::BigReal;
use crate::index::{enumerate_indices, Index};
use crate::level::Level;
use crate::numeric::cache::ValueCache;
use crate::numeric::depth1::t_depth1;
use crate::numeric::nested::{t_interp_eval, t_interp_eval_cached};
use crate::numeric::NumericError;
use crate::series::{newton_power_sums, RootPair, SeriesBounds, UvwSeries};

/// Exponential closed form for the maximal-height generating function:
///
///   1 + Σ_{k≥2n, n≥1} X_0^r(k, n, n) u^{k-2n} w^{2n}
///     = exp( Σ_{n≥2} (t(n)/n) (α_1^n + α_2^n - γ_1^n - γ_2^n) )
///
/// with α_1+α_2 = γ_1+γ_2 = u, α_1α_2 = -r w², γ_1γ_2 = (1-r) w². Returned as
/// a series in u and w (v unused) with per-variable bounds `d_u`, `d_w` and
/// total degree capped at d_u + d_w; the n-sum is finite because the power
/// sums of both root pairs start at total degree n.
pub fn maxheight_rhs(
    level: &Level,
    r: &BigRational,
    d_u: usize,
    d_w: usize,
    p: u32,
) -> Result<UvwSeries<BigReal>, NumericError> {
    if d_u + d_w > 16 {
        return Err(NumericError::InvalidParameter(format!(
            "series bounds {d_u}+{d_w} exceed the supported total degree 16"
        )));
    }
    let scale = p + 10;
    let proto = BigReal::zero(scale);
    let bounds = SeriesBounds::capped(d_u, 0, d_w, d_u + d_w);

    let u_term = if bounds.retains(1, 0, 0) {
        UvwSeries::monomial(bounds, &proto, (1, 0, 0), BigReal::one(scale))?
    } else {
        UvwSeries::zero(bounds, &proto)
    };
    let w2 = |c: BigRational| -> Result<UvwSeries<BigReal>, NumericError> {
        if bounds.retains(0, 0, 2) {
            Ok(UvwSeries::monomial(
                bounds,
                &proto,
                (0, 0, 2),
                BigReal::from_ratio(&c, scale),
            )?)
        } else {
            Ok(UvwSeries::zero(bounds, &proto))
        }
    };
    let alpha = RootPair {
        e1: u_term.clone(),
        e2: w2(-r.clone())?,
    };
    let gamma = RootPair {
        e1: u_term,
        e2: w2(BigRational::one() - r)?,
    };

    let n_max = d_u + d_w;
    let p_alpha = newton_power_sums(&alpha, n_max);
    let p_gamma = newton_power_sums(&gamma, n_max);

    let mut arg = UvwSeries::zero(bounds, &proto);
    for n in 2..=n_max {
        let diff = p_alpha[n - 1].try_sub(&p_gamma[n - 1])?;
        let t_over_n = t_depth1(level, n as u32, p + 5)?.div_int(n as u64);
        arg = arg.try_add(&diff.scale(&t_over_n))?;
    }
    Ok(arg.exp()?)
}

/// Coefficients c_0..c_d of the repeated-2 generating function
///
///   1 + Σ_{n≥1} t^r({2}^n) w^n = exp( Σ_{n≥1} (r^n - (r-1)^n) (t(2n)/n) w^n ),
///
/// so c_n = t^r(2, …, 2) with n twos. The w-exponent follows the printed
/// identity (w^n, a relabeling of the w^{2n} used by the maximal-height
/// form). Uses the standard exp recursion m·c_m = Σ t·a_t·c_{m-t}.
pub fn twos_gf_rhs(
    level: &Level,
    r: &BigRational,
    d: usize,
    p: u32,
) -> Result<Vec<BigReal>, NumericError> {
    if d > 16 {
        return Err(NumericError::InvalidParameter(format!(
            "series bound {d} exceeds the supported degree 16"
        )));
    }
    let scale = p + 10;
    // s_t = t·a_t = (r^t - (r-1)^t)·t(2t); the exact rational factor keeps
    // the r-dependence out of the error budget.
    let r_minus_1 = r - BigRational::one();
    let mut s = Vec::with_capacity(d + 1);
    s.push(BigReal::zero(scale)); // unused slot so s[t] lines up with t
    for t in 1..=d {
        let q = r.pow(t as i32) - r_minus_1.pow(t as i32);
        let tv = t_depth1(level, 2 * t as u32, p + 5)?;
        s.push(tv.mul(&BigReal::from_ratio(&q, scale)));
    }
    let mut c = Vec::with_capacity(d + 1);
    c.push(BigReal::one(scale));
    for m in 1..=d {
        let mut acc = BigReal::zero(scale);
        for t in 1..=m {
            acc = acc.add(&s[t].mul(&c[m - t]));
        }
        c.push(acc.div_int(m as u64));
    }
    Ok(c)
}

/// Ordered tuples of parts >= 2 summing to `total` (the empty tuple for 0).
fn compositions_min2(total: u32) -> Vec<Vec<u32>> {
    if total == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 2..=total {
        for rest in compositions_min2(total - first) {
            let mut tup = Vec::with_capacity(rest.len() + 1);
            tup.push(first);
            tup.extend(rest);
            out.push(tup);
        }
    }
    out
}

fn factorial(n: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n.max(1) {
        acc *= i;
    }
    acc
}

/// Right side of the weighted sum identity: the finite multinomial sum
///
///   Σ 2^{n+2m} (2^{n_1-1}-1)⋯(2^{n_m-1}-1)
///     / (a^k n! m! n_1⋯n_m (2^{n_1}-1)⋯(2^{n_m}-1))
///     · t(2) t(n_1)⋯t(n_m) log^n 2
///
/// over n, m >= 0 and ordered tuples (n_1, …, n_m) with n_i >= 2 and
/// n + n_1 + ⋯ + n_m = k - 2. All depth-one values are at level (2, 1); the
/// residue enters only through a^k.
pub fn weighted_rhs(k: u32, a: u32, p: u32) -> Result<BigReal, NumericError> {
    if k < 2 {
        return Err(NumericError::InvalidParameter(format!(
            "weighted sum needs weight k >= 2, got {k}"
        )));
    }
    if a == 0 {
        return Err(NumericError::InvalidParameter(
            "residue a must be at least 1".into(),
        ));
    }
    let scale = p + 10;
    let level21 = Level::new(2, 1).expect("level (2,1) is valid");
    let mut tvals: HashMap<u32, BigReal> = HashMap::new();
    let tval = |j: u32, tvals: &mut HashMap<u32, BigReal>| -> Result<BigReal, NumericError> {
        if let Some(v) = tvals.get(&j) {
            return Ok(v.clone());
        }
        let v = t_depth1(&level21, j, p + 5)?;
        tvals.insert(j, v.clone());
        Ok(v)
    };
    let log2 = crate::bigreal::constants::log2(scale);
    let mut log2_pow = Vec::with_capacity((k - 1) as usize);
    log2_pow.push(BigReal::one(scale));
    for n in 1..=k - 2 {
        let prev = log2_pow[(n - 1) as usize].clone();
        log2_pow.push(prev.mul(&log2));
    }

    let a_to_k = BigInt::from(a).pow(k);
    let mut total = BigReal::zero(scale);
    for n in 0..=k - 2 {
        for tup in compositions_min2(k - 2 - n) {
            let m = tup.len() as u32;
            let mut numer = BigInt::one() << (n + 2 * m);
            let mut denom = &a_to_k * factorial(n) * factorial(m);
            for &ni in &tup {
                numer *= (BigInt::one() << (ni - 1)) - 1;
                denom *= BigInt::from(ni) * ((BigInt::one() << ni) - 1);
            }
            let coeff = BigRational::new(numer, denom);
            let mut term = tval(2, &mut tvals)?
                .mul(&log2_pow[n as usize])
                .mul(&BigReal::from_ratio(&coeff, scale));
            for &ni in &tup {
                term = term.mul(&tval(ni, &mut tvals)?);
            }
            total = total.add(&term);
        }
    }
    Ok(total)
}

/// Left side of the weighted sum identity at level (2a, a):
///
///   Σ_{n=1}^{k-1} (1-2r)^{k-n-1} 2^{n-1} Σ_{k ∈ I_0(k,n)} t^r(k)
///
/// where I_0(k, n) is the set of admissible indices of weight k and depth n.
/// The tolerance is split across the interpolated evaluations so the returned
/// error bound stays at or below `tol`.
pub fn weighted_lhs(
    k: u32,
    a: u32,
    r: &BigRational,
    p: u32,
    tol: f64,
    cache: Option<&ValueCache>,
) -> Result<BigReal, NumericError> {
    if k < 2 {
        return Err(NumericError::InvalidParameter(format!(
            "weighted sum needs weight k >= 2, got {k}"
        )));
    }
    if a == 0 {
        return Err(NumericError::InvalidParameter(
            "residue a must be at least 1".into(),
        ));
    }
    if !tol.is_finite() || tol <= 0.0 {
        return Err(NumericError::InvalidParameter(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let level = Level::new(2 * a, a)
        .map_err(|e| NumericError::InvalidParameter(e.to_string()))?;
    let scale = p + 10;

    let one_minus_2r = BigRational::one() - r - r;
    let mut terms: Vec<(BigRational, Index)> = Vec::new();
    for n in 1..k {
        let weight = one_minus_2r.pow((k - n - 1) as i32)
            * BigRational::from_integer(BigInt::one() << (n - 1));
        if weight.is_zero() {
            continue;
        }
        for s in 1..=n as usize {
            for idx in enumerate_indices(k, n as usize, s, true) {
                terms.push((weight.clone(), idx));
            }
        }
    }
    let w_max = terms
        .iter()
        .map(|(w, _)| crate::ring::rational_abs_upper(w))
        .fold(1.0f64, f64::max);
    let budget = tol / (2.0 * terms.len() as f64 * w_max);

    let mut total = BigReal::zero(scale);
    for (weight, idx) in &terms {
        let value = match cache {
            Some(c) => t_interp_eval_cached(c, &level, idx, r, p, budget)?,
            None => t_interp_eval(&level, idx, r, p, budget)?,
        };
        total = total.add(&value.mul(&BigReal::from_ratio(weight, scale)));
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{big_rational, CoefficientRing};

    fn level21() -> Level {
        Level::new(2, 1).unwrap()
    }

    #[test]
    fn weighted_rhs_matches_reference_digits() {
        // Frozen from an independent multiprecision evaluation of the same
        // multinomial sum; k=3 and k=4 also agree with the closed forms
        // 2t(2)log2 and 2t(2)log²2 + (2/3)t(2)².
        let cases = [
            (2u32, "1.233700550136169827354311374984518891914"),
            (3, "1.710272115964279136211869788488524017825"),
            (4, "2.200148326775123967705629469028311065157"),
            (5, "2.695935160083472720504379506731172885400"),
        ];
        for (k, digits) in cases {
            let got = weighted_rhs(k, 1, 30).expect("rhs");
            let want = BigReal::from_decimal_str(digits).unwrap();
            assert!(got.within(&want, 1e-25), "k={k}: {got}");
            assert!(got.err() < 1e-25, "k={k} err {}", got.err());
        }
    }

    #[test]
    fn weighted_rhs_scales_by_residue_power() {
        let at_1 = weighted_rhs(5, 2, 25).unwrap().mul_int(32);
        let at_2 = weighted_rhs(5, 1, 25).unwrap();
        assert!(at_1.ring_eq(&at_2), "a-scaling: {at_1} vs {at_2}");
    }

    #[test]
    fn weighted_rhs_k2_is_depth_one_value() {
        let got = weighted_rhs(2, 1, 25).unwrap();
        let want = t_depth1(&level21(), 2, 25).unwrap();
        assert!(got.ring_eq(&want), "k=2: {got} vs {want}");
    }

    #[test]
    fn weighted_lhs_equals_rhs_at_r_half_k3() {
        // At r = 1/2 only the depth k-1 layer survives, leaving
        // 2·t^{1/2}(2,1) = 2(t(2,1) + t(3)/2) = 2t(2)log2.
        let lhs = weighted_lhs(3, 1, &big_rational(1, 2), 20, 1e-9, None).unwrap();
        let rhs = weighted_rhs(3, 1, 20).unwrap();
        assert!(lhs.ring_eq(&rhs), "lhs {lhs} vs rhs {rhs}");
        assert!(lhs.err() <= 1e-9, "lhs err {}", lhs.err());
    }

    #[test]
    fn maxheight_constant_is_one_and_odd_w_vanishes() {
        let series = maxheight_rhs(&level21(), &big_rational(1, 2), 2, 2, 20).unwrap();
        assert!(series.coeff(0, 0, 0).ring_eq(&BigReal::one(30)));
        assert!(series.coeff(0, 0, 1).ring_is_zero());
        assert!(series.coeff(1, 0, 1).ring_is_zero());
    }

    #[test]
    fn maxheight_w2_coefficient_is_t2_for_every_r() {
        // Depth-one interpolation is the identity, so the w² coefficient is
        // t(2) no matter where r sits.
        let t2 = t_depth1(&level21(), 2, 25).unwrap();
        for r in [big_rational(0, 1), big_rational(1, 2), big_rational(1, 1)] {
            let series = maxheight_rhs(&level21(), &r, 2, 2, 25).unwrap();
            let got = series.coeff(0, 0, 2);
            assert!(got.ring_eq(&t2), "r={r}: {got}");
        }
    }

    #[test]
    fn maxheight_u_w2_coefficient_is_t3() {
        let t3 = t_depth1(&level21(), 3, 25).unwrap();
        let series = maxheight_rhs(&level21(), &big_rational(1, 2), 2, 2, 25).unwrap();
        let got = series.coeff(1, 0, 2);
        assert!(got.ring_eq(&t3), "u w² coefficient {got}");
    }

    #[test]
    fn maxheight_rejects_oversized_bounds() {
        assert!(matches!(
            maxheight_rhs(&level21(), &big_rational(0, 1), 10, 10, 20),
            Err(NumericError::InvalidParameter(_))
        ));
    }

    #[test]
    fn twos_gf_coefficients_match_quadratic_closed_forms() {
        let t2 = t_depth1(&level21(), 2, 25).unwrap();
        let t4 = t_depth1(&level21(), 4, 25).unwrap();
        // Strict pairs: t(2,2) = (t(2)² - t(4))/2; weak pairs add t(4).
        let strict = twos_gf_rhs(&level21(), &big_rational(0, 1), 2, 25).unwrap();
        assert!(strict[0].ring_eq(&BigReal::one(35)));
        assert!(strict[1].ring_eq(&t2), "c1 = {}", strict[1]);
        let want_strict = t2.mul(&t2).sub(&t4).div_int(2);
        assert!(strict[2].ring_eq(&want_strict), "c2 = {}", strict[2]);

        let weak = twos_gf_rhs(&level21(), &big_rational(1, 1), 2, 25).unwrap();
        let want_weak = t2.mul(&t2).add(&t4).div_int(2);
        assert!(weak[1].ring_eq(&t2));
        assert!(weak[2].ring_eq(&want_weak), "c2* = {}", weak[2]);

        // The depth-one coefficient is r-independent.
        let mid = twos_gf_rhs(&level21(), &big_rational(1, 2), 1, 25).unwrap();
        assert!(mid[1].ring_eq(&t2));
    }
}
