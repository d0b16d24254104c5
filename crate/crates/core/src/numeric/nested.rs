//! Nested t-values over an arithmetic progression, strict or weak, plus the
//! interpolated combination Σ_p r^{n-dep(p)} t(p).
//!
//! Strategy: one ascending dynamic-programming pass accumulates every bounded
//! suffix sum up to a cutoff M; chains whose leading elements pass M are
//! grouped by the split position and each group factors into
//! (pure tail past M) × (bounded suffix ≤ M). The pure tails come from the
//! exact expansions in `tails`, so the whole truncation error is the tracked
//! remainder and the cutoff only needs to be large enough for the requested
//! tolerance, not for raw convergence.

use num::{BigInt, BigRational, One, Zero};

use super::cache::{CacheKey, ValueCache};
use super::tails::TailBuilder;
use super::NumericError;
use crate::bigreal::BigReal;
use crate::index::{interpolation_expansion, Index};
use crate::level::Level;
use crate::ring::rational_abs_upper;

/// Hard ceiling on direct-sum points before reporting the tolerance
/// unreachable.
const MAX_POINTS: u64 = 1 << 20;

/// Strict nested sum Σ_{m_1 > … > m_n > 0, m_i ≡ a (N)} Π m_i^{-k_i}.
pub fn t_nested(level: &Level, k: &Index, p: u32, tol: f64) -> Result<BigReal, NumericError> {
    nested_core(level, k, false, p, tol)
}

/// Weak-inequality (star) variant: m_1 ≥ … ≥ m_n > 0.
pub fn t_nested_weak(level: &Level, k: &Index, p: u32, tol: f64) -> Result<BigReal, NumericError> {
    nested_core(level, k, true, p, tol)
}

/// Cache-aware wrapper around the two nested evaluators.
pub fn t_nested_cached(
    cache: &ValueCache,
    level: &Level,
    k: &Index,
    star: bool,
    p: u32,
    tol: f64,
) -> Result<BigReal, NumericError> {
    let key = CacheKey::new(level, k, star, p, tol);
    if let Some(hit) = cache.get(&key) {
        return Ok(hit);
    }
    let value = nested_core(level, k, star, p, tol)?;
    cache.put(&key, &value)?;
    Ok(value)
}

fn nested_core(
    level: &Level,
    k: &Index,
    weak: bool,
    p: u32,
    tol: f64,
) -> Result<BigReal, NumericError> {
    if k.depth() == 0 || !k.is_admissible() {
        return Err(NumericError::NotAdmissible);
    }
    if !tol.is_finite() || tol <= 0.0 {
        return Err(NumericError::InvalidParameter(format!(
            "tolerance must be positive, got {tol:e}"
        )));
    }
    let scale = p + 12;
    let e_cap: u32 = 22u32.max((p + 20) / 2);
    let j_floor = 64u32
        .max(512 / level.modulus().max(1) as u32)
        .max(2 * (e_cap + 1) + 16) as u64;

    let mut j_count = j_floor;
    let mut best_err = f64::INFINITY;
    while j_count <= MAX_POINTS {
        let value = attempt(level, k, weak, scale, e_cap, j_count);
        let err = value.err();
        if err <= tol {
            return Ok(value);
        }
        // More points shrink the expansion remainder geometrically but grow
        // rounding linearly; once the bound stops halving it has hit its
        // floor and further doubling cannot help.
        if err >= best_err * 0.5 {
            break;
        }
        best_err = err;
        j_count *= 2;
    }
    Err(NumericError::ToleranceUnreachable {
        tol,
        reached: best_err,
    })
}

/// Suffix sums over the first `points` progression points:
/// out[d] = Σ over chains m_d (>|≥) … (>|≥) m_n within those points, using
/// exponents k_d..k_n, for d = 1..=n; out[n+1] = 1, out[0] unused.
fn dp_suffix_sums(
    level: &Level,
    parts: &[u32],
    weak: bool,
    scale: u32,
    points: u64,
) -> Vec<BigReal> {
    let n = parts.len();
    let mut suffix = vec![BigReal::zero(scale); n + 2];
    suffix[n + 1] = BigReal::one(scale);
    for j in 0..points {
        let m = BigInt::from(level.point(j));
        if weak {
            // Deeper layers first so the current point is visible to the
            // layers above it (equalities allowed).
            for (d, &kd) in parts.iter().enumerate().rev() {
                let weight =
                    BigReal::from_ratio(&BigRational::new(BigInt::one(), m.pow(kd)), scale);
                let contribution = weight.mul(&suffix[d + 2]);
                suffix[d + 1] = suffix[d + 1].add(&contribution);
            }
        } else {
            // Strict chains must not see the current point; read everything
            // before writing anything.
            let fresh: Vec<BigReal> = parts
                .iter()
                .enumerate()
                .map(|(d, &kd)| {
                    let weight =
                        BigReal::from_ratio(&BigRational::new(BigInt::one(), m.pow(kd)), scale);
                    weight.mul(&suffix[d + 2])
                })
                .collect();
            for (d, contribution) in fresh.into_iter().enumerate() {
                suffix[d + 1] = suffix[d + 1].add(&contribution);
            }
        }
    }
    suffix
}

/// One full evaluation with `j_count` direct points.
fn attempt(level: &Level, k: &Index, weak: bool, scale: u32, e_cap: u32, j_count: u64) -> BigReal {
    let parts = k.parts();
    let z0 = level.point(j_count); // first point past the cutoff
    let suffix = dp_suffix_sums(level, parts, weak, scale, j_count);

    // Tail groups: chains whose first i elements all exceed the cutoff,
    // remaining elements bounded. U_i comes from the expansion machinery,
    // V_i = suffix[i+1] from the DP above.
    let builder = TailBuilder::new(level.modulus().into(), e_cap, z0);
    let mut total = suffix[1].clone();
    let mut chain = None;
    for (i, &kd) in parts.iter().enumerate() {
        let next = match chain.take() {
            None => builder.ptw(kd),
            Some(prev) => {
                if weak {
                    builder.compose(&prev, kd)
                } else {
                    builder.compose(&builder.shift(&prev), kd)
                }
            }
        };
        let u_i = builder.eval(&next, z0, scale);
        total = total.add(&u_i.mul(&suffix[i + 2]));
        chain = Some(next);
    }
    total
}

fn rational_pow(r: &BigRational, e: u32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e {
        acc *= r;
    }
    acc
}

/// Interpolated value Σ_p r^{n-dep(p)} t(p) with the error split across the
/// expansion terms.
pub fn t_interp_eval(
    level: &Level,
    k: &Index,
    r: &BigRational,
    p: u32,
    tol: f64,
) -> Result<BigReal, NumericError> {
    interp_core(level, k, r, p, tol, None)
}

/// Cache-aware interpolated value; individual expansion terms are cached.
pub fn t_interp_eval_cached(
    cache: &ValueCache,
    level: &Level,
    k: &Index,
    r: &BigRational,
    p: u32,
    tol: f64,
) -> Result<BigReal, NumericError> {
    interp_core(level, k, r, p, tol, Some(cache))
}

fn interp_core(
    level: &Level,
    k: &Index,
    r: &BigRational,
    p: u32,
    tol: f64,
    cache: Option<&ValueCache>,
) -> Result<BigReal, NumericError> {
    if k.depth() == 0 || !k.is_admissible() {
        return Err(NumericError::NotAdmissible);
    }
    let scale = p + 12;
    if r.is_zero() {
        // The identity pattern is the only surviving expansion term.
        return match cache {
            Some(c) => t_nested_cached(c, level, k, false, p, tol),
            None => t_nested(level, k, p, tol),
        };
    }
    let expansion = interpolation_expansion(k);
    let len = expansion.len() as f64;
    let mut total = BigReal::zero(scale);
    for term in &expansion {
        let c = rational_pow(r, term.r_exponent);
        let w = rational_abs_upper(&c).max(1e-30);
        // Σ over terms of w·sub_tol stays below tol/2.
        let sub_tol = tol / (2.0 * w * len);
        let value = match cache {
            Some(cch) => t_nested_cached(cch, level, &term.index, false, p, sub_tol)?,
            None => t_nested(level, &term.index, p, sub_tol)?,
        };
        total = total.add(&value.mul(&BigReal::from_ratio(&c, scale)));
    }
    if total.err() > tol {
        return Err(NumericError::ToleranceUnreachable {
            tol,
            reached: total.err(),
        });
    }
    Ok(total)
}

/// Plain truncated nested sum with a crude certified tail bound — an
/// independent control path used to validate the accelerated evaluator.
/// The reported err is the crude bound, typically far above the accelerated
/// one, so comparisons use the combined bounds.
pub fn t_bruteforce(
    level: &Level,
    k: &Index,
    weak: bool,
    points: u64,
    scale: u32,
) -> Result<BigReal, NumericError> {
    if k.depth() == 0 || !k.is_admissible() {
        return Err(NumericError::NotAdmissible);
    }
    let parts = k.parts();
    let n = parts.len();
    let n_mod = level.modulus() as f64;
    let suffix = dp_suffix_sums(level, parts, weak, scale, points);
    // Crude tail: U_i ≤ c_i z^{-σ_i} with c_1 = 1/(N(k_1-1)) + 1/z and each
    // further layer folding one more (1/(N(s-1)) + 1/z) factor; multiplied by
    // the bounded suffix below the split.
    let z = level.point(points) as f64;
    let mut bound = 0.0f64;
    let mut c = 1.0 / (n_mod * (parts[0] as f64 - 1.0)) + 1.0 / z;
    let mut sigma = parts[0] as f64 - 1.0;
    for i in 1..=n {
        if i > 1 {
            let s = parts[i - 1] as f64 + sigma;
            c *= 1.0 / (n_mod * (s - 1.0)) + 1.0 / z;
            sigma = s - 1.0;
        }
        bound += c * z.powf(-sigma) * 1.0001 * suffix[i + 1].abs_upper();
    }
    Ok(suffix[1].clone().with_err_added(bound))
}
