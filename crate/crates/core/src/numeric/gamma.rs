//! Γ on positive rational arguments, via Stirling's series after an integer
//! argument shift.
//!
//! The only consumer is the closed-form right-hand side of the hypergeometric
//! summation cross-check, so the routine favours a certifiable remainder over
//! speed: the argument is shifted until the asymptotic series can reach the
//! working precision, the remainder is bounded by the first omitted term
//! (valid for real positive arguments), and the final error bound is inflated
//! by a factor of ten because this path only ever corroborates values that
//! are computed independently elsewhere.

use num::{BigRational, One, Signed, Zero};

use crate::bernoulli::bernoulli;
use crate::bigreal::{constants, BigReal};
use crate::numeric::NumericError;

/// Γ(q) for exact rational q > 0, with a certified error bound around 10^-p.
pub fn gamma_rational(q: &BigRational, p: u32) -> Result<BigReal, NumericError> {
    if p < 10 {
        return Err(NumericError::InvalidParameter(format!(
            "gamma precision {p} below minimum 10"
        )));
    }
    if !q.is_positive() {
        return Err(NumericError::InvalidParameter(
            "gamma argument must be positive".into(),
        ));
    }
    let scale = p + 15;

    // Shift q upward by an integer s so that z = q + s is large enough for
    // Stirling's series to bottom out below the target: the smallest term of
    // the asymptotic series at argument z has magnitude about e^{-2 pi z}, so
    // z >= (p + 12) ln(10) / (2 pi) plus a margin suffices.
    let threshold = ((f64::from(p) + 12.0) * std::f64::consts::LN_10 / std::f64::consts::TAU)
        .ceil() as i64
        + 6;
    let threshold = BigRational::from_integer(threshold.into());
    let mut s: u32 = 0;
    let mut z_rat = q.clone();
    let one = BigRational::one();
    while z_rat < threshold {
        z_rat += &one;
        s += 1;
    }

    // ln Γ(z) = (z - 1/2) ln z - z + ln(2π)/2 + Σ_{i≥1} B_{2i}/((2i)(2i-1) z^{2i-1}).
    let z = BigReal::from_ratio(&z_rat, scale);
    let ln_z = z.ln()?;
    let z_minus_half = BigReal::from_ratio(&(&z_rat - BigRational::new(1.into(), 2.into())), scale);
    let ln_2pi_half = constants::pi(scale).mul_int(2).ln()?.div_int(2);
    let mut ln_gamma = z_minus_half.mul(&ln_z).sub(&z).add(&ln_2pi_half);

    let target = 10f64.powi(-(scale as i32) + 2);
    let z_sq = z.mul(&z);
    let mut z_pow = z.clone(); // z^{2i-1}
    let mut prev_mag = f64::INFINITY;
    let mut i: usize = 1;
    let remainder = loop {
        let two_i = 2 * i as i64;
        let coeff = bernoulli(2 * i) / BigRational::from_integer((two_i * (two_i - 1)).into());
        let term = BigReal::from_ratio(&coeff, scale).div(&z_pow)?;
        let mag = term.abs_upper();
        // For real positive arguments the remainder after any partial sum is
        // bounded by the first term left out, so stop (without adding) once
        // that term is small enough or once the asymptotic series turns.
        if mag < target || mag >= prev_mag {
            break mag.min(prev_mag);
        }
        ln_gamma = ln_gamma.add(&term);
        prev_mag = mag;
        z_pow = z_pow.mul(&z_sq);
        i += 1;
        if i > 300 {
            return Err(NumericError::Inconsistent(
                "Stirling correction series failed to terminate".into(),
            ));
        }
    };
    let ln_gamma = ln_gamma.with_err_added(remainder);

    // Undo the shift: Γ(q) = Γ(q + s) / (q (q+1) ⋯ (q+s-1)). True division,
    // not multiplication by an embedded reciprocal: the descent product is
    // large and its reciprocal would waste most of the fixed decimal scale
    // on leading zeros.
    let gamma_shifted = ln_gamma.exp()?;
    let mut descent = BigRational::one();
    for j in 0..s {
        descent *= q + BigRational::from_integer(j.into());
    }
    let value = gamma_shifted.div(&BigReal::from_ratio(&descent, scale))?;

    // Cross-check safety factor: widen the certified bound tenfold.
    let err = value.err();
    Ok(value.with_err_added(9.0 * err))
}

/// Closed form for the unit-argument ₃F₂ with parameter pattern
/// (a, b, 1; c, 2+a+b-c):
///
///   (1+a+b-c)/((1+a-c)(1+b-c)) · (1 - c + Γ(c)Γ(1+a+b-c)/(Γ(a)Γ(b))).
///
/// Requires a, b, c, and 1+a+b-c positive and 1+a-c, 1+b-c nonzero.
pub fn saalschutz_like_rhs(
    a: &BigRational,
    b: &BigRational,
    c: &BigRational,
    p: u32,
) -> Result<BigReal, NumericError> {
    let one = BigRational::one();
    let excess = &one + a + b - c;
    if !excess.is_positive() {
        return Err(NumericError::InvalidParameter(
            "closed form needs 1+a+b-c > 0".into(),
        ));
    }
    let da = &one + a - c;
    let db = &one + b - c;
    if da.is_zero() || db.is_zero() {
        return Err(NumericError::InvalidParameter(
            "closed form has a pole at 1+a-c = 0 or 1+b-c = 0".into(),
        ));
    }
    let scale = p + 15;
    let prefactor = &excess / (&da * &db);
    let g_num = gamma_rational(c, p)?.mul(&gamma_rational(&excess, p)?);
    let g_den = gamma_rational(a, p)?.mul(&gamma_rational(b, p)?);
    let bracket = BigReal::from_ratio(&(&one - c), scale).add(&g_num.div(&g_den)?);
    Ok(bracket.mul(&BigReal::from_ratio(&prefactor, scale)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::pfq::{pfq_at_1, PfqParams};
    use crate::ring::{big_rational, CoefficientRing};

    #[test]
    fn gamma_half_squared_is_pi() {
        let g = gamma_rational(&big_rational(1, 2), 30).expect("gamma(1/2)");
        let pi = constants::pi(40);
        assert!(g.mul(&g).ring_eq(&pi), "gamma(1/2)^2 = {}", g.mul(&g));
        assert!(g.err() < 1e-30);
    }

    #[test]
    fn gamma_at_integers_is_factorial() {
        let g5 = gamma_rational(&big_rational(5, 1), 25).expect("gamma(5)");
        assert!(g5.within(&BigReal::from_int(24, 40), 1e-24), "gamma(5) = {g5}");
        let g1 = gamma_rational(&big_rational(1, 1), 25).expect("gamma(1)");
        assert!(g1.within(&BigReal::one(40), 1e-24), "gamma(1) = {g1}");
    }

    #[test]
    fn gamma_reflection_product_at_one_third() {
        // Γ(1/3)Γ(2/3) = 2π/√3, so its square is 4π²/3.
        let g = gamma_rational(&big_rational(1, 3), 30)
            .unwrap()
            .mul(&gamma_rational(&big_rational(2, 3), 30).unwrap());
        let rhs = constants::pi(40).powi(2).mul_int(4).div_int(3);
        assert!(g.mul(&g).ring_eq(&rhs), "(Γ(1/3)Γ(2/3))² = {}", g.mul(&g));
    }

    #[test]
    fn gamma_error_bound_is_sound_across_precisions() {
        let q = big_rational(1, 10);
        let coarse = gamma_rational(&q, 15).unwrap();
        let fine = gamma_rational(&q, 45).unwrap();
        assert!(coarse.ring_eq(&fine));
        assert!(coarse.err() < 1e-15);
        assert!(fine.err() < 1e-45);
        let reference =
            BigReal::from_decimal_str("9.513507698668731836292487177265402192551").unwrap();
        assert!(fine.within(&reference, 1e-38), "gamma(1/10) = {fine}");
    }

    #[test]
    fn gamma_rejects_nonpositive_arguments() {
        assert!(matches!(
            gamma_rational(&big_rational(0, 1), 20),
            Err(NumericError::InvalidParameter(_))
        ));
        assert!(matches!(
            gamma_rational(&big_rational(-7, 2), 20),
            Err(NumericError::InvalidParameter(_))
        ));
    }

    #[test]
    fn closed_form_matches_reference_digits() {
        // (a, b, c) = (3/10, 2/5, 8/5): generic point of the summation
        // identity, frozen from an independent multiprecision evaluation.
        let rhs = saalschutz_like_rhs(
            &big_rational(3, 10),
            &big_rational(2, 5),
            &big_rational(8, 5),
            30,
        )
        .expect("closed form");
        let reference =
            BigReal::from_decimal_str("1.135008648054906445251013842567338989978").unwrap();
        assert!(rhs.within(&reference, 1e-27), "closed form = {rhs}");
    }

    #[test]
    fn closed_form_matches_series_summation() {
        // Left side of the same identity by direct summation of the ₃F₂.
        let scale = 40;
        let embed = |n: i64, d: i64| BigReal::from_ratio(&big_rational(n, d), scale);
        let params = PfqParams::new(
            vec![embed(3, 10), embed(2, 5), embed(1, 1)],
            vec![embed(8, 5), embed(11, 10)],
        )
        .expect("params");
        let lhs = pfq_at_1(&params, 30, 1e-12).expect("series value");
        let rhs = saalschutz_like_rhs(
            &big_rational(3, 10),
            &big_rational(2, 5),
            &big_rational(8, 5),
            30,
        )
        .unwrap();
        assert!(lhs.ring_eq(&rhs), "lhs = {lhs}, rhs = {rhs}");
    }

    #[test]
    fn closed_form_rejects_poles_and_nonpositive_excess() {
        // 1+a+b-c = 0 is outside the closed form's domain (removable limit).
        assert!(matches!(
            saalschutz_like_rhs(
                &big_rational(3, 10),
                &big_rational(2, 5),
                &big_rational(17, 10),
                20,
            ),
            Err(NumericError::InvalidParameter(_))
        ));
        // 1+a-c = 0 pole.
        assert!(matches!(
            saalschutz_like_rhs(
                &big_rational(3, 10),
                &big_rational(2, 5),
                &big_rational(13, 10),
                20,
            ),
            Err(NumericError::InvalidParameter(_))
        ));
    }
}
