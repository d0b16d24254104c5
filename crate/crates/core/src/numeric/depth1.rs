//! Depth-one values: Σ_{m>0, m≡a (mod N)} m^{-k} by direct summation of an
//! initial segment plus an Euler–Maclaurin tail whose remainder is bounded by
//! the first omitted correction term.

use num::{BigInt, BigRational, One, Signed};

use super::NumericError;
use crate::bernoulli::bernoulli;
use crate::bigreal::BigReal;
use crate::level::Level;
use crate::ring::rational_abs_upper;

/// Largest Bernoulli correction index tried before giving up and doubling the
/// directly-summed head instead.
const MAX_CORRECTIONS: usize = 250;

/// Σ_{m>0, m≡a (mod N)} m^{-k} to `p` certified decimal digits.
pub fn t_depth1(level: &Level, k: u32, p: u32) -> Result<BigReal, NumericError> {
    if k < 2 {
        return Err(NumericError::Divergent(format!(
            "depth-one exponent {k} is below 2"
        )));
    }
    let scale = p + 10;
    let mut head_len = (p as u64).max(50);
    loop {
        if let Some(value) = attempt(level, k, scale, head_len) {
            if value.err() < 10f64.powi(-(p as i32)) {
                return Ok(value);
            }
        }
        head_len *= 2;
        if head_len > 1 << 22 {
            return Err(NumericError::Inconsistent(format!(
                "Euler–Maclaurin corrections failed to certify {p} digits for \
                 exponent {k} at level {level}"
            )));
        }
    }
}

/// One head-length attempt; `None` when the correction terms start growing
/// before reaching the rounding threshold (asymptotic series exhausted).
fn attempt(level: &Level, k: u32, scale: u32, head_len: u64) -> Option<BigReal> {
    let n = level.modulus();
    let mut head = BigReal::zero(scale);
    for j in 0..head_len {
        let m = BigInt::from(level.point(j));
        let term = BigRational::new(BigInt::one(), m.pow(k));
        head = head.add(&BigReal::from_ratio(&term, scale));
    }

    // Tail over m = y, y+N, y+2N, … with y the first unsummed point.
    let y = BigInt::from(level.point(head_len));
    let y_pow_km1 = y.pow(k - 1);
    let mut tail = BigRational::new(
        BigInt::one(),
        &y_pow_km1 * BigInt::from(u64::from(n) * (k as u64 - 1)),
    );
    tail += BigRational::new(BigInt::one(), BigInt::from(2) * &y_pow_km1 * &y);

    // Correction terms B_{2i}/(2i)! · N^{2i-1} · (k)_{2i-1} · y^{-(k+2i-1)}.
    let threshold = BigRational::new(BigInt::one(), BigInt::from(10u32).pow(scale - 2));
    let y2 = &y * &y;
    let mut y_pow = &y_pow_km1 * &y2; // y^{k+2i-1}, starting at i=1
    let mut n_pow = BigInt::from(n); // N^{2i-1}
    let n2 = BigInt::from(n * n);
    let mut fact = BigInt::from(2); // (2i)!
    let mut rising = BigInt::from(k); // (k)_{2i-1}
    let mut prev_mag: Option<BigRational> = None;
    for i in 1..=MAX_CORRECTIONS {
        if i > 1 {
            let two_i = 2 * i as u64;
            fact *= BigInt::from((two_i - 1) * two_i);
            rising *= BigInt::from((k as u64 + two_i - 3) * (k as u64 + two_i - 2));
            y_pow *= &y2;
            n_pow *= &n2;
        }
        let term = bernoulli(2 * i) * BigRational::new(&rising * &n_pow, &fact * &y_pow);
        let mag = term.abs();
        if mag < threshold {
            // Remainder bounded by the magnitude of this first omitted term.
            let value = head.add(&BigReal::from_ratio(&tail, scale));
            return Some(value.with_err_added(rational_abs_upper(&mag)));
        }
        if let Some(prev) = &prev_mag {
            if mag > *prev {
                return None;
            }
        }
        tail += &term;
        prev_mag = Some(mag);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference(text: &str) -> BigReal {
        BigReal::from_decimal_str(text).unwrap()
    }

    #[test]
    fn full_progression_gives_zeta_two() {
        let v = t_depth1(&Level::new(1, 1).unwrap(), 2, 30).unwrap();
        // ζ(2) = π²/6 via an independent constant pipeline.
        let (pi, _) = super::super::const_pi_log2(30).unwrap();
        let zeta2 = pi.mul(&pi).div_int(6);
        assert!(v.within(&zeta2, 1e-29), "ζ(2) = {v}");
    }

    #[test]
    fn odd_progression_exponent_two_is_pi_squared_over_eight() {
        let v = t_depth1(&Level::new(2, 1).unwrap(), 2, 30).unwrap();
        let r = reference("1.233700550136169827354311374984518891914");
        assert!(v.within(&r, 1e-29), "t(2) = {v}");
    }

    #[test]
    fn odd_progression_exponent_three_matches_scaled_zeta() {
        // Σ_{m odd} m^{-3} = (1 − 2^{-3}) ζ(3).
        let v = t_depth1(&Level::new(2, 1).unwrap(), 3, 30).unwrap();
        let r = reference("1.051799790264644999724770891322518741919");
        assert!(v.within(&r, 1e-29), "t(3) = {v}");
    }

    #[test]
    fn level_equal_residue_is_scaled_full_zeta() {
        // Σ_{m≡3 (3)} m^{-k} = 3^{-k} ζ(k).
        let lhs = t_depth1(&Level::new(3, 3).unwrap(), 4, 25).unwrap();
        let zeta4 = t_depth1(&Level::new(1, 1).unwrap(), 4, 25).unwrap();
        let rhs = zeta4.div_int(81);
        assert!(lhs.within(&rhs, 1e-24));
    }

    #[test]
    fn divergent_exponent_is_rejected() {
        assert!(matches!(
            t_depth1(&Level::new(2, 1).unwrap(), 1, 20),
            Err(NumericError::Divergent(_))
        ));
    }

    #[test]
    fn error_bound_certifies_requested_digits() {
        for p in [15, 30, 45] {
            let v = t_depth1(&Level::new(4, 3).unwrap(), 2, p).unwrap();
            assert!(v.err() < 10f64.powi(-(p as i32)));
        }
    }

    #[test]
    fn higher_precision_run_stays_within_reported_err() {
        let coarse = t_depth1(&Level::new(3, 2).unwrap(), 2, 20).unwrap();
        let fine = t_depth1(&Level::new(3, 2).unwrap(), 2, 40).unwrap();
        use crate::ring::CoefficientRing;
        assert!(coarse.ring_eq(&fine));
    }
}
