//! High-precision numeric evaluation: fundamental constants, depth-one
//! progression zeta values, nested t-values with certified tails, generalized
//! hypergeometric series at 1, and the numeric right-hand sides of the
//! closed-form identities checked by the verification layer.

use thiserror::Error;

use crate::bigreal::{constants, BigReal, RealError};
use crate::genfun::GenfunError;
use crate::ring::CoefficientRing;
use crate::series::SeriesError;

pub mod cache;
pub mod corollaries;
pub mod depth1;
pub mod gamma;
pub mod height1;
pub mod nested;
pub mod pfq;
mod tails;

pub use cache::{CacheKey, ValueCache};
pub use depth1::t_depth1;
pub use nested::{t_bruteforce, t_interp_eval, t_nested, t_nested_weak};
pub use pfq::{pfq_at_1, PfqParams};

/// Error type for the numeric layer.
#[derive(Debug, Error)]
pub enum NumericError {
    /// A series that provably diverges for the requested parameters.
    #[error("series diverges: {0}")]
    Divergent(String),
    /// Nested sums require the leading exponent to be at least 2.
    #[error("index is not admissible (leading exponent must be at least 2)")]
    NotAdmissible,
    /// The requested tolerance could not be certified within configured
    /// cutoffs; the best bound actually reached is reported, never silently
    /// substituted.
    #[error("tolerance {tol:e} unreachable; best certified bound {reached:e}")]
    ToleranceUnreachable { tol: f64, reached: f64 },
    /// Malformed or out-of-domain arguments.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// An internal cross-check between two independent computations failed.
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Real(#[from] RealError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Genfun(#[from] GenfunError),
    /// Cache file I/O failure.
    #[error("cache I/O failure: {0}")]
    Cache(#[from] std::io::Error),
}

/// A signed lower bound on the true value of `x` (value minus error bound).
pub(crate) fn signed_lower(x: &BigReal) -> f64 {
    if x.is_negative() {
        -(x.mag_upper() + x.err())
    } else {
        x.mag_lower() - x.err()
    }
}

/// π and log 2 to `p` decimal digits, each cross-checked against an
/// independent second series before being accepted.
pub fn const_pi_log2(p: u32) -> Result<(BigReal, BigReal), NumericError> {
    if p < 10 {
        return Err(NumericError::InvalidParameter(format!(
            "constant precision {p} below minimum 10"
        )));
    }
    let scale = p + 10;
    let pi = constants::pi(scale);
    let pi_alt = constants::pi_crosscheck(scale);
    if !pi.ring_eq(&pi_alt) {
        return Err(NumericError::Inconsistent(
            "the two pi series disagree beyond their combined error bounds".into(),
        ));
    }
    let log2 = constants::log2(scale);
    let log2_alt = constants::log2_crosscheck(scale);
    if !log2.ring_eq(&log2_alt) {
        return Err(NumericError::Inconsistent(
            "the two log 2 series disagree beyond their combined error bounds".into(),
        ));
    }
    Ok((pi, log2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_and_log2_match_reference_digits() {
        let (pi, log2) = const_pi_log2(30).expect("constants");
        let pi_ref = BigReal::from_decimal_str("3.141592653589793238462643383279502884197").unwrap();
        let log2_ref =
            BigReal::from_decimal_str("0.6931471805599453094172321214581765680755").unwrap();
        assert!(pi.within(&pi_ref, 1e-30), "pi = {pi}");
        assert!(log2.within(&log2_ref, 1e-30), "log2 = {log2}");
        assert!(pi.err() < 1e-30);
        assert!(log2.err() < 1e-30);
    }

    #[test]
    fn t2_from_pi_matches_reference_digits() {
        let (pi, _) = const_pi_log2(20).expect("constants");
        let t2 = pi.mul(&pi).div_int(8);
        let t2_ref = BigReal::from_decimal_str("1.2337005501361698274").unwrap();
        assert!(t2.within(&t2_ref, 1e-19), "t(2) = {t2}");
    }

    #[test]
    fn constant_precision_floor_is_enforced() {
        assert!(matches!(
            const_pi_log2(9),
            Err(NumericError::InvalidParameter(_))
        ));
    }

    #[test]
    fn signed_lower_reflects_sign_and_err() {
        let x = BigReal::from_int(3, 10).with_err_added(1e-3);
        assert!(signed_lower(&x) > 2.9);
        let y = BigReal::from_int(-3, 10).with_err_added(1e-3);
        assert!(signed_lower(&y) < -2.9);
        assert!(signed_lower(&y) > -3.1);
        let z = BigReal::zero(10).with_err_added(0.5);
        assert!(signed_lower(&z) <= 0.0);
    }
}
