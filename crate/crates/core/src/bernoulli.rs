//! Exact Bernoulli numbers (B_1 = -1/2 convention), used by the
//! Euler--Maclaurin tail machinery.

use num::{BigInt, BigRational, One, Zero};
use once_cell::sync::Lazy;
use std::sync::Mutex;

static CACHE: Lazy<Mutex<Vec<BigRational>>> =
    Lazy::new(|| Mutex::new(vec![BigRational::one()]));

/// B_n, computed by the defining recurrence
/// sum_{j=0}^{m} C(m+1, j) B_j = 0 for m >= 1.
pub fn bernoulli(n: usize) -> BigRational {
    let mut cache = CACHE.lock().expect("bernoulli cache poisoned");
    while cache.len() <= n {
        let m = cache.len();
        let mut acc = BigRational::zero();
        for (j, b) in cache.iter().enumerate() {
            acc += BigRational::from_integer(binomial(m + 1, j)) * b;
        }
        let den = BigRational::from_integer(BigInt::from(m as i64 + 1));
        cache.push(-acc / den);
    }
    cache[n].clone()
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from((n - i) as u64);
        den *= BigInt::from((i + 1) as u64);
    }
    num / den
}

/// Rising factorial (s)_m = s (s+1) ... (s+m-1) for integer s.
pub fn rising_factorial(s: u32, m: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..m {
        acc *= BigInt::from(s as u64 + i as u64);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::big_rational;

    #[test]
    fn first_values() {
        let expect = [
            (0, big_rational(1, 1)),
            (1, big_rational(-1, 2)),
            (2, big_rational(1, 6)),
            (4, big_rational(-1, 30)),
            (6, big_rational(1, 42)),
            (8, big_rational(-1, 30)),
            (10, big_rational(5, 66)),
            (12, big_rational(-691, 2730)),
        ];
        for (n, want) in expect {
            assert_eq!(bernoulli(n), want, "B_{n}");
        }
        for n in [3usize, 5, 7, 9, 11, 13] {
            assert!(bernoulli(n).is_zero(), "B_{n} should vanish");
        }
    }

    #[test]
    fn binomial_row() {
        let row: Vec<i64> = (0..=6)
            .map(|k| {
                use num::ToPrimitive;
                binomial(6, k).to_i64().unwrap()
            })
            .collect();
        assert_eq!(row, vec![1, 6, 15, 20, 15, 6, 1]);
        assert!(binomial(4, 7).is_zero());
    }

    #[test]
    fn rising_factorials() {
        assert_eq!(rising_factorial(3, 0), BigInt::one());
        assert_eq!(rising_factorial(3, 4), BigInt::from(3 * 4 * 5 * 6));
        assert_eq!(rising_factorial(1, 5), BigInt::from(120));
    }
}
