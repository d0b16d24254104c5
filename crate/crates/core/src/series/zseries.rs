//! Truncated series in z with ring-valued coefficients.

use num::BigRational;

use super::SeriesError;
use crate::ring::CoefficientRing;

/// Coefficients for z^0 ... z^bound. Additive ops require equal bounds; any
/// bound change (shift, truncate, derivative) is an explicit method, never a
/// silent re-truncation.
#[derive(Debug, Clone)]
pub struct ZSeries<S> {
    coeffs: Vec<S>,
}

impl<S: CoefficientRing> ZSeries<S> {
    pub fn zero(bound: usize, proto: &S) -> Self {
        ZSeries {
            coeffs: vec![proto.zero_like(); bound + 1],
        }
    }

    pub fn bound(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, m: usize) -> &S {
        &self.coeffs[m]
    }

    pub fn set_coeff(&mut self, m: usize, c: S) -> Result<(), SeriesError> {
        if m > self.bound() {
            return Err(SeriesError::ZOrderOutOfBounds { m, bound: self.bound() });
        }
        self.coeffs[m] = c;
        Ok(())
    }

    fn check_bounds(&self, rhs: &Self) -> Result<(), SeriesError> {
        if self.bound() != rhs.bound() {
            return Err(SeriesError::BoundMismatch(
                format!("z-bound {}", self.bound()),
                format!("z-bound {}", rhs.bound()),
            ));
        }
        Ok(())
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self, SeriesError> {
        self.check_bounds(rhs)?;
        Ok(ZSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a.ring_add(b))
                .collect(),
        })
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self, SeriesError> {
        self.check_bounds(rhs)?;
        Ok(ZSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a.ring_sub(b))
                .collect(),
        })
    }

    pub fn scale(&self, c: &S) -> Self {
        ZSeries {
            coeffs: self.coeffs.iter().map(|a| a.ring_mul(c)).collect(),
        }
    }

    /// Formal derivative; the bound drops by one because the top coefficient
    /// of the derivative is not determined by a truncated series.
    pub fn derivative(&self) -> Self {
        let proto = &self.coeffs[0];
        let n = self.coeffs.len();
        let mut coeffs = Vec::with_capacity(n.max(2) - 1);
        for m in 1..n {
            let factor = proto.embed_rational(&BigRational::from_integer((m as i64).into()));
            coeffs.push(self.coeffs[m].ring_mul(&factor));
        }
        if coeffs.is_empty() {
            coeffs.push(proto.zero_like());
        }
        ZSeries { coeffs }
    }

    /// Multiplication by z^t; the bound grows by t.
    pub fn shifted(&self, t: usize) -> Self {
        let proto = &self.coeffs[0];
        let mut coeffs = vec![proto.zero_like(); t];
        coeffs.extend(self.coeffs.iter().cloned());
        ZSeries { coeffs }
    }

    /// Drops coefficients above `bound` (explicit, never implicit).
    pub fn truncated(&self, bound: usize) -> Self {
        assert!(bound <= self.bound(), "truncated may only lower the bound");
        ZSeries {
            coeffs: self.coeffs[..=bound].to_vec(),
        }
    }

    /// Cauchy product, valid because every retained order only needs retained
    /// orders of the factors; requires equal bounds.
    pub fn try_mul(&self, rhs: &Self) -> Result<Self, SeriesError> {
        self.check_bounds(rhs)?;
        let proto = &self.coeffs[0];
        let mut out = ZSeries::zero(self.bound(), proto);
        for (e, a) in self.coeffs.iter().enumerate() {
            if a.ring_is_zero() {
                continue;
            }
            for (f, b) in rhs.coeffs.iter().enumerate() {
                if e + f > out.bound() {
                    break;
                }
                if b.ring_is_zero() {
                    continue;
                }
                out.coeffs[e + f] = out.coeffs[e + f].ring_add(&a.ring_mul(b));
            }
        }
        Ok(out)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &S)> {
        self.coeffs.iter().enumerate().map(|(m, c)| (m, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.ring_is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::big_int_rational;
    use num::{BigRational, Zero};

    type Z = ZSeries<BigRational>;

    fn from_ints(vals: &[i64]) -> Z {
        let mut z = Z::zero(vals.len() - 1, &BigRational::zero());
        for (m, &v) in vals.iter().enumerate() {
            z.set_coeff(m, big_int_rational(v)).unwrap();
        }
        z
    }

    #[test]
    fn derivative_shifts_and_scales() {
        // d/dz (1 + 2z + 3z^2 + 4z^3) = 2 + 6z + 12z^2
        let z = from_ints(&[1, 2, 3, 4]);
        let d = z.derivative();
        assert_eq!(d.bound(), 2);
        assert_eq!(*d.coeff(0), big_int_rational(2));
        assert_eq!(*d.coeff(1), big_int_rational(6));
        assert_eq!(*d.coeff(2), big_int_rational(12));
    }

    #[test]
    fn shift_then_truncate() {
        let z = from_ints(&[5, 7]);
        let s = z.shifted(2);
        assert_eq!(s.bound(), 3);
        assert_eq!(*s.coeff(0), BigRational::zero());
        assert_eq!(*s.coeff(2), big_int_rational(5));
        let t = s.truncated(2);
        assert_eq!(t.bound(), 2);
        assert_eq!(*t.coeff(2), big_int_rational(5));
    }

    #[test]
    fn add_requires_equal_bounds() {
        let a = from_ints(&[1, 2]);
        let b = from_ints(&[1, 2, 3]);
        assert!(matches!(a.try_add(&b), Err(SeriesError::BoundMismatch(..))));
    }

    #[test]
    fn product_is_cauchy() {
        // (1 + z)(1 - z + z^2) = 1 + z^3 -> truncated at bound 2: 1
        let a = from_ints(&[1, 1, 0]);
        let b = from_ints(&[1, -1, 1]);
        let p = a.try_mul(&b).unwrap();
        assert_eq!(*p.coeff(0), big_int_rational(1));
        assert_eq!(*p.coeff(1), BigRational::zero());
        assert_eq!(*p.coeff(2), BigRational::zero());
    }

    #[test]
    fn set_coeff_out_of_bounds() {
        let mut a = from_ints(&[1, 1]);
        assert_eq!(
            a.set_coeff(5, big_int_rational(1)).unwrap_err(),
            SeriesError::ZOrderOutOfBounds { m: 5, bound: 1 }
        );
    }
}
