//! Power sums of a quadratic's two roots from its elementary symmetric
//! functions, without extracting the roots.

use crate::ring::CoefficientRing;

/// A pair of roots given by e1 = x1 + x2 and e2 = x1 * x2.
#[derive(Debug, Clone)]
pub struct RootPair<C> {
    pub e1: C,
    pub e2: C,
}

/// P_n = x1^n + x2^n for n = 1..=n_max via Newton's identity
/// P_n = e1 P_{n-1} - e2 P_{n-2}, with P_1 = e1 and P_2 = e1^2 - 2 e2.
pub fn newton_power_sums<C: CoefficientRing>(pair: &RootPair<C>, n_max: usize) -> Vec<C> {
    let mut out = Vec::with_capacity(n_max);
    if n_max == 0 {
        return out;
    }
    out.push(pair.e1.clone());
    if n_max == 1 {
        return out;
    }
    let two = pair.e2.one_like().ring_add(&pair.e2.one_like());
    out.push(pair.e1.ring_mul(&pair.e1).ring_sub(&two.ring_mul(&pair.e2)));
    for n in 3..=n_max {
        let p = pair
            .e1
            .ring_mul(&out[n - 2])
            .ring_sub(&pair.e2.ring_mul(&out[n - 3]));
        out.push(p);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::big_int_rational;
    use crate::series::{SeriesBounds, UvwSeries};
    use num::{BigRational, Zero};

    #[test]
    fn integer_roots() {
        // roots 2 and 3: e1 = 5, e2 = 6
        let pair = RootPair {
            e1: big_int_rational(5),
            e2: big_int_rational(6),
        };
        let p = newton_power_sums(&pair, 6);
        for (n, got) in p.iter().enumerate() {
            let n = n as u32 + 1;
            let want = big_int_rational(2i64.pow(n) + 3i64.pow(n));
            assert_eq!(got, &want, "P_{n}");
        }
    }

    /// Independent oracle: traces of powers of the companion matrix
    /// [[e1, -e2], [1, 0]], computed symbolically with u standing for e1 and
    /// v for e2.
    #[test]
    fn matches_companion_matrix_traces() {
        type S = UvwSeries<BigRational>;
        let b = SeriesBounds::boxed(8, 8, 0);
        let zero = S::zero(b, &BigRational::zero());
        let u = S::monomial(b, &BigRational::zero(), (1, 0, 0), big_int_rational(1)).unwrap();
        let v = S::monomial(b, &BigRational::zero(), (0, 1, 0), big_int_rational(1)).unwrap();
        let one = S::one(b, &BigRational::zero());

        let pair = RootPair { e1: u.clone(), e2: v.clone() };
        let sums = newton_power_sums(&pair, 8);

        // mat = [[u, -v], [1, 0]]
        let mut mat = [
            [u.clone(), v.neg()],
            [one.clone(), zero.clone()],
        ];
        let base = mat.clone();
        for n in 1..=8usize {
            let trace = mat[0][0].try_add(&mat[1][1]).unwrap();
            assert!(trace.ring_eq(&sums[n - 1]), "trace of power {n}");
            let mut next = [
                [zero.clone(), zero.clone()],
                [zero.clone(), zero.clone()],
            ];
            for r in 0..2 {
                for c in 0..2 {
                    let mut acc = zero.clone();
                    for t in 0..2 {
                        acc = acc.try_add(&mat[r][t].try_mul(&base[t][c]).unwrap()).unwrap();
                    }
                    next[r][c] = acc;
                }
            }
            mat = next;
        }
    }

    #[test]
    fn empty_request() {
        let pair = RootPair {
            e1: big_int_rational(1),
            e2: big_int_rational(1),
        };
        assert!(newton_power_sums(&pair, 0).is_empty());
    }
}
