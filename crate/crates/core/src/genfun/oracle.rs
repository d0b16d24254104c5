//! Brute-force enumeration oracles.
//!
//! Everything here is computed by direct summation over chains in the
//! arithmetic progression — no recurrence, no series algebra — so it can
//! serve as an independent reference for the solver. Tables are exact
//! rationals (or polynomials in r), and every public entry point validates
//! its region.

use num::{BigInt, BigRational, One, Zero};
use serde::Serialize;

use super::{shape_to_monomial, GenfunError, Phi0Solution};
use crate::index::{enumerate_indices, interpolation_expansion, Index};
use crate::level::Level;
use crate::ring::{big_int_rational, CoefficientRing, RPoly, RPolynomial};

fn recip_pow(m: usize, k: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(m).pow(k))
}

/// z^m-coefficients (orders 0..=m_max) of the nested sum for one index:
/// entry m sums prod m_i^{-k_i} over chains m = m_1 > m_2 > ... > m_n >= 1
/// inside the progression; `weak` relaxes the chain to m_1 >= ... >= m_n.
pub fn zcoeff_table(
    level: Level,
    index: &Index,
    m_max: usize,
    weak: bool,
) -> Result<Vec<BigRational>, GenfunError> {
    if index.depth() == 0 {
        return Err(GenfunError::EmptyIndex);
    }
    let points: Vec<usize> = level.points_through(m_max as u64).map(|m| m as usize).collect();
    let parts = index.parts();
    // Accumulate from the innermost exponent outward; layer[idx] is the sum
    // over chains whose current (outermost-so-far) variable is points[idx].
    let mut layer: Vec<BigRational> = Vec::new();
    for (pos, &k) in parts.iter().enumerate().rev() {
        if pos == parts.len() - 1 {
            layer = points.iter().map(|&m| recip_pow(m, k)).collect();
            continue;
        }
        let mut next = Vec::with_capacity(points.len());
        let mut prefix = BigRational::zero();
        for (idx, &m) in points.iter().enumerate() {
            let reachable = if weak { &prefix + &layer[idx] } else { prefix.clone() };
            next.push(recip_pow(m, k) * reachable);
            prefix += &layer[idx];
        }
        layer = next;
    }
    let mut table = vec![BigRational::zero(); m_max + 1];
    for (idx, &m) in points.iter().enumerate() {
        table[m] = layer[idx].clone();
    }
    Ok(table)
}

/// Strict-chain z^m coefficient for one index (m >= 1).
pub fn bruteforce_zcoeff(level: Level, index: &Index, m: usize) -> Result<BigRational, GenfunError> {
    if m == 0 {
        return Err(GenfunError::ZeroOrder);
    }
    Ok(zcoeff_table(level, index, m, false)?.swap_remove(m))
}

/// Weak-chain z^m coefficient for one index (m >= 1).
pub fn bruteforce_zcoeff_weak(
    level: Level,
    index: &Index,
    m: usize,
) -> Result<BigRational, GenfunError> {
    if m == 0 {
        return Err(GenfunError::ZeroOrder);
    }
    Ok(zcoeff_table(level, index, m, true)?.swap_remove(m))
}

/// z^m-coefficients of the interpolated sum for one index: the comma/plus
/// expansion applied termwise, giving polynomials in r.
pub fn interp_zcoeff_table(
    level: Level,
    index: &Index,
    m_max: usize,
) -> Result<Vec<RPoly>, GenfunError> {
    if index.depth() == 0 {
        return Err(GenfunError::EmptyIndex);
    }
    let mut out = vec![RPoly::zero(); m_max + 1];
    for term in interpolation_expansion(index) {
        let table = zcoeff_table(level, &term.index, m_max, false)?;
        for (m, q) in table.into_iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            out[m] = out[m].ring_add(&RPolynomial::monomial(q, term.r_exponent as usize));
        }
    }
    Ok(out)
}

/// Interpolated z^m coefficient for one index (m >= 1).
pub fn bruteforce_interp_zcoeff(
    level: Level,
    index: &Index,
    m: usize,
) -> Result<RPoly, GenfunError> {
    if m == 0 {
        return Err(GenfunError::ZeroOrder);
    }
    Ok(interp_zcoeff_table(level, index, m)?.swap_remove(m))
}

/// z^m-coefficients of the shape-graded interpolated sum X^r(k, n, s): the
/// interpolated tables summed over every index of weight k, depth n, height
/// s (restricted to first part >= 2 when `admissible_only`). The empty shape
/// (0, 0, 0) contributes exactly 1 at z^0. Infeasible shapes give the zero
/// table: the sum is over an empty set.
pub fn x_zcoeff_table(
    level: Level,
    k: u32,
    n: u32,
    s: u32,
    m_max: usize,
    admissible_only: bool,
) -> Result<Vec<RPoly>, GenfunError> {
    let mut out = vec![RPoly::zero(); m_max + 1];
    if k == 0 && n == 0 && s == 0 {
        out[0] = RPoly::one();
        return Ok(out);
    }
    for index in enumerate_indices(k, n as usize, s as usize, admissible_only) {
        let table = interp_zcoeff_table(level, &index, m_max)?;
        for (m, p) in table.into_iter().enumerate() {
            if p.ring_is_zero() {
                continue;
            }
            out[m] = out[m].ring_add(&p);
        }
    }
    Ok(out)
}

/// Single entry of [`x_zcoeff_table`].
pub fn bruteforce_x_zcoeff(
    level: Level,
    k: u32,
    n: u32,
    s: u32,
    m: usize,
    admissible_only: bool,
) -> Result<RPoly, GenfunError> {
    Ok(x_zcoeff_table(level, k, n, s, m, admissible_only)?.swap_remove(m))
}

/// Residuals of the two termwise derivative relations at shape (k, n, s) and
/// z-order m, each present only where its region applies.
///
/// `admissible` (k >= n+s, n >= s >= 1):
///   m·c_m(X₀(k,n,s)) − c_m(X(k−1,n,s−1)) − c_m(X₀(k−1,n,s)) + c_m(X₀(k−1,n,s−1)).
/// `leading_one` (k >= n+s, n >= s >= 0, n >= 2), for the non-admissible part:
///   m·c_m((X−X₀)(k,n,s)) − r·c_m(X(k−1,n−1,s)) − Σ_{t>=1} c_{m−tN}(X(k−1,n−1,s)).
#[derive(Debug, Clone)]
pub struct RecurrenceResiduals {
    pub admissible: Option<RPoly>,
    pub leading_one: Option<RPoly>,
}

pub fn recurrence_residual(
    level: Level,
    k: u32,
    n: u32,
    s: u32,
    m: usize,
) -> Result<RecurrenceResiduals, GenfunError> {
    if m == 0 {
        return Err(GenfunError::ZeroOrder);
    }
    let in_admissible = s >= 1 && n >= s && k >= n + s;
    let in_leading_one = n >= 2 && n >= s && k >= n + s;
    if !in_admissible && !in_leading_one {
        return Err(GenfunError::NoApplicableRelation { k, n, s });
    }
    let m_factor = RPolynomial::constant(big_int_rational(m as i64));

    let admissible = if in_admissible {
        let lhs = bruteforce_x_zcoeff(level, k, n, s, m, true)?.ring_mul(&m_factor);
        let full_lower = bruteforce_x_zcoeff(level, k - 1, n, s - 1, m, false)?;
        let adm_same = bruteforce_x_zcoeff(level, k - 1, n, s, m, true)?;
        let adm_lower = bruteforce_x_zcoeff(level, k - 1, n, s - 1, m, true)?;
        Some(lhs.ring_sub(&full_lower).ring_sub(&adm_same).ring_add(&adm_lower))
    } else {
        None
    };

    let leading_one = if in_leading_one {
        let full = bruteforce_x_zcoeff(level, k, n, s, m, false)?;
        let adm = bruteforce_x_zcoeff(level, k, n, s, m, true)?;
        let lhs = full.ring_sub(&adm).ring_mul(&m_factor);
        let table = x_zcoeff_table(level, k - 1, n - 1, s, m, false)?;
        let r_var = RPolynomial::monomial(BigRational::one(), 1);
        let mut rhs = table[m].ring_mul(&r_var);
        let step = level.modulus() as usize;
        let mut lower = m;
        while lower >= step {
            lower -= step;
            rhs = rhs.ring_add(&table[lower]);
        }
        Some(lhs.ring_sub(&rhs))
    } else {
        None
    };

    Ok(RecurrenceResiduals { admissible, leading_one })
}

/// One solver-vs-oracle comparison, as serialized into JSON reports.
#[derive(Debug, Clone, Serialize)]
pub struct OracleRow {
    pub level: String,
    pub k: u32,
    pub n: u32,
    pub s: u32,
    pub m: usize,
    pub lhs: String,
    pub rhs: String,
    pub equal: bool,
}

/// Compares every retained shape with weight <= max_weight, at every z-order
/// <= m_max, against the brute-force admissible sums. One row per
/// (shape, order); `equal` is exact polynomial equality over ℚ[r].
pub fn compare_solution(
    solution: &Phi0Solution,
    max_weight: u32,
    m_max: usize,
) -> Result<Vec<OracleRow>, GenfunError> {
    let level = solution.level();
    let bounds = solution.bounds();
    let m_top = m_max.min(solution.z_bound());
    let mut rows = Vec::new();
    for k in 2..=max_weight {
        for s in 1..=k / 2 {
            for n in s..=(k - s) {
                let (i, j, l) = shape_to_monomial(k, n, s)?;
                if !bounds.retains(i, j, l) {
                    continue;
                }
                let oracle = x_zcoeff_table(level, k, n, s, m_top, true)?;
                for (m, want) in oracle.iter().enumerate() {
                    let got = solution.x0_coeff(k, n, s, m)?;
                    rows.push(OracleRow {
                        level: level.to_string(),
                        k,
                        n,
                        s,
                        m,
                        lhs: got.coeff_string(),
                        rhs: want.coeff_string(),
                        equal: got.ring_eq(want),
                    });
                }
            }
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genfun::solve_phi0_bounded;
    use crate::ring::big_rational;
    use crate::series::SeriesBounds;

    fn lv(n: u32, a: u32) -> Level {
        Level::new(n, a).unwrap()
    }

    fn idx(parts: &[u32]) -> Index {
        Index::new(parts.to_vec()).unwrap()
    }

    fn rp(cs: &[(i64, i64)]) -> RPoly {
        RPolynomial::from_coeffs(cs.iter().map(|&(n, d)| big_rational(n, d)).collect())
    }

    #[test]
    fn strict_zcoeff_examples() {
        let lv21 = lv(2, 1);
        assert_eq!(bruteforce_zcoeff(lv21, &idx(&[2]), 5).unwrap(), big_rational(1, 25));
        // 1/25 * (1 + 1/3) = 4/75
        assert_eq!(bruteforce_zcoeff(lv21, &idx(&[2, 1]), 5).unwrap(), big_rational(4, 75));
        // off-progression order
        assert_eq!(bruteforce_zcoeff(lv21, &idx(&[2]), 4).unwrap(), big_rational(0, 1));
        // chain too short: depth 2 needs two distinct progression points <= 1
        assert_eq!(bruteforce_zcoeff(lv21, &idx(&[2, 1]), 1).unwrap(), big_rational(0, 1));
    }

    #[test]
    fn weak_zcoeff_examples() {
        let lv21 = lv(2, 1);
        // 1/25 * (1 + 1/3 + 1/5) = 23/375
        assert_eq!(
            bruteforce_zcoeff_weak(lv21, &idx(&[2, 1]), 5).unwrap(),
            big_rational(23, 375)
        );
        // weak chains allow repeats, so depth 2 is reachable at m = 1
        assert_eq!(
            bruteforce_zcoeff_weak(lv21, &idx(&[2, 1]), 1).unwrap(),
            big_rational(1, 1)
        );
    }

    #[test]
    fn interp_zcoeff_examples() {
        let lv21 = lv(2, 1);
        assert_eq!(
            bruteforce_interp_zcoeff(lv21, &idx(&[2, 1]), 3).unwrap(),
            rp(&[(1, 9), (1, 27)])
        );
        assert_eq!(bruteforce_interp_zcoeff(lv21, &idx(&[5]), 1).unwrap(), rp(&[(1, 1)]));
    }

    #[test]
    fn interp_specializes_to_strict_and_weak() {
        let levels = [lv(2, 1), lv(3, 2), lv(1, 1)];
        let indices = [idx(&[2, 1]), idx(&[3, 1, 2]), idx(&[2, 2]), idx(&[4])];
        for level in levels {
            for index in &indices {
                for m in 1..=13usize {
                    let p = bruteforce_interp_zcoeff(level, index, m).unwrap();
                    assert_eq!(
                        p.eval(&big_rational(0, 1)),
                        bruteforce_zcoeff(level, index, m).unwrap(),
                        "r=0 at {index} m={m}"
                    );
                    assert_eq!(
                        p.eval(&big_rational(1, 1)),
                        bruteforce_zcoeff_weak(level, index, m).unwrap(),
                        "r=1 at {index} m={m}"
                    );
                }
            }
        }
    }

    #[test]
    fn x_zcoeff_examples() {
        let lv21 = lv(2, 1);
        assert_eq!(bruteforce_x_zcoeff(lv21, 2, 1, 1, 3, true).unwrap(), rp(&[(1, 9)]));
        assert_eq!(
            bruteforce_x_zcoeff(lv21, 3, 2, 1, 3, true).unwrap(),
            rp(&[(1, 9), (1, 27)])
        );
        // empty shape: 1 at order zero, 0 elsewhere
        assert_eq!(bruteforce_x_zcoeff(lv21, 0, 0, 0, 0, true).unwrap(), RPoly::one());
        let table = x_zcoeff_table(lv21, 0, 0, 0, 6, false).unwrap();
        assert_eq!(table[0], RPoly::one());
        assert!(table[1..].iter().all(|p| p.ring_is_zero()));
        // infeasible shape: empty sum
        assert!(bruteforce_x_zcoeff(lv21, 3, 2, 2, 3, true).unwrap().ring_is_zero());
    }

    #[test]
    fn x_full_vs_admissible_split() {
        // X = X0 + (non-admissible part); check the split is consistent on a
        // shape with both kinds: weight 4, depth 2, height 1 has (3,1), (1,3).
        let lv21 = lv(2, 1);
        for m in 1..=9usize {
            let full = bruteforce_x_zcoeff(lv21, 4, 2, 1, m, false).unwrap();
            let adm = bruteforce_x_zcoeff(lv21, 4, 2, 1, m, true).unwrap();
            let manual_adm = bruteforce_interp_zcoeff(lv21, &idx(&[3, 1]), m).unwrap();
            let manual_rest = bruteforce_interp_zcoeff(lv21, &idx(&[1, 3]), m).unwrap();
            assert_eq!(adm, manual_adm);
            assert_eq!(full, manual_adm.ring_add(&manual_rest));
        }
    }

    #[test]
    fn empty_index_and_zero_order_are_errors() {
        let lv21 = lv(2, 1);
        let empty = Index::empty();
        assert!(matches!(
            bruteforce_zcoeff(lv21, &empty, 3),
            Err(GenfunError::EmptyIndex)
        ));
        assert!(matches!(
            bruteforce_interp_zcoeff(lv21, &empty, 3),
            Err(GenfunError::EmptyIndex)
        ));
        assert!(matches!(
            bruteforce_zcoeff(lv21, &idx(&[2]), 0),
            Err(GenfunError::ZeroOrder)
        ));
        assert!(matches!(
            recurrence_residual(lv21, 3, 2, 1, 0),
            Err(GenfunError::ZeroOrder)
        ));
    }

    #[test]
    fn derivative_relations_hold_on_small_grid() {
        for level in [lv(1, 1), lv(2, 1)] {
            for k in 1..=4u32 {
                for n in 0..=k {
                    for s in 0..=n {
                        let valid_adm = s >= 1 && n >= s && k >= n + s;
                        let valid_lead = n >= 2 && k >= n + s;
                        for m in 1..=10usize {
                            match recurrence_residual(level, k, n, s, m) {
                                Ok(res) => {
                                    assert_eq!(res.admissible.is_some(), valid_adm);
                                    assert_eq!(res.leading_one.is_some(), valid_lead);
                                    if let Some(p) = &res.admissible {
                                        assert!(
                                            p.ring_is_zero(),
                                            "admissible residual {} at {level} ({k},{n},{s}) m={m}",
                                            p.coeff_string()
                                        );
                                    }
                                    if let Some(p) = &res.leading_one {
                                        assert!(
                                            p.ring_is_zero(),
                                            "leading-one residual {} at {level} ({k},{n},{s}) m={m}",
                                            p.coeff_string()
                                        );
                                    }
                                }
                                Err(GenfunError::NoApplicableRelation { .. }) => {
                                    assert!(!valid_adm && !valid_lead);
                                }
                                Err(e) => panic!("unexpected error {e}"),
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn solver_matches_oracle_on_small_grid() {
        let level = lv(3, 2);
        let sol = solve_phi0_bounded(level, 14, SeriesBounds::capped(3, 3, 2, 3)).unwrap();
        let rows = compare_solution(&sol, 5, 14).unwrap();
        assert!(!rows.is_empty());
        for row in &rows {
            assert!(
                row.equal,
                "mismatch at ({},{},{}) m={}: solver {} vs oracle {}",
                row.k, row.n, row.s, row.m, row.lhs, row.rhs
            );
        }
        // the sweep must include nontrivial shapes, not just the diagonal
        assert!(rows.iter().any(|r| r.s == 2));
        assert!(rows.iter().any(|r| !r.lhs.is_empty() && r.m > 10));
    }

    #[test]
    fn compare_solution_detects_mutation() {
        let level = lv(2, 1);
        let mut sol = solve_phi0_bounded(level, 9, SeriesBounds::capped(2, 2, 2, 2)).unwrap();
        // perturb one coefficient through the public series view
        let mut phi = sol.series().clone();
        let mut c = phi.coeff(5).clone();
        let bumped = c.coeff(0, 0, 0).ring_add(&RPolynomial::constant(big_rational(1, 7)));
        c.set_coeff(0, 0, 0, bumped).unwrap();
        phi.set_coeff(5, c).unwrap();
        sol = Phi0Solution { level, bounds: sol.bounds(), series: phi };
        let rows = compare_solution(&sol, 4, 9).unwrap();
        assert!(rows.iter().any(|r| !r.equal));
    }
}
