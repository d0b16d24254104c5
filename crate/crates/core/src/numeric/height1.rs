//! Numeric v-expansion of the height-one closed form
//!
//!   Σ_{n≥1} t^r(m, {1}^{n-1}) v^{n-1}
//!     = 1/(a^{m-1}(a - vr)) · Σ_{j≥0} T_j(v),
//!   T_j(v) = ((κ0 + vB)_j / (λ0 + vD)_j) · (a/(a+jN))^{m-1}
//!
//! with κ0 = a/N, λ0 = (a+N)/N, B = (1-r)/N, D = -r/N ((x)_j is the rising
//! factorial). The series is evaluated as a formal truncated polynomial in v:
//! the term recursion T_{j+1} = T_j · (κ0+j+vB)/(λ0+j+vD) · E_j^{m-1} is a
//! linear multiply and a linear divide on the coefficient vector, so one
//! sweep to a cutoff M gives every v-degree at once.
//!
//! Per v-degree t the coefficient of T_j behaves like j^{-m} times a degree-t
//! polynomial in ln j. The tail past M is estimated by fitting the model
//! Σ_{q=m..m+2} Σ_{s≤t} c_{q,s} j^{-q} (ln j - ln M)^s on geometrically
//! spaced sample nodes below M and integrating it (Euler–Maclaurin to the
//! half-sample term). The linear fit runs in double precision on a row-scaled
//! (each equation multiplied by j^m), column-equilibrated system; interval
//! arithmetic cannot certify the badly conditioned high-degree solve, and it
//! does not need to: the reported error combines a held-out-node misfit, the
//! disagreement between two shifted fit windows, and the first omitted
//! Euler–Maclaurin correction, so fit inaccuracy inflates the bound along
//! with truncation — a certified-by-construction heuristic with safety
//! factors, not a proof.

use std::collections::BTreeMap;

use num::{BigInt, BigRational, One, Zero};

use crate::bigreal::BigReal;
use crate::level::Level;
use crate::numeric::NumericError;

const M_FIRST: u64 = 1 << 16;
const M_LAST: u64 = 1 << 19;

/// First `n_count` v-coefficients of the height-one closed form; coefficient
/// n-1 matches t^r(m, {1}^{n-1}). Errors are certified at or below `tol`
/// or the call reports the best bound it could reach.
pub fn height_one_rhs(
    level: &Level,
    m: u32,
    r: &BigRational,
    n_count: usize,
    p: u32,
    tol: f64,
) -> Result<Vec<BigReal>, NumericError> {
    if m < 2 {
        return Err(NumericError::Divergent(format!(
            "height-one series needs leading exponent m >= 2, got {m}"
        )));
    }
    if n_count == 0 || n_count > 6 {
        return Err(NumericError::InvalidParameter(format!(
            "supported v-degree count is 1..=6, got {n_count}"
        )));
    }
    if !tol.is_finite() || tol <= 0.0 {
        return Err(NumericError::InvalidParameter(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let scale = p + 10;
    let a = BigRational::from_integer(level.residue().into());
    let a_pow_m = BigRational::from_integer(BigInt::from(level.residue()).pow(m));
    let r_over_a = r / &a;

    let mut best = f64::INFINITY;
    let mut cutoff = M_FIRST;
    loop {
        let f = term_sum_with_tail(level, m, r, n_count, scale, cutoff)?;
        // RHS_t = a^{-m} Σ_{s≤t} (r/a)^s F_{t-s}  (geometric prefactor).
        let mut out = Vec::with_capacity(n_count);
        for t in 0..n_count {
            let mut acc = BigReal::zero(scale);
            for s in 0..=t {
                let w = r_over_a.pow(s as i32) / &a_pow_m;
                acc = acc.add(&f[t - s].mul(&BigReal::from_ratio(&w, scale)));
            }
            out.push(acc);
        }
        let reached = out.iter().map(BigReal::err).fold(0.0, f64::max);
        if reached <= tol {
            return Ok(out);
        }
        best = best.min(reached);
        cutoff *= 2;
        if cutoff > M_LAST {
            return Err(NumericError::ToleranceUnreachable { tol, reached: best });
        }
    }
}

/// Sample node i: M · 2^{-i/2}, floored at 16.
fn node(m_cut: u64, i: usize) -> u64 {
    let v = (m_cut as f64 * 2f64.powf(-(i as f64) / 2.0)).round() as u64;
    v.max(16)
}

/// Σ_{j=0}^{M} T_j(v) plus a fitted tail, per v-degree, with the tail-model
/// error folded into each coefficient's bound.
fn term_sum_with_tail(
    level: &Level,
    m: u32,
    r: &BigRational,
    n_count: usize,
    scale: u32,
    m_cut: u64,
) -> Result<Vec<BigReal>, NumericError> {
    let n_mod = BigRational::from_integer(level.modulus().into());
    let a = BigRational::from_integer(level.residue().into());
    let kappa0 = &a / &n_mod;
    let lambda0 = (&a + &n_mod) / &n_mod;
    let b_slope = (BigRational::one() - r) / &n_mod;
    let d_slope = -(r / &n_mod);
    let b_real = BigReal::from_ratio(&b_slope, scale);
    let d_real = BigReal::from_ratio(&d_slope, scale);
    let b_is_zero = b_slope.is_zero();
    let d_is_zero = d_slope.is_zero();

    let mut wanted: BTreeMap<u64, Vec<BigReal>> = BTreeMap::new();
    for i in 0..=(3 * n_count + 1) {
        wanted.entry(node(m_cut, i)).or_default();
    }

    // Forward sweep of the truncated-polynomial term recursion.
    let mut term: Vec<BigReal> = vec![BigReal::zero(scale); n_count];
    term[0] = BigReal::one(scale);
    let mut sums: Vec<BigReal> = vec![BigReal::zero(scale); n_count];
    let n_int = u64::from(level.modulus());
    let a_int = u64::from(level.residue());
    for j in 0..=m_cut {
        for t in 0..n_count {
            sums[t] = sums[t].add(&term[t]);
        }
        if let Some(slot) = wanted.get_mut(&j) {
            *slot = term.clone();
        }
        // T_{j+1} = T_j (A_j + B v) / (C_j + D v) · E_j^{m-1} with
        // A_j = κ0+j, C_j = λ0+j, E_j = (a+jN)/(a+(j+1)N).
        let jq = BigRational::from_integer(j.into());
        let a_j = BigReal::from_ratio(&(&kappa0 + &jq), scale);
        let recip_c = BigReal::from_ratio(&(&lambda0 + &jq), scale).recip()?;
        let e_j = BigRational::new(
            (a_int + j * n_int).into(),
            (a_int + (j + 1) * n_int).into(),
        );
        let e_pow = BigReal::from_ratio(&e_j, scale).powi(m - 1);
        let mut prev_old = BigReal::zero(scale); // T_j coefficient one degree down
        let mut prev_v = BigReal::zero(scale); // quotient coefficient one degree down
        for t in 0..n_count {
            let old_t = term[t].clone();
            let mut u = old_t.mul(&a_j);
            if t >= 1 && !b_is_zero {
                u = u.add(&prev_old.mul(&b_real));
            }
            let w = if t >= 1 && !d_is_zero {
                u.sub(&prev_v.mul(&d_real))
            } else {
                u
            };
            let v_t = w.mul(&recip_c);
            term[t] = v_t.mul(&e_pow);
            prev_old = old_t;
            prev_v = v_t;
        }
    }

    // Per-degree tail fit on the recorded nodes. Each equation is scaled by
    // j^m (exactly, before the final f64 conversion), so basis entries are
    // j^{m-q} (ln j - ln M)^s with m-q in {0,-1,-2} — in f64 range for any m.
    let mut f_out = Vec::with_capacity(n_count);
    for t in 0..n_count {
        let unknowns: Vec<(u32, usize)> = (m..=m + 2)
            .flat_map(|q| (0..=t).map(move |s| (q, s)))
            .collect();
        let n_unk = unknowns.len();
        let basis_at = |j: u64| -> Vec<f64> {
            let lj = (j as f64 / m_cut as f64).ln();
            unknowns
                .iter()
                .map(|&(q, s)| (j as f64).powi(-((q - m) as i32)) * lj.powi(s as i32))
                .collect()
        };
        let sample = |i: usize| -> &BigReal { &wanted[&node(m_cut, i)][t] };
        let scaled_sample = |i: usize| -> f64 {
            let j_pow_m = BigRational::from_integer(BigInt::from(node(m_cut, i)).pow(m));
            sample(i).mul(&BigReal::from_ratio(&j_pow_m, scale)).approx_f64()
        };

        let fit = |offset: usize| -> Result<Vec<f64>, NumericError> {
            let mut rows = Vec::with_capacity(n_unk);
            let mut rhs = Vec::with_capacity(n_unk);
            for i in offset..offset + n_unk {
                rows.push(basis_at(node(m_cut, i)));
                rhs.push(scaled_sample(i));
            }
            solve_equilibrated(rows, rhs)
        };
        let coeffs_a = fit(0)?;
        let coeffs_b = fit(1)?;
        let tail_a = model_tail(&coeffs_a, &unknowns, m_cut, scale)?;
        let tail_b = model_tail(&coeffs_b, &unknowns, m_cut, scale)?;
        let window_shift = tail_a.sub(&tail_b).abs_upper();

        // Held-out node one half-step below window B, compared in the same
        // j^m-scaled space (the ratio is scale-invariant).
        let j_hold = node(m_cut, n_unk + 1);
        let held = scaled_sample(n_unk + 1);
        let pred: f64 = coeffs_a
            .iter()
            .zip(basis_at(j_hold))
            .map(|(c, psi)| c * psi)
            .sum();
        let rho = (pred - held).abs() / held.abs().max(1e-30);

        // First omitted Euler–Maclaurin correction: |f'(M+1)|/2 per column
        // (6x the theoretical B_2 coefficient, as the safety factor). The
        // z^{-q-1} power is kept exact until the final magnitude so it does
        // not underflow for large m.
        let z_int = m_cut + 1;
        let lz = (z_int as f64 / m_cut as f64).ln();
        let mut em_bound = 0.0f64;
        for (c, &(q, s)) in coeffs_a.iter().zip(&unknowns) {
            let z_pow = BigReal::from_ratio(
                &BigRational::new(BigInt::one(), BigInt::from(z_int).pow(q + 1)),
                scale,
            )
            .abs_upper();
            let deriv = z_pow
                * (q as f64 * lz.powi(s as i32)
                    + if s >= 1 {
                        s as f64 * lz.powi(s as i32 - 1)
                    } else {
                        0.0
                    });
            em_bound += c.abs() * deriv / 2.0;
        }

        let fit_err = 4.0 * rho * tail_a.abs_upper() + 2.0 * window_shift + em_bound;
        if !fit_err.is_finite() {
            return Err(NumericError::Inconsistent(
                "tail-model fit produced a non-finite error bound".into(),
            ));
        }
        f_out.push(sums[t].add(&tail_a).with_err_added(fit_err));
    }
    Ok(f_out)
}

/// Σ_{j>M} of the fitted model: exact integral recursion
/// J_{q,s}(z) = z^{1-q} L^s/(q-1) + (s/(q-1)) J_{q,s-1}(z) at z = M+1 plus
/// the half-sample boundary term f(z)/2.
fn model_tail(
    coeffs: &[f64],
    unknowns: &[(u32, usize)],
    m_cut: u64,
    scale: u32,
) -> Result<BigReal, NumericError> {
    let z_int = m_cut + 1;
    let lz = BigReal::from_ratio(&BigRational::new(z_int.into(), m_cut.into()), scale).ln()?;
    let mut tail = BigReal::zero(scale);
    for (&c_f, &(q, s)) in coeffs.iter().zip(unknowns) {
        let c = match BigRational::from_float(c_f) {
            Some(v) => BigReal::from_ratio(&v, scale),
            None => {
                return Err(NumericError::Inconsistent(
                    "tail-model fit produced a non-finite coefficient".into(),
                ))
            }
        };
        let z_pow = |e: u32| -> BigReal {
            BigReal::from_ratio(
                &BigRational::new(BigInt::one(), BigInt::from(z_int).pow(e)),
                scale,
            )
        };
        let mut integral = BigReal::zero(scale);
        for ss in 0..=s {
            integral = z_pow(q - 1)
                .mul(&lz.powi(ss as u32))
                .add(&integral.mul_int(ss as i64))
                .div_int(u64::from(q) - 1);
        }
        let half = z_pow(q).mul(&lz.powi(s as u32)).div_int(2);
        tail = tail.add(&c.mul(&integral.add(&half)));
    }
    Ok(tail)
}

/// Dense Gaussian elimination with partial pivoting in f64, after dividing
/// each column by its largest magnitude (the log-power basis is badly scaled;
/// equilibration keeps the pivots meaningful). The surrounding error model,
/// not the solver, accounts for the fit inaccuracy.
fn solve_equilibrated(
    mut rows: Vec<Vec<f64>>,
    mut rhs: Vec<f64>,
) -> Result<Vec<f64>, NumericError> {
    let n = rows.len();
    let singular = || NumericError::Inconsistent("singular matrix in tail-model fit".into());
    let mut col_scale = vec![0.0f64; n];
    for (k, entry) in col_scale.iter_mut().enumerate() {
        let biggest = rows.iter().map(|r| r[k].abs()).fold(0.0f64, f64::max);
        if !biggest.is_finite() || biggest == 0.0 {
            return Err(singular());
        }
        *entry = biggest;
        for row in &mut rows {
            row[k] /= biggest;
        }
    }
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| {
                rows[i][col]
                    .abs()
                    .partial_cmp(&rows[j][col].abs())
                    .expect("finite entries")
            })
            .expect("nonempty");
        if !rows[pivot][col].is_finite() || rows[pivot][col].abs() < 1e-250 {
            return Err(singular());
        }
        rows.swap(col, pivot);
        rhs.swap(col, pivot);
        for i in col + 1..n {
            let factor = rows[i][col] / rows[col][col];
            for k in col..n {
                rows[i][k] -= factor * rows[col][k];
            }
            rhs[i] -= factor * rhs[col];
        }
    }
    let mut x = vec![0.0f64; n];
    for col in (0..n).rev() {
        let mut acc = rhs[col];
        for k in col + 1..n {
            acc -= rows[col][k] * x[k];
        }
        x[col] = acc / rows[col][col];
    }
    for (xi, cs) in x.iter_mut().zip(&col_scale) {
        *xi /= *cs;
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::depth1::t_depth1;
    use crate::numeric::nested::{t_interp_eval, t_nested};
    use crate::index::Index;
    use crate::ring::{big_rational, CoefficientRing};

    fn level21() -> Level {
        Level::new(2, 1).unwrap()
    }

    #[test]
    fn constant_coefficient_is_the_depth_one_value() {
        for m in [2u32, 3] {
            let coeffs =
                height_one_rhs(&level21(), m, &big_rational(1, 2), 1, 20, 1e-8).expect("rhs");
            let want = t_depth1(&level21(), m, 25).unwrap();
            assert!(coeffs[0].ring_eq(&want), "m={m}: {} vs {want}", coeffs[0]);
            assert!(coeffs[0].err() <= 1e-8);
        }
    }

    #[test]
    fn linear_coefficient_matches_strict_nested_value_at_r0() {
        let coeffs = height_one_rhs(&level21(), 2, &big_rational(0, 1), 2, 20, 1e-8).unwrap();
        let idx = Index::new(vec![2, 1]).unwrap();
        let want = t_nested(&level21(), &idx, 20, 1e-12).unwrap();
        assert!(
            coeffs[1].ring_eq(&want),
            "v-coefficient {} vs nested {want}",
            coeffs[1]
        );
    }

    #[test]
    fn linear_coefficient_matches_interpolated_value_at_r_half() {
        let r = big_rational(1, 2);
        let coeffs = height_one_rhs(&level21(), 2, &r, 2, 20, 1e-8).unwrap();
        let idx = Index::new(vec![2, 1]).unwrap();
        let want = t_interp_eval(&level21(), &idx, &r, 20, 1e-12).unwrap();
        assert!(
            coeffs[1].ring_eq(&want),
            "v-coefficient {} vs interpolated {want}",
            coeffs[1]
        );
    }

    #[test]
    fn rejects_divergent_and_malformed_requests() {
        let r = big_rational(0, 1);
        assert!(matches!(
            height_one_rhs(&level21(), 1, &r, 2, 20, 1e-8),
            Err(NumericError::Divergent(_))
        ));
        assert!(matches!(
            height_one_rhs(&level21(), 2, &r, 0, 20, 1e-8),
            Err(NumericError::InvalidParameter(_))
        ));
        assert!(matches!(
            height_one_rhs(&level21(), 2, &r, 7, 20, 1e-8),
            Err(NumericError::InvalidParameter(_))
        ));
        assert!(matches!(
            height_one_rhs(&level21(), 2, &r, 2, 20, 0.0),
            Err(NumericError::InvalidParameter(_))
        ));
    }

    #[test]
    fn unreachable_tolerance_reports_best_bound() {
        match height_one_rhs(&level21(), 2, &big_rational(0, 1), 2, 20, 1e-28) {
            Err(NumericError::ToleranceUnreachable { tol, reached }) => {
                assert_eq!(tol, 1e-28);
                assert!(reached > 1e-28 && reached < 1e-6, "reached {reached}");
            }
            other => panic!("expected unreachable tolerance, got {other:?}"),
        }
    }
}
