//! Named verification checks over the exact kernel and the numeric evaluator.
//!
//! Every check has a stable id, a kind (`exact` or `numeric`), a one-line
//! summary, and a default parameter set; requests may override individual
//! parameters by name. A check compares two independent routes to the same
//! quantity — generating-function solver against brute-force sums, nested
//! series against closed forms — and reports per-case evidence. The contract:
//!
//! * a failing check always carries at least one concrete counterexample;
//! * infeasible parameters produce a `skipped` report whose reason is spelled
//!   out as a case, never a silent pass;
//! * for a fixed specification the outcome is deterministic;
//! * negative controls (`negctl-*`) deliberately inject a defect and pass
//!   only when the comparison harness catches it.

mod checks;
mod report;

pub use report::{CaseReport, CheckStatus, FullReport, Report, SCHEMA_VERSION};

use crate::genfun::GenfunError;
use crate::index::IndexError;
use crate::level::LevelError;
use crate::numeric::NumericError;
use num::BigRational;
use serde::Serialize;
use std::collections::BTreeMap;
use std::str::FromStr;
use std::sync::Mutex;
use std::time::Instant;
use thiserror::Error;

/// Whether a check compares exact objects (polynomial identities over ℚ[r])
/// or floating values with certified error bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckKind {
    Exact,
    Numeric,
}

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("unknown check id `{0}`")]
    UnknownCheck(String),
    #[error("invalid parameter `{name}`: {reason}")]
    BadParameter { name: String, reason: String },
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error(transparent)]
    Genfun(#[from] GenfunError),
    #[error(transparent)]
    Level(#[from] LevelError),
    #[error(transparent)]
    Index(#[from] IndexError),
}

/// A check request: the id plus any parameter overrides. Parameters not
/// listed here keep their catalogue defaults.
#[derive(Clone, Debug)]
pub struct CheckSpec {
    pub id: String,
    pub parameters: BTreeMap<String, String>,
    pub kind: CheckKind,
}

impl CheckSpec {
    /// Specification for `id` with all parameters at their defaults.
    pub fn by_id(id: &str) -> Result<Self, VerifyError> {
        let info = check_info(id).ok_or_else(|| VerifyError::UnknownCheck(id.to_string()))?;
        Ok(CheckSpec {
            id: info.id.to_string(),
            parameters: BTreeMap::new(),
            kind: info.kind,
        })
    }

    /// Override one parameter; names are validated when the check runs.
    pub fn with_parameter(mut self, name: &str, value: &str) -> Self {
        self.parameters.insert(name.to_string(), value.to_string());
        self
    }
}

/// Catalogue entry: stable id, kind, summary, and the default parameters.
pub struct CheckInfo {
    pub id: &'static str,
    pub kind: CheckKind,
    pub summary: &'static str,
    pub defaults: &'static [(&'static str, &'static str)],
}

/// Every check this tool knows, in canonical report order.
pub const CATALOGUE: &[CheckInfo] = &[
    CheckInfo {
        id: "thm-main-exact",
        kind: CheckKind::Exact,
        summary: "solver coefficients of the interpolated generating function equal brute-force sums over admissible indices",
        defaults: &[
            ("modulus", "2"),
            ("residue", "1"),
            ("m_max", "41"),
            ("max_weight", "7"),
        ],
    },
    CheckInfo {
        id: "ode-residual",
        kind: CheckKind::Exact,
        summary: "the solved generating function satisfies its defining differential equation to the retained order",
        defaults: &[("levels", "1,1;2,1;2,2;3,2;4,3"), ("m_max", "41")],
    },
    CheckInfo {
        id: "recurrence-residual",
        kind: CheckKind::Exact,
        summary: "brute-force coefficient tables satisfy the two defining recurrences identically",
        defaults: &[("levels", "1,1;2,1"), ("k_max", "6"), ("m_max", "20")],
    },
    CheckInfo {
        id: "example-k3",
        kind: CheckKind::Numeric,
        summary: "weight-3 combination of nested values equals 2 t(2) log 2 in both the strict and star forms",
        defaults: &[("a", "1"), ("precision", "30"), ("tol", "1e-10")],
    },
    CheckInfo {
        id: "example-k4",
        kind: CheckKind::Numeric,
        summary: "weight-4 combination of nested values equals (2/3) t(2)^2 + 2 t(2) log^2 2 in both forms",
        defaults: &[("a", "1"), ("precision", "30"), ("tol", "1e-10")],
    },
    CheckInfo {
        id: "weighted-sum",
        kind: CheckKind::Numeric,
        summary: "interpolated depth-weighted sums match the depth-one closed form over a (k, a, r) grid",
        defaults: &[
            ("k_list", "3,4,5"),
            ("a_list", "1,2"),
            ("r_list", "0,1,1/2"),
            ("precision", "30"),
            ("rel_tol", "1e-8"),
        ],
    },
    CheckInfo {
        id: "maxheight",
        kind: CheckKind::Numeric,
        summary: "maximal-height generating function coefficients match brute-force interpolated sums",
        defaults: &[
            ("modulus", "2"),
            ("residue", "1"),
            ("k_max", "8"),
            ("r_list", "0,1,1/2"),
            ("precision", "25"),
            ("tol", "1e-8"),
        ],
    },
    CheckInfo {
        id: "twos-genfun",
        kind: CheckKind::Numeric,
        summary: "generating function of all-twos values matches direct interpolated evaluation",
        defaults: &[
            ("levels", "1,1;2,1"),
            ("n_max", "5"),
            ("r_list", "0,1,1/2"),
            ("precision", "30"),
            ("tol", "1e-10"),
        ],
    },
    CheckInfo {
        id: "height-one",
        kind: CheckKind::Numeric,
        summary: "height-one hypergeometric closed form matches interpolated values coefficient by coefficient",
        defaults: &[
            ("modulus", "2"),
            ("residue", "1"),
            ("m_list", "2,3"),
            ("r_list", "0,1"),
            ("n_max", "6"),
            ("precision", "20"),
            ("tol", "1e-6"),
        ],
    },
    CheckInfo {
        id: "sanity-reductions",
        kind: CheckKind::Numeric,
        summary: "depth-one values reduce to the classical zeta values they must equal",
        defaults: &[("k_list", "2,3,4"), ("precision", "30"), ("tol", "1e-20")],
    },
    CheckInfo {
        id: "specialization-exact",
        kind: CheckKind::Exact,
        summary: "interpolation polynomials specialize at 0 and 1 to the strict and star coefficient tables",
        defaults: &[
            ("samples", "50"),
            ("seed", "20260815"),
            ("max_weight", "9"),
            ("max_depth", "4"),
            ("m_max", "12"),
        ],
    },
    CheckInfo {
        id: "negctl-recurrence",
        kind: CheckKind::Exact,
        summary: "negative control: a 1e-6 perturbation of one solver coefficient must be flagged",
        defaults: &[("modulus", "2"), ("residue", "1"), ("m_max", "20")],
    },
    CheckInfo {
        id: "negctl-enumeration",
        kind: CheckKind::Exact,
        summary: "negative control: dropping one index from the brute-force enumeration must be flagged",
        defaults: &[("modulus", "2"), ("residue", "1"), ("m_max", "20")],
    },
    CheckInfo {
        id: "negctl-constant",
        kind: CheckKind::Numeric,
        summary: "negative control: a 1e-6 shift of the t(2) constant must break the weight-3 identity",
        defaults: &[("precision", "30"), ("tol", "1e-10")],
    },
    CheckInfo {
        id: "err-soundness",
        kind: CheckKind::Numeric,
        summary: "reported error bounds dominate the drift under recomputation at higher precision",
        defaults: &[("precision", "20"), ("delta_p", "10")],
    },
];

/// All catalogue entries in canonical order.
pub fn catalogue() -> &'static [CheckInfo] {
    CATALOGUE
}

/// Catalogue entry for `id`, if any.
pub fn check_info(id: &str) -> Option<&'static CheckInfo> {
    CATALOGUE.iter().find(|c| c.id == id)
}

/// Effective parameters of a check run: catalogue defaults overlaid with the
/// request's overrides. Override names must exist in the defaults — a typo'd
/// parameter would otherwise silently run the default configuration.
pub(crate) struct Params {
    map: BTreeMap<String, String>,
}

impl Params {
    fn new(info: &CheckInfo, overrides: &BTreeMap<String, String>) -> Result<Self, VerifyError> {
        let mut map: BTreeMap<String, String> = info
            .defaults
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect();
        for (k, v) in overrides {
            if !map.contains_key(k) {
                return Err(VerifyError::BadParameter {
                    name: k.clone(),
                    reason: format!("check `{}` takes no such parameter", info.id),
                });
            }
            map.insert(k.clone(), v.clone());
        }
        Ok(Params { map })
    }

    pub(crate) fn effective(&self) -> BTreeMap<String, String> {
        self.map.clone()
    }

    fn raw(&self, name: &str) -> Result<&str, VerifyError> {
        self.map
            .get(name)
            .map(String::as_str)
            .ok_or_else(|| VerifyError::BadParameter {
                name: name.to_string(),
                reason: "parameter not declared for this check".into(),
            })
    }

    fn parse<T: FromStr>(&self, name: &str, what: &str) -> Result<T, VerifyError> {
        let raw = self.raw(name)?;
        raw.parse().map_err(|_| VerifyError::BadParameter {
            name: name.to_string(),
            reason: format!("`{raw}` is not {what}"),
        })
    }

    pub(crate) fn get_u32(&self, name: &str) -> Result<u32, VerifyError> {
        self.parse(name, "a nonnegative integer")
    }

    pub(crate) fn get_usize(&self, name: &str) -> Result<usize, VerifyError> {
        self.parse(name, "a nonnegative integer")
    }

    pub(crate) fn get_u64(&self, name: &str) -> Result<u64, VerifyError> {
        self.parse(name, "a nonnegative integer")
    }

    pub(crate) fn get_f64(&self, name: &str) -> Result<f64, VerifyError> {
        self.parse(name, "a floating-point number")
    }

    /// Comma-separated list of nonnegative integers, e.g. `2,3,4`.
    pub(crate) fn get_u32_list(&self, name: &str) -> Result<Vec<u32>, VerifyError> {
        let raw = self.raw(name)?;
        raw.split(',')
            .map(|piece| {
                piece.trim().parse().map_err(|_| VerifyError::BadParameter {
                    name: name.to_string(),
                    reason: format!("`{piece}` is not a nonnegative integer"),
                })
            })
            .collect()
    }

    /// Comma-separated list of rationals, each `p`, `-p`, or `p/q`.
    pub(crate) fn get_rational_list(&self, name: &str) -> Result<Vec<BigRational>, VerifyError> {
        let raw = self.raw(name)?;
        raw.split(',')
            .map(|piece| {
                parse_rational(piece.trim()).ok_or_else(|| VerifyError::BadParameter {
                    name: name.to_string(),
                    reason: format!("`{piece}` is not a rational (use p or p/q)"),
                })
            })
            .collect()
    }

    /// Semicolon-separated list of `N,a` pairs, e.g. `1,1;2,1`.
    pub(crate) fn get_level_list(&self, name: &str) -> Result<Vec<(u32, u32)>, VerifyError> {
        let raw = self.raw(name)?;
        raw.split(';')
            .map(|pair| {
                let mut parts = pair.split(',').map(str::trim);
                let bad = || VerifyError::BadParameter {
                    name: name.to_string(),
                    reason: format!("`{pair}` is not a modulus,residue pair"),
                };
                let n: u32 = parts.next().and_then(|p| p.parse().ok()).ok_or_else(bad)?;
                let a: u32 = parts.next().and_then(|p| p.parse().ok()).ok_or_else(bad)?;
                if parts.next().is_some() {
                    return Err(bad());
                }
                Ok((n, a))
            })
            .collect()
    }
}

/// Parses `p`, `-p`, or `p/q` into an exact rational.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((num, den)) => {
            let n: num::BigInt = num.trim().parse().ok()?;
            let d: num::BigInt = den.trim().parse().ok()?;
            if d == num::BigInt::from(0) {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => {
            let n: num::BigInt = text.parse().ok()?;
            Some(BigRational::from_integer(n))
        }
    }
}

/// Runs one check. Unknown ids and malformed parameters are errors; a check
/// whose parameters are infeasible (for example a tolerance below what the
/// evaluator can certify) returns a `skipped` report with the reason recorded
/// as its single case.
pub fn run_check(spec: &CheckSpec) -> Result<Report, VerifyError> {
    let info = check_info(&spec.id).ok_or_else(|| VerifyError::UnknownCheck(spec.id.clone()))?;
    let params = Params::new(info, &spec.parameters)?;
    let started = Instant::now();
    let (status, cases) = checks::dispatch(info.id, &params)?;
    Ok(Report {
        id: info.id.to_string(),
        params: params.effective(),
        status,
        cases,
        ms: started.elapsed().as_millis(),
    })
}

/// Runs `specs` on up to `jobs` worker threads and aggregates the reports in
/// the order the specs were given, regardless of scheduling. The first hard
/// error (unknown id, malformed parameter, internal failure) aborts the run.
pub fn run_all(specs: &[CheckSpec], jobs: usize) -> Result<FullReport, VerifyError> {
    let jobs = jobs.max(1).min(specs.len().max(1));
    let queue = Mutex::new((0..specs.len()).collect::<Vec<usize>>());
    let slots: Mutex<Vec<Option<Result<Report, VerifyError>>>> =
        Mutex::new((0..specs.len()).map(|_| None).collect());

    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let next = {
                    let mut q = queue.lock().expect("queue lock");
                    if q.is_empty() {
                        break;
                    }
                    q.remove(0)
                };
                let outcome = run_check(&specs[next]);
                slots.lock().expect("slot lock")[next] = Some(outcome);
            });
        }
    });

    let mut reports = Vec::with_capacity(specs.len());
    for slot in slots.into_inner().expect("slot lock") {
        reports.push(slot.expect("every queued check ran")?);
    }
    Ok(FullReport::new(reports))
}

/// Default specifications for the entire catalogue, in canonical order.
pub fn default_specs() -> Vec<CheckSpec> {
    CATALOGUE
        .iter()
        .map(|info| CheckSpec {
            id: info.id.to_string(),
            parameters: BTreeMap::new(),
            kind: info.kind,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_check_id_is_an_error() {
        let err = CheckSpec::by_id("no-such-check").unwrap_err();
        assert!(matches!(err, VerifyError::UnknownCheck(_)));

        let spec = CheckSpec {
            id: "also-missing".into(),
            parameters: BTreeMap::new(),
            kind: CheckKind::Exact,
        };
        assert!(matches!(run_check(&spec), Err(VerifyError::UnknownCheck(_))));
    }

    #[test]
    fn unknown_parameter_name_is_rejected() {
        let spec = CheckSpec::by_id("example-k3")
            .unwrap()
            .with_parameter("presicion", "30");
        assert!(matches!(
            run_check(&spec),
            Err(VerifyError::BadParameter { .. })
        ));
    }

    #[test]
    fn catalogue_ids_are_unique_and_resolvable() {
        for info in catalogue() {
            assert_eq!(check_info(info.id).unwrap().id, info.id);
            assert_eq!(
                catalogue().iter().filter(|c| c.id == info.id).count(),
                1,
                "duplicate id {}",
                info.id
            );
        }
    }

    #[test]
    fn rational_parsing_round_trips() {
        use crate::ring::big_rational;
        assert_eq!(parse_rational("1/2").unwrap(), big_rational(1, 2));
        assert_eq!(parse_rational("-3").unwrap(), big_rational(-3, 1));
        assert_eq!(parse_rational(" 0 ").unwrap(), big_rational(0, 1));
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("x").is_none());
    }
}
