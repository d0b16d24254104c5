//! Report types for verification runs and their JSON serialization.
//!
//! The JSON layout is versioned through the `schema` field so downstream
//! tooling can detect format changes: a `FullReport` wraps one `Report` per
//! executed check, each carrying its effective parameters, a status, and the
//! per-case evidence. Reports are deterministic for a fixed check
//! specification except for the wall-time field.

use serde::Serialize;
use std::collections::BTreeMap;

/// Current layout version of the serialized report.
pub const SCHEMA_VERSION: u32 = 1;

/// Outcome of one check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

/// One compared case inside a check: a left-hand value, a right-hand value,
/// and the observed discrepancy — `delta` for numeric comparisons,
/// `coeff_diff` for exact polynomial ones. Skip reasons are encoded as a
/// case whose `desc` states the reason and whose values are empty.
#[derive(Clone, Debug, Serialize)]
pub struct CaseReport {
    pub desc: String,
    pub lhs: String,
    pub rhs: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coeff_diff: Option<String>,
}

impl CaseReport {
    /// Case comparing two exact objects; `coeff_diff` is their difference
    /// when they disagree.
    pub fn exact(
        desc: impl Into<String>,
        lhs: impl Into<String>,
        rhs: impl Into<String>,
        coeff_diff: Option<String>,
    ) -> Self {
        CaseReport {
            desc: desc.into(),
            lhs: lhs.into(),
            rhs: rhs.into(),
            delta: None,
            coeff_diff,
        }
    }

    /// Case comparing two numeric values with the observed central deviation.
    pub fn numeric(
        desc: impl Into<String>,
        lhs: impl Into<String>,
        rhs: impl Into<String>,
        delta: impl Into<String>,
    ) -> Self {
        CaseReport {
            desc: desc.into(),
            lhs: lhs.into(),
            rhs: rhs.into(),
            delta: Some(delta.into()),
            coeff_diff: None,
        }
    }

    /// Free-form case used for skip reasons and summary lines.
    pub fn note(desc: impl Into<String>) -> Self {
        CaseReport {
            desc: desc.into(),
            lhs: String::new(),
            rhs: String::new(),
            delta: None,
            coeff_diff: None,
        }
    }
}

/// Result of one check run: the check id, the effective parameters after
/// defaults were merged, the status, per-case evidence, and wall time.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub id: String,
    pub params: BTreeMap<String, String>,
    pub status: CheckStatus,
    pub cases: Vec<CaseReport>,
    pub ms: u128,
}

/// Aggregated run across several checks, in catalogue order.
#[derive(Debug, Serialize)]
pub struct FullReport {
    pub schema: u32,
    pub tool_version: String,
    pub checks: Vec<Report>,
}

impl FullReport {
    pub fn new(checks: Vec<Report>) -> Self {
        FullReport {
            schema: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            checks,
        }
    }

    /// Process exit code for this run: any failure maps to 1, a run in which
    /// every check was skipped maps to 3 (nothing was actually verified), and
    /// everything else — all executed checks passed — maps to 0.
    pub fn exit_code(&self) -> i32 {
        if self.checks.iter().any(|c| c.status == CheckStatus::Fail) {
            1
        } else if !self.checks.is_empty()
            && self.checks.iter().all(|c| c.status == CheckStatus::Skipped)
        {
            3
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(status: CheckStatus) -> Report {
        Report {
            id: "stub".into(),
            params: BTreeMap::new(),
            status,
            cases: vec![],
            ms: 0,
        }
    }

    #[test]
    fn exit_codes_follow_the_fail_skip_pass_ladder() {
        let pass = FullReport::new(vec![report(CheckStatus::Pass)]);
        assert_eq!(pass.exit_code(), 0);

        let mixed = FullReport::new(vec![report(CheckStatus::Pass), report(CheckStatus::Skipped)]);
        assert_eq!(mixed.exit_code(), 0);

        let failed = FullReport::new(vec![
            report(CheckStatus::Pass),
            report(CheckStatus::Fail),
            report(CheckStatus::Skipped),
        ]);
        assert_eq!(failed.exit_code(), 1);

        let skipped = FullReport::new(vec![report(CheckStatus::Skipped)]);
        assert_eq!(skipped.exit_code(), 3);
    }

    #[test]
    fn json_omits_absent_discrepancy_fields() {
        let mut r = report(CheckStatus::Pass);
        r.cases.push(CaseReport::note("reason only"));
        r.cases.push(CaseReport::numeric("n", "1.0", "1.0", "0e0"));
        let text = FullReport::new(vec![r]).to_json();
        assert!(text.contains("\"schema\": 1"));
        assert!(text.contains("\"delta\": \"0e0\""));
        assert!(!text.contains("coeff_diff"));
    }
}
