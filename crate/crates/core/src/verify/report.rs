use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::{ClaimResult, ClaimStatus};

/// A claim run, ready for emission.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub passed: bool,
    pub total: usize,
    pub failed: usize,
    pub not_applicable: usize,
    pub results: Vec<ClaimResult>,
}

impl Report {
    pub fn new(mut results: Vec<ClaimResult>) -> Self {
        results.sort_by(|a, b| a.claim_id.cmp(&b.claim_id));
        let failed = results.iter().filter(|r| r.is_failure()).count();
        let not_applicable = results.iter().filter(|r| r.status == ClaimStatus::NotApplicable).count();
        Report {
            passed: failed == 0,
            total: results.len(),
            failed,
            not_applicable,
            results,
        }
    }
}

pub fn to_json(report: &Report) -> Result<String> {
    serde_json::to_string_pretty(report).map_err(|e| Error::Report(e.to_string()))
}

fn observed_text(r: &ClaimResult) -> String {
    r.observed.map_or_else(|| "-".to_string(), |v| v.to_string())
}

fn status_text(r: &ClaimResult) -> &'static str {
    match (r.status, r.exploratory) {
        (ClaimStatus::Passed, _) => "pass",
        (ClaimStatus::Failed, false) => "FAIL",
        (ClaimStatus::Failed, true) => "fail (exploratory)",
        (ClaimStatus::NotApplicable, _) => "n/a",
    }
}

pub fn to_markdown(report: &Report) -> String {
    let mut out = String::from("# Claim report\n\n");
    out.push_str(&summary_line(report));
    out.push_str("\n\n| claim | provenance | expected | observed | tolerance | status |\n");
    out.push_str("|---|---|---|---|---|---|\n");
    for r in &report.results {
        out.push_str(&format!(
            "| {} | {:?} | {} | {} | {:e} | {} |\n",
            r.claim_id,
            r.provenance,
            r.expected,
            observed_text(r),
            r.tolerance,
            status_text(r)
        ));
    }
    let notes: Vec<&ClaimResult> = report.results.iter().filter(|r| r.note.is_some()).collect();
    if !notes.is_empty() {
        out.push_str("\n## Notes\n\n");
        for r in notes {
            out.push_str(&format!("- {}: {}\n", r.claim_id, r.note.as_deref().unwrap_or_default()));
        }
    }
    out
}

/// Columns: `claim_id, expected, observed, tol, passed`.
pub fn to_csv(report: &Report) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Report(e.to_string());
    w.write_record(["claim_id", "expected", "observed", "tol", "passed"]).map_err(io)?;
    for r in &report.results {
        w.write_record([
            r.claim_id.clone(),
            r.expected.to_string(),
            r.observed.map_or_else(String::new, |v| v.to_string()),
            r.tolerance.to_string(),
            r.passed.to_string(),
        ])
        .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Report(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Report(e.to_string()))
}

pub fn summary_line(report: &Report) -> String {
    format!(
        "{} claims: {} passed, {} failed, {} not applicable",
        report.total,
        report.results.iter().filter(|r| r.status == ClaimStatus::Passed).count(),
        report.failed,
        report.not_applicable
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::{ClaimValue, Provenance};

    fn sample() -> Report {
        Report::new(vec![
            ClaimResult::evaluate("b_claim", ClaimValue::Real(1.0), ClaimValue::Real(1.0), 0.0, Provenance::Trivial),
            ClaimResult::evaluate("a_claim", ClaimValue::Bool(true), ClaimValue::Bool(false), 0.0, Provenance::Derived),
        ])
    }

    #[test]
    fn report_orders_and_counts() {
        let r = sample();
        assert_eq!(r.results[0].claim_id, "a_claim");
        assert_eq!(r.failed, 1);
        assert!(!r.passed);
        assert!(to_markdown(&r).contains("| a_claim | Derived | true | false |"));
    }

    #[test]
    fn csv_columns() {
        let csv = to_csv(&sample()).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("claim_id,expected,observed,tol,passed"));
        assert_eq!(lines.next(), Some("a_claim,true,false,0,false"));
        assert_eq!(lines.next(), Some("b_claim,1,1,0,true"));
    }
}
