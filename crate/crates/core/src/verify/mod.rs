//! Reproduction harness: a registry of numerical and logical claims, each a
//! deterministic scripted check with an expected value and a tolerance.
//!
//! Claims are data ([`Claim`]) so they can be listed, filtered and run in
//! subsets. Results are reported in claim id order whatever the scheduling.

mod claims;
mod report;
mod sufficiency;
mod suites;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use claims::registry;
pub use report::{summary_line, to_csv, to_json, to_markdown, Report};
pub use sufficiency::{decreasing_sufficiency_check, sufficient_condition, SufficiencyReport, SufficientCondition};
pub use suites::{block_form_suite, majorization_suite, oracle_agreement_suite, SuiteTally};

/// Where an expected value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// A value or statement taken from the published source.
    Published,
    /// Computed by an independent oracle (grid scan, closed form, enumeration).
    Derived,
    /// Sanity checks with obvious answers.
    Trivial,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ClaimValue {
    Real(f64),
    Bool(bool),
}

impl ClaimValue {
    fn matches(self, observed: ClaimValue, tolerance: f64) -> bool {
        match (self, observed) {
            (ClaimValue::Real(e), ClaimValue::Real(o)) => (e - o).abs() <= tolerance,
            (ClaimValue::Bool(e), ClaimValue::Bool(o)) => e == o,
            _ => false,
        }
    }
}

impl std::fmt::Display for ClaimValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ClaimValue::Real(v) => write!(f, "{v}"),
            ClaimValue::Bool(b) => write!(f, "{b}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClaimStatus {
    Passed,
    Failed,
    /// The precondition of the check does not hold for the instance.
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimResult {
    pub claim_id: String,
    pub expected: ClaimValue,
    /// `None` when the check did not apply or errored.
    pub observed: Option<ClaimValue>,
    pub tolerance: f64,
    pub passed: bool,
    pub status: ClaimStatus,
    pub provenance: Provenance,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub exploratory: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl ClaimResult {
    pub(crate) fn evaluate(
        claim_id: &str,
        expected: ClaimValue,
        observed: ClaimValue,
        tolerance: f64,
        provenance: Provenance,
    ) -> Self {
        let passed = expected.matches(observed, tolerance);
        ClaimResult {
            claim_id: claim_id.to_string(),
            expected,
            observed: Some(observed),
            tolerance,
            passed,
            status: if passed { ClaimStatus::Passed } else { ClaimStatus::Failed },
            provenance,
            exploratory: false,
            note: None,
        }
    }

    pub(crate) fn not_applicable(claim_id: &str, expected: ClaimValue, tolerance: f64, provenance: Provenance, note: String) -> Self {
        ClaimResult {
            claim_id: claim_id.to_string(),
            expected,
            observed: None,
            tolerance,
            passed: false,
            status: ClaimStatus::NotApplicable,
            provenance,
            exploratory: false,
            note: Some(note),
        }
    }

    /// Counts against the overall verdict.
    pub fn is_failure(&self) -> bool {
        !self.exploratory && self.status == ClaimStatus::Failed
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    /// Random samples for sampled claims.
    pub samples: usize,
    pub seed: u64,
    /// Include claims that probe open questions.
    pub exploratory: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            samples: 500,
            seed: 0x5EED,
            exploratory: false,
        }
    }
}

/// Observed value (or a not-applicable note) produced by a claim's check.
pub enum Observation {
    Value(ClaimValue),
    NotApplicable(String),
}

pub type CheckFn = fn(&VerifyOptions) -> Result<Observation>;

/// A registered claim.
#[derive(Clone)]
pub struct Claim {
    pub id: &'static str,
    /// What is asserted, in words.
    pub statement: &'static str,
    pub expected: ClaimValue,
    pub tolerance: f64,
    pub provenance: Provenance,
    pub exploratory: bool,
    pub check: CheckFn,
}

impl std::fmt::Debug for Claim {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Claim")
            .field("id", &self.id)
            .field("expected", &self.expected)
            .field("tolerance", &self.tolerance)
            .field("provenance", &self.provenance)
            .finish()
    }
}

impl Claim {
    pub fn run(&self, opts: &VerifyOptions) -> ClaimResult {
        let mut res = match (self.check)(opts) {
            Ok(Observation::Value(v)) => {
                ClaimResult::evaluate(self.id, self.expected, v, self.tolerance, self.provenance)
            }
            Ok(Observation::NotApplicable(note)) => {
                ClaimResult::not_applicable(self.id, self.expected, self.tolerance, self.provenance, note)
            }
            Err(e) => ClaimResult {
                status: ClaimStatus::Failed,
                ..ClaimResult::not_applicable(self.id, self.expected, self.tolerance, self.provenance, format!("error: {e}"))
            },
        };
        res.exploratory = self.exploratory;
        res
    }
}

/// Summary of a registered claim, for listings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimInfo {
    pub id: String,
    pub statement: String,
    pub expected: ClaimValue,
    pub tolerance: f64,
    pub provenance: Provenance,
    pub exploratory: bool,
}

impl From<&Claim> for ClaimInfo {
    fn from(c: &Claim) -> Self {
        ClaimInfo {
            id: c.id.to_string(),
            statement: c.statement.to_string(),
            expected: c.expected,
            tolerance: c.tolerance,
            provenance: c.provenance,
            exploratory: c.exploratory,
        }
    }
}

pub fn list_claims() -> Vec<ClaimInfo> {
    registry().iter().map(ClaimInfo::from).collect()
}

pub fn run_claim(claim_id: &str, opts: &VerifyOptions) -> Result<ClaimResult> {
    registry()
        .iter()
        .find(|c| c.id == claim_id)
        .map(|c| c.run(opts))
        .ok_or_else(|| Error::UnknownClaim(claim_id.to_string()))
}

/// Runs the claims whose id contains `filter` (all when `None`), skipping
/// exploratory claims unless enabled. Results are sorted by claim id.
pub fn run_matching(filter: Option<&str>, opts: &VerifyOptions) -> Vec<ClaimResult> {
    let claims: Vec<Claim> = registry()
        .into_iter()
        .filter(|c| opts.exploratory || !c.exploratory)
        .filter(|c| filter.is_none_or(|f| c.id.contains(f)))
        .collect();
    let mut results: Vec<ClaimResult> = claims.par_iter().map(|c| c.run(opts)).collect();
    results.sort_by(|a, b| a.claim_id.cmp(&b.claim_id));
    results
}

pub fn run_all(opts: &VerifyOptions) -> Vec<ClaimResult> {
    run_matching(None, opts)
}
