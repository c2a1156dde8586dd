//! Exact checkers for the sufficient conditions under which a non-negative
//! matrix attains its operator norm on decreasing vectors.
//!
//! Every checker works on the stored truncation: "for all `l, r`" means
//! `l ≤ rows` and `r ≤ cols`, and the report records the range checked.
//! Comparisons are `lhs + slack ≥ rhs` with an absolute slack (default 0)
//! and an optional relative slack for inputs whose entries carry rounding.

mod blocks;
mod implications;
mod members;
mod scans;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::rearrangement::DEFAULT_ENUMERATION_CAP;
use crate::scalar::Scalar;

pub use blocks::check_block_dominance;
pub use implications::{
    implication_suite, run_implication, Implication, ImplicationTally, ViolationRecord,
};
pub use members::{
    check_member_block_dominance, check_member_column_sums, check_rearranged_block_dominance,
    matching_rearrangement,
};
pub use scans::{
    check_column_decreasing_prefix, check_column_prefix_order, check_prefix_majorization,
    check_row_decreasing, check_row_decreasing_prefix, check_summability_staircase,
    rearrangement_dominates,
};

/// Largest row count for which row subsets are enumerated.
pub const DEFAULT_SUBSET_CAP: usize = 20;
/// Row cap for the existence search over pairs of rearrangements.
pub const DEFAULT_PAIR_SEARCH_CAP: usize = 6;

/// The named conditions. Wire ids (`c12`, `c41star`, …) are the stable
/// identifiers used by the CLI and in reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ConditionId {
    /// Leading `l × r` block sums dominate every `l × r` block sum.
    #[serde(rename = "c12")]
    BlockPrefixDominance,
    /// Every block-form rearrangement `B` is dominated, in leading-row block
    /// sums, by some row rearrangement `C`.
    #[serde(rename = "c13")]
    RearrangedBlockDominance,
    /// Prefix sums of `v` dominate the top-`r` sums of `u` (two-row input).
    #[serde(rename = "c31")]
    PrefixMajorization,
    /// Columns decreasing and leading-row column sums decreasing in `k`.
    #[serde(rename = "c41")]
    ColumnDecreasingPrefix,
    /// Rows decreasing and leading-column row sums decreasing in `j`.
    #[serde(rename = "c41star")]
    RowDecreasingPrefix,
    /// Summability matrix with `a_{j,k} ≥ max(a_{j+1,k}, a_{j+1,k+1})`, `j ≥ k`.
    #[serde(rename = "c44")]
    SummabilityStaircase,
    /// Every block-form rearrangement satisfies the leading-row block inequality.
    #[serde(rename = "c410")]
    MemberBlockDominance,
    /// Every block-form rearrangement has leading-row column sums decreasing in `k`.
    #[serde(rename = "c410star")]
    MemberColumnSumsDecreasing,
    /// Leading-row column sums decreasing in `k`.
    #[serde(rename = "c411")]
    PrefixRowsColumnDominance,
    /// Every row decreasing.
    #[serde(rename = "c412")]
    RowDecreasing,
}

impl ConditionId {
    pub const ALL: [ConditionId; 10] = [
        ConditionId::BlockPrefixDominance,
        ConditionId::RearrangedBlockDominance,
        ConditionId::PrefixMajorization,
        ConditionId::ColumnDecreasingPrefix,
        ConditionId::RowDecreasingPrefix,
        ConditionId::SummabilityStaircase,
        ConditionId::MemberBlockDominance,
        ConditionId::MemberColumnSumsDecreasing,
        ConditionId::PrefixRowsColumnDominance,
        ConditionId::RowDecreasing,
    ];

    pub fn wire_id(self) -> &'static str {
        match self {
            ConditionId::BlockPrefixDominance => "c12",
            ConditionId::RearrangedBlockDominance => "c13",
            ConditionId::PrefixMajorization => "c31",
            ConditionId::ColumnDecreasingPrefix => "c41",
            ConditionId::RowDecreasingPrefix => "c41star",
            ConditionId::SummabilityStaircase => "c44",
            ConditionId::MemberBlockDominance => "c410",
            ConditionId::MemberColumnSumsDecreasing => "c410star",
            ConditionId::PrefixRowsColumnDominance => "c411",
            ConditionId::RowDecreasing => "c412",
        }
    }

    /// Whether the check enumerates block-form rearrangements.
    pub fn enumerates_rearrangements(self) -> bool {
        matches!(
            self,
            ConditionId::RearrangedBlockDominance
                | ConditionId::MemberBlockDominance
                | ConditionId::MemberColumnSumsDecreasing
        )
    }
}

impl fmt::Display for ConditionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.wire_id())
    }
}

impl FromStr for ConditionId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase().replace('*', "star");
        ConditionId::ALL
            .into_iter()
            .find(|c| c.wire_id() == t)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown condition `{s}`")))
    }
}

/// Tolerances, ranges and enumeration caps for the checkers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOptions {
    /// Absolute slack: `lhs + slack ≥ rhs` counts as holding.
    pub slack: f64,
    /// Relative slack, scaled by `max(|lhs|, |rhs|)`.
    pub relative: f64,
    /// Truncate to the leading `rows` rows before checking.
    pub rows: Option<usize>,
    /// Largest `l` for block-sum conditions (defaults to all rows).
    pub l_max: Option<usize>,
    /// Largest `r` for block-sum conditions (defaults to all columns).
    pub r_max: Option<usize>,
    /// Row cap for subset enumeration.
    pub subset_cap: usize,
    /// Row cap for rearrangement enumeration; `None` picks the per-condition default.
    pub perm_cap: Option<usize>,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            slack: 0.0,
            relative: 0.0,
            rows: None,
            l_max: None,
            r_max: None,
            subset_cap: DEFAULT_SUBSET_CAP,
            perm_cap: None,
        }
    }
}

impl CheckOptions {
    /// Relative slack of `1e-12`, for matrices whose entries (like `1/3`) are
    /// rounded so that mathematically equal sums can differ in the last bits.
    pub fn rounding_aware() -> Self {
        CheckOptions {
            relative: 1e-12,
            ..Self::default()
        }
    }

    pub fn with_perm_cap(mut self, cap: usize) -> Self {
        self.perm_cap = Some(cap);
        self
    }

    pub fn with_rows(mut self, rows: usize) -> Self {
        self.rows = Some(rows);
        self
    }

    #[inline]
    pub(crate) fn ge<T: Scalar>(&self, lhs: T, rhs: T) -> bool {
        let slack = T::of(self.slack) + T::of(self.relative) * lhs.abs().max(rhs.abs());
        lhs + slack >= rhs
    }

    pub(crate) fn perm_cap_for(&self, id: ConditionId) -> usize {
        self.perm_cap.unwrap_or(match id {
            ConditionId::RearrangedBlockDominance => DEFAULT_PAIR_SEARCH_CAP,
            _ => DEFAULT_ENUMERATION_CAP,
        })
    }
}

/// Concrete counterexample to a condition. Indices are 1-based; sums are the
/// two sides of the violated inequality (`lhs < rhs`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// Leading `l × r` block sum below the block sum over rows `rows`, columns `cols`.
    Blocks {
        l: usize,
        r: usize,
        rows: Vec<usize>,
        cols: Vec<usize>,
        lhs: f64,
        rhs: f64,
    },
    /// `Σ_{k≤r} v_k` below the sum of `u` over `indices`.
    Majorization {
        r: usize,
        indices: Vec<usize>,
        lhs: f64,
        rhs: f64,
    },
    /// `a_{j,k} < a_{j+1,k}`.
    ColumnStep { j: usize, k: usize, lhs: f64, rhs: f64 },
    /// `a_{j,k} < a_{j,k+1}`.
    RowStep { j: usize, k: usize, lhs: f64, rhs: f64 },
    /// `a_{j,k} < max(a_{j+1,k}, a_{j+1,k+1})`.
    Staircase { j: usize, k: usize, lhs: f64, rhs: f64 },
    /// `Σ_{j≤l} a_{j,k} < Σ_{j≤l} a_{j,k+1}`.
    ColumnPrefix { l: usize, k: usize, lhs: f64, rhs: f64 },
    /// `Σ_{k≤r} a_{j,k} < Σ_{k≤r} a_{j+1,k}`.
    RowPrefix { j: usize, r: usize, lhs: f64, rhs: f64 },
    /// Rearrangement `perm` in block form `(gamma, lambda)` whose leading-`l`
    /// column sums increase from `k` to `k+1`.
    MemberColumnSums {
        perm: Vec<usize>,
        gamma: usize,
        lambda: usize,
        l: usize,
        k: usize,
        lhs: f64,
        rhs: f64,
    },
    /// Rearrangement `perm` whose leading `l × r` block sum is below its
    /// leading-`l` sum over columns `cols`.
    MemberBlocks {
        perm: Vec<usize>,
        gamma: usize,
        lambda: usize,
        l: usize,
        r: usize,
        cols: Vec<usize>,
        lhs: f64,
        rhs: f64,
    },
    /// Block-form rearrangement for which no row rearrangement dominates.
    Unmatched {
        perm: Vec<usize>,
        gamma: usize,
        lambda: usize,
    },
}

/// Verdict of one condition check on one truncation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub condition: ConditionId,
    pub holds: bool,
    pub witness: Option<Witness>,
    /// Rows (or `l` range) covered by the check.
    pub l_max: usize,
    /// Columns (or `r` range) covered by the check.
    pub r_max: usize,
}

impl ConditionReport {
    pub(crate) fn verdict(condition: ConditionId, witness: Option<Witness>, l_max: usize, r_max: usize) -> Self {
        ConditionReport {
            condition,
            holds: witness.is_none(),
            witness,
            l_max,
            r_max,
        }
    }
}

/// Runs condition `id` on `a`. The two-row input of the majorization check is
/// read as `v` = row 1, `u` = row 2.
pub fn check<T: Scalar>(id: ConditionId, a: &DenseMatrix<T>, opts: &CheckOptions) -> Result<ConditionReport> {
    let truncated;
    let a = match opts.rows {
        Some(n) if n != a.rows() => {
            truncated = a.truncate_rows(n)?;
            &truncated
        }
        _ => a,
    };
    match id {
        ConditionId::BlockPrefixDominance => check_block_dominance(a, opts),
        ConditionId::RearrangedBlockDominance => check_rearranged_block_dominance(a, opts),
        ConditionId::PrefixMajorization => {
            if a.rows() != 2 {
                return Err(Error::InvalidParameter(format!(
                    "the majorization check reads two rows (v, u); got {} rows",
                    a.rows()
                )));
            }
            check_prefix_majorization(a.row(0), a.row(1), opts)
        }
        ConditionId::ColumnDecreasingPrefix => Ok(check_column_decreasing_prefix(a, opts)),
        ConditionId::RowDecreasingPrefix => Ok(check_row_decreasing_prefix(a, opts)),
        ConditionId::SummabilityStaircase => check_summability_staircase(a, opts),
        ConditionId::MemberBlockDominance => check_member_block_dominance(a, opts),
        ConditionId::MemberColumnSumsDecreasing => check_member_column_sums(a, opts),
        ConditionId::PrefixRowsColumnDominance => Ok(check_column_prefix_order(a, opts)),
        ConditionId::RowDecreasing => Ok(check_row_decreasing(a, opts)),
    }
}

/// Indices of the `r` largest entries for every `r`, ties broken by index,
/// together with the running sums of those entries in that order.
pub(crate) fn top_sums<T: Scalar>(s: &[T]) -> (Vec<usize>, Vec<T>) {
    let mut order: Vec<usize> = (0..s.len()).collect();
    order.sort_by(|&i, &j| s[j].partial_cmp(&s[i]).unwrap_or(std::cmp::Ordering::Equal));
    let mut acc = T::zero();
    let sums = order
        .iter()
        .map(|&k| {
            acc += s[k];
            acc
        })
        .collect();
    (order, sums)
}

pub(crate) fn one_based(idx: &[usize]) -> Vec<usize> {
    idx.iter().map(|i| i + 1).collect()
}
