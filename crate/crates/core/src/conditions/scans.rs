//! Conditions decided by single passes over entries and prefix sums.

use crate::error::{Error, Result};
use crate::families::{is_summability, SUMMABILITY_TOL};
use crate::matrix::{dot, DenseMatrix};
use crate::scalar::Scalar;
use crate::spaces::decreasing_rearrangement;

use super::{one_based, top_sums, CheckOptions, ConditionId, ConditionReport, Witness};

fn check_nonnegative<T: Scalar>(v: &[T]) -> Result<()> {
    match v.iter().enumerate().find(|(_, x)| !(**x >= T::zero())) {
        Some((index, x)) if x.is_finite() => Err(Error::NegativeEntry {
            index,
            value: x.to_f64_lossy(),
        }),
        Some((index, _)) => Err(Error::NonFinite(index)),
        None => Ok(()),
    }
}

fn same_len(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch {
            what: "vector lengths",
            expected: a,
            got: b,
        });
    }
    Ok(())
}

/// `Σ_{k≤r} v_k ≥ Σ_{k∈N_r} u_k` for every `r` and `|N_r| = r`. The right
/// side is largest for the `r` largest entries of `u`.
pub fn check_prefix_majorization<T: Scalar>(v: &[T], u: &[T], opts: &CheckOptions) -> Result<ConditionReport> {
    same_len(v.len(), u.len())?;
    check_nonnegative(v)?;
    check_nonnegative(u)?;
    let (order, tops) = top_sums(u);
    let mut lhs = T::zero();
    let mut witness = None;
    for r in 0..v.len() {
        lhs += v[r];
        if !opts.ge(lhs, tops[r]) {
            let mut indices = order[..=r].to_vec();
            indices.sort_unstable();
            witness = Some(Witness::Majorization {
                r: r + 1,
                indices: one_based(&indices),
                lhs: lhs.to_f64_lossy(),
                rhs: tops[r].to_f64_lossy(),
            });
            break;
        }
    }
    Ok(ConditionReport::verdict(ConditionId::PrefixMajorization, witness, 1, v.len()))
}

/// `Σ v_k x*_k ≥ Σ u_k x_k`, compared exactly.
pub fn rearrangement_dominates<T: Scalar>(v: &[T], u: &[T], x: &[T]) -> Result<bool> {
    same_len(v.len(), u.len())?;
    same_len(v.len(), x.len())?;
    check_nonnegative(v)?;
    check_nonnegative(u)?;
    check_nonnegative(x)?;
    Ok(dot(v, &decreasing_rearrangement(x)) >= dot(u, x))
}

fn first_column_step<T: Scalar>(a: &DenseMatrix<T>, opts: &CheckOptions) -> Option<Witness> {
    for j in 0..a.rows().saturating_sub(1) {
        for k in 0..a.cols() {
            let (hi, lo) = (a.get(j, k), a.get(j + 1, k));
            if !opts.ge(hi, lo) {
                return Some(Witness::ColumnStep {
                    j: j + 1,
                    k: k + 1,
                    lhs: hi.to_f64_lossy(),
                    rhs: lo.to_f64_lossy(),
                });
            }
        }
    }
    None
}

fn first_row_step<T: Scalar>(a: &DenseMatrix<T>, opts: &CheckOptions) -> Option<Witness> {
    for j in 0..a.rows() {
        let row = a.row(j);
        for k in 0..a.cols().saturating_sub(1) {
            if !opts.ge(row[k], row[k + 1]) {
                return Some(Witness::RowStep {
                    j: j + 1,
                    k: k + 1,
                    lhs: row[k].to_f64_lossy(),
                    rhs: row[k + 1].to_f64_lossy(),
                });
            }
        }
    }
    None
}

/// First `(l, k)` with leading-`l` column sums increasing from `k` to `k+1`.
fn first_column_prefix<T: Scalar>(a: &DenseMatrix<T>, l_max: usize, opts: &CheckOptions) -> Option<Witness> {
    let mut sums = vec![T::zero(); a.cols()];
    for l in 0..l_max {
        for (s, &v) in sums.iter_mut().zip(a.row(l)) {
            *s += v;
        }
        for k in 0..a.cols().saturating_sub(1) {
            if !opts.ge(sums[k], sums[k + 1]) {
                return Some(Witness::ColumnPrefix {
                    l: l + 1,
                    k: k + 1,
                    lhs: sums[k].to_f64_lossy(),
                    rhs: sums[k + 1].to_f64_lossy(),
                });
            }
        }
    }
    None
}

fn first_row_prefix<T: Scalar>(a: &DenseMatrix<T>, opts: &CheckOptions) -> Option<Witness> {
    for j in 0..a.rows().saturating_sub(1) {
        let (mut upper, mut lower) = (T::zero(), T::zero());
        for r in 0..a.cols() {
            upper += a.get(j, r);
            lower += a.get(j + 1, r);
            if !opts.ge(upper, lower) {
                return Some(Witness::RowPrefix {
                    j: j + 1,
                    r: r + 1,
                    lhs: upper.to_f64_lossy(),
                    rhs: lower.to_f64_lossy(),
                });
            }
        }
    }
    None
}

/// Columns decreasing (`a_{j,k} ≥ a_{j+1,k}`) and, for every `l`, the
/// leading-`l` column sums decreasing in `k`.
pub fn check_column_decreasing_prefix<T: Scalar>(a: &DenseMatrix<T>, opts: &CheckOptions) -> ConditionReport {
    let witness = first_column_step(a, opts).or_else(|| first_column_prefix(a, a.rows(), opts));
    ConditionReport::verdict(ConditionId::ColumnDecreasingPrefix, witness, a.rows(), a.cols())
}

/// Rows decreasing (`a_{j,k} ≥ a_{j,k+1}`) and, for every `r`, the
/// leading-`r` row sums decreasing in `j`.
pub fn check_row_decreasing_prefix<T: Scalar>(a: &DenseMatrix<T>, opts: &CheckOptions) -> ConditionReport {
    let witness = first_row_step(a, opts).or_else(|| first_row_prefix(a, opts));
    ConditionReport::verdict(ConditionId::RowDecreasingPrefix, witness, a.rows(), a.cols())
}

/// Leading-`l` column sums decreasing in `k` for every `l ≤ l_max`. This is
/// equivalent to the leading-row block inequality against arbitrary column
/// sets, since swapping a column for a later one is the extremal move.
pub fn check_column_prefix_order<T: Scalar>(a: &DenseMatrix<T>, opts: &CheckOptions) -> ConditionReport {
    let l_max = opts.l_max.unwrap_or(a.rows()).min(a.rows());
    let witness = first_column_prefix(a, l_max, opts);
    ConditionReport::verdict(ConditionId::PrefixRowsColumnDominance, witness, l_max, a.cols())
}

/// Every row decreasing.
pub fn check_row_decreasing<T: Scalar>(a: &DenseMatrix<T>, opts: &CheckOptions) -> ConditionReport {
    ConditionReport::verdict(ConditionId::RowDecreasing, first_row_step(a, opts), a.rows(), a.cols())
}

/// `a_{j,k} ≥ max(a_{j+1,k}, a_{j+1,k+1})` for `j ≥ k`, on a summability
/// matrix. Pairs reaching past the stored truncation are skipped.
pub fn check_summability_staircase<T: Scalar>(a: &DenseMatrix<T>, opts: &CheckOptions) -> Result<ConditionReport> {
    if !is_summability(a, T::of(SUMMABILITY_TOL)) {
        return Err(Error::NotSummability);
    }
    let mut witness = None;
    'scan: for j in 0..a.rows().saturating_sub(1) {
        for k in 0..=j.min(a.cols().saturating_sub(1)) {
            let mut bound = a.get(j + 1, k);
            if k + 1 < a.cols() {
                bound = bound.max(a.get(j + 1, k + 1));
            }
            if !opts.ge(a.get(j, k), bound) {
                witness = Some(Witness::Staircase {
                    j: j + 1,
                    k: k + 1,
                    lhs: a.get(j, k).to_f64_lossy(),
                    rhs: bound.to_f64_lossy(),
                });
                break 'scan;
            }
        }
    }
    Ok(ConditionReport::verdict(
        ConditionId::SummabilityStaircase,
        witness,
        a.rows(),
        a.cols(),
    ))
}
