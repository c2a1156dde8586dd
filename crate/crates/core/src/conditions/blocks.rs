//! The leading-block dominance condition, by row-subset enumeration.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::scalar::Scalar;

use super::{one_based, top_sums, CheckOptions, ConditionId, ConditionReport, Witness};

/// `Σ_{j≤l} Σ_{k≤r} a_{j,k}`, indexed `[l][r]` with zero borders. Column sums
/// accumulate rows in index order, then columns in index order, the same
/// order used for arbitrary row subsets so equal sums compare equal.
pub(crate) fn leading_block_sums<T: Scalar>(a: &DenseMatrix<T>) -> Vec<Vec<T>> {
    let (n, m) = (a.rows(), a.cols());
    let mut col = vec![T::zero(); m];
    let mut out = vec![vec![T::zero(); m + 1]];
    for j in 0..n {
        for (c, &v) in col.iter_mut().zip(a.row(j)) {
            *c += v;
        }
        let mut row = Vec::with_capacity(m + 1);
        row.push(T::zero());
        let mut acc = T::zero();
        for &c in &col {
            acc += c;
            row.push(acc);
        }
        out.push(row);
    }
    out
}

/// `(l, rows, r, leading sum, block sum, cols)` of a violated inequality.
type BlockViolation<T> = (usize, Vec<usize>, usize, T, T, Vec<usize>);

/// `Σ_{j≤l} Σ_{k≤r} a_{j,k} ≥ Σ_{j∈N_l} Σ_{k∈N_r} a_{j,k}` for all
/// `l ≤ l_max`, `r ≤ r_max` and index sets of those sizes.
///
/// For a fixed row set the right side is largest when `N_r` holds the `r`
/// largest column sums over `N_l`, so only row subsets are enumerated
/// (`2^rows` of them). The reported witness is the first violation ordered by
/// `l`, then row set (lexicographic), then `r`.
pub fn check_block_dominance<T: Scalar>(a: &DenseMatrix<T>, opts: &CheckOptions) -> Result<ConditionReport> {
    let (n, m) = (a.rows(), a.cols());
    if n > opts.subset_cap {
        return Err(Error::CapExceeded {
            what: "rows for subset enumeration",
            size: n,
            cap: opts.subset_cap,
        });
    }
    let l_max = opts.l_max.unwrap_or(n);
    let r_max = opts.r_max.unwrap_or(m);
    if l_max > n || r_max > m {
        return Err(Error::OutOfRange(format!(
            "block range {l_max}x{r_max} exceeds matrix {n}x{m}"
        )));
    }
    let lead = leading_block_sums(a);

    let violation = |mask: u64| -> Option<BlockViolation<T>> {
        let rows: Vec<usize> = (0..n).filter(|j| mask >> j & 1 == 1).collect();
        let l = rows.len();
        let mut s = vec![T::zero(); m];
        for &j in &rows {
            for (c, &v) in s.iter_mut().zip(a.row(j)) {
                *c += v;
            }
        }
        let (order, tops) = top_sums(&s);
        (0..r_max).find(|&r| !opts.ge(lead[l][r + 1], tops[r])).map(|r| {
            let mut cols = order[..=r].to_vec();
            cols.sort_unstable();
            (l, rows, r + 1, lead[l][r + 1], tops[r], cols)
        })
    };

    let first = (1u64..1u64 << n)
        .into_par_iter()
        .filter(|mask| (mask.count_ones() as usize) <= l_max)
        .filter_map(violation)
        .min_by(|x, y| (x.0, &x.1, x.2).cmp(&(y.0, &y.1, y.2)));

    let witness = first.map(|(l, rows, r, lhs, rhs, cols)| Witness::Blocks {
        l,
        r,
        rows: one_based(&rows),
        cols: one_based(&cols),
        lhs: lhs.to_f64_lossy(),
        rhs: rhs.to_f64_lossy(),
    });
    Ok(ConditionReport::verdict(ConditionId::BlockPrefixDominance, witness, l_max, r_max))
}
