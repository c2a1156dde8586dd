//! Row rearrangements in block form.
//!
//! A row rearrangement `B` of an `n`-row matrix `A` is in block form
//! `(γ, λ)` when, with 1-based rows,
//!
//! * rows `1..=γ` (top block) form an entrywise decreasing chain,
//! * rows `λ+1..=n` (bottom block) form an entrywise decreasing chain,
//! * every top row dominates every middle row (`γ+1..=λ`), and every middle
//!   row dominates every bottom row,
//! * when the middle block is empty the last top row dominates the first
//!   bottom row, so `B` is column decreasing,
//! * no middle row dominates all middle rows, and none is dominated by all
//!   of them. A single middle row dominates itself, so a singleton middle
//!   block never qualifies.
//!
//! Domination is entrywise `≥` on stored values with no tolerance.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::scalar::Scalar;

pub const DEFAULT_ENUMERATION_CAP: usize = 7;

/// Bijection on `{0, …, n-1}`; serialized 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    /// From 0-based images `σ(0), …, σ(n-1)`.
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let n = map.len();
        let mut seen = vec![false; n];
        for &s in &map {
            if s >= n || std::mem::replace(&mut seen[s], true) {
                return Err(Error::InvalidParameter(format!("{map:?} is not a permutation")));
            }
        }
        Ok(Permutation(map))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// `(self ∘ inner)(j) = inner(self(j))`: apply `self` to a matrix already
    /// permuted by `inner`.
    pub fn then(&self, inner: &Permutation) -> Permutation {
        Permutation(self.0.iter().map(|&j| inner.0[j]).collect())
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &s)| i == s)
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;
    fn try_from(one_based: Vec<usize>) -> Result<Self> {
        if one_based.contains(&0) {
            return Err(Error::InvalidParameter("permutations are 1-based".into()));
        }
        Permutation::new(one_based.into_iter().map(|s| s - 1).collect())
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.0.into_iter().map(|s| s + 1).collect()
    }
}

/// `(γ, λ)` together with the row permutation producing the block form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockForm {
    pub gamma: usize,
    pub lambda: usize,
    pub perm: Permutation,
}

impl BlockForm {
    pub fn n(&self) -> usize {
        self.perm.len()
    }

    /// 0-based row range of the middle block.
    pub fn middle(&self) -> std::ops::Range<usize> {
        self.gamma..self.lambda
    }
}

/// Row `j` of the result is row `σ(j)` of `a`.
pub fn apply_row_perm<T: Scalar>(a: &DenseMatrix<T>, perm: &Permutation) -> Result<DenseMatrix<T>> {
    if perm.len() != a.rows() {
        return Err(Error::DimensionMismatch {
            what: "permutation size vs matrix rows",
            expected: a.rows(),
            got: perm.len(),
        });
    }
    DenseMatrix::new(
        a.rows(),
        a.cols(),
        perm.0.iter().flat_map(|&s| a.row(s).iter().copied()).collect(),
    )
}

fn check_block_indices(rows: usize, gamma: usize, lambda: usize) -> Result<()> {
    if gamma > lambda || lambda > rows {
        return Err(Error::InvalidBlock { gamma, lambda, rows });
    }
    Ok(())
}

/// Block-form test against a domination oracle on (permuted) row positions.
fn block_form_holds(
    n: usize,
    gamma: usize,
    lambda: usize,
    dominates: impl Fn(usize, usize) -> bool,
) -> bool {
    // chain pairs (j, j+1), 1-based j <= γ or j >= λ
    let chains = (0..n.saturating_sub(1))
        .filter(|&i| i < gamma || i + 1 >= lambda)
        .all(|i| dominates(i, i + 1));
    if !chains {
        return false;
    }
    let middle = gamma..lambda;
    let top_over_middle = (0..gamma).all(|t| middle.clone().all(|m| dominates(t, m)));
    let middle_over_bottom = middle.clone().all(|m| (lambda..n).all(|b| dominates(m, b)));
    if !(top_over_middle && middle_over_bottom) {
        return false;
    }
    middle.clone().all(|a| {
        let dominates_all = middle.clone().all(|m| dominates(a, m));
        let dominated_by_all = middle.clone().all(|m| dominates(m, a));
        !(dominates_all || dominated_by_all)
    })
}

/// Whether `b` itself (rows in stored order) is in block form `(γ, λ)`.
pub fn is_block_form_member<T: Scalar>(b: &DenseMatrix<T>, gamma: usize, lambda: usize) -> Result<bool> {
    check_block_indices(b.rows(), gamma, lambda)?;
    Ok(block_form_holds(b.rows(), gamma, lambda, |i, j| b.row_dominates(i, j)))
}

fn domination_table<T: Scalar>(a: &DenseMatrix<T>) -> Vec<Vec<bool>> {
    (0..a.rows())
        .map(|i| (0..a.rows()).map(|j| a.row_dominates(i, j)).collect())
        .collect()
}

/// Greedy construction: repeatedly move to the top a row dominating every
/// remaining row, then repeatedly move to the bottom a row dominated by every
/// remaining row. Candidates are scanned in original row order, and the
/// leftover middle rows keep their relative order.
pub fn construct_block_form<T: Scalar>(a: &DenseMatrix<T>) -> BlockForm {
    let n = a.rows();
    let dom = domination_table(a);
    let mut remaining: Vec<usize> = (0..n).collect();

    let mut top = Vec::new();
    while let Some(pos) = remaining
        .iter()
        .position(|&c| remaining.iter().all(|&o| dom[c][o]))
    {
        top.push(remaining.remove(pos));
    }
    let mut bottom = Vec::new();
    while let Some(pos) = remaining
        .iter()
        .position(|&c| remaining.iter().all(|&o| dom[o][c]))
    {
        bottom.push(remaining.remove(pos));
    }
    bottom.reverse();

    let gamma = top.len();
    let lambda = gamma + remaining.len();
    let perm = Permutation(top.into_iter().chain(remaining).chain(bottom).collect());
    BlockForm { gamma, lambda, perm }
}

/// Returns a block-form rearrangement `B̃` of `a` with `B̃x` non-increasing:
/// the greedy block form with its middle rows stably sorted by `(Bx)_j`.
pub fn order_rows_for_decreasing_image<T: Scalar>(
    a: &DenseMatrix<T>,
    x: &[T],
) -> Result<(DenseMatrix<T>, BlockForm)> {
    if let Some((index, v)) = x.iter().enumerate().find(|(_, v)| **v < T::zero()) {
        return Err(Error::NegativeEntry {
            index,
            value: v.to_f64_lossy(),
        });
    }
    let y = a.apply(x)?;
    let mut form = construct_block_form(a);
    let mid = form.middle();
    form.perm.0[mid].sort_by(|&i, &j| y[j].partial_cmp(&y[i]).unwrap_or(std::cmp::Ordering::Equal));
    let b = apply_row_perm(a, &form.perm)?;
    Ok((b, form))
}

/// Lexicographic successor; `false` once the last permutation is reached.
pub(crate) fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let Some(i) = (0..n - 1).rev().find(|&i| p[i] < p[i + 1]) else {
        return false;
    };
    let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).expect("successor exists");
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

/// All permutations of `0..n` in lexicographic order.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    let mut p: Vec<usize> = (0..n).collect();
    let mut out = vec![Permutation(p.clone())];
    while next_permutation(&mut p) {
        out.push(Permutation(p.clone()));
    }
    out
}

/// Every `(B, (γ, λ, σ))` with `B` a row rearrangement of `a` in block form
/// `(γ, λ)`. Ordered by permutation (lexicographic), then `γ`, then `λ`.
pub fn enumerate_block_forms<T: Scalar>(
    a: &DenseMatrix<T>,
    cap: usize,
) -> Result<Vec<(DenseMatrix<T>, BlockForm)>> {
    Ok(enumerate_block_forms_lazy(a, cap)?
        .into_iter()
        .map(|form| (apply_row_perm(a, &form.perm).expect("sizes agree"), form))
        .collect())
}

/// Like [`enumerate_block_forms`] without materializing the matrices.
pub fn enumerate_block_forms_lazy<T: Scalar>(a: &DenseMatrix<T>, cap: usize) -> Result<Vec<BlockForm>> {
    let n = a.rows();
    if n > cap {
        return Err(Error::CapExceeded {
            what: "rows for block-form enumeration",
            size: n,
            cap,
        });
    }
    let dom = domination_table(a);
    let forms = all_permutations(n)
        .into_par_iter()
        .flat_map_iter(|perm| {
            let p = perm.0.clone();
            let dom = &dom;
            (0..=n).flat_map(move |gamma| {
                let perm = perm.clone();
                let p = p.clone();
                (gamma..=n)
                    .filter(move |&lambda| block_form_holds(n, gamma, lambda, |i, j| dom[p[i]][p[j]]))
                    .map(move |lambda| BlockForm {
                        gamma,
                        lambda,
                        perm: perm.clone(),
                    })
            })
        })
        .collect();
    Ok(forms)
}
