//! Conditions quantified over the block-form rearrangements of a truncation.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::rearrangement::{all_permutations, apply_row_perm, enumerate_block_forms_lazy, BlockForm, Permutation};
use crate::scalar::Scalar;

use super::blocks::leading_block_sums;
use super::{one_based, top_sums, CheckOptions, ConditionId, ConditionReport, Witness};

/// Block-form rearrangements grouped by permutation: the conditions depend
/// only on the rearranged matrix, and the first `(γ, λ)` of each group names
/// it in witnesses.
fn distinct_members<T: Scalar>(a: &DenseMatrix<T>, cap: usize) -> Result<Vec<BlockForm>> {
    let mut forms = enumerate_block_forms_lazy(a, cap)?;
    forms.dedup_by(|later, earlier| later.perm == earlier.perm);
    Ok(forms)
}

fn running_column_sums<T: Scalar>(b: &DenseMatrix<T>) -> impl Iterator<Item = (usize, Vec<T>)> + '_ {
    let mut sums = vec![T::zero(); b.cols()];
    (0..b.rows()).map(move |l| {
        for (s, &v) in sums.iter_mut().zip(b.row(l)) {
            *s += v;
        }
        (l + 1, sums.clone())
    })
}

fn member_witness<T: Scalar>(
    a: &DenseMatrix<T>,
    opts: &CheckOptions,
    cap: usize,
    test: impl Fn(&BlockForm, &DenseMatrix<T>, &CheckOptions) -> Option<Witness> + Sync,
) -> Result<Option<Witness>> {
    let members = distinct_members(a, cap)?;
    Ok(members.par_iter().find_map_first(|form| {
        let b = apply_row_perm(a, &form.perm).expect("permutation matches rows");
        test(form, &b, opts)
    }))
}

/// For every block-form rearrangement `B` and every `l`, the leading-`l`
/// column sums `k ↦ Σ_{j≤l} b_{j,k}` are non-increasing.
pub fn check_member_column_sums<T: Scalar>(a: &DenseMatrix<T>, opts: &CheckOptions) -> Result<ConditionReport> {
    let cap = opts.perm_cap_for(ConditionId::MemberColumnSumsDecreasing);
    let witness = member_witness(a, opts, cap, |form, b, opts| {
        running_column_sums(b).find_map(|(l, s)| {
            (0..s.len().saturating_sub(1))
                .find(|&k| !opts.ge(s[k], s[k + 1]))
                .map(|k| Witness::MemberColumnSums {
                    perm: form.perm.clone().into(),
                    gamma: form.gamma,
                    lambda: form.lambda,
                    l,
                    k: k + 1,
                    lhs: s[k].to_f64_lossy(),
                    rhs: s[k + 1].to_f64_lossy(),
                })
        })
    })?;
    Ok(ConditionReport::verdict(
        ConditionId::MemberColumnSumsDecreasing,
        witness,
        a.rows(),
        a.cols(),
    ))
}

/// For every block-form rearrangement `B`, `l` and `r`:
/// `Σ_{j≤l} Σ_{k≤r} b_{j,k} ≥ Σ_{j≤l} Σ_{k∈N_r} b_{j,k}` over all `|N_r| = r`.
pub fn check_member_block_dominance<T: Scalar>(a: &DenseMatrix<T>, opts: &CheckOptions) -> Result<ConditionReport> {
    let cap = opts.perm_cap_for(ConditionId::MemberBlockDominance);
    let witness = member_witness(a, opts, cap, |form, b, opts| {
        running_column_sums(b).find_map(|(l, s)| {
            let (order, tops) = top_sums(&s);
            let mut lhs = T::zero();
            (0..s.len()).find_map(|r| {
                lhs += s[r];
                (!opts.ge(lhs, tops[r])).then(|| {
                    let mut cols = order[..=r].to_vec();
                    cols.sort_unstable();
                    Witness::MemberBlocks {
                        perm: form.perm.clone().into(),
                        gamma: form.gamma,
                        lambda: form.lambda,
                        l,
                        r: r + 1,
                        cols: one_based(&cols),
                        lhs: lhs.to_f64_lossy(),
                        rhs: tops[r].to_f64_lossy(),
                    }
                })
            })
        })
    })?;
    Ok(ConditionReport::verdict(ConditionId::MemberBlockDominance, witness, a.rows(), a.cols()))
}

/// For every block-form rearrangement `B` there is a row rearrangement `C`
/// with `Σ_{j≤l} Σ_{k≤r} c_{j,k} ≥ Σ_{j≤l} Σ_{k∈N_r} b_{j,k}` for all `l`,
/// `r` and `|N_r| = r`. Candidates `C` are searched in lexicographic
/// permutation order; the witness is the first `B` left unmatched.
pub fn check_rearranged_block_dominance<T: Scalar>(
    a: &DenseMatrix<T>,
    opts: &CheckOptions,
) -> Result<ConditionReport> {
    let cap = opts.perm_cap_for(ConditionId::RearrangedBlockDominance);
    let n = a.rows();
    if n > cap {
        return Err(Error::CapExceeded {
            what: "rows for rearrangement pair search",
            size: n,
            cap,
        });
    }
    let members = distinct_members(a, cap)?;

    // leading block sums of every rearrangement, flattened over (l, r) ≥ 1
    let candidates: Vec<Vec<T>> = all_permutations(n)
        .par_iter()
        .map(|p| flat_leading_sums(&apply_row_perm(a, p).expect("permutation matches rows")))
        .collect();

    let unmatched = members.par_iter().find_first(|form| {
        let b = apply_row_perm(a, &form.perm).expect("permutation matches rows");
        let needs: Vec<T> = running_column_sums(&b).flat_map(|(_, s)| top_sums(&s).1).collect();
        !candidates
            .iter()
            .any(|have| have.iter().zip(&needs).all(|(&h, &w)| opts.ge(h, w)))
    });
    let witness = unmatched.map(|form| Witness::Unmatched {
        perm: form.perm.clone().into(),
        gamma: form.gamma,
        lambda: form.lambda,
    });
    Ok(ConditionReport::verdict(
        ConditionId::RearrangedBlockDominance,
        witness,
        n,
        a.cols(),
    ))
}

fn flat_leading_sums<T: Scalar>(c: &DenseMatrix<T>) -> Vec<T> {
    leading_block_sums(c)
        .into_iter()
        .skip(1)
        .flat_map(|row| row.into_iter().skip(1))
        .collect()
}

/// Row rearrangement achieving the dominance for `b`, if any, for callers
/// that want the matching `C` rather than a verdict.
pub fn matching_rearrangement<T: Scalar>(
    a: &DenseMatrix<T>,
    b: &DenseMatrix<T>,
    opts: &CheckOptions,
) -> Result<Option<Permutation>> {
    let cap = opts.perm_cap_for(ConditionId::RearrangedBlockDominance);
    if a.rows() > cap {
        return Err(Error::CapExceeded {
            what: "rows for rearrangement pair search",
            size: a.rows(),
            cap,
        });
    }
    if (a.rows(), a.cols()) != (b.rows(), b.cols()) {
        return Err(Error::DimensionMismatch {
            what: "rearranged matrix rows",
            expected: a.rows(),
            got: b.rows(),
        });
    }
    let needs: Vec<T> = running_column_sums(b).flat_map(|(_, s)| top_sums(&s).1).collect();
    Ok(all_permutations(a.rows()).into_iter().find(|p| {
        let have = flat_leading_sums(&apply_row_perm(a, p).expect("permutation matches rows"));
        have.iter().zip(&needs).all(|(&h, &w)| opts.ge(h, w))
    }))
}
