//! Condition checkers against brute-force enumeration of every index set and
//! every row rearrangement, on small matrices with exact (quarter) entries.

use proptest::prelude::*;
use seqnorm::conditions::{check, CheckOptions, ConditionId, Witness};
use seqnorm::rearrangement::{all_permutations, apply_row_perm, Permutation};
use seqnorm::Matrix;

fn small_matrix(max: usize) -> impl Strategy<Value = Matrix> {
    (1..=max, 1..=max).prop_flat_map(|(n, m)| {
        prop::collection::vec(0u8..=4, n * m)
            .prop_map(move |v| Matrix::new(n, m, v.into_iter().map(|x| f64::from(x) / 4.0).collect()).unwrap())
    })
}

fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (1u32..1 << n).map(move |mask| (0..n).filter(|&i| mask >> i & 1 == 1).collect())
}

fn block_sum(a: &Matrix, rows: &[usize], cols: &[usize]) -> f64 {
    rows.iter().map(|&j| cols.iter().map(|&k| a.get(j, k)).sum::<f64>()).sum()
}

fn leading(n: usize) -> Vec<usize> {
    (0..n).collect()
}

fn dominates(a: &Matrix, i: usize, j: usize) -> bool {
    (0..a.cols()).all(|k| a.get(i, k) >= a.get(j, k))
}

/// Block form `(γ, λ)` for some pair, straight from the definition, with the
/// middle block at 0-based rows `γ..λ`.
fn in_some_block_form(b: &Matrix) -> bool {
    let n = b.rows();
    (0..=n).any(|gamma| {
        (gamma..=n).any(|lambda| {
            let chain = (0..n.saturating_sub(1))
                .filter(|&i| i < gamma || i + 1 >= lambda)
                .all(|i| dominates(b, i, i + 1));
            let mid: Vec<usize> = (gamma..lambda).collect();
            let sandwich = mid
                .iter()
                .all(|&m| (0..gamma).all(|t| dominates(b, t, m)) && (lambda..n).all(|s| dominates(b, m, s)));
            let free = mid.iter().all(|&x| {
                !(mid.iter().all(|&y| dominates(b, x, y)) || mid.iter().all(|&y| dominates(b, y, x)))
            });
            chain && sandwich && free
        })
    })
}

fn members(a: &Matrix) -> Vec<Matrix> {
    all_permutations(a.rows())
        .iter()
        .map(|p| apply_row_perm(a, p).unwrap())
        .filter(in_some_block_form)
        .collect()
}

/// Leading `l × r` block of `c` dominates the leading-`l`, columns-`cols` sum of `b`.
fn leading_dominates(c: &Matrix, b: &Matrix) -> bool {
    (1..=b.rows()).all(|l| {
        subsets(b.cols()).all(|cols| block_sum(c, &leading(l), &leading(cols.len())) >= block_sum(b, &leading(l), &cols))
    })
}

fn brute_blocks(a: &Matrix) -> bool {
    subsets(a.rows()).all(|rows| {
        subsets(a.cols()).all(|cols| {
            block_sum(a, &leading(rows.len()), &leading(cols.len())) >= block_sum(a, &rows, &cols)
        })
    })
}

fn brute_member_column_sums(a: &Matrix) -> bool {
    members(a).iter().all(|b| {
        (1..=b.rows()).all(|l| {
            (0..b.cols().saturating_sub(1)).all(|k| block_sum(b, &leading(l), &[k]) >= block_sum(b, &leading(l), &[k + 1]))
        })
    })
}

fn brute_member_blocks(a: &Matrix) -> bool {
    members(a).iter().all(|b| leading_dominates(b, b))
}

fn brute_rearranged(a: &Matrix) -> bool {
    let all: Vec<Matrix> = all_permutations(a.rows()).iter().map(|p| apply_row_perm(a, p).unwrap()).collect();
    members(a).iter().all(|b| all.iter().any(|c| leading_dominates(c, b)))
}

fn verdict(id: ConditionId, a: &Matrix) -> bool {
    check(id, a, &CheckOptions::default()).unwrap().holds
}

fn permuted(a: &Matrix, one_based: &[usize]) -> Matrix {
    let p = Permutation::new(one_based.iter().map(|s| s - 1).collect()).unwrap();
    apply_row_perm(a, &p).unwrap()
}

/// Re-evaluates the inequality a witness names, using 1-based indices.
fn witness_is_sound(a: &Matrix, w: &Witness) -> bool {
    let at = |j: usize, k: usize| a.get(j - 1, k - 1);
    let zero_based = |v: &[usize]| v.iter().map(|i| i - 1).collect::<Vec<_>>();
    match w {
        Witness::Blocks { l, r, rows, cols, lhs, rhs } => {
            rows.len() == *l
                && cols.len() == *r
                && *lhs == block_sum(a, &leading(*l), &leading(*r))
                && *rhs == block_sum(a, &zero_based(rows), &zero_based(cols))
                && lhs < rhs
        }
        Witness::ColumnStep { j, k, lhs, rhs } => *lhs == at(*j, *k) && *rhs == at(j + 1, *k) && lhs < rhs,
        Witness::RowStep { j, k, lhs, rhs } => *lhs == at(*j, *k) && *rhs == at(*j, k + 1) && lhs < rhs,
        Witness::ColumnPrefix { l, k, lhs, rhs } => {
            *lhs == block_sum(a, &leading(*l), &[k - 1]) && *rhs == block_sum(a, &leading(*l), &[*k]) && lhs < rhs
        }
        Witness::RowPrefix { j, r, lhs, rhs } => {
            *lhs == block_sum(a, &[j - 1], &leading(*r)) && *rhs == block_sum(a, &[*j], &leading(*r)) && lhs < rhs
        }
        Witness::Staircase { j, k, lhs, rhs } => {
            let below = if *k < a.cols() { at(j + 1, *k).max(at(j + 1, k + 1)) } else { at(j + 1, *k) };
            j >= k && *lhs == at(*j, *k) && *rhs == below && lhs < rhs
        }
        Witness::MemberColumnSums { perm, l, k, lhs, rhs, .. } => {
            let b = permuted(a, perm);
            in_some_block_form(&b)
                && *lhs == block_sum(&b, &leading(*l), &[k - 1])
                && *rhs == block_sum(&b, &leading(*l), &[*k])
                && lhs < rhs
        }
        Witness::MemberBlocks { perm, l, r, cols, lhs, rhs, .. } => {
            let b = permuted(a, perm);
            cols.len() == *r
                && in_some_block_form(&b)
                && *lhs == block_sum(&b, &leading(*l), &leading(*r))
                && *rhs == block_sum(&b, &leading(*l), &zero_based(cols))
                && lhs < rhs
        }
        Witness::Unmatched { perm, .. } => {
            let b = permuted(a, perm);
            in_some_block_form(&b)
                && all_permutations(a.rows())
                    .iter()
                    .all(|p| !leading_dominates(&apply_row_perm(a, p).unwrap(), &b))
        }
        Witness::Majorization { .. } => false,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn block_dominance_matches_enumeration(a in small_matrix(5)) {
        prop_assert_eq!(verdict(ConditionId::BlockPrefixDominance, &a), brute_blocks(&a));
    }

    #[test]
    fn member_conditions_match_enumeration(a in small_matrix(4)) {
        prop_assert_eq!(verdict(ConditionId::MemberColumnSumsDecreasing, &a), brute_member_column_sums(&a));
        prop_assert_eq!(verdict(ConditionId::MemberBlockDominance, &a), brute_member_blocks(&a));
        prop_assert_eq!(verdict(ConditionId::RearrangedBlockDominance, &a), brute_rearranged(&a));
    }

    #[test]
    fn every_rearrangement_set_has_block_forms(a in small_matrix(5)) {
        prop_assert!(!members(&a).is_empty());
    }

    #[test]
    fn failing_reports_carry_sound_witnesses(a in small_matrix(4)) {
        for id in ConditionId::ALL {
            if id == ConditionId::PrefixMajorization {
                continue;
            }
            let Ok(rep) = check(id, &a, &CheckOptions::default()) else { continue };
            if !rep.holds {
                let w = rep.witness.as_ref().unwrap();
                prop_assert!(witness_is_sound(&a, w), "{}: unsound {:?} on {:?}", id, w, a);
            }
        }
    }

    #[test]
    fn sufficient_conditions_imply_block_dominance(a in small_matrix(5)) {
        let blocks = verdict(ConditionId::BlockPrefixDominance, &a);
        if verdict(ConditionId::ColumnDecreasingPrefix, &a) || verdict(ConditionId::RowDecreasingPrefix, &a) {
            prop_assert!(blocks);
        }
    }

    #[test]
    fn row_decreasing_chain(a in small_matrix(4)) {
        if verdict(ConditionId::RowDecreasing, &a) {
            prop_assert!(verdict(ConditionId::MemberColumnSumsDecreasing, &a));
            prop_assert!(verdict(ConditionId::RearrangedBlockDominance, &a));
        }
        prop_assert_eq!(
            verdict(ConditionId::MemberBlockDominance, &a),
            verdict(ConditionId::MemberColumnSumsDecreasing, &a)
        );
    }
}

#[test]
fn majorization_witness_is_sound() {
    let v = [1.0, 0.0, 0.0];
    let u = [0.0, 0.75, 0.5];
    let rep = seqnorm::conditions::check_prefix_majorization(&v, &u, &CheckOptions::default()).unwrap();
    assert!(!rep.holds);
    match rep.witness.unwrap() {
        Witness::Majorization { r, indices, lhs, rhs } => {
            let rhs_direct: f64 = indices.iter().map(|&k| u[k - 1]).sum();
            assert_eq!(indices.len(), r);
            assert_eq!(lhs, v[..r].iter().sum::<f64>());
            assert_eq!(rhs, rhs_direct);
            assert!(lhs < rhs);
        }
        other => panic!("{other:?}"),
    }
}
