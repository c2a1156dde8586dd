use crate::conditions::{check, run_implication, CheckOptions, ConditionId, Implication, Witness};
use crate::error::{Error, Result};
use crate::families::{
    binomial_weights, hilbert, l1_gap_matrix, l2_gap_matrix, linf_gap_matrix, FamilyKind, MatrixFamily,
};
use crate::matrix::DenseMatrix;
use crate::norm::{grid_oracle, norm_estimate, truncation_sweep, NormOptions};
use crate::spaces::{decreasing_rearrangement, ps_majorization_holds, ps_violation_witness, space_norm, SpaceSpec, WeightSeq};

use super::sufficiency::decreasing_sufficiency_check;
use super::suites::{block_form_suite, majorization_suite, oracle_agreement_suite};
use super::{Claim, ClaimValue, Observation, Provenance, VerifyOptions};

const IMPLICATION_TRIALS: usize = 1000;
const IMPLICATION_MAX_ROWS: usize = 5;
const PROPERTY_TRIALS: usize = 1000;
const ORACLE_INSTANCES: usize = 50;
const ORACLE_RESOLUTION: usize = 100;

fn real(v: f64) -> Result<Observation> {
    Ok(Observation::Value(ClaimValue::Real(v)))
}

fn boolean(v: bool) -> Result<Observation> {
    Ok(Observation::Value(ClaimValue::Bool(v)))
}

fn lp(p: f64) -> SpaceSpec<f64> {
    SpaceSpec::lp(p).expect("valid exponent")
}

fn harmonic(n: usize) -> Vec<f64> {
    (1..=n).map(|k| 1.0 / k as f64).collect()
}

fn harmonic_l2(n: usize) -> SpaceSpec<f64> {
    SpaceSpec::weighted(2.0, WeightSeq::new(harmonic(n)).expect("positive weights")).expect("valid space")
}

fn opts() -> NormOptions {
    NormOptions::default()
}

fn norm_gap(a: &DenseMatrix<f64>, e: &SpaceSpec<f64>, f: &SpaceSpec<f64>) -> Result<f64> {
    let full = norm_estimate(a, e, f, false, &opts())?.value;
    let dec = norm_estimate(a, e, f, true, &opts())?.value;
    Ok(full - dec)
}

fn max_gap_over(family: &MatrixFamily<f64>, sizes: &[usize], e: &SpaceSpec<f64>, f: &SpaceSpec<f64>) -> Result<f64> {
    sizes
        .iter()
        .map(|&n| Ok(norm_gap(&family.truncate(n)?, e, f)?.abs()))
        .try_fold(0.0f64, |m, g: Result<f64>| Ok(m.max(g?)))
}

fn holds(id: ConditionId, a: &DenseMatrix<f64>) -> Result<bool> {
    Ok(check(id, a, &CheckOptions::rounding_aware())?.holds)
}

fn identity_l2_norm(_: &VerifyOptions) -> Result<Observation> {
    real(norm_estimate(&DenseMatrix::identity(3), &lp(2.0), &lp(2.0), false, &opts())?.value)
}

fn hilbert_apply_ones(_: &VerifyOptions) -> Result<Observation> {
    let y = hilbert::<f64>(2, 2)?.apply(&[1.0, 1.0])?;
    boolean((y[0] - 1.5).abs() < 1e-15 && (y[1] - 5.0 / 6.0).abs() < 1e-15)
}

fn staircase_full_norm(_: &VerifyOptions) -> Result<Observation> {
    real(norm_estimate(&l1_gap_matrix(5)?, &lp(1.0), &lp(1.0), false, &opts())?.value)
}

fn staircase_full_maximizer(_: &VerifyOptions) -> Result<Observation> {
    let est = norm_estimate(&l1_gap_matrix(5)?, &lp(1.0), &lp(1.0), false, &opts())?;
    boolean(est.maximizer == [0.0, 1.0, 0.0, 0.0, 0.0])
}

fn staircase_restricted_norm(_: &VerifyOptions) -> Result<Observation> {
    real(norm_estimate(&l1_gap_matrix(5)?, &lp(1.0), &lp(1.0), true, &opts())?.value)
}

/// The sufficiency check must decline the matrix; the gap is asserted directly.
fn staircase_norm_gap(o: &VerifyOptions) -> Result<Observation> {
    let fam = MatrixFamily::new(FamilyKind::Custom { matrix: l1_gap_matrix(5)? })?;
    if decreasing_sufficiency_check(&fam, &lp(1.0), &lp(1.0), 5, o.samples, o.seed, 1e-9)?.is_some() {
        return Err(Error::InvalidParameter("a sufficient condition unexpectedly holds".into()));
    }
    real(norm_gap(&l1_gap_matrix(5)?, &lp(1.0), &lp(1.0))?)
}

fn split_row_full_norm(_: &VerifyOptions) -> Result<Observation> {
    real(norm_estimate(&l2_gap_matrix(), &lp(2.0), &lp(2.0), false, &opts())?.value)
}

fn split_row_full_maximizer(_: &VerifyOptions) -> Result<Observation> {
    let est = norm_estimate(&l2_gap_matrix(), &lp(2.0), &lp(2.0), false, &opts())?;
    let s = 0.5f64.sqrt();
    boolean(est.maximizer.iter().zip([0.0, s, s]).all(|(x, e)| (x - e).abs() <= 1e-4))
}

fn split_row_restricted_norm(_: &VerifyOptions) -> Result<Observation> {
    real(norm_estimate(&l2_gap_matrix(), &lp(2.0), &lp(2.0), true, &opts())?.value)
}

fn split_row_restricted_grid(_: &VerifyOptions) -> Result<Observation> {
    real(grid_oracle(&l2_gap_matrix(), &lp(2.0), &lp(2.0), true, 200)?)
}

fn single_entry_rearrangement_loses(_: &VerifyOptions) -> Result<Observation> {
    let a = linf_gap_matrix::<f64>();
    let x = [0.0, 1.0];
    let inf = SpaceSpec::lp_inf();
    let plain = space_norm(&inf, &a.apply(&x)?)?;
    let sorted = space_norm(&inf, &a.apply(&decreasing_rearrangement(&x))?)?;
    boolean(sorted == 0.0 && plain == 1.0 && sorted < plain)
}

fn single_entry_norm_gap(_: &VerifyOptions) -> Result<Observation> {
    let a = linf_gap_matrix::<f64>();
    let differs = [1.0, 2.0, 3.0]
        .iter()
        .map(|&p| Ok(norm_gap(&a, &lp(p), &SpaceSpec::lp_inf())? > 1e-9))
        .collect::<Result<Vec<bool>>>()?;
    boolean(differs.into_iter().all(|d| d))
}

fn cubic_weights_majorization_failure(_: &VerifyOptions) -> Result<Observation> {
    let w = WeightSeq::from_fn(4, |n| 1.0 / (n as f64).powi(3))?;
    let spec = SpaceSpec::weighted(2.0, w)?;
    let Some((x, y)) = ps_violation_witness(&spec, 4)? else {
        return boolean(false);
    };
    boolean(ps_majorization_holds(&x, &y) && space_norm(&spec, &y)? > space_norm(&spec, &x)?)
}

fn weighted_mean_harmonic(_: &VerifyOptions) -> Result<Observation> {
    let fam = MatrixFamily::new(FamilyKind::WeightedMean { weights: harmonic(30) })?;
    real(max_gap_over(&fam, &[10, 20, 30], &lp(2.0), &lp(2.0))?)
}

fn weighted_mean_harmonic_transpose(_: &VerifyOptions) -> Result<Observation> {
    let fam = MatrixFamily::new(FamilyKind::WeightedMean { weights: harmonic(30) })?.transposed();
    real(max_gap_over(&fam, &[10, 20, 30], &lp(2.0), &lp(2.0))?)
}

fn hilbert_l2(_: &VerifyOptions) -> Result<Observation> {
    real(norm_gap(&hilbert(30, 30)?, &lp(2.0), &lp(2.0))?.abs())
}

fn hilbert_weighted_target(_: &VerifyOptions) -> Result<Observation> {
    real(norm_gap(&hilbert(30, 30)?, &lp(2.0), &harmonic_l2(30))?.abs())
}

fn weighted_mean_transpose_column_prefix(_: &VerifyOptions) -> Result<Observation> {
    let fam = MatrixFamily::new(FamilyKind::WeightedMean { weights: harmonic(30) })?.transposed();
    boolean(holds(ConditionId::ColumnDecreasingPrefix, &fam.truncate(30)?)?)
}

fn norlund_decreasing_staircase(_: &VerifyOptions) -> Result<Observation> {
    let fam = MatrixFamily::new(FamilyKind::Norlund { weights: harmonic(30) })?;
    boolean(holds(ConditionId::SummabilityStaircase, &fam.truncate(30)?)?)
}

fn cesaro_staircase(alpha: f64) -> Result<Observation> {
    let fam = MatrixFamily::new(FamilyKind::Cesaro { alpha })?;
    boolean(holds(ConditionId::SummabilityStaircase, &fam.truncate(30)?)?)
}

fn hilbert_row_decreasing(_: &VerifyOptions) -> Result<Observation> {
    boolean(holds(ConditionId::RowDecreasing, &hilbert(30, 30)?)?)
}

/// Fails, and the witness entries really violate the inequality.
fn staircase_matrix_witness(_: &VerifyOptions) -> Result<Observation> {
    let a = l1_gap_matrix::<f64>(5)?;
    let rep = check(ConditionId::SummabilityStaircase, &a, &CheckOptions::default())?;
    let sound = match rep.witness {
        Some(Witness::Staircase { j, k, lhs, rhs }) => {
            let bound = a.get(j, k - 1).max(if k < a.cols() { a.get(j, k) } else { 0.0 });
            lhs == a.get(j - 1, k - 1) && rhs == bound && lhs < rhs
        }
        _ => false,
    };
    boolean(!rep.holds && sound)
}

fn sufficiency(
    family: MatrixFamily<f64>,
    e: SpaceSpec<f64>,
    f: SpaceSpec<f64>,
    size: usize,
    o: &VerifyOptions,
) -> Result<Observation> {
    match decreasing_sufficiency_check(&family, &e, &f, size, o.samples, o.seed, 1e-6)? {
        Some(rep) => real(rep.discrepancy),
        None => Ok(Observation::NotApplicable(format!(
            "no sufficient condition holds for {}",
            family.name()
        ))),
    }
}

fn weighted_mean_transpose_sufficiency(o: &VerifyOptions) -> Result<Observation> {
    let fam = MatrixFamily::new(FamilyKind::WeightedMean { weights: harmonic(30) })?.transposed();
    sufficiency(fam, lp(2.0), lp(2.0), 30, o)
}

/// `w_n = n`: increasing, with `w_{n+1}/w_n ≤ w_n/w_{n-1}`.
fn norlund_concave_transpose_sufficiency(o: &VerifyOptions) -> Result<Observation> {
    let fam = MatrixFamily::new(FamilyKind::Norlund {
        weights: (1..=20).map(f64::from).collect(),
    })?
    .transposed();
    sufficiency(fam, lp(2.0), harmonic_l2(20), 20, o)
}

fn gamma_transpose_sufficiency(o: &VerifyOptions) -> Result<Observation> {
    let fam = MatrixFamily::new(FamilyKind::Gamma { alpha: 0.5 })?.transposed();
    sufficiency(fam, lp(3.0), lp(3.0), 20, o)
}

fn implication(imp: Implication, o: &VerifyOptions) -> Result<Observation> {
    let tally = run_implication(imp, IMPLICATION_TRIALS, IMPLICATION_MAX_ROWS, o.seed, &CheckOptions::default())?;
    if tally.premise_held == 0 {
        return Err(Error::InvalidParameter(format!("premise of {} never held", imp.label())));
    }
    real(tally.violations as f64)
}

fn block_forms(o: &VerifyOptions) -> Result<Observation> {
    real(block_form_suite(PROPERTY_TRIALS, 7, o.seed)?.failures as f64)
}

fn majorization(o: &VerifyOptions) -> Result<Observation> {
    real(majorization_suite(PROPERTY_TRIALS, 7, o.seed)?.failures as f64)
}

fn oracle_agreement(o: &VerifyOptions) -> Result<Observation> {
    real(oracle_agreement_suite(ORACLE_INSTANCES, ORACLE_RESOLUTION, o.seed)?)
}

/// Truncations of the averaging operator increase and stay below 2, the
/// classical bound on `ℓ_2`.
fn cesaro_sweep(_: &VerifyOptions) -> Result<Observation> {
    let fam = MatrixFamily::new(FamilyKind::Cesaro { alpha: 1.0 })?;
    let sweep = truncation_sweep(&fam, &lp(2.0), &lp(2.0), &[10, 50, 200], false, &opts())?;
    let increasing = sweep.increments.iter().all(|&d| d > 0.0);
    boolean(sweep.monotone && increasing && sweep.values().iter().all(|&v| v < 2.0))
}

/// Transposed Nörlund matrices with increasing weights whose ratios are not
/// decreasing.
fn norlund_transpose_general(_: &VerifyOptions) -> Result<Observation> {
    let weight_sets: [Vec<f64>; 3] = [
        (1..=20).map(|n| f64::from((n + 1) / 2)).collect(),
        (1..=20).map(|n| f64::from(n * n) + if n % 3 == 0 { 5.0 } else { 0.0 }).collect(),
        binomial_weights(2.5, 20)?.as_slice().iter().enumerate().map(|(i, w)| w + (i % 2) as f64).collect(),
    ];
    let mut worst = 0.0f64;
    for weights in weight_sets {
        let fam = MatrixFamily::new(FamilyKind::Norlund { weights })?.transposed();
        for n in [6, 12, 20] {
            worst = worst.max(norm_gap(&fam.truncate(n)?, &lp(2.0), &lp(2.0))?.abs());
        }
    }
    real(worst)
}

macro_rules! claim {
    ($id:literal, $prov:ident, $expected:expr, $tol:expr, $check:expr, $statement:literal) => {
        Claim {
            id: $id,
            statement: $statement,
            expected: $expected,
            tolerance: $tol,
            provenance: Provenance::$prov,
            exploratory: false,
            check: $check,
        }
    };
}

/// Every registered claim.
pub fn registry() -> Vec<Claim> {
    use ClaimValue::{Bool, Real};
    let mut claims = vec![
        claim!("identity_l2_norm", Trivial, Real(1.0), 1e-12, identity_l2_norm,
            "the 3x3 identity has norm 1 on l2"),
        claim!("hilbert_2x2_apply_ones", Derived, Bool(true), 0.0, hilbert_apply_ones,
            "the 2x2 Hilbert section maps (1, 1) to (3/2, 5/6)"),
        claim!("staircase_l1_full_norm", Published, Real(1.5), 1e-12, staircase_full_norm,
            "the summability matrix with the split third row has l1 norm 3/2"),
        claim!("staircase_l1_full_maximizer", Published, Bool(true), 0.0, staircase_full_maximizer,
            "the l1 norm of the split-row summability matrix is attained at e2"),
        claim!("staircase_l1_restricted_norm", Derived, Real(1.25), 1e-9, staircase_restricted_norm,
            "on decreasing vectors the split-row summability matrix has l1 norm 5/4"),
        claim!("staircase_l1_norm_gap", Published, Real(0.25), 1e-9, staircase_norm_gap,
            "no sufficient condition holds for the split-row summability matrix, and its norms differ by 1/4"),
        claim!("staircase_condition_fails_with_witness", Derived, Bool(true), 0.0, staircase_matrix_witness,
            "the split-row summability matrix violates the staircase condition at a verifiable entry pair"),
        claim!("split_row_l2_full_norm", Published, Real(2f64.sqrt()), 1e-6, split_row_full_norm,
            "the matrix with a11 = a22 = a23 = 1 has l2 norm sqrt(2)"),
        claim!("split_row_l2_full_maximizer", Published, Bool(true), 0.0, split_row_full_maximizer,
            "the l2 norm of that matrix is attained at (0, 1/sqrt(2), 1/sqrt(2))"),
        claim!("split_row_l2_restricted_norm", Derived, Real((5.0f64 / 3.0).sqrt()), 1e-6, split_row_restricted_norm,
            "on decreasing vectors that matrix has l2 norm sqrt(5/3)"),
        claim!("split_row_l2_restricted_grid", Derived, Real((5.0f64 / 3.0).sqrt()), 1e-2, split_row_restricted_grid,
            "a resolution-200 grid scan of decreasing vectors finds sqrt(5/3)"),
        claim!("single_entry_linf_rearrangement_loses", Published, Bool(true), 0.0, single_entry_rearrangement_loses,
            "with a22 = 1 only and x = e2, the sup norm of Ax* is 0 and of Ax is 1"),
        claim!("single_entry_linf_norms_differ", Published, Bool(true), 0.0, single_entry_norm_gap,
            "with a22 = 1 only, the lp to sup-norm norms differ on and off the decreasing cone"),
        claim!("cubic_weights_majorization_failure", Published, Bool(true), 0.0, cubic_weights_majorization_failure,
            "weighted l2 with weights 1/n^3 lacks the majorization property"),
        claim!("weighted_mean_harmonic_equal_norms", Published, Real(0.0), 1e-4, weighted_mean_harmonic,
            "weighted means with weights 1/n have equal l2 norms on and off the decreasing cone (n = 10, 20, 30)"),
        claim!("weighted_mean_harmonic_transpose_equal_norms", Published, Real(0.0), 1e-4, weighted_mean_harmonic_transpose,
            "transposed weighted means with weights 1/n have equal l2 norms on and off the decreasing cone"),
        claim!("hilbert_l2_equal_norms", Published, Real(0.0), 1e-4, hilbert_l2,
            "the 30x30 Hilbert section has equal l2 norms on and off the decreasing cone"),
        claim!("hilbert_weighted_target_equal_norms", Published, Real(0.0), 1e-4, hilbert_weighted_target,
            "the 30x30 Hilbert section from l2 to weighted l2 (weights 1/n) has equal norms on and off the decreasing cone"),
        claim!("weighted_mean_transpose_column_prefix", Published, Bool(true), 0.0, weighted_mean_transpose_column_prefix,
            "transposed weighted means with decreasing weights have decreasing columns and column-wise decreasing leading sums"),
        claim!("norlund_decreasing_staircase", Published, Bool(true), 0.0, norlund_decreasing_staircase,
            "Norlund means with decreasing weights satisfy the staircase condition"),
        claim!("cesaro_quarter_staircase", Published, Bool(true), 0.0, |_| cesaro_staircase(0.25),
            "Cesaro means of order 1/4 satisfy the staircase condition"),
        claim!("cesaro_half_staircase", Published, Bool(true), 0.0, |_| cesaro_staircase(0.5),
            "Cesaro means of order 1/2 satisfy the staircase condition"),
        claim!("cesaro_one_staircase", Published, Bool(true), 0.0, |_| cesaro_staircase(1.0),
            "Cesaro means of order 1 satisfy the staircase condition"),
        claim!("hilbert_row_decreasing", Published, Bool(true), 0.0, hilbert_row_decreasing,
            "the Hilbert matrix has decreasing rows"),
        claim!("weighted_mean_transpose_sufficiency", Published, Real(0.0), 1e-6, weighted_mean_transpose_sufficiency,
            "for transposed weighted means with decreasing weights, rearranging x decreasingly never lowers the l2 norm of Ax"),
        claim!("norlund_concave_transpose_sufficiency", Published, Real(0.0), 1e-6, norlund_concave_transpose_sufficiency,
            "for transposed Norlund means with weights n, rearranging x decreasingly never lowers the weighted l2 norm of Ax"),
        claim!("gamma_half_transpose_sufficiency", Published, Real(0.0), 1e-6, gamma_transpose_sufficiency,
            "for the transposed Gamma matrix of order 1/2, rearranging x decreasingly never lowers the l3 norm of Ax"),
        claim!("block_form_construction", Derived, Real(0.0), 0.0, block_forms,
            "greedy block forms pass the membership test and order rows for a decreasing image"),
        claim!("majorization_dominance", Derived, Real(0.0), 0.0, majorization,
            "prefix majorization implies dominance of the rearranged pairing"),
        claim!("oracle_agreement", Derived, Real(0.0), 0.0, oracle_agreement,
            "norm estimates agree with the grid scan within 2/resolution on random 3x3 matrices"),
        claim!("cesaro_sweep_below_two", Derived, Bool(true), 0.0, cesaro_sweep,
            "l2 norms of Cesaro sections increase with size and stay below 2"),
    ];
    for imp in Implication::ALL {
        claims.push(Claim {
            id: implication_id(imp),
            statement: "no sampled matrix satisfies the premise and violates the conclusion",
            expected: ClaimValue::Real(0.0),
            tolerance: 0.0,
            provenance: Provenance::Derived,
            exploratory: false,
            check: implication_check(imp),
        });
    }
    claims.push(Claim {
        id: "norlund_transpose_general_weights",
        statement: "transposed Norlund means with increasing weights and non-decreasing ratios still have equal l2 norms on and off the decreasing cone",
        expected: ClaimValue::Real(0.0),
        tolerance: 1e-6,
        provenance: Provenance::Derived,
        exploratory: true,
        check: norlund_transpose_general,
    });
    claims.sort_by_key(|c| c.id);
    claims
}

fn implication_id(imp: Implication) -> &'static str {
    match imp {
        Implication::ColumnPrefixToBlocks => "implication_column_prefix_to_blocks",
        Implication::RowPrefixToBlocks => "implication_row_prefix_to_blocks",
        Implication::StaircaseToBlocks => "implication_staircase_to_blocks",
        Implication::RowDecreasingToMemberColumnSums => "implication_row_decreasing_to_member_column_sums",
        Implication::MemberBlocksToMemberColumnSums => "implication_member_blocks_to_member_column_sums",
        Implication::MemberColumnSumsToMemberBlocks => "implication_member_column_sums_to_member_blocks",
        Implication::BlocksToRearranged => "implication_blocks_to_rearranged",
        Implication::RowDecreasingToRearranged => "implication_row_decreasing_to_rearranged",
        Implication::MemberColumnSumsToRearranged => "implication_member_column_sums_to_rearranged",
    }
}

fn implication_check(imp: Implication) -> super::CheckFn {
    match imp {
        Implication::ColumnPrefixToBlocks => |o| implication(Implication::ColumnPrefixToBlocks, o),
        Implication::RowPrefixToBlocks => |o| implication(Implication::RowPrefixToBlocks, o),
        Implication::StaircaseToBlocks => |o| implication(Implication::StaircaseToBlocks, o),
        Implication::RowDecreasingToMemberColumnSums => {
            |o| implication(Implication::RowDecreasingToMemberColumnSums, o)
        }
        Implication::MemberBlocksToMemberColumnSums => {
            |o| implication(Implication::MemberBlocksToMemberColumnSums, o)
        }
        Implication::MemberColumnSumsToMemberBlocks => {
            |o| implication(Implication::MemberColumnSumsToMemberBlocks, o)
        }
        Implication::BlocksToRearranged => |o| implication(Implication::BlocksToRearranged, o),
        Implication::RowDecreasingToRearranged => |o| implication(Implication::RowDecreasingToRearranged, o),
        Implication::MemberColumnSumsToRearranged => |o| implication(Implication::MemberColumnSumsToRearranged, o),
    }
}
