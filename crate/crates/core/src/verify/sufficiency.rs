//! Checks that decreasing vectors determine the norm of a matrix known to
//! satisfy one of the sufficient conditions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::conditions::{check, CheckOptions, ConditionId};
use crate::error::{Error, Result};
use crate::families::MatrixFamily;
use crate::matrix::DenseMatrix;
use crate::norm::{norm_estimate, NormOptions};
use crate::spaces::{decreasing_rearrangement, space_norm, SpaceSpec};

/// A condition found to hold, on the matrix itself or on its transpose.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SufficientCondition {
    pub condition: ConditionId,
    pub transposed: bool,
}

/// Conditions whose validity on the transpose carries over to the matrix.
const TRANSPOSABLE: [ConditionId; 3] = [
    ConditionId::ColumnDecreasingPrefix,
    ConditionId::RowDecreasingPrefix,
    ConditionId::SummabilityStaircase,
];

/// First sufficient condition that holds on `a` (checked with relative slack
/// for rounded entries). Block dominance itself is tried when the subset
/// enumeration is within its cap.
pub fn sufficient_condition(a: &DenseMatrix<f64>) -> Option<SufficientCondition> {
    let opts = CheckOptions::rounding_aware();
    let holds = |id: ConditionId, m: &DenseMatrix<f64>| matches!(check(id, m, &opts), Ok(r) if r.holds);
    let direct = [
        ConditionId::RowDecreasing,
        ConditionId::ColumnDecreasingPrefix,
        ConditionId::RowDecreasingPrefix,
        ConditionId::SummabilityStaircase,
    ];
    if let Some(&condition) = direct.iter().find(|&&id| holds(id, a)) {
        return Some(SufficientCondition {
            condition,
            transposed: false,
        });
    }
    let at = a.transpose();
    if let Some(&condition) = TRANSPOSABLE.iter().find(|&&id| holds(id, &at)) {
        return Some(SufficientCondition {
            condition,
            transposed: true,
        });
    }
    (a.rows() <= opts.subset_cap && holds(ConditionId::BlockPrefixDominance, a)).then_some(SufficientCondition {
        condition: ConditionId::BlockPrefixDominance,
        transposed: false,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SufficiencyReport {
    pub condition: SufficientCondition,
    /// Largest `‖Ax‖_F − ‖Ax*‖_F` over the samples (clamped at 0).
    pub worst_sample_deficit: f64,
    pub unrestricted: f64,
    pub restricted: f64,
    /// `max(worst_sample_deficit, |unrestricted − restricted|)`.
    pub discrepancy: f64,
    pub passed: bool,
}

/// On the `size × size` truncation of `family`: finds a sufficient condition
/// (returning `None` if there is none), then checks `‖Ax*‖_F ≥ ‖Ax‖_F − tol`
/// on `samples` seeded random `x ≥ 0` and that the unrestricted and
/// restricted norm estimates agree within `tol`.
pub fn decreasing_sufficiency_check(
    family: &MatrixFamily<f64>,
    e: &SpaceSpec<f64>,
    f: &SpaceSpec<f64>,
    size: usize,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<Option<SufficiencyReport>> {
    if size == 0 {
        return Err(Error::InvalidParameter("size must be positive".into()));
    }
    let a = family.truncate(size)?;
    let Some(condition) = sufficient_condition(&a) else {
        return Ok(None);
    };
    e.check_dim(size)?;
    f.check_dim(size)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let x: Vec<f64> = (0..size)
            .map(|_| if rng.gen_bool(0.2) { 0.0 } else { rng.gen::<f64>() })
            .collect();
        let xs = decreasing_rearrangement(&x);
        let plain = space_norm(f, &a.apply(&x)?)?;
        let sorted = space_norm(f, &a.apply(&xs)?)?;
        worst = worst.max(plain - sorted);
    }
    let opts = NormOptions::default();
    let unrestricted = norm_estimate(&a, e, f, false, &opts)?.value;
    let restricted = norm_estimate(&a, e, f, true, &opts)?.value;
    let discrepancy = worst.max((unrestricted - restricted).abs());
    Ok(Some(SufficiencyReport {
        condition,
        worst_sample_deficit: worst,
        unrestricted,
        restricted,
        discrepancy,
        passed: discrepancy <= tol,
    }))
}
