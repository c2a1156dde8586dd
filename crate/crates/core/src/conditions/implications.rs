//! Randomized tests of the implications between conditions: whenever the
//! premise holds on a sample, the conclusion must hold as well.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::sampling::Sampler;

use super::{check, CheckOptions, ConditionId, ConditionReport};

/// Violations kept verbatim per tally.
const KEPT_VIOLATIONS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Implication {
    ColumnPrefixToBlocks,
    RowPrefixToBlocks,
    StaircaseToBlocks,
    RowDecreasingToMemberColumnSums,
    MemberBlocksToMemberColumnSums,
    MemberColumnSumsToMemberBlocks,
    BlocksToRearranged,
    RowDecreasingToRearranged,
    MemberColumnSumsToRearranged,
}

impl Implication {
    pub const ALL: [Implication; 9] = [
        Implication::ColumnPrefixToBlocks,
        Implication::RowPrefixToBlocks,
        Implication::StaircaseToBlocks,
        Implication::RowDecreasingToMemberColumnSums,
        Implication::MemberBlocksToMemberColumnSums,
        Implication::MemberColumnSumsToMemberBlocks,
        Implication::BlocksToRearranged,
        Implication::RowDecreasingToRearranged,
        Implication::MemberColumnSumsToRearranged,
    ];

    pub fn premise(self) -> ConditionId {
        use ConditionId::*;
        match self {
            Implication::ColumnPrefixToBlocks => ColumnDecreasingPrefix,
            Implication::RowPrefixToBlocks => RowDecreasingPrefix,
            Implication::StaircaseToBlocks => SummabilityStaircase,
            Implication::RowDecreasingToMemberColumnSums | Implication::RowDecreasingToRearranged => {
                RowDecreasing
            }
            Implication::MemberBlocksToMemberColumnSums => MemberBlockDominance,
            Implication::MemberColumnSumsToMemberBlocks | Implication::MemberColumnSumsToRearranged => {
                MemberColumnSumsDecreasing
            }
            Implication::BlocksToRearranged => BlockPrefixDominance,
        }
    }

    pub fn conclusion(self) -> ConditionId {
        use ConditionId::*;
        match self {
            Implication::ColumnPrefixToBlocks
            | Implication::RowPrefixToBlocks
            | Implication::StaircaseToBlocks => BlockPrefixDominance,
            Implication::RowDecreasingToMemberColumnSums | Implication::MemberBlocksToMemberColumnSums => {
                MemberColumnSumsDecreasing
            }
            Implication::MemberColumnSumsToMemberBlocks => MemberBlockDominance,
            Implication::BlocksToRearranged
            | Implication::RowDecreasingToRearranged
            | Implication::MemberColumnSumsToRearranged => RearrangedBlockDominance,
        }
    }

    /// Samplers mixed round-robin so that both premise outcomes occur.
    pub fn default_samplers(self) -> &'static [Sampler] {
        use Sampler::*;
        match self {
            Implication::ColumnPrefixToBlocks => &[ColumnMajorized, ColumnSorted, DoublySorted, UniformDyadic],
            Implication::RowPrefixToBlocks => &[RowMajorized, RowSorted, DoublySorted, UniformDyadic],
            Implication::StaircaseToBlocks => &[StaircaseSummability, Summability],
            Implication::RowDecreasingToMemberColumnSums | Implication::RowDecreasingToRearranged => {
                &[RowSorted, DoublySorted, UniformDyadic, Binary]
            }
            Implication::MemberBlocksToMemberColumnSums | Implication::MemberColumnSumsToMemberBlocks => {
                &[UniformDyadic, RowSorted, ColumnSorted, Binary, ColumnMajorized]
            }
            Implication::BlocksToRearranged => &[ColumnMajorized, RowMajorized, DoublySorted, UniformDyadic],
            Implication::MemberColumnSumsToRearranged => &[RowSorted, ColumnMajorized, UniformDyadic, Binary],
        }
    }

    pub fn label(self) -> String {
        format!("{} => {}", self.premise(), self.conclusion())
    }
}

/// A sample on which the premise held and the conclusion failed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationRecord {
    pub trial: usize,
    pub matrix: DenseMatrix<f64>,
    pub conclusion: ConditionReport,
}

/// Outcome counts for one implication.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImplicationTally {
    pub implication: Implication,
    pub trials: usize,
    pub premise_held: usize,
    pub violations: usize,
    pub examples: Vec<ViolationRecord>,
}

impl ImplicationTally {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

fn holds(id: ConditionId, a: &DenseMatrix<f64>, opts: &CheckOptions) -> Result<Option<ConditionReport>> {
    match check(id, a, opts) {
        Ok(rep) => Ok(Some(rep)),
        Err(Error::NotSummability) => Ok(None),
        Err(e) => Err(e),
    }
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// Runs every implication over `trials` samples drawn by `sampler` (given
/// the trial's RNG). Samples are independent of scheduling.
pub fn implication_suite<F>(
    sampler: F,
    implications: &[Implication],
    trials: usize,
    seed: u64,
    opts: &CheckOptions,
) -> Result<Vec<ImplicationTally>>
where
    F: Fn(usize, &mut ChaCha8Rng) -> DenseMatrix<f64> + Sync,
{
    implications
        .iter()
        .map(|&imp| {
            let outcomes: Vec<(usize, bool, Option<ViolationRecord>)> = (0..trials)
                .into_par_iter()
                .map(|t| {
                    let mut rng = trial_rng(seed, t);
                    let a = sampler(t, &mut rng);
                    let premise = matches!(holds(imp.premise(), &a, opts)?, Some(r) if r.holds);
                    if !premise {
                        return Ok((t, false, None));
                    }
                    let rep = holds(imp.conclusion(), &a, opts)?.ok_or(Error::NotSummability)?;
                    let violation = (!rep.holds).then_some(ViolationRecord {
                        trial: t,
                        matrix: a,
                        conclusion: rep,
                    });
                    Ok((t, true, violation))
                })
                .collect::<Result<_>>()?;
            let premise_held = outcomes.iter().filter(|o| o.1).count();
            let records: Vec<ViolationRecord> = outcomes.into_iter().filter_map(|o| o.2).collect();
            Ok(ImplicationTally {
                implication: imp,
                trials,
                premise_held,
                violations: records.len(),
                examples: records.into_iter().take(KEPT_VIOLATIONS).collect(),
            })
        })
        .collect()
}

/// One implication over its default sampler mix, with sizes drawn from
/// `2..=max_rows` (columns likewise; square for summability samplers).
pub fn run_implication(
    imp: Implication,
    trials: usize,
    max_rows: usize,
    seed: u64,
    opts: &CheckOptions,
) -> Result<ImplicationTally> {
    if max_rows < 2 {
        return Err(Error::InvalidParameter(format!("max_rows must be >= 2, got {max_rows}")));
    }
    let samplers = imp.default_samplers();
    let sampler = |t: usize, rng: &mut ChaCha8Rng| {
        let n = rng.gen_range(2..=max_rows);
        let m = rng.gen_range(2..=max_rows);
        samplers[t % samplers.len()].sample(n, m, rng)
    };
    Ok(implication_suite(sampler, &[imp], trials, seed, opts)?.remove(0))
}
