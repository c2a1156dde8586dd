//! Seeded randomized suites behind the property claims. Every trial draws
//! from its own RNG stream, so results do not depend on scheduling.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conditions::{check_prefix_majorization, rearrangement_dominates, CheckOptions};
use crate::error::Result;
use crate::matrix::DenseMatrix;
use crate::norm::{grid_oracle, norm_estimate, NormOptions};
use crate::rearrangement::{apply_row_perm, construct_block_form, is_block_form_member, order_rows_for_decreasing_image};
use crate::sampling::Sampler;
use crate::spaces::{decreasing_rearrangement, SpaceSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteTally {
    pub trials: usize,
    pub failures: usize,
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

fn dyadic_vec(len: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..len).map(|_| f64::from(rng.gen_range(0..=8u32)) / 8.0).collect()
}

fn tally(trials: usize, outcomes: Result<Vec<bool>>) -> Result<SuiteTally> {
    Ok(SuiteTally {
        trials,
        failures: outcomes?.into_iter().filter(|ok| !ok).count(),
    })
}

/// Random matrices with `2..=max_rows` rows: the greedy block form must pass
/// the membership test, and ordering rows for a random `x ≥ 0` must give a
/// non-increasing image.
pub fn block_form_suite(trials: usize, max_rows: usize, seed: u64) -> Result<SuiteTally> {
    let outcomes = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let n = rng.gen_range(2..=max_rows.max(2));
            let m = rng.gen_range(1..=max_rows.max(2));
            let sampler = [Sampler::UniformDyadic, Sampler::Binary, Sampler::ColumnSorted, Sampler::RowSorted][t % 4];
            let a = sampler.sample(n, m, &mut rng);
            let form = construct_block_form(&a);
            let member = is_block_form_member(&apply_row_perm(&a, &form.perm)?, form.gamma, form.lambda)?;
            let x = dyadic_vec(m, &mut rng);
            let (b, ordered) = order_rows_for_decreasing_image(&a, &x)?;
            let y = b.apply(&x)?;
            let decreasing = y.windows(2).all(|w| w[0] >= w[1]);
            let still_member = is_block_form_member(&b, ordered.gamma, ordered.lambda)?;
            Ok(member && decreasing && still_member)
        })
        .collect();
    tally(trials, outcomes)
}

/// Draws `(v, u)` with `Σ_{k≤r} v_k` dominating the `r` largest entries of
/// `u` (a shuffled perturbation of `u*`, resampled until it qualifies).
fn majorizing_pair(len: usize, rng: &mut ChaCha8Rng) -> Result<(Vec<f64>, Vec<f64>)> {
    let opts = CheckOptions::default();
    loop {
        let u = dyadic_vec(len, rng);
        let mut v: Vec<f64> = decreasing_rearrangement(&u)
            .into_iter()
            .map(|s| s + f64::from(rng.gen_range(0..=2u32)) / 8.0)
            .collect();
        if rng.gen_bool(0.5) {
            let i = rng.gen_range(0..len);
            let j = rng.gen_range(0..len);
            v.swap(i, j);
        }
        if rng.gen_bool(0.25) {
            v.shuffle(rng);
        }
        if check_prefix_majorization(&v, &u, &opts)?.holds {
            return Ok((v, u));
        }
    }
}

/// Pairs passing the majorization check, each tested against a random
/// `x ≥ 0`: `Σ v_k x*_k ≥ Σ u_k x_k` must hold.
pub fn majorization_suite(trials: usize, max_len: usize, seed: u64) -> Result<SuiteTally> {
    let outcomes = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let len = rng.gen_range(1..=max_len.max(1));
            let (v, u) = majorizing_pair(len, &mut rng)?;
            let x = dyadic_vec(len, &mut rng);
            rearrangement_dominates(&v, &u, &x)
        })
        .collect();
    tally(trials, outcomes)
}

/// Largest `|estimate − grid| − 2/resolution` (clamped at 0) over random
/// `3 × 3` instances, every `(p, q) ∈ {1, 2, 3, ∞}²` and both cones.
pub fn oracle_agreement_suite(instances: usize, resolution: usize, seed: u64) -> Result<f64> {
    let exps = [Some(1.0), Some(2.0), Some(3.0), None];
    let space = |p: Option<f64>| p.map_or_else(|| Ok(SpaceSpec::lp_inf()), SpaceSpec::lp);
    let bound = 2.0 / resolution as f64;
    let excess: Vec<f64> = (0..instances)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let a = DenseMatrix::new(3, 3, (0..9).map(|_| rng.gen::<f64>()).collect())?;
            let mut worst = 0.0f64;
            for p in exps {
                for q in exps {
                    let (e, f) = (space(p)?, space(q)?);
                    for restricted in [false, true] {
                        let est = norm_estimate(&a, &e, &f, restricted, &NormOptions::default())?.value;
                        let grid = grid_oracle(&a, &e, &f, restricted, resolution)?;
                        worst = worst.max((est - grid).abs() - bound);
                    }
                }
            }
            Ok(worst)
        })
        .collect::<Result<_>>()?;
    Ok(excess.into_iter().fold(0.0, f64::max))
}
