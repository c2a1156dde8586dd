//! Estimation of `‖A‖_{E,F} = sup ‖Ax‖_F` over non-negative unit vectors of
//! `E`, and of the restricted norm `‖A‖_{E,F,↓}` over non-increasing ones.
//!
//! The objective `x ↦ ‖Ax‖_F` is convex, so its maximum over the feasible set
//! sits at an extreme point and linearizing at the current point can only
//! improve it. That gives a monotone ascent `x ← argmax_x ⟨Aᵀ∇F(Ax), x⟩`
//! whose inner step is solved exactly (see `lmo`). Exact fast paths cover
//! `E = ℓ_1`-type spaces (finitely many extreme points), `E = ℓ_∞`
//! (the all-ones vector dominates) and `F = ℓ_∞` (a maximum of linear
//! functionals).
//!
//! Outside the exact paths the reported value is the objective at a feasible
//! point, hence a lower bound on the truncated norm.

mod grid;
mod lmo;
mod sweep;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{dot, DenseMatrix};
use crate::scalar::Scalar;
use crate::spaces::{space_norm, space_norm_gradient, Exponent, SpaceSpec};

pub use grid::{grid_oracle, GRID_MAX_COLS, GRID_MAX_RESOLUTION};
pub use sweep::{truncation_sweep, TruncationSweep};

/// Largest column count for which every subset is tried as an extreme point
/// of the unrestricted Lorentz `p = 1` ball.
const SUBSET_VERTEX_MAX_COLS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Scan of the extreme points of an `ℓ_1`-type ball.
    ExactP1,
    /// All-ones vector for `E = ℓ_∞`.
    ExactPinf,
    /// Best single row for `F = ℓ_∞`.
    ExactQinf,
    /// Multi-start ascent iteration.
    FixedPoint,
    /// Ascent iteration improved by projected-gradient refinement.
    MultistartGradient,
    /// Exhaustive grid scan.
    GridOracle,
}

impl Method {
    pub fn is_exact(self) -> bool {
        matches!(self, Method::ExactP1 | Method::ExactPinf | Method::ExactQinf)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct NormEstimate<T: Scalar> {
    pub value: T,
    pub maximizer: Vec<T>,
    pub restricted: bool,
    pub method: Method,
    pub iterations: usize,
    pub converged: bool,
    /// `(rows, cols)` of the truncation.
    pub truncation: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormOptions {
    /// Relative change in value below which the ascent stops.
    pub tol: f64,
    pub max_iter: usize,
    /// Number of starting points (first `e_1`, then the uniform vector, then random).
    pub starts: usize,
    pub seed: u64,
    /// Skip the exact paths and always run the ascent iteration.
    pub force_iteration: bool,
    /// Projected-gradient refinement steps after the ascent (0 disables).
    pub refine_steps: usize,
}

impl Default for NormOptions {
    fn default() -> Self {
        NormOptions {
            tol: 1e-12,
            max_iter: 10_000,
            starts: 16,
            seed: 0x5EED,
            force_iteration: false,
            refine_steps: 200,
        }
    }
}

/// `‖Ax‖_F / ‖x‖_E` for `x ≠ 0`.
fn ratio<T: Scalar>(a: &DenseMatrix<T>, e: &SpaceSpec<T>, f: &SpaceSpec<T>, x: &[T]) -> T {
    let ex = space_norm(e, x).expect("dimension checked");
    if ex == T::zero() {
        return T::zero();
    }
    space_norm(f, &a.apply(x).expect("dimension checked")).expect("dimension checked") / ex
}

fn normalized<T: Scalar>(e: &SpaceSpec<T>, mut x: Vec<T>) -> Vec<T> {
    let n = space_norm(e, &x).expect("dimension checked");
    if n > T::zero() {
        x.iter_mut().for_each(|v| *v /= n);
    }
    x
}

fn validate<T: Scalar>(a: &DenseMatrix<T>, e: &SpaceSpec<T>, f: &SpaceSpec<T>) -> Result<()> {
    if a.cols() == 0 || a.rows() == 0 {
        return Err(Error::InvalidParameter("matrix has no entries".into()));
    }
    e.check_dim(a.cols())?;
    f.check_dim(a.rows())
}

/// Estimates `‖A‖_{E,F}` (or the restricted norm when `restricted`).
pub fn norm_estimate<T: Scalar>(
    a: &DenseMatrix<T>,
    e: &SpaceSpec<T>,
    f: &SpaceSpec<T>,
    restricted: bool,
    opts: &NormOptions,
) -> Result<NormEstimate<T>> {
    validate(a, e, f)?;
    if !opts.force_iteration {
        if let Some(est) = exact_estimate(a, e, f, restricted) {
            return Ok(est);
        }
    }
    Ok(iterate(a, e, f, restricted, opts))
}

/// Unrestricted and restricted estimates.
pub fn norm_pair<T: Scalar>(
    a: &DenseMatrix<T>,
    e: &SpaceSpec<T>,
    f: &SpaceSpec<T>,
    opts: &NormOptions,
) -> Result<(NormEstimate<T>, NormEstimate<T>)> {
    Ok((norm_estimate(a, e, f, false, opts)?, norm_estimate(a, e, f, true, opts)?))
}

fn estimate<T: Scalar>(
    a: &DenseMatrix<T>,
    f: &SpaceSpec<T>,
    x: Vec<T>,
    restricted: bool,
    method: Method,
    iterations: usize,
    converged: bool,
) -> NormEstimate<T> {
    let value = space_norm(f, &a.apply(&x).expect("dimension checked")).expect("dimension checked");
    NormEstimate {
        value,
        maximizer: x,
        restricted,
        method,
        iterations,
        converged,
        truncation: (a.rows(), a.cols()),
    }
}

/// Best candidate by ratio; the first one wins ties.
fn best_of<T: Scalar>(
    a: &DenseMatrix<T>,
    e: &SpaceSpec<T>,
    f: &SpaceSpec<T>,
    candidates: impl Iterator<Item = Vec<T>>,
) -> (Vec<T>, usize) {
    let mut best: Option<(T, Vec<T>)> = None;
    let mut count = 0;
    for x in candidates {
        count += 1;
        let r = ratio(a, e, f, &x);
        if best.as_ref().is_none_or(|(b, _)| r > *b) {
            best = Some((r, x));
        }
    }
    let (_, x) = best.expect("at least one candidate");
    (normalized(e, x), count)
}

fn exact_estimate<T: Scalar>(
    a: &DenseMatrix<T>,
    e: &SpaceSpec<T>,
    f: &SpaceSpec<T>,
    restricted: bool,
) -> Option<NormEstimate<T>> {
    let m = a.cols();
    let head = |k: usize| (0..m).map(|i| if i < k { T::one() } else { T::zero() }).collect::<Vec<T>>();
    match (e.exponent(), restricted) {
        (Exponent::Infinite, _) => {
            return Some(estimate(a, f, normalized(e, vec![T::one(); m]), restricted, Method::ExactPinf, 1, true));
        }
        (p, true) if p.is_one() => {
            let (x, n) = best_of(a, e, f, (1..=m).map(head));
            return Some(estimate(a, f, x, true, Method::ExactP1, n, true));
        }
        (p, false) if p.is_one() => match e {
            SpaceSpec::Lorentz { .. } if m > SUBSET_VERTEX_MAX_COLS => {}
            SpaceSpec::Lorentz { .. } => {
                let subsets = (1u32..1 << m).map(|mask| {
                    (0..m)
                        .map(|i| if mask >> i & 1 == 1 { T::one() } else { T::zero() })
                        .collect()
                });
                let (x, n) = best_of(a, e, f, subsets);
                return Some(estimate(a, f, x, false, Method::ExactP1, n, true));
            }
            _ => {
                let units = (0..m).map(|k| {
                    let mut x = vec![T::zero(); m];
                    x[k] = T::one();
                    x
                });
                let (x, n) = best_of(a, e, f, units);
                return Some(estimate(a, f, x, false, Method::ExactP1, n, true));
            }
        },
        _ => {}
    }
    if matches!(f, SpaceSpec::Lp { p: Exponent::Infinite }) {
        // sup_x max_j ⟨a_j, x⟩ = max_j sup_x ⟨a_j, x⟩
        let mut best: Option<(T, Vec<T>)> = None;
        for j in 0..a.rows() {
            let (x, v) = lmo::support_point(e, a.row(j), restricted);
            if best.as_ref().is_none_or(|(b, _)| v > *b) {
                best = Some((v, x));
            }
        }
        let (_, x) = best.expect("matrix has rows");
        return Some(estimate(a, f, x, restricted, Method::ExactQinf, a.rows(), true));
    }
    None
}

/// Linear functional `Aᵀ∇F(Ax)`; at `Ax = 0` the functional `Aᵀ1`.
fn ascent_direction<T: Scalar>(a: &DenseMatrix<T>, f: &SpaceSpec<T>, x: &[T]) -> Vec<T> {
    let y = a.apply(x).expect("dimension checked");
    let mut g = space_norm_gradient(f, &y).expect("dimension checked");
    if g.iter().all(|&v| v == T::zero()) {
        g = vec![T::one(); y.len()];
    }
    // subgradients of norms are non-negative on the non-negative cone
    g.iter_mut().for_each(|v| *v = v.max(T::zero()));
    a.apply_transpose(&g).expect("dimension checked")
}

struct Ascent<T> {
    x: Vec<T>,
    value: T,
    iterations: usize,
    converged: bool,
}

fn ascend<T: Scalar>(
    a: &DenseMatrix<T>,
    e: &SpaceSpec<T>,
    f: &SpaceSpec<T>,
    restricted: bool,
    start: Vec<T>,
    opts: &NormOptions,
) -> Ascent<T> {
    let tol = T::of(opts.tol).max(T::epsilon() * T::of(16.0));
    let mut x = normalized(e, start);
    let mut value = ratio(a, e, f, &x);
    for it in 1..=opts.max_iter {
        let c = ascent_direction(a, f, &x);
        let (next, _) = lmo::support_point(e, &c, restricted);
        let next_value = ratio(a, e, f, &next);
        let gain = next_value - value;
        if next_value > value {
            x = next;
            value = next_value;
        }
        if gain <= tol * value.max(T::min_positive_value()) {
            return Ascent {
                x,
                value,
                iterations: it,
                converged: true,
            };
        }
    }
    Ascent {
        x,
        value,
        iterations: opts.max_iter,
        converged: false,
    }
}

fn starts<T: Scalar>(m: usize, restricted: bool, opts: &NormOptions) -> Vec<Vec<T>> {
    let mut out = Vec::with_capacity(opts.starts);
    let mut e1 = vec![T::zero(); m];
    e1[0] = T::one();
    out.push(e1);
    out.push(vec![T::one(); m]);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    while out.len() < opts.starts.max(1) {
        let mut x: Vec<T> = (0..m).map(|_| T::of(rng.gen::<f64>())).collect();
        if restricted {
            x.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
        }
        out.push(x);
    }
    out.truncate(opts.starts.max(1));
    out
}

fn iterate<T: Scalar>(
    a: &DenseMatrix<T>,
    e: &SpaceSpec<T>,
    f: &SpaceSpec<T>,
    restricted: bool,
    opts: &NormOptions,
) -> NormEstimate<T> {
    let runs: Vec<Ascent<T>> = starts(a.cols(), restricted, opts)
        .into_par_iter()
        .map(|s| ascend(a, e, f, restricted, s, opts))
        .collect();
    // first maximal run, independent of scheduling
    let best = runs
        .into_iter()
        .reduce(|b, r| if r.value > b.value { r } else { b })
        .expect("at least one start");

    let mut method = Method::FixedPoint;
    let mut out = best;
    if opts.refine_steps > 0 && is_smooth_domain(e) {
        if let Some(x) = refine(a, e, f, restricted, &out.x, opts.refine_steps) {
            let polished = ascend(a, e, f, restricted, x, opts);
            if polished.value > out.value * (T::one() + T::of(opts.tol)) {
                method = Method::MultistartGradient;
                out = Ascent {
                    iterations: out.iterations + polished.iterations,
                    ..polished
                };
            }
        }
    }
    estimate(a, f, normalized(e, out.x), restricted, method, out.iterations, out.converged)
}

fn is_smooth_domain<T: Scalar>(e: &SpaceSpec<T>) -> bool {
    matches!(e.exponent(), Exponent::Finite(p) if p > T::one())
}

/// Projected-gradient ascent on `R(x) = ‖Ax‖_F / ‖x‖_E` over `x ≥ 0`, or on
/// `R(Td)` over `d ≥ 0` in tail-sum coordinates for the restricted problem.
/// Returns an improved point, if any.
fn refine<T: Scalar>(
    a: &DenseMatrix<T>,
    e: &SpaceSpec<T>,
    f: &SpaceSpec<T>,
    restricted: bool,
    x0: &[T],
    steps: usize,
) -> Option<Vec<T>> {
    use crate::spaces::{prefix_sums, tail_differences, tail_sum_map};
    let to_x = |z: &[T]| if restricted { tail_sum_map(z).expect("non-negative") } else { z.to_vec() };
    let mut z = if restricted {
        tail_differences(x0).ok()?
    } else {
        x0.to_vec()
    };
    let start = ratio(a, e, f, &to_x(&z));
    let mut value = start;
    let mut step = T::one();
    for _ in 0..steps {
        let x = to_x(&z);
        let ex = space_norm(e, &x).ok()?;
        let y = a.apply(&x).ok()?;
        let fy = space_norm(f, &y).ok()?;
        let num = a.apply_transpose(&space_norm_gradient(f, &y).ok()?).ok()?;
        let den = space_norm_gradient(e, &x).ok()?;
        let gx: Vec<T> = num
            .iter()
            .zip(&den)
            .map(|(&n, &d)| (n * ex - fy * d) / (ex * ex))
            .collect();
        let g = if restricted { prefix_sums(&gx) } else { gx };
        let scale = dot(&g, &g).sqrt();
        if scale == T::zero() {
            break;
        }
        let mut improved = false;
        for _ in 0..40 {
            let cand: Vec<T> = z
                .iter()
                .zip(&g)
                .map(|(&zi, &gi)| (zi + step * gi / scale).max(T::zero()))
                .collect();
            if cand.iter().all(|&v| v == T::zero()) {
                step *= T::of(0.5);
                continue;
            }
            let r = ratio(a, e, f, &to_x(&cand));
            if r > value {
                z = cand;
                value = r;
                improved = true;
                step *= T::of(2.0);
                break;
            }
            step *= T::of(0.5);
        }
        if !improved {
            break;
        }
    }
    (value > start).then(|| to_x(&z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{l1_gap_matrix, l2_gap_matrix, linf_gap_matrix};

    fn lp(p: f64) -> SpaceSpec<f64> {
        SpaceSpec::lp(p).unwrap()
    }

    #[test]
    fn gap_matrix_l1() {
        let a = l1_gap_matrix::<f64>(5).unwrap();
        let opts = NormOptions::default();
        let full = norm_estimate(&a, &lp(1.0), &lp(1.0), false, &opts).unwrap();
        assert_eq!(full.value, 1.5);
        assert_eq!(full.maximizer, vec![0.0, 1.0, 0.0, 0.0, 0.0]);
        assert_eq!(full.method, Method::ExactP1);
        let dec = norm_estimate(&a, &lp(1.0), &lp(1.0), true, &opts).unwrap();
        assert!((dec.value - 1.25).abs() < 1e-15);
        assert_eq!(dec.maximizer, vec![0.5, 0.5, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn gap_matrix_l2() {
        let a = l2_gap_matrix::<f64>();
        let opts = NormOptions::default();
        let full = norm_estimate(&a, &lp(2.0), &lp(2.0), false, &opts).unwrap();
        assert!((full.value - 2f64.sqrt()).abs() < 1e-9);
        let s = 0.5f64.sqrt();
        for (xi, ei) in full.maximizer.iter().zip([0.0, s, s]) {
            assert!((xi - ei).abs() < 1e-6, "{:?}", full.maximizer);
        }
        let dec = norm_estimate(&a, &lp(2.0), &lp(2.0), true, &opts).unwrap();
        assert!((dec.value - (5.0f64 / 3.0).sqrt()).abs() < 1e-9);
        assert!(dec.converged);
    }

    #[test]
    fn exact_paths_for_infinite_exponents() {
        let a = linf_gap_matrix::<f64>();
        let opts = NormOptions::default();
        let est = norm_estimate(&a, &lp(2.0), &SpaceSpec::lp_inf(), false, &opts).unwrap();
        assert_eq!(est.method, Method::ExactQinf);
        assert_eq!(est.value, 1.0);
        let dec = norm_estimate(&a, &lp(2.0), &SpaceSpec::lp_inf(), true, &opts).unwrap();
        assert!((dec.value - 0.5f64.sqrt()).abs() < 1e-12);
        let ones = norm_estimate(&a, &SpaceSpec::lp_inf(), &lp(2.0), false, &opts).unwrap();
        assert_eq!(ones.method, Method::ExactPinf);
        assert_eq!(ones.value, 1.0);
    }

    #[test]
    fn forced_iteration_agrees_with_exact_p1() {
        let a = l1_gap_matrix::<f64>(5).unwrap();
        let opts = NormOptions {
            force_iteration: true,
            ..NormOptions::default()
        };
        for restricted in [false, true] {
            let it = norm_estimate(&a, &lp(1.0), &lp(1.0), restricted, &opts).unwrap();
            let ex = norm_estimate(&a, &lp(1.0), &lp(1.0), restricted, &NormOptions::default()).unwrap();
            assert!((it.value - ex.value).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_short_weights() {
        let w = crate::spaces::WeightSeq::power(2, 1.0).unwrap();
        let e = SpaceSpec::weighted(2.0, w).unwrap();
        let a = DenseMatrix::<f64>::identity(3);
        assert!(norm_estimate(&a, &e, &lp(2.0), false, &NormOptions::default()).is_err());
    }

    #[test]
    fn estimate_json_shape() {
        let a = DenseMatrix::<f64>::identity(2);
        let est = norm_estimate(&a, &lp(1.0), &lp(1.0), false, &NormOptions::default()).unwrap();
        let v = serde_json::to_value(&est).unwrap();
        assert_eq!(v["method"], "exact_p1");
        assert_eq!(v["value"], 1.0);
        assert_eq!(v["truncation"], serde_json::json!([2, 2]));
    }
}
