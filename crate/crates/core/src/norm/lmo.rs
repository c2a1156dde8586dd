//! Exact maximizers of a linear functional `⟨c, x⟩` (with `c ≥ 0`) over the
//! non-negative part of the unit ball of `E`, optionally restricted to
//! non-increasing `x`.

use crate::matrix::dot;
use crate::scalar::Scalar;
use crate::spaces::{decreasing_order, Exponent, SpaceSpec};

/// Maximizer `x` (with `‖x‖_E = 1`) and the value `⟨c, x⟩`.
pub(crate) fn support_point<T: Scalar>(spec: &SpaceSpec<T>, c: &[T], restricted: bool) -> (Vec<T>, T) {
    let m = c.len();
    let weights: Vec<T> = spec
        .weights()
        .map_or_else(|| vec![T::one(); m], |w| w.as_slice()[..m].to_vec());
    let x = match (spec, restricted) {
        (SpaceSpec::Lp { p: Exponent::Infinite }, _) => vec![T::one(); m],
        (SpaceSpec::Lp { p: Exponent::Finite(p) }, false) | (SpaceSpec::LpWeighted { p, .. }, false) => {
            free_support(c, &weights, *p)
        }
        (SpaceSpec::Lorentz { p, .. }, false) => {
            let order = decreasing_order(c);
            let sorted: Vec<T> = order.iter().map(|&k| c[k]).collect();
            let xs = decreasing_support(&sorted, &weights, *p);
            let mut x = vec![T::zero(); m];
            for (rank, &k) in order.iter().enumerate() {
                x[k] = xs[rank];
            }
            x
        }
        (SpaceSpec::Lp { p: Exponent::Finite(p) }, true)
        | (SpaceSpec::LpWeighted { p, .. }, true)
        | (SpaceSpec::Lorentz { p, .. }, true) => decreasing_support(c, &weights, *p),
    };
    let value = dot(c, &x);
    (x, value)
}

fn first_unit<T: Scalar>(m: usize, w: &[T]) -> Vec<T> {
    let mut x = vec![T::zero(); m];
    if m > 0 {
        x[0] = w[0].recip();
    }
    x
}

/// `max Σ c_k x_k` subject to `Σ w_k x_k^p ≤ 1`, `x ≥ 0`. With
/// `z_k = w_k^{1/p} x_k` this is the `ℓ_p` dual pairing, so
/// `x_k ∝ (c_k / w_k)^{q-1}`; for `p = 1` the best coordinate wins.
fn free_support<T: Scalar>(c: &[T], w: &[T], p: T) -> Vec<T> {
    let m = c.len();
    if c.iter().all(|&v| v == T::zero()) {
        return first_unit(m, w);
    }
    if p == T::one() {
        let k = (0..m).fold(0, |best, k| if c[k] / w[k] > c[best] / w[best] { k } else { best });
        let mut x = vec![T::zero(); m];
        x[k] = w[k].recip();
        return x;
    }
    let q1 = (p - T::one()).recip();
    let ratios: Vec<T> = c.iter().zip(w).map(|(&ck, &wk)| ck / wk).collect();
    let top = ratios.iter().fold(T::zero(), |a, &b| a.max(b));
    let x: Vec<T> = ratios.iter().map(|&r| (r / top).powf(q1)).collect();
    normalize_weighted(x, w, p)
}

/// `max Σ c_k x_k` over non-increasing `x ≥ 0` with `Σ w_k x_k^p ≤ 1`.
///
/// Writing `x` as a sum of head indicators `1_{[1..i]}`, the problem only
/// sees the points `(W_i, C_i)` of cumulative weights and cumulative `c`.
/// Replacing `c` by its level function (slopes of the least concave majorant
/// of those points) leaves the supremum unchanged and makes the free
/// maximizer `x_k ∝ slope_k^{q-1}` non-increasing, hence optimal.
fn decreasing_support<T: Scalar>(c: &[T], w: &[T], p: T) -> Vec<T> {
    let m = c.len();
    if m == 0 {
        return Vec::new();
    }
    if c.iter().all(|&v| v == T::zero()) {
        let mut x = vec![T::zero(); m];
        x[0] = T::one();
        return normalize_weighted(x, w, p);
    }
    let slopes = level_slopes(c, w);
    if p == T::one() {
        // best head block 1_{[1..i]} / W_i: the end of the first hull segment
        let top = slopes[0];
        let len = slopes.iter().take_while(|&&s| s == top).count();
        let x = (0..m).map(|k| if k < len { T::one() } else { T::zero() }).collect();
        return normalize_weighted(x, w, p);
    }
    let q1 = (p - T::one()).recip();
    let top = slopes[0];
    let x = slopes.iter().map(|&s| (s / top).max(T::zero()).powf(q1)).collect();
    normalize_weighted(x, w, p)
}

/// Slope of the least concave majorant of `(W_i, C_i)`, `i = 0..=m`, on each
/// interval `(W_{k}, W_{k+1}]`.
fn level_slopes<T: Scalar>(c: &[T], w: &[T]) -> Vec<T> {
    let m = c.len();
    let mut pts = vec![(T::zero(), T::zero())];
    for k in 0..m {
        let (wx, cy) = pts[k];
        pts.push((wx + w[k], cy + c[k]));
    }
    // upper hull by monotone chain; `hull` holds point indices
    let mut hull: Vec<usize> = vec![0];
    for i in 1..=m {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let (ax, ay) = pts[a];
            let (bx, by) = pts[b];
            let (cx, cy) = pts[i];
            // drop b when it lies on or below the chord from a to i
            if (by - ay) * (cx - ax) <= (cy - ay) * (bx - ax) {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(i);
    }
    let mut slopes = vec![T::zero(); m];
    for seg in hull.windows(2) {
        let (a, b) = (seg[0], seg[1]);
        let s = (pts[b].1 - pts[a].1) / (pts[b].0 - pts[a].0);
        for slot in &mut slopes[a..b] {
            *slot = s;
        }
    }
    slopes
}

fn normalize_weighted<T: Scalar>(mut x: Vec<T>, w: &[T], p: T) -> Vec<T> {
    let norm = if p == T::one() {
        x.iter().zip(w).map(|(&v, &wk)| v * wk).sum::<T>()
    } else {
        x.iter().zip(w).map(|(&v, &wk)| v.powf(p) * wk).sum::<T>().powf(p.recip())
    };
    if norm > T::zero() {
        x.iter_mut().for_each(|v| *v /= norm);
    }
    x
}
