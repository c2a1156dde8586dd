//! Sequence-space norms on finite vectors: `ℓ_p`, weighted `ℓ_p(w)` and the
//! Lorentz space `d(w, p)`, together with decreasing rearrangement, weak
//! majorization and the decreasing-cone parametrization by tail sums.
//!
//! Every finite vector stands for an infinite sequence padded with zeros.

use std::cmp::Ordering;
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Relative tolerance used when deciding that one norm strictly exceeds another.
pub const NORM_COMPARISON_RTOL: f64 = 1e-10;

const WITNESS_SEED: u64 = 0x5EED_0003;
const WITNESS_RANDOM_PAIRS: usize = 1000;

/// Exponent `p ∈ [1, ∞]` with `∞` kept as a distinguished value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent<T> {
    Finite(T),
    Infinite,
}

impl<T: Scalar> Exponent<T> {
    pub fn new(p: T) -> Result<Self> {
        if p.is_infinite() && p > T::zero() {
            return Ok(Exponent::Infinite);
        }
        if p.is_nan() || p < T::one() {
            return Err(Error::InvalidExponent(p.to_f64_lossy()));
        }
        Ok(Exponent::Finite(p))
    }

    /// Parses `"inf"`, `"∞"` or a decimal number.
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        if matches!(t.to_ascii_lowercase().as_str(), "inf" | "infinity" | "∞") {
            return Ok(Exponent::Infinite);
        }
        let p: f64 = t
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("cannot parse exponent `{s}`")))?;
        Exponent::new(T::of(p))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Exponent::Finite(p) if *p == T::one())
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Exponent::Infinite)
    }

    pub fn finite(&self) -> Option<T> {
        match self {
            Exponent::Finite(p) => Some(*p),
            Exponent::Infinite => None,
        }
    }

    /// Hölder conjugate `p/(p-1)`.
    pub fn conjugate(&self) -> Exponent<T> {
        match self {
            Exponent::Infinite => Exponent::Finite(T::one()),
            Exponent::Finite(p) if *p == T::one() => Exponent::Infinite,
            Exponent::Finite(p) => Exponent::Finite(*p / (*p - T::one())),
        }
    }
}

impl<T: Scalar> fmt::Display for Exponent<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawExponent<T> {
    Number(T),
    Text(String),
}

impl<T: Scalar> Serialize for Exponent<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Exponent::Finite(p) => p.serialize(s),
            Exponent::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de, T: Scalar> Deserialize<'de> for Exponent<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match RawExponent::<T>::deserialize(d)? {
            RawExponent::Number(p) => Exponent::new(p),
            RawExponent::Text(s) => Exponent::parse(&s),
        }
        .map_err(serde::de::Error::custom)
    }
}

/// Positive weight sequence with cached shape flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "Vec<T>", try_from = "Vec<T>", bound = "")]
pub struct WeightSeq<T: Scalar> {
    entries: Vec<T>,
    is_decreasing: bool,
    is_increasing: bool,
    has_concave_ratio: bool,
}

impl<T: Scalar> WeightSeq<T> {
    pub fn new(entries: Vec<T>) -> Result<Self> {
        if let Some(i) = entries.iter().position(|w| !w.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        if let Some(i) = entries.iter().position(|w| *w <= T::zero()) {
            return Err(Error::InvalidWeights(format!(
                "weight {} at index {i} is not positive",
                entries[i]
            )));
        }
        let is_decreasing = entries.windows(2).all(|p| p[1] <= p[0]);
        let is_increasing = entries.windows(2).all(|p| p[1] >= p[0]);
        // w_{n+1}/w_n <= w_n/w_{n-1}, cross-multiplied (all weights positive)
        let has_concave_ratio = entries.windows(3).all(|t| t[2] * t[0] <= t[1] * t[1]);
        Ok(WeightSeq {
            entries,
            is_decreasing,
            is_increasing,
            has_concave_ratio,
        })
    }

    /// `w_k = f(k)` for `k = 1..=n`.
    pub fn from_fn(n: usize, f: impl Fn(usize) -> T) -> Result<Self> {
        Self::new((1..=n).map(f).collect())
    }

    /// `w_k = k^{-s}`.
    pub fn power(n: usize, s: T) -> Result<Self> {
        Self::from_fn(n, |k| T::of_usize(k).powf(-s))
    }

    pub fn as_slice(&self) -> &[T] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_decreasing(&self) -> bool {
        self.is_decreasing
    }

    pub fn is_increasing(&self) -> bool {
        self.is_increasing
    }

    pub fn has_concave_ratio(&self) -> bool {
        self.has_concave_ratio
    }
}

impl<T: Scalar> From<WeightSeq<T>> for Vec<T> {
    fn from(w: WeightSeq<T>) -> Self {
        w.entries
    }
}

impl<T: Scalar> TryFrom<Vec<T>> for WeightSeq<T> {
    type Error = Error;
    fn try_from(v: Vec<T>) -> Result<Self> {
        WeightSeq::new(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpaceKind {
    Lp,
    LpWeighted,
    Lorentz,
}

/// One of the three concrete sequence-space families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpace<T>", into = "RawSpace<T>", bound = "")]
pub enum SpaceSpec<T: Scalar> {
    Lp { p: Exponent<T> },
    LpWeighted { p: T, weights: WeightSeq<T> },
    Lorentz { p: T, weights: WeightSeq<T> },
}

impl<T: Scalar> SpaceSpec<T> {
    pub fn lp(p: T) -> Result<Self> {
        Ok(SpaceSpec::Lp { p: Exponent::new(p)? })
    }

    pub fn lp_inf() -> Self {
        SpaceSpec::Lp { p: Exponent::Infinite }
    }

    pub fn lp_exponent(p: Exponent<T>) -> Self {
        SpaceSpec::Lp { p }
    }

    pub fn weighted(p: T, weights: WeightSeq<T>) -> Result<Self> {
        match Exponent::new(p)? {
            Exponent::Finite(p) => Ok(SpaceSpec::LpWeighted { p, weights }),
            Exponent::Infinite => Err(Error::InvalidSpace(
                "weighted l_inf coincides with l_inf; use lp:inf".into(),
            )),
        }
    }

    pub fn lorentz(p: T, weights: WeightSeq<T>) -> Result<Self> {
        let p = match Exponent::new(p)? {
            Exponent::Finite(p) => p,
            Exponent::Infinite => {
                return Err(Error::InvalidSpace(
                    "Lorentz spaces take a finite exponent".into(),
                ))
            }
        };
        if !weights.is_decreasing() {
            return Err(Error::InvalidSpace(
                "Lorentz spaces require decreasing weights".into(),
            ));
        }
        Ok(SpaceSpec::Lorentz { p, weights })
    }

    pub fn kind(&self) -> SpaceKind {
        match self {
            SpaceSpec::Lp { .. } => SpaceKind::Lp,
            SpaceSpec::LpWeighted { .. } => SpaceKind::LpWeighted,
            SpaceSpec::Lorentz { .. } => SpaceKind::Lorentz,
        }
    }

    pub fn exponent(&self) -> Exponent<T> {
        match self {
            SpaceSpec::Lp { p } => *p,
            SpaceSpec::LpWeighted { p, .. } | SpaceSpec::Lorentz { p, .. } => Exponent::Finite(*p),
        }
    }

    pub fn weights(&self) -> Option<&WeightSeq<T>> {
        match self {
            SpaceSpec::Lp { .. } => None,
            SpaceSpec::LpWeighted { weights, .. } | SpaceSpec::Lorentz { weights, .. } => {
                Some(weights)
            }
        }
    }

    /// Norm is unchanged by reordering the entries.
    pub fn is_rearrangement_invariant(&self) -> bool {
        !matches!(self, SpaceSpec::LpWeighted { weights, .. } if !is_constant(weights.as_slice()))
    }

    /// Longest vector this space can measure (`None` when unbounded).
    pub fn max_dim(&self) -> Option<usize> {
        self.weights().map(WeightSeq::len)
    }

    pub fn check_dim(&self, dim: usize) -> Result<()> {
        match self.max_dim() {
            Some(len) if dim > len => Err(Error::DimensionMismatch {
                what: "space weights",
                expected: dim,
                got: len,
            }),
            _ => Ok(()),
        }
    }
}

impl<T: Scalar> fmt::Display for SpaceSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceSpec::Lp { p } => write!(f, "l_{p}"),
            SpaceSpec::LpWeighted { p, weights } => write!(f, "l_{p}(w; {} weights)", weights.len()),
            SpaceSpec::Lorentz { p, weights } => write!(f, "d(w,{p}; {} weights)", weights.len()),
        }
    }
}

fn is_constant<T: Scalar>(w: &[T]) -> bool {
    w.windows(2).all(|p| p[0] == p[1])
}

#[derive(Serialize, Deserialize)]
#[serde(bound = "")]
struct RawSpace<T: Scalar> {
    kind: SpaceKind,
    p: Exponent<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weights: Option<WeightSeq<T>>,
}

impl<T: Scalar> TryFrom<RawSpace<T>> for SpaceSpec<T> {
    type Error = Error;
    fn try_from(raw: RawSpace<T>) -> Result<Self> {
        let finite = |p: Exponent<T>| {
            p.finite()
                .ok_or_else(|| Error::InvalidSpace("only lp accepts p = inf".into()))
        };
        let need_weights = |w: Option<WeightSeq<T>>| {
            w.ok_or_else(|| Error::InvalidSpace("weighted spaces require `weights`".into()))
        };
        match raw.kind {
            SpaceKind::Lp => {
                if raw.weights.is_some() {
                    return Err(Error::InvalidSpace("lp takes no weights".into()));
                }
                Ok(SpaceSpec::Lp { p: raw.p })
            }
            SpaceKind::LpWeighted => SpaceSpec::weighted(finite(raw.p)?, need_weights(raw.weights)?),
            SpaceKind::Lorentz => SpaceSpec::lorentz(finite(raw.p)?, need_weights(raw.weights)?),
        }
    }
}

impl<T: Scalar> From<SpaceSpec<T>> for RawSpace<T> {
    fn from(s: SpaceSpec<T>) -> Self {
        RawSpace {
            kind: s.kind(),
            p: s.exponent(),
            weights: s.weights().cloned(),
        }
    }
}

/// `|x|` sorted into non-increasing order.
pub fn decreasing_rearrangement<T: Scalar>(x: &[T]) -> Vec<T> {
    let mut r: Vec<T> = x.iter().map(|v| v.abs()).collect();
    r.sort_by(|a, b| b.partial_cmp(a).unwrap_or(Ordering::Equal));
    r
}

/// Indices ordering `|x|` non-increasingly; ties keep index order.
pub fn decreasing_order<T: Scalar>(x: &[T]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_by(|&a, &b| x[b].abs().partial_cmp(&x[a].abs()).unwrap_or(Ordering::Equal));
    idx
}

/// `(Σ w_k |x_k|^p)^{1/p}`, scaled by `max |x_k|` to stay clear of overflow.
fn weighted_power_norm<T: Scalar>(x: &[T], p: T, weights: Option<&[T]>) -> T {
    let weight = |k: usize| weights.map_or(T::one(), |w| w[k]);
    if p == T::one() {
        return x.iter().enumerate().map(|(k, v)| v.abs() * weight(k)).sum();
    }
    let m = x.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    if m == T::zero() {
        return T::zero();
    }
    let s: T = x
        .iter()
        .enumerate()
        .map(|(k, v)| (v.abs() / m).powf(p) * weight(k))
        .sum();
    if p == T::of(2.0) {
        m * s.sqrt()
    } else {
        m * s.powf(p.recip())
    }
}

pub fn space_norm<T: Scalar>(spec: &SpaceSpec<T>, x: &[T]) -> Result<T> {
    spec.check_dim(x.len())?;
    Ok(match spec {
        SpaceSpec::Lp { p: Exponent::Infinite } => x.iter().fold(T::zero(), |m, v| m.max(v.abs())),
        SpaceSpec::Lp { p: Exponent::Finite(p) } => weighted_power_norm(x, *p, None),
        SpaceSpec::LpWeighted { p, weights } => weighted_power_norm(x, *p, Some(weights.as_slice())),
        SpaceSpec::Lorentz { p, weights } => {
            weighted_power_norm(&decreasing_rearrangement(x), *p, Some(weights.as_slice()))
        }
    })
}

/// A subgradient of `space_norm(spec, ·)` at `x`.
///
/// At zero coordinates of an `ℓ_1`-type norm the value `+weight` is chosen,
/// which gives the exact one-sided derivative along the non-negative cone.
/// At `x = 0` the zero vector is returned.
pub fn space_norm_gradient<T: Scalar>(spec: &SpaceSpec<T>, x: &[T]) -> Result<Vec<T>> {
    let norm = space_norm(spec, x)?;
    let n = x.len();
    let mut g = vec![T::zero(); n];
    if norm == T::zero() {
        return Ok(g);
    }
    let sign = |v: T| if v < T::zero() { -T::one() } else { T::one() };
    let power_term = |v: T, p: T| {
        if p == T::one() {
            sign(v)
        } else {
            sign(v) * (v.abs() / norm).powf(p - T::one())
        }
    };
    match spec {
        SpaceSpec::Lp { p: Exponent::Infinite } => {
            let k = decreasing_order(x)[0];
            g[k] = sign(x[k]);
        }
        SpaceSpec::Lp { p: Exponent::Finite(p) } => {
            for (gk, &v) in g.iter_mut().zip(x) {
                *gk = power_term(v, *p);
            }
        }
        SpaceSpec::LpWeighted { p, weights } => {
            for (k, (gk, &v)) in g.iter_mut().zip(x).enumerate() {
                *gk = weights.as_slice()[k] * power_term(v, *p);
            }
        }
        SpaceSpec::Lorentz { p, weights } => {
            for (rank, &k) in decreasing_order(x).iter().enumerate() {
                g[k] = weights.as_slice()[rank] * power_term(x[k], *p);
            }
        }
    }
    Ok(g)
}

fn padded<T: Scalar>(x: &[T], len: usize) -> Vec<T> {
    let mut v = decreasing_rearrangement(x);
    v.resize(len, T::zero());
    v
}

/// Weak majorization `y*_1+⋯+y*_n ≤ x*_1+⋯+x*_n` for every `n`.
pub fn ps_majorization_holds<T: Scalar>(x: &[T], y: &[T]) -> bool {
    let len = x.len().max(y.len());
    let (xs, ys) = (padded(x, len), padded(y, len));
    let (mut sx, mut sy) = (T::zero(), T::zero());
    xs.iter().zip(&ys).all(|(&a, &b)| {
        sx += a;
        sy += b;
        sy <= sx
    })
}

fn strictly_exceeds<T: Scalar>(a: T, b: T) -> bool {
    a > b * (T::one() + T::of(NORM_COMPARISON_RTOL))
}

fn unit<T: Scalar>(dim: usize, i: usize) -> Vec<T> {
    let mut e = vec![T::zero(); dim];
    e[i] = T::one();
    e
}

/// Searches for a pair `(x, y)` with `y` weakly majorized by `x` but
/// `‖y‖ > ‖x‖`, i.e. a finite witness that the space lacks the majorization
/// property. Basis pairs are tried first, then seeded random pairs.
pub fn ps_violation_witness<T: Scalar>(
    spec: &SpaceSpec<T>,
    dim: usize,
) -> Result<Option<(Vec<T>, Vec<T>)>> {
    if dim < 2 {
        return Err(Error::InvalidParameter(format!(
            "witness search needs dim >= 2, got {dim}"
        )));
    }
    spec.check_dim(dim)?;
    let violates = |x: &[T], y: &[T]| -> Result<bool> {
        Ok(ps_majorization_holds(x, y) && strictly_exceeds(space_norm(spec, y)?, space_norm(spec, x)?))
    };

    for i in 0..dim {
        for j in i + 1..dim {
            for (a, b) in [(i, j), (j, i)] {
                let (x, y) = (unit(dim, a), unit(dim, b));
                if violates(&x, &y)? {
                    return Ok(Some((x, y)));
                }
            }
        }
    }

    // y = c · (λ P x + (1-λ) Q x) is weakly majorized by x for permutations P, Q.
    let mut rng = ChaCha8Rng::seed_from_u64(WITNESS_SEED);
    let mut perm: Vec<usize> = (0..dim).collect();
    for _ in 0..WITNESS_RANDOM_PAIRS {
        let x: Vec<T> = (0..dim).map(|_| T::of(rng.gen::<f64>())).collect();
        perm.shuffle(&mut rng);
        let px: Vec<T> = perm.iter().map(|&k| x[k]).collect();
        perm.shuffle(&mut rng);
        let qx: Vec<T> = perm.iter().map(|&k| x[k]).collect();
        let lam = T::of(rng.gen::<f64>());
        let c = T::of(rng.gen_range(0.5..=1.0));
        let y: Vec<T> = px
            .iter()
            .zip(&qx)
            .map(|(&a, &b)| c * (lam * a + (T::one() - lam) * b))
            .collect();
        if violates(&x, &y)? {
            return Ok(Some((x, y)));
        }
    }
    Ok(None)
}

/// `x_k = Σ_{i≥k} d_i`: maps the non-negative cone onto the non-negative,
/// non-increasing cone.
pub fn tail_sum_map<T: Scalar>(d: &[T]) -> Result<Vec<T>> {
    if let Some((index, v)) = d.iter().enumerate().find(|(_, v)| **v < T::zero()) {
        return Err(Error::NegativeEntry {
            index,
            value: v.to_f64_lossy(),
        });
    }
    let mut x = d.to_vec();
    for k in (0..x.len().saturating_sub(1)).rev() {
        x[k] = d[k] + x[k + 1];
    }
    Ok(x)
}

/// Inverse of [`tail_sum_map`]: `d_k = x_k − x_{k+1}`.
pub fn tail_differences<T: Scalar>(x: &[T]) -> Result<Vec<T>> {
    let n = x.len();
    let d: Vec<T> = (0..n)
        .map(|k| x[k] - if k + 1 < n { x[k + 1] } else { T::zero() })
        .collect();
    if let Some((index, v)) = d.iter().enumerate().find(|(_, v)| **v < T::zero()) {
        return Err(Error::NegativeEntry {
            index,
            value: v.to_f64_lossy(),
        });
    }
    Ok(d)
}

/// `Σ_{i≤k} c_i` for every `k`; the adjoint of [`tail_sum_map`].
pub fn prefix_sums<T: Scalar>(c: &[T]) -> Vec<T> {
    c.iter()
        .scan(T::zero(), |acc, &v| {
            *acc += v;
            Some(*acc)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w_cubic(n: usize) -> WeightSeq<f64> {
        WeightSeq::power(n, 3.0).unwrap()
    }

    #[test]
    fn rearrangement_examples() {
        assert_eq!(decreasing_rearrangement(&[1.0, 3.0, 2.0]), vec![3.0, 2.0, 1.0]);
        assert_eq!(decreasing_rearrangement(&[0.0, -5.0, 0.0]), vec![5.0, 0.0, 0.0]);
        assert_eq!(decreasing_rearrangement(&[0.0, 1.0, 0.0, 0.0]), vec![1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn norm_examples() {
        let l2 = SpaceSpec::lp(2.0).unwrap();
        assert_eq!(space_norm(&l2, &[3.0, 4.0]).unwrap(), 5.0);

        let e2 = [0.0, 1.0, 0.0];
        let wl2 = SpaceSpec::weighted(2.0, w_cubic(3)).unwrap();
        assert!((space_norm(&wl2, &e2).unwrap() - 0.125f64.sqrt()).abs() < 1e-15);

        let lor = SpaceSpec::lorentz(2.0, w_cubic(3)).unwrap();
        assert_eq!(space_norm(&lor, &e2).unwrap(), 1.0);

        assert_eq!(space_norm(&SpaceSpec::lp_inf(), &[1.0, -7.0, 2.0]).unwrap(), 7.0);
        assert_eq!(space_norm(&SpaceSpec::lp(1.0).unwrap(), &[1.0, -7.0, 2.0]).unwrap(), 10.0);
    }

    #[test]
    fn norm_errors() {
        assert!(matches!(SpaceSpec::<f64>::lp(0.5), Err(Error::InvalidExponent(_))));
        let wl2 = SpaceSpec::weighted(2.0, w_cubic(2)).unwrap();
        assert!(matches!(
            space_norm(&wl2, &[1.0, 2.0, 3.0]),
            Err(Error::DimensionMismatch { .. })
        ));
        let increasing = WeightSeq::new(vec![1.0, 2.0]).unwrap();
        assert!(SpaceSpec::lorentz(2.0, increasing).is_err());
        assert!(SpaceSpec::weighted(f64::INFINITY, w_cubic(2)).is_err());
        assert!(WeightSeq::new(vec![1.0, 0.0]).is_err());
    }

    #[test]
    fn large_exponent_does_not_overflow() {
        let lp = SpaceSpec::lp(400.0).unwrap();
        let v = space_norm(&lp, &[1e3, 1e3]).unwrap();
        assert!((v - 1e3 * 2f64.powf(1.0 / 400.0)).abs() < 1e-9);
    }

    #[test]
    fn majorization_examples() {
        assert!(ps_majorization_holds(&[2.0, 0.0], &[1.0, 1.0]));
        assert!(!ps_majorization_holds(&[1.0, 1.0], &[2.0, 0.0]));
        assert!(ps_majorization_holds(&[0.0, 1.0], &[1.0, 0.0]));
        // zero padding
        assert!(ps_majorization_holds(&[2.0], &[1.0, 1.0]));
    }

    #[test]
    fn witness_for_cubic_weights() {
        let wl2 = SpaceSpec::weighted(2.0, w_cubic(3)).unwrap();
        let (x, y) = ps_violation_witness(&wl2, 3).unwrap().unwrap();
        assert_eq!(x, vec![0.0, 1.0, 0.0]);
        assert_eq!(y, vec![1.0, 0.0, 0.0]);
        assert!(ps_majorization_holds(&x, &y));
        assert!(space_norm(&wl2, &y).unwrap() > space_norm(&wl2, &x).unwrap());
    }

    #[test]
    fn no_witness_for_rearrangement_invariant_spaces() {
        let l2 = SpaceSpec::lp(2.0).unwrap();
        assert_eq!(ps_violation_witness(&l2, 4).unwrap(), None);
        let w = WeightSeq::new(vec![1.0, 0.5, 0.25]).unwrap();
        let lor = SpaceSpec::lorentz(1.0, w).unwrap();
        assert_eq!(ps_violation_witness(&lor, 3).unwrap(), None);
        assert!(ps_violation_witness(&l2, 1).is_err());
    }

    #[test]
    fn tail_sum_examples() {
        assert_eq!(tail_sum_map(&[0.0, 0.0, 1.0]).unwrap(), vec![1.0, 1.0, 1.0]);
        assert_eq!(tail_sum_map(&[1.0, 0.0, 0.0]).unwrap(), vec![1.0, 0.0, 0.0]);
        assert_eq!(tail_sum_map(&[1.0, 2.0, 3.0]).unwrap(), vec![6.0, 5.0, 3.0]);
        assert!(matches!(
            tail_sum_map(&[1.0, -2.0]),
            Err(Error::NegativeEntry { index: 1, .. })
        ));
        assert_eq!(tail_differences(&[6.0, 5.0, 3.0]).unwrap(), vec![1.0, 2.0, 3.0]);
        assert!(tail_differences(&[1.0, 2.0]).is_err());
    }

    #[test]
    fn weight_flags() {
        let w = WeightSeq::new(vec![1.0, 2.0, 3.0]).unwrap();
        assert!(w.is_increasing() && !w.is_decreasing() && w.has_concave_ratio());
        let w = WeightSeq::new(vec![1.0, 2.0, 5.0]).unwrap();
        assert!(!w.has_concave_ratio());
        let w = WeightSeq::new(vec![1.0, 1.0]).unwrap();
        assert!(w.is_increasing() && w.is_decreasing());
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let w = WeightSeq::new(vec![1.0, 0.6, 0.5, 0.2]).unwrap();
        let specs = [
            SpaceSpec::lp(3.0).unwrap(),
            SpaceSpec::weighted(1.5, w.clone()).unwrap(),
            SpaceSpec::lorentz(2.0, w).unwrap(),
        ];
        let x = [0.3, 0.9, 0.1, 0.55];
        for spec in &specs {
            let g = space_norm_gradient(spec, &x).unwrap();
            for k in 0..x.len() {
                let h = 1e-6;
                let (mut xp, mut xm) = (x, x);
                xp[k] += h;
                xm[k] -= h;
                let fd: f64 = (space_norm(spec, &xp).unwrap() - space_norm(spec, &xm).unwrap()) / (2.0 * h);
                assert!((fd - g[k]).abs() < 1e-6, "{spec}: k={k} fd={fd} g={}", g[k]);
            }
        }
    }

    #[test]
    fn space_json_format() {
        let s: SpaceSpec<f64> = serde_json::from_str(r#"{"kind":"lp","p":"inf"}"#).unwrap();
        assert_eq!(s, SpaceSpec::lp_inf());
        let s: SpaceSpec<f64> =
            serde_json::from_str(r#"{"kind":"lorentz","p":2,"weights":[1,0.5]}"#).unwrap();
        assert_eq!(s.kind(), SpaceKind::Lorentz);
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(text, r#"{"kind":"lorentz","p":2.0,"weights":[1.0,0.5]}"#);
        assert!(serde_json::from_str::<SpaceSpec<f64>>(r#"{"kind":"lp_weighted","p":2}"#).is_err());
        assert!(serde_json::from_str::<SpaceSpec<f64>>(r#"{"kind":"lorentz","p":"inf","weights":[1]}"#).is_err());
    }
}
