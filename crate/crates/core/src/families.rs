//! Generators for the classical matrix families (Hilbert, weighted mean,
//! Nörlund, Cesàro, Gamma), the three norm-gap counterexamples, and the
//! summability predicate.
//!
//! Infinite matrices are described by a [`MatrixFamily`] and materialized
//! only through truncation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::scalar::Scalar;
use crate::spaces::WeightSeq;

/// Default tolerance on row sums for [`is_summability`].
pub const SUMMABILITY_TOL: f64 = 1e-12;

fn require_size(what: &str, n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter(format!("{what} must be at least 1")));
    }
    Ok(())
}

/// `h_{j,k} = 1/(j+k-1)` (1-based).
pub fn hilbert<T: Scalar>(n: usize, m: usize) -> Result<DenseMatrix<T>> {
    require_size("rows", n)?;
    require_size("cols", m)?;
    DenseMatrix::from_fn(n, m, |j, k| T::one() / T::of_usize(j + k + 1))
}

fn mean_weights<T: Scalar>(w: &[T], n: usize) -> Result<Vec<T>> {
    require_size("size", n)?;
    if w.len() < n {
        return Err(Error::DimensionMismatch {
            what: "mean-matrix weights",
            expected: n,
            got: w.len(),
        });
    }
    if let Some(i) = w[..n].iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(i));
    }
    if !(w[0] > T::zero()) {
        return Err(Error::InvalidWeights("mean matrices need w_1 > 0".into()));
    }
    if let Some(i) = w[..n].iter().position(|v| *v < T::zero()) {
        return Err(Error::InvalidWeights(format!("weight at index {i} is negative")));
    }
    // W_j = w_1 + ... + w_j
    Ok(w[..n]
        .iter()
        .scan(T::zero(), |acc, &v| {
            *acc += v;
            Some(*acc)
        })
        .collect())
}

/// Weighted mean matrix: `a_{j,k} = w_k / (w_1+⋯+w_j)` for `j ≥ k`.
pub fn weighted_mean<T: Scalar>(w: &[T], n: usize) -> Result<DenseMatrix<T>> {
    let partial = mean_weights(w, n)?;
    DenseMatrix::from_fn(n, n, |j, k| if k <= j { w[k] / partial[j] } else { T::zero() })
}

/// Nörlund mean matrix: `a_{j,k} = w_{j-k+1} / (w_1+⋯+w_j)` for `j ≥ k`.
pub fn norlund<T: Scalar>(w: &[T], n: usize) -> Result<DenseMatrix<T>> {
    let partial = mean_weights(w, n)?;
    DenseMatrix::from_fn(n, n, |j, k| if k <= j { w[j - k] / partial[j] } else { T::zero() })
}

/// `w_n = binom(n+α-2, n-1)` via `w_1 = 1`, `w_{k+1} = w_k (k+α-1)/k`.
pub fn binomial_weights<T: Scalar>(alpha: T, n: usize) -> Result<WeightSeq<T>> {
    if !(alpha > T::zero()) || !alpha.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "binomial order must be positive, got {alpha}"
        )));
    }
    require_size("length", n)?;
    let mut w = Vec::with_capacity(n);
    let mut cur = T::one();
    for k in 1..=n {
        w.push(cur);
        let kf = T::of_usize(k);
        cur = cur * (kf + alpha - T::one()) / kf;
    }
    WeightSeq::new(w)
}

/// Cesàro matrix `C(α)`: the Nörlund matrix of the binomial weights.
pub fn cesaro<T: Scalar>(alpha: T, n: usize) -> Result<DenseMatrix<T>> {
    norlund(binomial_weights(alpha, n)?.as_slice(), n)
}

/// Gamma matrix `Γ(α)`: the weighted mean matrix of the binomial weights.
pub fn gamma_matrix<T: Scalar>(alpha: T, n: usize) -> Result<DenseMatrix<T>> {
    weighted_mean(binomial_weights(alpha, n)?.as_slice(), n)
}

/// Non-negative, lower triangular, with every row summing to 1 within `tol`.
pub fn is_summability<T: Scalar>(a: &DenseMatrix<T>, tol: T) -> bool {
    (0..a.rows()).all(|j| {
        let row = a.row(j);
        let upper_zero = row.iter().skip(j + 1).all(|v| *v == T::zero());
        let sum: T = row.iter().copied().sum();
        upper_zero && (sum - T::one()).abs() <= tol
    })
}

/// Summability matrix whose `ℓ_1` operator norm is not attained on
/// decreasing vectors: identity except that row 3 is `(0, 1/2, 1/2, 0, …)`.
/// Needs `n ≥ 3`.
pub fn l1_gap_matrix<T: Scalar>(n: usize) -> Result<DenseMatrix<T>> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!(
            "the l1 gap matrix needs at least 3 rows, got {n}"
        )));
    }
    let half = T::of(0.5);
    DenseMatrix::from_fn(n, n, |j, k| match (j, k) {
        (2, 1) | (2, 2) => half,
        (2, _) => T::zero(),
        _ if j == k => T::one(),
        _ => T::zero(),
    })
}

/// `a_{1,1} = a_{2,2} = a_{2,3} = 1`, zero elsewhere (3×3 truncation).
pub fn l2_gap_matrix<T: Scalar>() -> DenseMatrix<T> {
    DenseMatrix::from_fn(3, 3, |j, k| match (j, k) {
        (0, 0) | (1, 1) | (1, 2) => T::one(),
        _ => T::zero(),
    })
    .expect("constant entries are valid")
}

/// `a_{2,2} = 1`, zero elsewhere (2×2 truncation).
pub fn linf_gap_matrix<T: Scalar>() -> DenseMatrix<T> {
    DenseMatrix::from_fn(2, 2, |j, k| if (j, k) == (1, 1) { T::one() } else { T::zero() })
        .expect("constant entries are valid")
}

/// Parameters of an infinite matrix family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", bound = "")]
pub enum FamilyKind<T: Scalar> {
    Hilbert,
    #[serde(rename = "wm")]
    WeightedMean { weights: Vec<T> },
    #[serde(rename = "nm")]
    Norlund { weights: Vec<T> },
    Cesaro { alpha: T },
    Gamma { alpha: T },
    Custom { matrix: DenseMatrix<T> },
}

/// An infinite matrix described by its family, optionally transposed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct MatrixFamily<T: Scalar> {
    #[serde(flatten)]
    pub kind: FamilyKind<T>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub transpose: bool,
}

impl<T: Scalar> MatrixFamily<T> {
    pub fn new(kind: FamilyKind<T>) -> Result<Self> {
        match &kind {
            FamilyKind::Cesaro { alpha } | FamilyKind::Gamma { alpha } if !(*alpha > T::zero()) => {
                return Err(Error::InvalidParameter(format!(
                    "family order must be positive, got {alpha}"
                )))
            }
            FamilyKind::WeightedMean { weights } | FamilyKind::Norlund { weights } => {
                mean_weights(weights, 1)?;
            }
            _ => {}
        }
        Ok(MatrixFamily {
            kind,
            transpose: false,
        })
    }

    pub fn hilbert() -> Self {
        MatrixFamily {
            kind: FamilyKind::Hilbert,
            transpose: false,
        }
    }

    pub fn transposed(mut self) -> Self {
        self.transpose = !self.transpose;
        self
    }

    pub fn name(&self) -> String {
        let base = match &self.kind {
            FamilyKind::Hilbert => "hilbert".to_string(),
            FamilyKind::WeightedMean { .. } => "wm".to_string(),
            FamilyKind::Norlund { .. } => "nm".to_string(),
            FamilyKind::Cesaro { alpha } => format!("cesaro({alpha})"),
            FamilyKind::Gamma { alpha } => format!("gamma({alpha})"),
            FamilyKind::Custom { matrix } => format!("custom {}x{}", matrix.rows(), matrix.cols()),
        };
        if self.transpose {
            format!("{base}^t")
        } else {
            base
        }
    }

    /// The leading `n × n` section of the (possibly transposed) matrix.
    pub fn truncate(&self, n: usize) -> Result<DenseMatrix<T>> {
        self.truncate_rect(n, n)
    }

    /// The leading `n × m` section.
    pub fn truncate_rect(&self, n: usize, m: usize) -> Result<DenseMatrix<T>> {
        let (r, c) = if self.transpose { (m, n) } else { (n, m) };
        let base = match &self.kind {
            FamilyKind::Hilbert => hilbert(r, c)?,
            FamilyKind::Custom { matrix } => matrix.truncate_rows(r)?.truncate_cols(c)?,
            other => {
                // triangular families: the leading square section of side max(r, c)
                let side = r.max(c);
                let full = match other {
                    FamilyKind::WeightedMean { weights } => weighted_mean(weights, side)?,
                    FamilyKind::Norlund { weights } => norlund(weights, side)?,
                    FamilyKind::Cesaro { alpha } => cesaro(*alpha, side)?,
                    FamilyKind::Gamma { alpha } => gamma_matrix(*alpha, side)?,
                    _ => unreachable!(),
                };
                full.truncate_rows(r)?.truncate_cols(c)?
            }
        };
        Ok(if self.transpose { base.transpose() } else { base })
    }
}
