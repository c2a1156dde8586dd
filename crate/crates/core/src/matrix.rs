//! Finite non-negative matrices: the truncations `A_n` of infinite matrices.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Row-major `rows × cols` matrix with finite, non-negative entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMatrix<T>", into = "RawMatrix<T>", bound = "")]
pub struct DenseMatrix<T: Scalar> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> DenseMatrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                what: "matrix entries",
                expected: rows * cols,
                got: data.len(),
            });
        }
        for (i, v) in data.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite(i));
            }
            if *v < T::zero() {
                return Err(Error::NegativeEntry {
                    index: i,
                    value: v.to_f64_lossy(),
                });
            }
        }
        Ok(DenseMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for j in 0..n {
            m.data[j * n + j] = T::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != m) {
            return Err(Error::DimensionMismatch {
                what: "matrix row length",
                expected: m,
                got: bad.len(),
            });
        }
        Self::new(n, m, rows.into_iter().flatten().collect())
    }

    /// Builds from `f(j, k)` with 0-based indices. Entries are validated.
    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> T) -> Result<Self> {
        let data = (0..rows)
            .flat_map(|j| (0..cols).map(move |k| (j, k)))
            .map(|(j, k)| f(j, k))
            .collect();
        Self::new(rows, cols, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Entry at 0-based `(j, k)`.
    #[inline]
    pub fn get(&self, j: usize, k: usize) -> T {
        self.data[j * self.cols + k]
    }

    #[inline]
    pub fn row(&self, j: usize) -> &[T] {
        &self.data[j * self.cols..(j + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[T]> + '_ {
        (0..self.rows).map(move |j| self.row(j))
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.row_iter().map(<[T]>::to_vec).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for j in 0..self.rows {
            for k in 0..self.cols {
                t.data[k * self.rows + j] = self.get(j, k);
            }
        }
        t
    }

    /// Leading `n` rows.
    pub fn truncate_rows(&self, n: usize) -> Result<Self> {
        if n == 0 || n > self.rows {
            return Err(Error::OutOfRange(format!(
                "row truncation {n} outside 1..={}",
                self.rows
            )));
        }
        Ok(DenseMatrix {
            rows: n,
            cols: self.cols,
            data: self.data[..n * self.cols].to_vec(),
        })
    }

    /// Leading `m` columns.
    pub fn truncate_cols(&self, m: usize) -> Result<Self> {
        if m == 0 || m > self.cols {
            return Err(Error::OutOfRange(format!(
                "column truncation {m} outside 1..={}",
                self.cols
            )));
        }
        Ok(DenseMatrix {
            rows: self.rows,
            cols: m,
            data: self.row_iter().flat_map(|r| r[..m].iter().copied()).collect(),
        })
    }

    /// `y_j = Σ_k a_{j,k} x_k`.
    pub fn apply(&self, x: &[T]) -> Result<Vec<T>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch {
                what: "vector length vs matrix columns",
                expected: self.cols,
                got: x.len(),
            });
        }
        Ok(self.row_iter().map(|r| dot(r, x)).collect())
    }

    /// `z_k = Σ_j a_{j,k} y_j`.
    pub fn apply_transpose(&self, y: &[T]) -> Result<Vec<T>> {
        if y.len() != self.rows {
            return Err(Error::DimensionMismatch {
                what: "vector length vs matrix rows",
                expected: self.rows,
                got: y.len(),
            });
        }
        let mut z = vec![T::zero(); self.cols];
        for (r, &yj) in self.row_iter().zip(y) {
            for (zk, &a) in z.iter_mut().zip(r) {
                *zk += a * yj;
            }
        }
        Ok(z)
    }

    /// `c · A` for `c ≥ 0`.
    pub fn scaled(&self, c: T) -> Result<Self> {
        Self::new(self.rows, self.cols, self.data.iter().map(|&v| v * c).collect())
    }

    /// Row `j` dominates row `i` entrywise.
    #[inline]
    pub fn row_dominates(&self, j: usize, i: usize) -> bool {
        self.row(j).iter().zip(self.row(i)).all(|(a, b)| a >= b)
    }

    /// Converts to another scalar type.
    pub fn cast<U: Scalar>(&self) -> DenseMatrix<U> {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| U::of(v.to_f64_lossy())).collect(),
        }
    }
}

#[inline]
pub(crate) fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

#[derive(Serialize, Deserialize)]
struct RawMatrix<T> {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<T>>,
}

impl<T: Scalar> TryFrom<RawMatrix<T>> for DenseMatrix<T> {
    type Error = Error;
    fn try_from(raw: RawMatrix<T>) -> Result<Self> {
        if raw.entries.len() != raw.rows {
            return Err(Error::DimensionMismatch {
                what: "matrix rows",
                expected: raw.rows,
                got: raw.entries.len(),
            });
        }
        if let Some(r) = raw.entries.iter().find(|r| r.len() != raw.cols) {
            return Err(Error::DimensionMismatch {
                what: "matrix row length",
                expected: raw.cols,
                got: r.len(),
            });
        }
        DenseMatrix::new(raw.rows, raw.cols, raw.entries.into_iter().flatten().collect())
    }
}

impl<T: Scalar> From<DenseMatrix<T>> for RawMatrix<T> {
    fn from(m: DenseMatrix<T>) -> Self {
        RawMatrix {
            rows: m.rows,
            cols: m.cols,
            entries: m.to_rows(),
        }
    }
}
