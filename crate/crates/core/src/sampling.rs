//! Seeded random generators of small non-negative matrices with dyadic
//! entries. Dyadic values make every sum in the condition checkers exact, so
//! the checkers can compare without slack.
//!
//! Some samplers are built so that a given condition holds by construction;
//! this keeps implication tests from being vacuous.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::matrix::DenseMatrix;

/// Denominator of entry values in `[0, 1]`.
const GRID: u32 = 8;
/// Quantum in which summability rows distribute their unit mass.
const MASS_QUANTA: u32 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sampler {
    /// Independent entries from `{0, 1/8, …, 1}`.
    UniformDyadic,
    /// Every column sorted decreasingly.
    ColumnSorted,
    /// Every row sorted decreasingly.
    RowSorted,
    /// Rows and columns sorted decreasingly.
    DoublySorted,
    /// Entries in `{0, 1}` with density one half.
    Binary,
    /// Decreasing columns whose leading sums decrease from column to column
    /// without the rows being decreasing.
    ColumnMajorized,
    /// Transpose of [`Sampler::ColumnMajorized`] (rows and columns swapped).
    RowMajorized,
    /// Square lower-triangular matrices with unit row sums.
    Summability,
    /// Summability matrices with `a_{j,k} ≥ max(a_{j+1,k}, a_{j+1,k+1})`.
    StaircaseSummability,
}

impl Sampler {
    pub const ALL: [Sampler; 9] = [
        Sampler::UniformDyadic,
        Sampler::ColumnSorted,
        Sampler::RowSorted,
        Sampler::DoublySorted,
        Sampler::Binary,
        Sampler::ColumnMajorized,
        Sampler::RowMajorized,
        Sampler::Summability,
        Sampler::StaircaseSummability,
    ];

    /// Whether the output is always square (columns are ignored).
    pub fn is_square(self) -> bool {
        matches!(self, Sampler::Summability | Sampler::StaircaseSummability)
    }

    /// Draws one `rows × cols` matrix (`rows × rows` for square samplers).
    pub fn sample<R: Rng + ?Sized>(self, rows: usize, cols: usize, rng: &mut R) -> DenseMatrix<f64> {
        match self {
            Sampler::UniformDyadic => uniform(rows, cols, rng),
            Sampler::ColumnSorted => sort_columns(&uniform(rows, cols, rng)),
            Sampler::RowSorted => sort_rows(&uniform(rows, cols, rng)),
            Sampler::DoublySorted => sort_columns(&sort_rows(&uniform(rows, cols, rng))),
            Sampler::Binary => {
                let data = (0..rows * cols).map(|_| if rng.gen_bool(0.5) { 1.0 } else { 0.0 }).collect();
                DenseMatrix::new(rows, cols, data).expect("binary entries are valid")
            }
            Sampler::ColumnMajorized => column_majorized(rows, cols, rng),
            Sampler::RowMajorized => column_majorized(cols, rows, rng).transpose(),
            Sampler::Summability => summability(rows, rng),
            Sampler::StaircaseSummability => staircase_summability(rows, rng),
        }
    }
}

fn dyadic<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    f64::from(rng.gen_range(0..=GRID)) / f64::from(GRID)
}

fn uniform<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> DenseMatrix<f64> {
    let data = (0..rows * cols).map(|_| dyadic(rng)).collect();
    DenseMatrix::new(rows, cols, data).expect("dyadic entries are valid")
}

fn sort_desc(v: &mut [f64]) {
    v.sort_by(|a, b| b.total_cmp(a));
}

fn sort_rows(a: &DenseMatrix<f64>) -> DenseMatrix<f64> {
    let mut rows = a.to_rows();
    rows.iter_mut().for_each(|r| sort_desc(r));
    DenseMatrix::from_rows(rows).expect("same shape")
}

fn sort_columns(a: &DenseMatrix<f64>) -> DenseMatrix<f64> {
    sort_rows(&a.transpose()).transpose()
}

/// Column `k+1` is weakly submajorized by column `k`: pairwise averaging and
/// lowering entries only shrink the sums of the largest entries, and each
/// column is then sorted decreasingly.
fn column_majorized<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> DenseMatrix<f64> {
    let mut col: Vec<f64> = (0..rows).map(|_| dyadic(rng)).collect();
    sort_desc(&mut col);
    let mut columns = vec![col.clone()];
    for _ in 1..cols {
        if rows >= 2 {
            for _ in 0..rng.gen_range(0..=rows) {
                let i = rng.gen_range(0..rows);
                let j = rng.gen_range(0..rows);
                let mean = (col[i] + col[j]) / 2.0;
                col[i] = mean;
                col[j] = mean;
            }
        }
        if rng.gen_bool(0.5) {
            let i = rng.gen_range(0..rows);
            col[i] = (col[i] - dyadic(rng)).max(0.0);
        }
        sort_desc(&mut col);
        columns.push(col.clone());
    }
    DenseMatrix::from_fn(rows, cols, |j, k| columns[k][j]).expect("dyadic entries are valid")
}

/// Distributes `MASS_QUANTA` quanta over positions with the given capacities
/// (in quanta); `None` when the capacities cannot hold the full mass.
fn distribute<R: Rng + ?Sized>(caps: &[u32], rng: &mut R) -> Option<Vec<u32>> {
    if caps.iter().sum::<u32>() < MASS_QUANTA {
        return None;
    }
    let mut fill = vec![0u32; caps.len()];
    let mut open: Vec<usize> = (0..caps.len()).filter(|&k| caps[k] > 0).collect();
    for _ in 0..MASS_QUANTA {
        let slot = *open.choose(rng)?;
        fill[slot] += 1;
        if fill[slot] == caps[slot] {
            open.retain(|&k| k != slot);
        }
    }
    Some(fill)
}

fn from_quanta(rows: &[Vec<u32>], n: usize) -> DenseMatrix<f64> {
    DenseMatrix::from_fn(n, n, |j, k| {
        rows[j].get(k).map_or(0.0, |&q| f64::from(q) / f64::from(MASS_QUANTA))
    })
    .expect("dyadic entries are valid")
}

fn summability<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DenseMatrix<f64> {
    let rows: Vec<Vec<u32>> = (1..=n)
        .map(|len| distribute(&vec![MASS_QUANTA; len], rng).expect("full capacity"))
        .collect();
    from_quanta(&rows, n)
}

/// Row `j+1` is capped entrywise by the previous row: column 1 by
/// `a_{j,1}`, column `k` by `min(a_{j,k-1}, a_{j,k})`, and the diagonal by
/// `a_{j,j}`. A row whose caps cannot hold unit mass restarts the matrix.
fn staircase_summability<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DenseMatrix<f64> {
    'restart: loop {
        let mut rows: Vec<Vec<u32>> = vec![vec![MASS_QUANTA]];
        while rows.len() < n {
            let prev = rows.last().expect("non-empty");
            let len = prev.len();
            let caps: Vec<u32> = (0..=len)
                .map(|k| match k {
                    0 => prev[0],
                    k if k == len => prev[len - 1],
                    k => prev[k - 1].min(prev[k]),
                })
                .collect();
            match distribute(&caps, rng) {
                Some(row) => rows.push(row),
                None => continue 'restart,
            }
        }
        rows.truncate(n);
        return from_quanta(&rows, n);
    }
}
