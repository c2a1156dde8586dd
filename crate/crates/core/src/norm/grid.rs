//! Brute-force reference values by exhaustive grid scan.

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::scalar::Scalar;
use crate::spaces::{space_norm, SpaceSpec};

pub const GRID_MAX_COLS: usize = 4;
pub const GRID_MAX_RESOLUTION: usize = 200;

/// Maximum of `‖Ax‖_F / ‖x‖_E` over the grid points `x ∈ {0, 1/res, …, 1}^m`
/// with `max_k x_k = 1` (the faces of the unit cube, which meet every ray of
/// the non-negative cone). The restricted scan keeps the non-increasing
/// points, which then have `x_1 = 1`.
///
/// Shares only `space_norm` and the matrix product with the estimator.
pub fn grid_oracle<T: Scalar>(
    a: &DenseMatrix<T>,
    e: &SpaceSpec<T>,
    f: &SpaceSpec<T>,
    restricted: bool,
    resolution: usize,
) -> Result<T> {
    let m = a.cols();
    if m == 0 || m > GRID_MAX_COLS {
        return Err(Error::OutOfRange(format!(
            "grid oracle takes 1..={GRID_MAX_COLS} columns, got {m}"
        )));
    }
    if resolution == 0 || resolution > GRID_MAX_RESOLUTION {
        return Err(Error::OutOfRange(format!(
            "grid resolution must be in 1..={GRID_MAX_RESOLUTION}, got {resolution}"
        )));
    }
    e.check_dim(m)?;
    f.check_dim(a.rows())?;

    let res = T::of_usize(resolution);
    let mut idx = vec![0usize; m];
    let mut best = T::zero();
    let mut x = vec![T::zero(); m];
    loop {
        let on_face = idx.contains(&resolution);
        let monotone = !restricted || idx.windows(2).all(|p| p[0] >= p[1]);
        if on_face && monotone {
            for (xk, &i) in x.iter_mut().zip(&idx) {
                *xk = T::of_usize(i) / res;
            }
            let ex = space_norm(e, &x)?;
            let v = space_norm(f, &a.apply(&x)?)? / ex;
            if v > best {
                best = v;
            }
        }
        // odometer increment
        let mut k = 0;
        loop {
            if k == m {
                return Ok(best);
            }
            idx[k] += 1;
            if idx[k] <= resolution {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}
