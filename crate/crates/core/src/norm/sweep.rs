use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::MatrixFamily;
use crate::scalar::Scalar;
use crate::spaces::SpaceSpec;

use super::{norm_estimate, NormEstimate, NormOptions};

/// Estimates at growing square truncations of a family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct TruncationSweep<T: Scalar> {
    pub sizes: Vec<usize>,
    pub estimates: Vec<NormEstimate<T>>,
    /// `value[i+1] - value[i]`.
    pub increments: Vec<T>,
    /// Values never decrease by more than a relative `1e-9`.
    pub monotone: bool,
}

impl<T: Scalar> TruncationSweep<T> {
    pub fn values(&self) -> Vec<T> {
        self.estimates.iter().map(|e| e.value).collect()
    }
}

pub fn truncation_sweep<T: Scalar>(
    family: &MatrixFamily<T>,
    e: &SpaceSpec<T>,
    f: &SpaceSpec<T>,
    sizes: &[usize],
    restricted: bool,
    opts: &NormOptions,
) -> Result<TruncationSweep<T>> {
    if sizes.is_empty() || sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter(
            "sizes must be non-empty and strictly increasing".into(),
        ));
    }
    let estimates = sizes
        .iter()
        .map(|&n| norm_estimate(&family.truncate(n)?, e, f, restricted, opts))
        .collect::<Result<Vec<_>>>()?;
    let increments: Vec<T> = estimates.windows(2).map(|w| w[1].value - w[0].value).collect();
    let slack = T::of(1e-9);
    let monotone = estimates
        .windows(2)
        .all(|w| w[1].value >= w[0].value * (T::one() - slack));
    Ok(TruncationSweep {
        sizes: sizes.to_vec(),
        estimates,
        increments,
        monotone,
    })
}
