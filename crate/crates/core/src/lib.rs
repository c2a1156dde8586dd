//! Operator norms of non-negative matrices between sequence spaces, and the
//! conditions under which those norms are attained on decreasing vectors.
//!
//! The library is generic over the scalar type ([`Scalar`], implemented for
//! `f32` and `f64`); the aliases below fix `f64`, with `f32` variants.

// `!(x > 0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod conditions;
pub mod error;
pub mod families;
pub mod matrix;
pub mod norm;
pub mod rearrangement;
pub mod sampling;
pub mod scalar;
pub mod spaces;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Matrix = matrix::DenseMatrix<f64>;
pub type Space = spaces::SpaceSpec<f64>;
pub type Weights = spaces::WeightSeq<f64>;
pub type Family = families::MatrixFamily<f64>;
pub type Estimate = norm::NormEstimate<f64>;

pub type MatrixF32 = matrix::DenseMatrix<f32>;
pub type SpaceF32 = spaces::SpaceSpec<f32>;
pub type WeightsF32 = spaces::WeightSeq<f32>;
pub type FamilyF32 = families::MatrixFamily<f32>;
pub type EstimateF32 = norm::NormEstimate<f32>;
