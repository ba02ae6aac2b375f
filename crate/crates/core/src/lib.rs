//! Dissipative Dicke model dynamics, Liouvillian spectral decomposition and
//! quantum Mpemba effect detection.
//!
//! Units have `ħ = 1`; times are in the same units as the inverse
//! frequencies passed to [`DickeParams`].

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod dicke;
mod eigen;
pub mod error;
pub mod linalg;
pub mod liouville;
pub mod measures;
pub mod mpemba;

pub use dicke::{BipartiteDickeParams, DickeModel, DickeParams};
pub use error::{Error, Result};
pub use linalg::{BlochVector, CMatrix, CVector, DensityMatrix, C64};
pub use liouville::{LindbladGenerator, LiouvilleSpectrum, OverlapCoefficients, SpectrumDump};
pub use measures::{Bipartition, MeasureKind};
pub use mpemba::{MpembaVerdict, Ordering, RoleReversalVerdict, Trajectory};
