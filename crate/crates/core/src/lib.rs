//! Exact computer algebra for finite-dimensional graded algebras over the
//! rationals: higher-order differential operator towers, derived Lie and
//! strongly homotopy Lie brackets, the Hochschild/Gerstenhaber calculus, and
//! cohomological descent — every identity checked exactly, no floating point.

pub mod algebra;
pub mod basis;
pub mod cohomology;
pub mod derived;
pub mod endlie;
mod error;
pub mod fixtures;
pub mod format;
pub mod higherops;
pub mod hochschild;
pub mod linalg;
pub mod multilinear;
pub mod perm;
pub mod report;
pub mod scalar;
pub mod shlie;

pub use basis::{GradedBasis, Vector};
pub use error::{Error, Result};
pub use multilinear::MultilinearMap;
pub use report::{Check, CheckStatus, Report, Witness};
pub use scalar::Scalar;
