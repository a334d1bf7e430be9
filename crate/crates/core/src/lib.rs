//! Capacity bounds for two-hidden-layer networks from disjoint convex hull
//! decompositions.
//!
//! The pipeline is:
//!
//! 1. [`dataio`] loads a labeled dataset (MNIST IDX or CSV) and splits out two classes.
//! 2. [`decomposition`] estimates a disjoint convex hull decomposition with
//!    `L1` and `L2` parts, giving the hidden layer sizes `(L1 * L2, L1)`.
//! 3. [`constructor`] builds those layers explicitly for a chosen
//!    [`activation`] and certifies, by direct evaluation, that the final
//!    images of the two classes are linearly separable.
//! 4. [`trainer`] trains ordinary networks of various sizes with SGD for
//!    comparison against the bound.
//!
//! All geometry lives in [`geometry`]; the hull distance solver there is the
//! workhorse behind validation and construction.

// `!(x > 0.0)` is used deliberately so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod activation;
pub mod config;
pub mod constructor;
pub mod dataio;
pub mod decomposition;
pub mod error;
pub mod geometry;
pub mod trainer;

pub use activation::{ActivationRegistry, ActivationSpec, MarginCertificate};
pub use config::Tolerances;
pub use constructor::{construct, verify_separation, ConstructedNetwork, SeparationReport};
pub use dataio::LabeledDataset;
pub use decomposition::{estimate_decomposition, validate_decomposition, Decomposition};
pub use error::{Error, Result};
pub use geometry::{hull_distance, HullDistanceResult, Point, PointSet, SeparatorPlane};

/// Library version string, embedded in every report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
