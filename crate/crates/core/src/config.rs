use serde::{Deserialize, Serialize};

use crate::geometry::HullOptions;

/// Every numeric threshold used by the pipeline, in one place.
///
/// Absolute thresholds are expressed relative to a data scale via
/// [`Tolerances::separation_tol`], so that rescaling the inputs rescales the
/// thresholds with them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative duality-gap target for the hull distance solver.
    pub hull_rel_tol: f64,
    /// Iteration cap for the hull distance solver.
    pub hull_max_iter: usize,
    /// Hulls count as disjoint when their distance exceeds
    /// `separation_factor * (1 + scale)`.
    pub separation_factor: f64,
    /// Multiplicative slack on every minimal delta.
    pub slack: f64,
    /// Ratio tolerance of the x0 bisection.
    pub x0_ratio_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hull_rel_tol: 1e-7,
            hull_max_iter: 10_000,
            separation_factor: 1e-9,
            slack: 0.1,
            x0_ratio_tol: 1e-10,
        }
    }
}

impl Tolerances {
    /// Absolute "strictly separated" threshold for data of the given scale.
    pub fn separation_tol(&self, scale: f64) -> f64 {
        self.separation_factor * (1.0 + scale)
    }

    pub fn hull_options(&self) -> HullOptions {
        HullOptions {
            rel_tol: self.hull_rel_tol,
            max_iter: self.hull_max_iter,
            zero_tol: None,
        }
    }
}
