//! Convex geometry over finite point sets: hull distances, separability
//! predicates and max-margin separating hyperplanes.
//!
//! Everything here is a pure function of its inputs.

mod hull;
mod point;
mod separator;

pub use hull::{hull_distance, hull_distance_with, HullDistanceResult, HullOptions};
pub use point::{dist, dot, norm, Point, PointSet};
pub use separator::{
    diameter, extent, first_shared_point, max_margin_separator, max_margin_separator_with,
    point_in_hull, point_key, project_1d, separability_class, Separability, SeparatorPlane,
};
