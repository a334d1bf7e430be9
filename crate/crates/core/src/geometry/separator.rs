use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::hull::{hull_distance_with, HullDistanceResult, HullOptions};
use super::point::{dist, dot, norm, PointSet};
use crate::error::{Error, Result};

/// Affine functional `w . x + b`. The first operand of the constructing call
/// sits on the negative side.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparatorPlane {
    pub w: Vec<f64>,
    pub b: f64,
    /// Euclidean gap between the two point sets along `w / |w|`.
    pub margin: f64,
}

impl SeparatorPlane {
    #[inline]
    pub fn eval(&self, x: &[f64]) -> f64 {
        dot(&self.w, x) + self.b
    }

    /// Plane through the midpoint of the gap between `a` and `b` along the
    /// witness direction `witness_b - witness_a`, with `w` of unit length.
    /// The margin is measured by direct evaluation on every point.
    pub fn from_witnesses(
        a: &PointSet,
        b: &PointSet,
        witness_a: &[f64],
        witness_b: &[f64],
        tol: f64,
    ) -> Result<Self> {
        let mut w: Vec<f64> = witness_b
            .iter()
            .zip(witness_a)
            .map(|(q, p)| q - p)
            .collect();
        let len = norm(&w);
        if !(len > 0.0) {
            return Err(Error::NotSeparated { distance: 0.0, tol });
        }
        w.iter_mut().for_each(|x| *x /= len);
        let (_, hi_a) = extent(a, &w);
        let (lo_b, _) = extent(b, &w);
        let margin = lo_b - hi_a;
        if !(margin > tol) {
            return Err(Error::NotSeparated {
                distance: margin.max(0.0),
                tol,
            });
        }
        Ok(Self {
            w,
            b: -0.5 * (hi_a + lo_b),
            margin,
        })
    }
}

/// `(min, max)` of `<w, x>` over the set.
pub fn extent(set: &PointSet, w: &[f64]) -> (f64, f64) {
    set.iter()
        .map(|p| dot(p, w))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        })
}

/// Max-margin hyperplane between `C(a)` (negative side) and `C(b)`.
pub fn max_margin_separator(a: &PointSet, b: &PointSet, tol: f64) -> Result<SeparatorPlane> {
    max_margin_separator_with(a, b, tol, &HullOptions::default()).map(|(p, _)| p)
}

/// As [`max_margin_separator`], also returning the underlying hull distance.
pub fn max_margin_separator_with(
    a: &PointSet,
    b: &PointSet,
    tol: f64,
    opts: &HullOptions,
) -> Result<(SeparatorPlane, HullDistanceResult)> {
    let hd = hull_distance_with(a, b, opts)?;
    if hd.distance <= tol {
        return Err(Error::NotSeparated {
            distance: hd.distance,
            tol,
        });
    }
    let plane = SeparatorPlane::from_witnesses(a, b, &hd.witness_a, &hd.witness_b, tol)?;
    Ok((plane, hd))
}

/// Whether `p` lies within `tol` of `C(a)`.
pub fn point_in_hull(p: &[f64], a: &PointSet, tol: f64) -> Result<bool> {
    a.check_dim(p.len())?;
    let single = PointSet::from_flat(p.len(), p.to_vec())?;
    let opts = HullOptions {
        zero_tol: Some(0.1 * tol),
        ..HullOptions::default()
    };
    let hd = hull_distance_with(&single, a, &opts)?;
    Ok(hd.distance <= tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Separability {
    LinearlySeparable,
    ConvexlySeparable,
    /// Neither test succeeded; proving inseparability over every
    /// decomposition is not attempted.
    ConvexlyInseparableCandidate,
}

pub fn separability_class(a: &PointSet, b: &PointSet, tol: f64) -> Result<Separability> {
    a.check_dim(b.dim())?;
    if let Some(index) = first_shared_point(a, b) {
        return Err(Error::SharedPoint { index });
    }
    let opts = HullOptions::default();
    if hull_distance_with(a, b, &opts)?.separated(tol) {
        return Ok(Separability::LinearlySeparable);
    }
    let outside = |set: &PointSet, hull: &PointSet| -> Result<bool> {
        for p in set.iter() {
            if point_in_hull(p, hull, tol)? {
                return Ok(false);
            }
        }
        Ok(true)
    };
    if outside(b, a)? || outside(a, b)? {
        Ok(Separability::ConvexlySeparable)
    } else {
        Ok(Separability::ConvexlyInseparableCandidate)
    }
}

/// Index into `b` of the first point that also occurs in `a`, if any.
pub fn first_shared_point(a: &PointSet, b: &PointSet) -> Option<usize> {
    let seen: HashSet<Vec<u64>> = a.iter().map(point_key).collect();
    b.iter().position(|p| seen.contains(&point_key(p)))
}

/// Hashable identity of a point; `-0.0` and `0.0` compare equal.
pub fn point_key(p: &[f64]) -> Vec<u64> {
    p.iter().map(|x| (x + 0.0).to_bits()).collect()
}

/// Dot product of each point with `direction`, in input order.
pub fn project_1d(a: &PointSet, direction: &[f64]) -> Result<Vec<f64>> {
    a.check_dim(direction.len())?;
    if !(norm(direction) > 0.0) {
        return Err(Error::ZeroDirection);
    }
    Ok(a.iter().map(|p| dot(p, direction)).collect())
}

/// Largest pairwise Euclidean distance.
pub fn diameter(a: &PointSet) -> Result<f64> {
    if a.is_empty() {
        return Err(Error::EmptySet("diameter"));
    }
    Ok((0..a.len())
        .into_par_iter()
        .map(|i| {
            let p = a.point(i);
            ((i + 1)..a.len()).fold(0.0_f64, |m, j| m.max(dist(p, a.point(j))))
        })
        .reduce(|| 0.0, f64::max))
}
