//! Disjoint convex hull decompositions of two point sets.
//!
//! A decomposition splits each class into parts such that the hull of every
//! part of one class is disjoint from the hull of every part of the other.
//! The part counts `L1`, `L2` size the constructed network.
//!
//! [`estimate_decomposition`] first peels off the regions that the
//! mean-difference axis already separates, repeating on the remaining
//! overlap while it shrinks, and then splits whatever overlap is left along
//! the best of many random directions. Projections never merge points whose
//! images are separated, so every partition found on a line lifts to a valid
//! partition in the original space.

mod peel;
mod projection;
mod strategy;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    first_shared_point, hull_distance_with, project_1d, HullDistanceResult, HullOptions, PointSet,
};

pub use peel::{peel_overlap, peel_overlap_with_margin, PeelResult};
pub use projection::{count_alternations, decompose_1d, Partition1d};
pub use strategy::{Decomposer, DecomposerRegistry, ProjectionPeel, Singletons};

/// One part of a class: indices into the class point set and the points.
#[derive(Debug, Clone, PartialEq)]
pub struct Part {
    pub indices: Vec<usize>,
    pub points: PointSet,
}

impl Part {
    fn from_indices(set: &PointSet, mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        Self {
            points: set.select(&indices),
            indices,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub parts_1: Vec<Part>,
    pub parts_2: Vec<Part>,
    pub seed: u64,
    /// Random directions evaluated on the residual overlap.
    pub projections_used: usize,
    /// Mean-axis peel iterations that made progress.
    pub peel_iterations: usize,
}

impl Decomposition {
    pub fn l1(&self) -> usize {
        self.parts_1.len()
    }

    pub fn l2(&self) -> usize {
        self.parts_2.len()
    }

    /// Every point its own part.
    pub fn singletons(x: &PointSet, y: &PointSet) -> Self {
        Self {
            parts_1: (0..x.len())
                .map(|i| Part::from_indices(x, vec![i]))
                .collect(),
            parts_2: (0..y.len())
                .map(|j| Part::from_indices(y, vec![j]))
                .collect(),
            seed: 0,
            projections_used: 0,
            peel_iterations: 0,
        }
    }

    /// One part per class.
    pub fn trivial(x: &PointSet, y: &PointSet) -> Self {
        Self {
            parts_1: vec![Part::from_indices(x, (0..x.len()).collect())],
            parts_2: vec![Part::from_indices(y, (0..y.len()).collect())],
            seed: 0,
            projections_used: 0,
            peel_iterations: 0,
        }
    }

    pub fn assignment(&self) -> PartAssignment {
        PartAssignment {
            l1: self.l1(),
            l2: self.l2(),
            parts_1: self.parts_1.iter().map(|p| p.indices.clone()).collect(),
            parts_2: self.parts_2.iter().map(|p| p.indices.clone()).collect(),
            seed: self.seed,
        }
    }

    /// Rebuilds a decomposition from index lists, checking that each class
    /// is partitioned exactly.
    pub fn from_assignment(x: &PointSet, y: &PointSet, a: &PartAssignment) -> Result<Self> {
        let build = |set: &PointSet, parts: &[Vec<usize>], which: &str| -> Result<Vec<Part>> {
            let mut seen = vec![false; set.len()];
            for idx in parts.iter().flatten() {
                if *idx >= set.len() || std::mem::replace(&mut seen[*idx], true) {
                    return Err(Error::Config(format!(
                        "{which}: index {idx} out of range or repeated"
                    )));
                }
            }
            if seen.iter().any(|s| !s) || parts.iter().any(Vec::is_empty) {
                return Err(Error::Config(format!(
                    "{which}: parts do not cover the class"
                )));
            }
            Ok(parts
                .iter()
                .map(|p| Part::from_indices(set, p.clone()))
                .collect())
        };
        Ok(Self {
            parts_1: build(x, &a.parts_1, "parts_1")?,
            parts_2: build(y, &a.parts_2, "parts_2")?,
            seed: a.seed,
            projections_used: 0,
            peel_iterations: 0,
        })
    }
}

/// Serializable part membership (indices into each class).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartAssignment {
    pub l1: usize,
    pub l2: usize,
    pub parts_1: Vec<Vec<usize>>,
    pub parts_2: Vec<Vec<usize>>,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct EstimateConfig {
    /// Random directions for the residual overlap; `None` uses
    /// `max(200, 2 * dim)`.
    pub n_projections: Option<usize>,
    pub seed: u64,
    /// Minimum Euclidean gap between parts of different classes; `None`
    /// derives it from the data scale.
    pub separation_tol: Option<f64>,
}

pub fn default_projections(dim: usize) -> usize {
    (2 * dim).max(200)
}

pub fn estimate_decomposition(
    x: &PointSet,
    y: &PointSet,
    n_projections: usize,
    seed: u64,
) -> Result<Decomposition> {
    estimate_decomposition_with(
        x,
        y,
        &EstimateConfig {
            n_projections: Some(n_projections),
            seed,
            separation_tol: None,
        },
    )
}

pub fn estimate_decomposition_with(
    x: &PointSet,
    y: &PointSet,
    cfg: &EstimateConfig,
) -> Result<Decomposition> {
    if x.is_empty() {
        return Err(Error::EmptySet("estimate_decomposition: first set"));
    }
    if y.is_empty() {
        return Err(Error::EmptySet("estimate_decomposition: second set"));
    }
    x.check_dim(y.dim())?;
    if let Some(index) = first_shared_point(x, y) {
        return Err(Error::SharedPoint { index });
    }
    let tol = cfg
        .separation_tol
        .unwrap_or_else(|| crate::Tolerances::default().separation_tol(x.scale().max(y.scale())));

    let mut parts_1 = Vec::new();
    let mut parts_2 = Vec::new();
    let mut cur_x: Vec<usize> = (0..x.len()).collect();
    let mut cur_y: Vec<usize> = (0..y.len()).collect();
    let mut peel_iterations = 0;
    let mut prev_overlap = x.len() + y.len() + 1;
    while !cur_x.is_empty() && !cur_y.is_empty() {
        let peel = match peel_overlap_with_margin(&x.select(&cur_x), &y.select(&cur_y), tol) {
            Ok(p) => p,
            Err(Error::ZeroDirection) => break,
            Err(e) => return Err(e),
        };
        let overlap = peel.overlap_len();
        if overlap >= prev_overlap || overlap == cur_x.len() + cur_y.len() {
            break;
        }
        prev_overlap = overlap;
        peel_iterations += 1;
        if !peel.outside_1.is_empty() {
            let idx = peel.outside_1.iter().map(|&i| cur_x[i]).collect();
            parts_1.push(Part::from_indices(x, idx));
        }
        if !peel.outside_2.is_empty() {
            let idx = peel.outside_2.iter().map(|&j| cur_y[j]).collect();
            parts_2.push(Part::from_indices(y, idx));
        }
        cur_x = peel.overlap_1.iter().map(|&i| cur_x[i]).collect();
        cur_y = peel.overlap_2.iter().map(|&j| cur_y[j]).collect();
    }

    let mut projections_used = 0;
    match (cur_x.is_empty(), cur_y.is_empty()) {
        (true, true) => {}
        (false, true) => parts_1.push(Part::from_indices(x, cur_x)),
        (true, false) => parts_2.push(Part::from_indices(y, cur_y)),
        (false, false) => {
            let n = cfg
                .n_projections
                .unwrap_or_else(|| default_projections(x.dim()));
            let rx = x.select(&cur_x);
            let ry = y.select(&cur_y);
            projections_used = n;
            match best_projection(&rx, &ry, n, cfg.seed, tol)? {
                Some(p) => {
                    for run in p.parts_1 {
                        parts_1.push(Part::from_indices(
                            x,
                            run.iter().map(|&i| cur_x[i]).collect(),
                        ));
                    }
                    for run in p.parts_2 {
                        parts_2.push(Part::from_indices(
                            y,
                            run.iter().map(|&j| cur_y[j]).collect(),
                        ));
                    }
                }
                None => {
                    parts_1.extend(cur_x.iter().map(|&i| Part::from_indices(x, vec![i])));
                    parts_2.extend(cur_y.iter().map(|&j| Part::from_indices(y, vec![j])));
                }
            }
        }
    }

    Ok(Decomposition {
        parts_1,
        parts_2,
        seed: cfg.seed,
        projections_used,
        peel_iterations,
    })
}

/// The random direction minimizing `max(L1, L2)`, then `L1 + L2`, then the
/// draw index. Directions whose adjacent cross-class runs come closer than
/// `tol` are rejected.
fn best_projection(
    x: &PointSet,
    y: &PointSet,
    n: usize,
    seed: u64,
    tol: f64,
) -> Result<Option<Partition1d>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<((usize, usize), Partition1d)> = None;
    let mut dir = vec![0.0; x.dim()];
    for _ in 0..n {
        let mut len = 0.0;
        while !(len > 0.0) {
            dir.iter_mut()
                .for_each(|d| *d = StandardNormal.sample(&mut rng));
            len = dir.iter().map(|d| d * d).sum::<f64>().sqrt();
        }
        dir.iter_mut().for_each(|d| *d /= len);
        let p = decompose_1d(&project_1d(x, &dir)?, &project_1d(y, &dir)?);
        if !(p.min_gap > tol) {
            continue;
        }
        let key = (p.l1().max(p.l2()), p.l1() + p.l2());
        if best.as_ref().is_none_or(|(k, _)| key < *k) {
            best = Some((key, p));
        }
    }
    Ok(best.map(|(_, p)| p))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairDistance {
    pub part_1: usize,
    pub part_2: usize,
    pub result: HullDistanceResult,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValidationReport {
    pub valid: bool,
    /// Smallest hull distance over all cross-class part pairs.
    pub min_distance: f64,
    /// First pair (row-major) whose hulls are not certifiably separated.
    pub offending: Option<(usize, usize)>,
    /// Row-major over `(part_1, part_2)`.
    pub pairs: Vec<PairDistance>,
}

/// Checks every cross-class pair of parts for hull distance above `tol`.
pub fn validate_decomposition(d: &Decomposition, tol: f64) -> Result<ValidationReport> {
    validate_decomposition_with(d, tol, &HullOptions::default())
}

pub fn validate_decomposition_with(
    d: &Decomposition,
    tol: f64,
    opts: &HullOptions,
) -> Result<ValidationReport> {
    let l2 = d.l2();
    let pairs: Vec<PairDistance> = (0..d.l1() * l2)
        .into_par_iter()
        .map(|k| {
            let (i, j) = (k / l2, k % l2);
            hull_distance_with(&d.parts_1[i].points, &d.parts_2[j].points, opts).map(|result| {
                PairDistance {
                    part_1: i,
                    part_2: j,
                    result,
                }
            })
        })
        .collect::<Result<_>>()?;
    let offending = pairs
        .iter()
        .find(|p| !p.result.separated(tol))
        .map(|p| (p.part_1, p.part_2));
    let min_distance = pairs
        .iter()
        .map(|p| p.result.distance)
        .fold(f64::INFINITY, f64::min);
    Ok(ValidationReport {
        valid: offending.is_none(),
        min_distance,
        offending,
        pairs,
    })
}
