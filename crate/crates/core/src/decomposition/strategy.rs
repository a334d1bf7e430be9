use std::collections::BTreeMap;
use std::fmt;

use super::{estimate_decomposition_with, Decomposition, EstimateConfig};
use crate::error::{Error, Result};
use crate::geometry::PointSet;

/// A way of producing a decomposition, selectable by name.
pub trait Decomposer: Send + Sync + fmt::Debug {
    fn name(&self) -> &'static str;

    fn decompose(&self, x: &PointSet, y: &PointSet, cfg: &EstimateConfig) -> Result<Decomposition>;
}

/// Mean-axis peeling followed by the best random projection.
#[derive(Debug, Clone, Copy, Default)]
pub struct ProjectionPeel;

impl Decomposer for ProjectionPeel {
    fn name(&self) -> &'static str {
        "peel"
    }

    fn decompose(&self, x: &PointSet, y: &PointSet, cfg: &EstimateConfig) -> Result<Decomposition> {
        estimate_decomposition_with(x, y, cfg)
    }
}

/// Every point its own part. Always valid for disjoint sets, never small.
#[derive(Debug, Clone, Copy, Default)]
pub struct Singletons;

impl Decomposer for Singletons {
    fn name(&self) -> &'static str {
        "singleton"
    }

    fn decompose(&self, x: &PointSet, y: &PointSet, cfg: &EstimateConfig) -> Result<Decomposition> {
        x.check_dim(y.dim())?;
        if let Some(index) = crate::geometry::first_shared_point(x, y) {
            return Err(Error::SharedPoint { index });
        }
        Ok(Decomposition {
            seed: cfg.seed,
            ..Decomposition::singletons(x, y)
        })
    }
}

#[derive(Debug)]
pub struct DecomposerRegistry {
    entries: BTreeMap<&'static str, Box<dyn Decomposer>>,
}

impl Default for DecomposerRegistry {
    fn default() -> Self {
        let mut r = Self {
            entries: BTreeMap::new(),
        };
        r.register(Box::new(ProjectionPeel));
        r.register(Box::new(Singletons));
        r
    }
}

impl DecomposerRegistry {
    pub fn register(&mut self, d: Box<dyn Decomposer>) {
        self.entries.insert(d.name(), d);
    }

    pub fn get(&self, name: &str) -> Result<&dyn Decomposer> {
        self.entries
            .get(name)
            .map(|d| d.as_ref())
            .ok_or_else(|| Error::UnknownStrategy(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.entries.keys().copied()
    }
}
