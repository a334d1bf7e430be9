use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point in R^n with finite coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite { index: 0 });
        }
        Ok(Self(coords))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn distance(&self, other: &Point) -> f64 {
        dist(&self.0, &other.0)
    }
}

impl From<Point> for Vec<f64> {
    fn from(p: Point) -> Self {
        p.0
    }
}

/// An ordered collection of points sharing one dimension, stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSet {
    dim: usize,
    data: Vec<f64>,
}

impl PointSet {
    /// An empty set of the given dimension.
    pub fn empty(dim: usize) -> Self {
        Self {
            dim,
            data: Vec::new(),
        }
    }

    /// Builds a set from a flat row-major buffer.
    pub fn from_flat(dim: usize, data: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Config("point dimension must be positive".into()));
        }
        if !data.len().is_multiple_of(dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: data.len() % dim,
            });
        }
        if let Some(pos) = data.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite { index: pos / dim });
        }
        Ok(Self { dim, data })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let dim = rows
            .first()
            .map(|r| r.as_ref().len())
            .ok_or(Error::EmptySet("from_rows"))?;
        let mut data = Vec::with_capacity(dim * rows.len());
        for r in rows {
            let r = r.as_ref();
            if r.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Self::from_flat(dim, data)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.data.len().checked_div(self.dim).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.data.chunks_exact(self.dim)
    }

    pub fn into_flat(self) -> Vec<f64> {
        self.data
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.data
    }

    pub fn push(&mut self, p: &[f64]) -> Result<()> {
        if p.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: p.len(),
            });
        }
        if p.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite { index: self.len() });
        }
        self.data.extend_from_slice(p);
        Ok(())
    }

    /// The subset at the given indices, in index order.
    pub fn select(&self, indices: &[usize]) -> PointSet {
        let mut data = Vec::with_capacity(indices.len() * self.dim);
        for &i in indices {
            data.extend_from_slice(self.point(i));
        }
        PointSet {
            dim: self.dim,
            data,
        }
    }

    pub fn mean(&self) -> Option<Vec<f64>> {
        if self.is_empty() {
            return None;
        }
        let mut m = vec![0.0; self.dim];
        for p in self.iter() {
            for (acc, &x) in m.iter_mut().zip(p) {
                *acc += x;
            }
        }
        let n = self.len() as f64;
        m.iter_mut().for_each(|x| *x /= n);
        Some(m)
    }

    /// Largest absolute coordinate; the reference scale for tolerances.
    pub fn scale(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    /// Every point shifted by `v`.
    pub fn translated(&self, v: &[f64]) -> Result<PointSet> {
        self.check_dim(v.len())?;
        let mut data = self.data.clone();
        for row in data.chunks_exact_mut(self.dim) {
            for (x, &d) in row.iter_mut().zip(v) {
                *x += d;
            }
        }
        Ok(PointSet {
            dim: self.dim,
            data,
        })
    }

    /// Every coordinate multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> PointSet {
        PointSet {
            dim: self.dim,
            data: self.data.iter().map(|x| x * factor).collect(),
        }
    }

    pub fn concat(&self, other: &PointSet) -> Result<PointSet> {
        self.check_dim(other.dim)?;
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(PointSet {
            dim: self.dim,
            data,
        })
    }

    pub(crate) fn check_dim(&self, other: usize) -> Result<()> {
        if other != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other,
            });
        }
        Ok(())
    }
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    // four accumulators so the loop vectorizes
    let mut acc = [0.0; 4];
    let chunks_a = a.chunks_exact(4);
    let chunks_b = b.chunks_exact(4);
    let tail: f64 = chunks_a
        .remainder()
        .iter()
        .zip(chunks_b.remainder())
        .map(|(x, y)| x * y)
        .sum();
    for (ca, cb) in chunks_a.zip(chunks_b) {
        acc[0] += ca[0] * cb[0];
        acc[1] += ca[1] * cb[1];
        acc[2] += ca[2] * cb[2];
        acc[3] += ca[3] * cb[3];
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

#[inline]
pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[inline]
pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}
