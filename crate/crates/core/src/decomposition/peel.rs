use crate::error::{Error, Result};
use crate::geometry::{dot, norm, PointSet};

/// One split of two sets along the axis between their means.
///
/// Indices refer to the sets passed to [`peel_overlap`].
#[derive(Debug, Clone, PartialEq)]
pub struct PeelResult {
    /// Points of the first set projecting below `cy`.
    pub outside_1: Vec<usize>,
    /// Points of the second set projecting above `cx`.
    pub outside_2: Vec<usize>,
    pub overlap_1: Vec<usize>,
    pub overlap_2: Vec<usize>,
    /// Largest projection of the first set.
    pub cx: f64,
    /// Smallest projection of the second set.
    pub cy: f64,
}

impl PeelResult {
    pub fn overlap_len(&self) -> usize {
        self.overlap_1.len() + self.overlap_2.len()
    }
}

/// Projects both sets on `mean(y) - mean(x)` and splits each at the other
/// set's extreme projection.
pub fn peel_overlap(x: &PointSet, y: &PointSet) -> Result<PeelResult> {
    peel_overlap_with_margin(x, y, 0.0)
}

/// As [`peel_overlap`], but points within `margin` (Euclidean) of the
/// opposite threshold count as overlap, so every outside region is at least
/// `margin` away from everything it is split from.
pub fn peel_overlap_with_margin(x: &PointSet, y: &PointSet, margin: f64) -> Result<PeelResult> {
    x.check_dim(y.dim())?;
    let mx = x.mean().ok_or(Error::EmptySet("peel_overlap: first set"))?;
    let my = y
        .mean()
        .ok_or(Error::EmptySet("peel_overlap: second set"))?;
    let axis: Vec<f64> = my.iter().zip(&mx).map(|(b, a)| b - a).collect();
    let len = norm(&axis);
    if !(len > 0.0) {
        return Err(Error::ZeroDirection);
    }
    let px: Vec<f64> = x.iter().map(|p| dot(p, &axis)).collect();
    let py: Vec<f64> = y.iter().map(|p| dot(p, &axis)).collect();
    let cx = px.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let cy = py.iter().copied().fold(f64::INFINITY, f64::min);
    let pad = margin * len;
    let (overlap_1, outside_1): (Vec<usize>, Vec<usize>) =
        (0..px.len()).partition(|&i| px[i] >= cy - pad);
    let (overlap_2, outside_2): (Vec<usize>, Vec<usize>) =
        (0..py.len()).partition(|&j| py[j] <= cx + pad);
    Ok(PeelResult {
        outside_1,
        outside_2,
        overlap_1,
        overlap_2,
        cx,
        cy,
    })
}
