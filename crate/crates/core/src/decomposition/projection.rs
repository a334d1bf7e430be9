//! Disjoint convex hull decompositions of two labeled sets on a line.
//!
//! On a line the hulls are intervals, so the coarsest decomposition is given
//! by the maximal runs of same-class values in sorted order.

/// Sort order of the merged values: by value, class 1 before class 2 on
/// ties, then by input position.
fn merged_order(s1: &[f64], s2: &[f64]) -> Vec<(f64, u8, usize)> {
    let mut merged: Vec<(f64, u8, usize)> = s1
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, 0u8, i))
        .chain(s2.iter().enumerate().map(|(j, &v)| (v, 1u8, j)))
        .collect();
    merged.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    merged
}

/// Number of positions in the merged sorted sequence whose class differs
/// from the previous position.
pub fn count_alternations(scalars_1: &[f64], scalars_2: &[f64]) -> usize {
    merged_order(scalars_1, scalars_2)
        .windows(2)
        .filter(|w| w[0].1 != w[1].1)
        .count()
}

/// Partition of two scalar lists into maximal same-class runs.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition1d {
    /// Indices into the first list, one vector per run, runs in ascending order.
    pub parts_1: Vec<Vec<usize>>,
    pub parts_2: Vec<Vec<usize>>,
    /// Smallest distance between adjacent runs of different classes
    /// (infinite when there is at most one run).
    pub min_gap: f64,
}

impl Partition1d {
    pub fn l1(&self) -> usize {
        self.parts_1.len()
    }

    pub fn l2(&self) -> usize {
        self.parts_2.len()
    }

    pub fn changes(&self) -> usize {
        (self.l1() + self.l2()).saturating_sub(1)
    }
}

pub fn decompose_1d(scalars_1: &[f64], scalars_2: &[f64]) -> Partition1d {
    let merged = merged_order(scalars_1, scalars_2);
    let mut parts_1: Vec<Vec<usize>> = Vec::new();
    let mut parts_2: Vec<Vec<usize>> = Vec::new();
    let mut min_gap = f64::INFINITY;
    let mut prev: Option<(f64, u8)> = None;
    for &(v, class, idx) in &merged {
        let parts = if class == 0 {
            &mut parts_1
        } else {
            &mut parts_2
        };
        match prev {
            Some((_, pc)) if pc == class => parts.last_mut().unwrap().push(idx),
            Some((pv, _)) => {
                min_gap = min_gap.min(v - pv);
                parts.push(vec![idx]);
            }
            None => parts.push(vec![idx]),
        }
        prev = Some((v, class));
    }
    Partition1d {
        parts_1,
        parts_2,
        min_gap,
    }
}
