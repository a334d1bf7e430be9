//! Euclidean distance between the convex hulls of two finite point sets.
//!
//! The distance is the norm of the minimum-norm point of the Minkowski
//! difference `C(A) - C(B)`, found with Wolfe's active-set algorithm. Its
//! linear oracle splits over the two sets (`argmin_a <a, x>` minus
//! `argmax_b <b, x>`), so the `|A| * |B|` difference vertices are never
//! enumerated. The active set ("corral") stays affinely independent and the
//! method terminates after finitely many steps.
//!
//! Every oracle call yields a certified bracket
//! `<x, q> / |x| <= distance(C(A), C(B)) <= |x|`, where `q` is the oracle's
//! vertex for the current iterate `x`.

use serde::{Deserialize, Serialize};

use super::point::{dot, PointSet};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HullDistanceResult {
    /// `|witness_a - witness_b|`, the best upper bound found.
    pub distance: f64,
    /// Certified lower bound on the hull distance (0 when none is available).
    pub lower_bound: f64,
    pub witness_a: Vec<f64>,
    pub witness_b: Vec<f64>,
    /// Convex coefficients of `witness_a` over the points of `A`.
    #[serde(skip)]
    pub coeffs_a: Vec<f64>,
    #[serde(skip)]
    pub coeffs_b: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
}

impl HullDistanceResult {
    /// Whether the hulls are certifiably farther apart than `tol`.
    pub fn separated(&self, tol: f64) -> bool {
        self.lower_bound > tol
    }
}

/// Solver settings for [`hull_distance_with`].
#[derive(Debug, Clone, Copy)]
pub struct HullOptions {
    /// Stop once `distance - lower_bound <= rel_tol * distance`.
    pub rel_tol: f64,
    pub max_iter: usize,
    /// Stop once the distance is at most this (hulls intersect). `None`
    /// derives it from the data scale.
    pub zero_tol: Option<f64>,
}

impl Default for HullOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-7,
            max_iter: 10_000,
            zero_tol: None,
        }
    }
}

/// Minimum Euclidean distance between `C(a)` and `C(b)`.
pub fn hull_distance(
    a: &PointSet,
    b: &PointSet,
    tol: f64,
    max_iter: usize,
) -> Result<HullDistanceResult> {
    hull_distance_with(
        a,
        b,
        &HullOptions {
            rel_tol: tol,
            max_iter,
            zero_tol: None,
        },
    )
}

pub fn hull_distance_with(
    a: &PointSet,
    b: &PointSet,
    opts: &HullOptions,
) -> Result<HullDistanceResult> {
    if a.is_empty() {
        return Err(Error::EmptySet("hull_distance: first operand"));
    }
    if b.is_empty() {
        return Err(Error::EmptySet("hull_distance: second operand"));
    }
    a.check_dim(b.dim())?;
    if !(opts.rel_tol > 0.0) {
        return Err(Error::Config(
            "hull_distance tolerance must be positive".into(),
        ));
    }
    Ok(Wolfe::new(a, b, opts).run())
}

struct Wolfe<'a> {
    a: &'a PointSet,
    b: &'a PointSet,
    opts: HullOptions,
    zero_tol: f64,
    /// Vertex `(i, j)` stands for `a_i - b_j`.
    corral: Vec<(usize, usize)>,
    vecs: Vec<Vec<f64>>,
    gram: Vec<Vec<f64>>,
    lambda: Vec<f64>,
    x: Vec<f64>,
    lower: f64,
}

impl<'a> Wolfe<'a> {
    fn new(a: &'a PointSet, b: &'a PointSet, opts: &HullOptions) -> Self {
        let scale = a.scale().max(b.scale());
        Self {
            a,
            b,
            opts: *opts,
            zero_tol: opts.zero_tol.unwrap_or(1e-10 * (1.0 + scale)),
            corral: Vec::new(),
            vecs: Vec::new(),
            gram: Vec::new(),
            lambda: Vec::new(),
            x: vec![0.0; a.dim()],
            lower: 0.0,
        }
    }

    fn push(&mut self, i: usize, j: usize) {
        let v: Vec<f64> = self
            .a
            .point(i)
            .iter()
            .zip(self.b.point(j))
            .map(|(p, q)| p - q)
            .collect();
        let row: Vec<f64> = self.vecs.iter().map(|u| dot(u, &v)).collect();
        for (g, r) in self.gram.iter_mut().zip(&row) {
            g.push(*r);
        }
        let mut row = row;
        row.push(dot(&v, &v));
        self.gram.push(row);
        self.vecs.push(v);
        self.corral.push((i, j));
        self.lambda.push(0.0);
    }

    fn remove(&mut self, k: usize) {
        self.corral.remove(k);
        self.vecs.remove(k);
        self.lambda.remove(k);
        self.gram.remove(k);
        for g in &mut self.gram {
            g.remove(k);
        }
    }

    fn update_x(&mut self) {
        self.x.iter_mut().for_each(|v| *v = 0.0);
        for (l, v) in self.lambda.iter().zip(&self.vecs) {
            for (x, c) in self.x.iter_mut().zip(v) {
                *x += l * c;
            }
        }
    }

    /// Weights of the point of minimum norm in the affine hull of the
    /// corral, or `None` when the corral is numerically affinely dependent.
    fn affine_minimizer(&self) -> Option<Vec<f64>> {
        let m = self.corral.len();
        if m == 1 {
            return Some(vec![1.0]);
        }
        let g = &self.gram;
        let n = m - 1;
        // minimize |v0 + sum_k t_k (v_k - v0)|^2 via Cholesky
        let mut mat = vec![0.0; n * n];
        let mut rhs = vec![0.0; n];
        for k in 0..n {
            for l in 0..=k {
                let v = g[k + 1][l + 1] - g[k + 1][0] - g[0][l + 1] + g[0][0];
                mat[k * n + l] = v;
                mat[l * n + k] = v;
            }
            rhs[k] = g[0][0] - g[k + 1][0];
        }
        let max_diag = (0..n).map(|k| mat[k * n + k]).fold(0.0, f64::max);
        let floor = 1e-13 * max_diag;
        for k in 0..n {
            let mut d = mat[k * n + k];
            for p in 0..k {
                d -= mat[k * n + p] * mat[k * n + p];
            }
            if !(d > floor) {
                return None;
            }
            let d = d.sqrt();
            mat[k * n + k] = d;
            for r in (k + 1)..n {
                let mut v = mat[r * n + k];
                for p in 0..k {
                    v -= mat[r * n + p] * mat[k * n + p];
                }
                mat[r * n + k] = v / d;
            }
        }
        for k in 0..n {
            let mut v = rhs[k];
            for p in 0..k {
                v -= mat[k * n + p] * rhs[p];
            }
            rhs[k] = v / mat[k * n + k];
        }
        for k in (0..n).rev() {
            let mut v = rhs[k];
            for p in (k + 1)..n {
                v -= mat[p * n + k] * rhs[p];
            }
            rhs[k] = v / mat[k * n + k];
        }
        let mut mu = Vec::with_capacity(m);
        mu.push(1.0 - rhs.iter().sum::<f64>());
        mu.extend(rhs);
        Some(mu)
    }

    /// Moves to the affine minimizer of the corral, dropping vertices until
    /// it lies inside their convex hull. Returns `false` if the newest
    /// vertex made the corral degenerate (it is then removed again).
    fn minor_cycle(&mut self) -> bool {
        loop {
            let Some(mu) = self.affine_minimizer() else {
                let last = self.corral.len() - 1;
                self.remove(last);
                let s: f64 = self.lambda.iter().sum();
                self.lambda.iter_mut().for_each(|l| *l /= s);
                self.update_x();
                return false;
            };
            if mu.iter().all(|&m| m > 0.0) {
                self.lambda = mu;
                self.update_x();
                return true;
            }
            let mut theta = 1.0;
            let mut drop = 0;
            for (k, (&l, &m)) in self.lambda.iter().zip(&mu).enumerate() {
                if m <= 0.0 {
                    let t = if l - m > 0.0 { l / (l - m) } else { 0.0 };
                    if t < theta {
                        theta = t;
                        drop = k;
                    }
                }
            }
            for (l, m) in self.lambda.iter_mut().zip(&mu) {
                *l = ((1.0 - theta) * *l + theta * m).max(0.0);
            }
            self.lambda[drop] = 0.0;
            for k in (0..self.corral.len()).rev() {
                if self.lambda[k] <= 0.0 {
                    self.remove(k);
                }
            }
            let s: f64 = self.lambda.iter().sum();
            self.lambda.iter_mut().for_each(|l| *l /= s);
            self.update_x();
        }
    }

    fn initialize(&mut self) {
        let (Some(ma), Some(mb)) = (self.a.mean(), self.b.mean()) else {
            unreachable!("operands checked non-empty")
        };
        let dir: Vec<f64> = mb.iter().zip(&ma).map(|(q, p)| q - p).collect();
        let i = argmax(self.a.iter().map(|p| dot(p, &dir)));
        let j = argmin(self.b.iter().map(|p| dot(p, &dir)));
        self.push(i, j);
        self.lambda[0] = 1.0;
        self.update_x();
    }

    fn run(mut self) -> HullDistanceResult {
        self.initialize();
        let mut converged = false;
        let mut iterations = 0;
        while iterations < self.opts.max_iter {
            let xx = dot(&self.x, &self.x);
            if xx.sqrt() <= self.zero_tol {
                converged = true;
                break;
            }
            iterations += 1;
            let ga: Vec<f64> = self.a.iter().map(|p| dot(p, &self.x)).collect();
            let gb: Vec<f64> = self.b.iter().map(|p| dot(p, &self.x)).collect();
            let i = argmin(ga.iter().copied());
            let j = argmax(gb.iter().copied());
            let xq = ga[i] - gb[j];
            self.lower = self.lower.max(xq / xx.sqrt());
            if xx - xq <= self.opts.rel_tol * xx {
                converged = true;
                break;
            }
            let stalled = self.corral.contains(&(i, j)) || {
                self.push(i, j);
                !self.minor_cycle()
            };
            if stalled {
                // no numerically representable progress left
                converged = xx - xq <= self.opts.rel_tol.sqrt() * xx;
                break;
            }
        }
        self.finish(converged, iterations)
    }

    fn finish(self, converged: bool, iterations: usize) -> HullDistanceResult {
        let dim = self.a.dim();
        let mut wa = vec![0.0; dim];
        let mut wb = vec![0.0; dim];
        let mut coeffs_a = vec![0.0; self.a.len()];
        let mut coeffs_b = vec![0.0; self.b.len()];
        for (&(i, j), &l) in self.corral.iter().zip(&self.lambda) {
            coeffs_a[i] += l;
            coeffs_b[j] += l;
        }
        for (i, &c) in coeffs_a.iter().enumerate().filter(|(_, c)| **c > 0.0) {
            for (acc, x) in wa.iter_mut().zip(self.a.point(i)) {
                *acc += c * x;
            }
        }
        for (j, &c) in coeffs_b.iter().enumerate().filter(|(_, c)| **c > 0.0) {
            for (acc, x) in wb.iter_mut().zip(self.b.point(j)) {
                *acc += c * x;
            }
        }
        // exact certificate from the explicit witnesses
        let z: Vec<f64> = wa.iter().zip(&wb).map(|(p, q)| p - q).collect();
        let distance = dot(&z, &z).sqrt();
        let lower_bound = if distance > 0.0 {
            let min_a = self
                .a
                .iter()
                .map(|p| dot(p, &z))
                .fold(f64::INFINITY, f64::min);
            let max_b = self
                .b
                .iter()
                .map(|p| dot(p, &z))
                .fold(f64::NEG_INFINITY, f64::max);
            ((min_a - max_b) / distance)
                .max(self.lower)
                .clamp(0.0, distance)
        } else {
            0.0
        };
        HullDistanceResult {
            distance,
            lower_bound,
            witness_a: wa,
            witness_b: wb,
            coeffs_a,
            coeffs_b,
            converged,
            iterations,
        }
    }
}

fn argmin(it: impl Iterator<Item = f64>) -> usize {
    let mut best = (0, f64::INFINITY);
    for (i, v) in it.enumerate() {
        if v < best.1 {
            best = (i, v);
        }
    }
    best.0
}

fn argmax(it: impl Iterator<Item = f64>) -> usize {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, v) in it.enumerate() {
        if v > best.1 {
            best = (i, v);
        }
    }
    best.0
}
