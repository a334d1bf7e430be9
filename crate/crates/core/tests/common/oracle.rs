//! Independent reference computations for small inputs.
#![allow(dead_code)]

use hullsep::trainer::Mlp;
use hullsep::{ActivationSpec, PointSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Solves `m z = r` by Gaussian elimination with partial pivoting.
/// `None` when a pivot falls below `1e-12` relative to the largest entry.
#[allow(clippy::needless_range_loop)]
fn solve(mut m: Vec<Vec<f64>>, mut r: Vec<f64>) -> Option<Vec<f64>> {
    let n = r.len();
    let scale = m
        .iter()
        .flatten()
        .fold(0.0_f64, |a, v| a.max(v.abs()))
        .max(1e-300);
    for c in 0..n {
        let p = (c..n).max_by(|&a, &b| m[a][c].abs().total_cmp(&m[b][c].abs()))?;
        if m[p][c].abs() <= 1e-12 * scale {
            return None;
        }
        m.swap(c, p);
        r.swap(c, p);
        for row in c + 1..n {
            let f = m[row][c] / m[c][c];
            for k in c..n {
                m[row][k] -= f * m[c][k];
            }
            r[row] -= f * r[c];
        }
    }
    let mut z = vec![0.0; n];
    for c in (0..n).rev() {
        let s: f64 = (c + 1..n).map(|k| m[c][k] * z[k]).sum();
        z[c] = (r[c] - s) / m[c][c];
    }
    Some(z)
}

fn subsets(n: usize, max: usize) -> Vec<Vec<usize>> {
    (1u32..(1 << n))
        .filter(|m| m.count_ones() as usize <= max)
        .map(|m| (0..n).filter(|&i| m & (1 << i) != 0).collect())
        .collect()
}

/// Exact distance between `C(a)` and `C(b)` by enumerating support pairs.
///
/// The nearest pair with the smallest joint support solves an unconstrained
/// least-squares problem on the affine hulls of its supports with positive
/// coefficients, so the minimum over every nonsingular support pair with
/// nonnegative coefficients is the distance. Exponential; keep sets tiny.
pub fn hull_distance_exact(a: &PointSet, b: &PointSet) -> f64 {
    let d = a.dim();
    let mut best = f64::INFINITY;
    for s in subsets(a.len(), d + 1) {
        for t in subsets(b.len(), d + 1) {
            // p - q = r + M z with z = (alpha, beta)
            let a0 = a.point(s[0]);
            let b0 = b.point(t[0]);
            let r: Vec<f64> = (0..d).map(|k| a0[k] - b0[k]).collect();
            let mut cols: Vec<Vec<f64>> = Vec::new();
            for &i in &s[1..] {
                cols.push((0..d).map(|k| a.point(i)[k] - a0[k]).collect());
            }
            for &j in &t[1..] {
                cols.push((0..d).map(|k| b0[k] - b.point(j)[k]).collect());
            }
            let n = cols.len();
            let z = if n == 0 {
                Vec::new()
            } else {
                let gram: Vec<Vec<f64>> = (0..n)
                    .map(|u| (0..n).map(|v| dot(&cols[u], &cols[v])).collect())
                    .collect();
                let rhs: Vec<f64> = (0..n).map(|u| -dot(&cols[u], &r)).collect();
                match solve(gram, rhs) {
                    Some(z) => z,
                    None => continue,
                }
            };
            let (alpha, beta) = z.split_at(s.len() - 1);
            let feasible =
                |c: &[f64]| c.iter().all(|&v| v >= -1e-12) && c.iter().sum::<f64>() <= 1.0 + 1e-12;
            if !feasible(alpha) || !feasible(beta) {
                continue;
            }
            let mut diff = r.clone();
            for (col, zk) in cols.iter().zip(&z) {
                for (dk, ck) in diff.iter_mut().zip(col) {
                    *dk += zk * ck;
                }
            }
            best = best.min(dot(&diff, &diff).sqrt());
        }
    }
    best
}

/// Grid search over convex coefficients with `steps` subdivisions per
/// simplex. Always an upper bound on the hull distance.
pub fn hull_distance_grid(a: &PointSet, b: &PointSet, steps: usize) -> f64 {
    let pa = grid_points(a, steps);
    let pb = grid_points(b, steps);
    let mut best = f64::INFINITY;
    for p in &pa {
        for q in &pb {
            let d2: f64 = p.iter().zip(q).map(|(u, v)| (u - v) * (u - v)).sum();
            best = best.min(d2);
        }
    }
    best.sqrt()
}

fn grid_points(a: &PointSet, steps: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    let mut coeff = vec![0usize; a.len()];
    compositions(&mut coeff, 0, steps, &mut |c| {
        let mut p = vec![0.0; a.dim()];
        for (i, &ci) in c.iter().enumerate() {
            for (pk, ak) in p.iter_mut().zip(a.point(i)) {
                *pk += ci as f64 / steps as f64 * ak;
            }
        }
        out.push(p);
    });
    out
}

fn compositions(c: &mut Vec<usize>, i: usize, left: usize, f: &mut impl FnMut(&[usize])) {
    if i + 1 == c.len() {
        c[i] = left;
        f(c);
        return;
    }
    for v in 0..=left {
        c[i] = v;
        compositions(c, i + 1, left - v, f);
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Mean cross-entropy of `mlp` through its public probability output.
pub fn mean_loss(mlp: &Mlp, x: &PointSet, targets: &[usize]) -> f64 {
    x.iter()
        .zip(targets)
        .map(|(p, &t)| -mlp.predict_proba(p)[t].ln())
        .sum::<f64>()
        / x.len() as f64
}

/// Spearman rank correlation, ties sharing their mean rank.
pub fn spearman(a: &[f64], b: &[f64]) -> f64 {
    let ra = ranks(a);
    let rb = ranks(b);
    let n = a.len() as f64;
    let (ma, mb) = (ra.iter().sum::<f64>() / n, rb.iter().sum::<f64>() / n);
    let cov: f64 = ra.iter().zip(&rb).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = ra.iter().map(|x| (x - ma).powi(2)).sum();
    let vb: f64 = rb.iter().map(|y| (y - mb).powi(2)).sum();
    cov / (va * vb).sqrt()
}

fn ranks(v: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&i, &j| v[i].total_cmp(&v[j]));
    let mut r = vec![0.0; v.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
            j += 1;
        }
        let mean = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            r[k] = mean;
        }
        i = j + 1;
    }
    r
}

/// Relative error, in Euclidean norm, between the analytic gradient and central
/// differences of the loss, over one random 2-3-2-2 network.
pub fn gradient_error(act: &ActivationSpec, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mlp = Mlp::new(2, (3, 2), act.clone(), &mut rng);
    let p: Vec<f64> = (0..mlp.n_params())
        .map(|_| StandardNormal.sample(&mut rng))
        .collect();
    mlp.set_params(&p).unwrap();
    let rows: Vec<[f64; 2]> = (0..6)
        .map(|_| {
            [
                StandardNormal.sample(&mut rng),
                StandardNormal.sample(&mut rng),
            ]
        })
        .collect();
    let x = PointSet::from_rows(&rows).unwrap();
    let t: Vec<usize> = (0..6).map(|_| rng.random_range(0..2)).collect();
    let batch: Vec<usize> = (0..6).collect();
    let (_, g) = mlp.loss_and_gradient(&x, &t, &batch);
    let h = 1e-6;
    let mut num = vec![0.0; p.len()];
    for k in 0..p.len() {
        let mut q = p.clone();
        q[k] = p[k] + h;
        mlp.set_params(&q).unwrap();
        let up = mean_loss(&mlp, &x, &t);
        q[k] = p[k] - h;
        mlp.set_params(&q).unwrap();
        let down = mean_loss(&mlp, &x, &t);
        num[k] = (up - down) / (2.0 * h);
    }
    let diff: f64 = g
        .iter()
        .zip(&num)
        .map(|(a, b)| (a - b).powi(2))
        .sum::<f64>()
        .sqrt();
    let size = g
        .iter()
        .map(|a| a * a)
        .sum::<f64>()
        .sqrt()
        .max(num.iter().map(|a| a * a).sum::<f64>().sqrt());
    diff / size.max(1e-12)
}
