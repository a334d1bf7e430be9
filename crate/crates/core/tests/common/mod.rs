//! Random two-class datasets shared by the integration suites.
#![allow(dead_code)]

pub mod oracle;

use hullsep::PointSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    Blobs,
    NoisyXor,
    Rings,
    Checker,
}

pub const SHAPES: [Shape; 4] = [Shape::Blobs, Shape::NoisyXor, Shape::Rings, Shape::Checker];

pub struct Case {
    pub shape: Shape,
    pub dim: usize,
    pub x: PointSet,
    pub y: PointSet,
}

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(rng)
}

/// One labeled point for `shape`; `true` means class 1.
fn draw(shape: Shape, dim: usize, rng: &mut ChaCha8Rng) -> (Vec<f64>, bool) {
    let mut p: Vec<f64> = (0..dim).map(|_| 0.1 * normal(rng)).collect();
    let label = match shape {
        Shape::Blobs => {
            let c = rng.random_bool(0.5);
            p[0] += if c { -1.5 } else { 1.5 };
            c
        }
        Shape::NoisyXor => {
            let (a, b) = (rng.random_bool(0.5), rng.random_bool(0.5));
            p[0] += if a { 1.0 } else { -1.0 };
            p[1] += if b { 1.0 } else { -1.0 };
            a == b
        }
        Shape::Rings => {
            let ring = rng.random_range(0..4usize);
            let t = rng.random_range(0.0..std::f64::consts::TAU);
            let r = 1.0 + ring as f64;
            p[0] += r * t.cos();
            p[1] += r * t.sin();
            ring % 2 == 0
        }
        Shape::Checker => {
            for v in p.iter_mut().take(2) {
                *v = rng.random_range(-2.0..2.0);
            }
            (p[0].floor() + p[1].floor()) as i64 % 2 == 0
        }
    };
    (p, label)
}

/// `n1` and `n2` points of the two classes. Checker labels depend only on
/// the cell, so the classes stay disjoint.
pub fn dataset(shape: Shape, dim: usize, n1: usize, n2: usize, seed: u64) -> Case {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = PointSet::empty(dim);
    let mut y = PointSet::empty(dim);
    while x.len() < n1 || y.len() < n2 {
        let (p, c) = draw(shape, dim, &mut rng);
        if c && x.len() < n1 {
            x.push(&p).unwrap();
        } else if !c && y.len() < n2 {
            y.push(&p).unwrap();
        }
    }
    Case { shape, dim, x, y }
}

/// The `k`-th case of a reproducible suite: dims 2-10, 10-200 points per
/// class, shapes cycling so that every fourth case is convexly inseparable
/// in the XOR sense and every fourth is interleaved rings.
pub fn suite_case(k: usize, seed: u64) -> Case {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let shape = SHAPES[k % SHAPES.len()];
    let dim = rng.random_range(2..=10);
    let n1 = rng.random_range(10..=200);
    let n2 = rng.random_range(10..=200);
    dataset(shape, dim, n1, n2, rng.random())
}
