//! A small dense network, input -> h1 -> h2 -> 2-way softmax, trained with
//! plain minibatch SGD on cross-entropy. Used to compare trained networks of
//! various sizes against the constructive bound.

use std::path::Path;

use rand::distr::{Distribution, Uniform};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::activation::ActivationSpec;
use crate::dataio::LabeledDataset;
use crate::error::{Error, Result};
use crate::geometry::{dot, PointSet};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub hidden_sizes: (usize, usize),
    pub activation: ActivationSpec,
    pub epochs: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub seed: u64,
    /// Independent initializations averaged into one result.
    pub runs: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            hidden_sizes: (36, 6),
            activation: ActivationSpec::relu(),
            epochs: 20,
            batch_size: 150,
            learning_rate: 0.05,
            seed: 0,
            runs: 3,
        }
    }
}

impl TrainConfig {
    fn check(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::Config(format!("train: {what}")));
        if self.epochs == 0 || self.batch_size == 0 || self.runs == 0 {
            return bad("epochs, batch_size and runs must be at least 1");
        }
        if self.hidden_sizes.0 == 0 || self.hidden_sizes.1 == 0 {
            return bad("hidden sizes must be at least 1");
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return bad("learning rate must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainResult {
    /// Mean cross-entropy over the dataset after the last epoch, averaged
    /// over runs.
    pub final_loss: f64,
    /// Same quantity after every epoch.
    pub loss_curve: Vec<f64>,
    pub train_accuracy: f64,
    /// Some run produced a non-finite loss.
    pub diverged: bool,
}

/// Fully connected `in -> h1 -> h2 -> 2` network.
#[derive(Debug, Clone)]
pub struct Mlp {
    sizes: [usize; 4],
    w: [Vec<f64>; 3],
    b: [Vec<f64>; 3],
    act: ActivationSpec,
}

struct Scratch {
    z: [Vec<f64>; 3],
    h: [Vec<f64>; 2],
    g: [Vec<f64>; 3],
}

impl Mlp {
    /// Weights uniform in `+-sqrt(6 / (fan_in + fan_out))`, biases zero.
    pub fn new(
        input: usize,
        hidden: (usize, usize),
        act: ActivationSpec,
        rng: &mut ChaCha8Rng,
    ) -> Self {
        let sizes = [input, hidden.0, hidden.1, 2];
        let w = std::array::from_fn(|l| {
            let limit = (6.0 / (sizes[l] + sizes[l + 1]) as f64).sqrt();
            let u = Uniform::new_inclusive(-limit, limit).expect("finite bounds");
            (0..sizes[l] * sizes[l + 1])
                .map(|_| u.sample(rng))
                .collect()
        });
        let b = std::array::from_fn(|l| vec![0.0; sizes[l + 1]]);
        Self { sizes, w, b, act }
    }

    pub fn sizes(&self) -> [usize; 4] {
        self.sizes
    }

    pub fn n_params(&self) -> usize {
        (0..3).map(|l| self.w[l].len() + self.b[l].len()).sum()
    }

    /// Parameters flattened as `W1, b1, W2, b2, W3, b3`, weights row-major
    /// `out x in`.
    pub fn params(&self) -> Vec<f64> {
        (0..3)
            .flat_map(|l| self.w[l].iter().chain(&self.b[l]).copied())
            .collect()
    }

    pub fn set_params(&mut self, p: &[f64]) -> Result<()> {
        if p.len() != self.n_params() {
            return Err(Error::DimensionMismatch {
                expected: self.n_params(),
                got: p.len(),
            });
        }
        let mut it = p.iter().copied();
        for l in 0..3 {
            self.w[l]
                .iter_mut()
                .chain(self.b[l].iter_mut())
                .for_each(|v| *v = it.next().unwrap());
        }
        Ok(())
    }

    fn scratch(&self) -> Scratch {
        let s = self.sizes;
        Scratch {
            z: [vec![0.0; s[1]], vec![0.0; s[2]], vec![0.0; s[3]]],
            h: [vec![0.0; s[1]], vec![0.0; s[2]]],
            g: [vec![0.0; s[1]], vec![0.0; s[2]], vec![0.0; s[3]]],
        }
    }

    fn affine(w: &[f64], b: &[f64], x: &[f64], out: &mut [f64]) {
        let n = x.len();
        for (r, o) in out.iter_mut().enumerate() {
            *o = dot(&w[r * n..(r + 1) * n], x) + b[r];
        }
    }

    fn forward(&self, x: &[f64], s: &mut Scratch) {
        Self::affine(&self.w[0], &self.b[0], x, &mut s.z[0]);
        for (h, z) in s.h[0].iter_mut().zip(&s.z[0]) {
            *h = self.act.eval(*z);
        }
        Self::affine(&self.w[1], &self.b[1], &s.h[0], &mut s.z[1]);
        for (h, z) in s.h[1].iter_mut().zip(&s.z[1]) {
            *h = self.act.eval(*z);
        }
        Self::affine(&self.w[2], &self.b[2], &s.h[1], &mut s.z[2]);
    }

    /// Cross-entropy of the logits in `s` for class `t`.
    fn sample_loss(logits: &[f64], t: usize) -> f64 {
        let m = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lse = m + logits.iter().map(|v| (v - m).exp()).sum::<f64>().ln();
        lse - logits[t]
    }

    /// Class probabilities.
    pub fn predict_proba(&self, x: &[f64]) -> Vec<f64> {
        let mut s = self.scratch();
        self.forward(x, &mut s);
        softmax(&s.z[2])
    }

    /// Mean loss and accuracy over a labeled set.
    pub fn evaluate(&self, x: &PointSet, targets: &[usize]) -> (f64, f64) {
        let mut s = self.scratch();
        let mut loss = 0.0;
        let mut correct = 0usize;
        for (p, &t) in x.iter().zip(targets) {
            self.forward(p, &mut s);
            loss += Self::sample_loss(&s.z[2], t);
            let pred = usize::from(s.z[2][1] > s.z[2][0]);
            correct += usize::from(pred == t);
        }
        let n = x.len().max(1) as f64;
        (loss / n, correct as f64 / n)
    }

    /// Mean loss over the given samples and its gradient with respect to
    /// [`Self::params`].
    pub fn loss_and_gradient(
        &self,
        x: &PointSet,
        targets: &[usize],
        batch: &[usize],
    ) -> (f64, Vec<f64>) {
        let mut grad = vec![0.0; self.n_params()];
        let mut s = self.scratch();
        let mut loss = 0.0;
        for &k in batch {
            loss += self.accumulate(x.point(k), targets[k], &mut s, &mut grad);
        }
        let inv = 1.0 / batch.len().max(1) as f64;
        grad.iter_mut().for_each(|g| *g *= inv);
        (loss * inv, grad)
    }

    /// Backpropagates one sample into `grad` (layout of [`Self::params`]).
    fn accumulate(&self, x: &[f64], t: usize, s: &mut Scratch, grad: &mut [f64]) -> f64 {
        self.forward(x, s);
        let loss = Self::sample_loss(&s.z[2], t);
        let p = softmax(&s.z[2]);
        for (k, g) in s.g[2].iter_mut().enumerate() {
            *g = p[k] - f64::from(u8::from(k == t));
        }
        let offsets = self.offsets();
        for l in (0..3).rev() {
            let input: &[f64] = if l == 0 { x } else { &s.h[l - 1] };
            let (n_in, n_out) = (self.sizes[l], self.sizes[l + 1]);
            let (gw, rest) = grad[offsets[l]..].split_at_mut(n_in * n_out);
            let gb = &mut rest[..n_out];
            for r in 0..n_out {
                let d = s.g[l][r];
                gb[r] += d;
                if d != 0.0 {
                    for (gw, xi) in gw[r * n_in..(r + 1) * n_in].iter_mut().zip(input) {
                        *gw += d * xi;
                    }
                }
            }
            if l > 0 {
                let (lo, hi) = s.g.split_at_mut(l);
                let below = &mut lo[l - 1];
                let up = &hi[0];
                for (c, v) in below.iter_mut().enumerate() {
                    let back: f64 = (0..n_out).map(|r| self.w[l][r * n_in + c] * up[r]).sum();
                    *v = back * self.act.derivative(s.z[l - 1][c]);
                }
            }
        }
        loss
    }

    fn offsets(&self) -> [usize; 3] {
        let mut o = [0; 3];
        for l in 1..3 {
            o[l] = o[l - 1] + self.w[l - 1].len() + self.b[l - 1].len();
        }
        o
    }

    fn sgd_step(&mut self, grad: &[f64], lr: f64) {
        let mut it = grad.iter();
        for l in 0..3 {
            for v in self.w[l].iter_mut().chain(self.b[l].iter_mut()) {
                *v -= lr * it.next().unwrap();
            }
        }
    }
}

/// Softmax of a logit vector.
pub fn softmax(z: &[f64]) -> Vec<f64> {
    let m = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = z.iter().map(|v| (v - m).exp()).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|v| v / s).collect()
}

fn run_seed(base: u64, run: usize) -> u64 {
    base ^ (run as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Trains `cfg.runs` networks on points `x` with class indices `targets`
/// (0 or 1) and averages their loss curves.
pub fn train_points(x: &PointSet, targets: &[usize], cfg: &TrainConfig) -> Result<TrainResult> {
    cfg.check()?;
    if x.is_empty() || targets.len() != x.len() {
        return Err(Error::Config("train: need one target per point".into()));
    }
    if targets.iter().any(|&t| t > 1) {
        return Err(Error::Config("train: targets must be 0 or 1".into()));
    }
    let mut curve = vec![0.0; cfg.epochs];
    let mut accuracy = 0.0;
    let mut diverged = false;
    for run in 0..cfg.runs {
        let mut rng = ChaCha8Rng::seed_from_u64(run_seed(cfg.seed, run));
        let mut net = Mlp::new(x.dim(), cfg.hidden_sizes, cfg.activation.clone(), &mut rng);
        let mut order: Vec<usize> = (0..x.len()).collect();
        let mut acc = 0.0;
        for c in curve.iter_mut() {
            order.shuffle(&mut rng);
            for batch in order.chunks(cfg.batch_size) {
                let (_, g) = net.loss_and_gradient(x, targets, batch);
                net.sgd_step(&g, cfg.learning_rate);
            }
            let (loss, a) = net.evaluate(x, targets);
            diverged |= !loss.is_finite();
            *c += loss / cfg.runs as f64;
            acc = a;
        }
        accuracy += acc / cfg.runs as f64;
    }
    Ok(TrainResult {
        final_loss: *curve.last().expect("epochs >= 1"),
        loss_curve: curve,
        train_accuracy: accuracy,
        diverged,
    })
}

/// Trains on a dataset with exactly two labels; the first label in
/// `label_universe` is class 0.
pub fn train(d: &LabeledDataset, cfg: &TrainConfig) -> Result<TrainResult> {
    let (x, targets) = binary_targets(d)?;
    train_points(&x, &targets, cfg)
}

fn binary_targets(d: &LabeledDataset) -> Result<(PointSet, Vec<usize>)> {
    if d.label_universe.len() != 2 {
        return Err(Error::Config(format!(
            "train: need exactly 2 labels, found {}",
            d.label_universe.len()
        )));
    }
    let first = &d.label_universe[0];
    let t = d.labels.iter().map(|l| usize::from(l != first)).collect();
    Ok((d.points.clone(), t))
}

/// One cell of a size sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub h1: usize,
    pub h2: usize,
    pub activation: String,
    pub final_loss: f64,
    pub accuracy: f64,
    pub runs: usize,
    pub epochs: usize,
    #[serde(skip)]
    pub error: Option<String>,
}

/// Every size crossed with every activation, `cfg` supplying the rest. A
/// failing cell is reported in its row and does not stop the sweep.
pub fn size_sweep(
    d: &LabeledDataset,
    sizes: &[(usize, usize)],
    activations: &[ActivationSpec],
    cfg: &TrainConfig,
) -> Result<Vec<SweepRow>> {
    if sizes.is_empty() || activations.is_empty() {
        return Err(Error::Config(
            "size_sweep: empty size or activation list".into(),
        ));
    }
    let (x, targets) = binary_targets(d)?;
    let cells: Vec<((usize, usize), &ActivationSpec)> = sizes
        .iter()
        .flat_map(|&s| activations.iter().map(move |a| (s, a)))
        .collect();
    Ok(cells
        .par_iter()
        .map(|&(size, a)| {
            let cell = TrainConfig {
                hidden_sizes: size,
                activation: a.clone(),
                ..cfg.clone()
            };
            let r = train_points(&x, &targets, &cell);
            SweepRow {
                h1: size.0,
                h2: size.1,
                activation: a.name(),
                final_loss: r.as_ref().map_or(f64::NAN, |r| r.final_loss),
                accuracy: r.as_ref().map_or(f64::NAN, |r| r.train_accuracy),
                runs: cfg.runs,
                epochs: cfg.epochs,
                error: r.err().map(|e| e.to_string()),
            }
        })
        .collect())
}

pub fn write_sweep_csv(rows: &[SweepRow], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::Format {
        path: path.display().to_string(),
        reason: e.to_string(),
    })?;
    for r in rows {
        w.serialize(r).map_err(|e| Error::Format {
            path: path.display().to_string(),
            reason: e.to_string(),
        })?;
    }
    w.flush()?;
    Ok(())
}
