//! Explicit construction of a two-hidden-layer network that linearly
//! separates two classes, given a disjoint convex hull decomposition.
//!
//! Layer 1 has one node per pair `(i, j)` of parts: a max-margin classifier
//! of `parts_1[i]` against `parts_2[j]`, rescaled and shifted so that the
//! first part tops out exactly at the certificate threshold `x0` and the
//! second starts at least `delta` above it. After the activation, every
//! block of `L2` coordinates puts `parts_1[i]` inside a small cube that no
//! class-2 image reaches.
//!
//! Layer 2 repeats the trick on the images with the roles swapped: one node
//! per class-1 part, separating all class-2 images (cube side) from that
//! part. The output plane then sums the `L1` coordinates.
//!
//! Leaky ReLU is positively homogeneous, so its certificate cannot be bought
//! by scaling. Its layers are calibrated at `x0 = 0, delta = 1` and the
//! certificate is evaluated on the resulting pre-activation diameter. When
//! that certificate does not hold, the construction still proceeds and
//! every claim is checked directly on the images.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::activation::{ActivationSpec, MarginCertificate};
use crate::config::Tolerances;
use crate::decomposition::{Decomposition, PartAssignment, ValidationReport};
use crate::error::{Error, Result};
use crate::geometry::{
    diameter, dot, hull_distance_with, max_margin_separator_with, norm, PointSet, SeparatorPlane,
};

pub const SCHEMA_VERSION: u32 = 1;

/// Affine map `x -> W x + b`, weights stored row by row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerAffine {
    pub weights: Vec<Vec<f64>>,
    pub biases: Vec<f64>,
}

impl LayerAffine {
    pub fn from_planes(planes: &[SeparatorPlane]) -> Self {
        Self {
            weights: planes.iter().map(|p| p.w.clone()).collect(),
            biases: planes.iter().map(|p| p.b).collect(),
        }
    }

    pub fn out_dim(&self) -> usize {
        self.biases.len()
    }

    pub fn in_dim(&self) -> usize {
        self.weights.first().map_or(0, Vec::len)
    }

    pub fn row(&self, r: usize) -> SeparatorPlane {
        SeparatorPlane {
            w: self.weights[r].clone(),
            b: self.biases[r],
            margin: 0.0,
        }
    }

    pub fn pre_activation(&self, x: &[f64], out: &mut [f64]) {
        for ((o, w), b) in out.iter_mut().zip(&self.weights).zip(&self.biases) {
            *o = dot(w, x) + b;
        }
    }

    pub fn pre_activations(&self, set: &PointSet) -> Result<PointSet> {
        set.check_dim(self.in_dim())?;
        let m = self.out_dim();
        let mut data = vec![0.0; set.len() * m];
        data.par_chunks_mut(m.max(1))
            .zip(set.as_flat().par_chunks(set.dim().max(1)))
            .for_each(|(out, x)| self.pre_activation(x, out));
        PointSet::from_flat(m, data)
    }

    fn check(&self) -> Result<()> {
        let n = self.in_dim();
        if self.weights.len() != self.biases.len()
            || self.weights.iter().any(|w| w.len() != n)
            || self
                .weights
                .iter()
                .flatten()
                .chain(&self.biases)
                .any(|v| !v.is_finite())
        {
            return Err(Error::Config("malformed layer".into()));
        }
        Ok(())
    }
}

/// `f(W x + b)` for every point.
pub fn forward_images(layer: &LayerAffine, a: &ActivationSpec, x: &PointSet) -> Result<PointSet> {
    let z = layer.pre_activations(x)?;
    let dim = z.dim();
    let mut data = z.into_flat();
    a.apply(&mut data);
    PointSet::from_flat(dim, data)
}

/// Rescales and shifts `p` so that its maximum over `a` is exactly `x0` and
/// its minimum over `b` is at least `x0 + delta`.
pub fn calibrate_plane(
    p: &SeparatorPlane,
    a: &PointSet,
    b: &PointSet,
    x0: f64,
    delta: f64,
) -> Result<SeparatorPlane> {
    if !(delta > 0.0) {
        return Err(Error::Config(format!(
            "calibration delta must be positive, got {delta}"
        )));
    }
    let (hi_a, lo_b) = bounds(p, a, b);
    let gap = lo_b - hi_a;
    if !(gap > 0.0) {
        return Err(Error::NotSeparated {
            distance: gap.max(0.0),
            tol: 0.0,
        });
    }
    let s = delta / gap;
    let mut q = SeparatorPlane {
        w: p.w.iter().map(|w| w * s).collect(),
        b: s * (p.b - hi_a) + x0,
        margin: 0.0,
    };
    // absorb rounding so the two conditions hold under direct evaluation
    for _ in 0..4 {
        let (hi, _) = bounds(&q, a, b);
        q.b += x0 - hi;
        let (_, lo) = bounds(&q, a, b);
        if lo - x0 >= delta {
            break;
        }
        let k = delta / (lo - x0);
        q.w.iter_mut().for_each(|w| *w *= k);
        q.b = k * q.b + x0 * (1.0 - k);
    }
    let (hi, lo) = bounds(&q, a, b);
    q.margin = (lo - hi) / norm(&q.w);
    Ok(q)
}

fn bounds(p: &SeparatorPlane, a: &PointSet, b: &PointSet) -> (f64, f64) {
    let hi = a
        .iter()
        .map(|x| p.eval(x))
        .fold(f64::NEG_INFINITY, f64::max);
    let lo = b.iter().map(|x| p.eval(x)).fold(f64::INFINITY, f64::min);
    (hi, lo)
}

fn scale_tol(tol: &Tolerances, sets: &[&PointSet]) -> f64 {
    tol.separation_tol(sets.iter().map(|s| s.scale()).fold(0.0, f64::max))
}

/// One node per pair of parts, row `i * L2 + j` separating `parts_1[i]`
/// from `parts_2[j]`.
pub fn build_first_layer(
    d: &Decomposition,
    cert: &MarginCertificate,
    tol: &Tolerances,
) -> Result<LayerAffine> {
    build_first_layer_reusing(d, cert, tol, None)
}

/// As [`build_first_layer`], taking the max-margin directions from the
/// witnesses of an earlier validation of the same decomposition.
pub fn build_first_layer_reusing(
    d: &Decomposition,
    cert: &MarginCertificate,
    tol: &Tolerances,
    validation: Option<&ValidationReport>,
) -> Result<LayerAffine> {
    let (l1, l2) = (d.l1(), d.l2());
    if l1 == 0 || l2 == 0 {
        return Err(Error::ZeroParts);
    }
    if let Some(v) = validation {
        if v.pairs.len() != l1 * l2 {
            return Err(Error::Config(
                "validation report does not match the decomposition".into(),
            ));
        }
    }
    let opts = tol.hull_options();
    let planes: Vec<SeparatorPlane> = (0..l1 * l2)
        .into_par_iter()
        .map(|k| {
            let (i, j) = (k / l2, k % l2);
            let a = &d.parts_1[i].points;
            let b = &d.parts_2[j].points;
            let t = scale_tol(tol, &[a, b]);
            let invalid = || Error::InvalidDecomposition {
                part_1: i,
                part_2: j,
            };
            let raw = match validation.map(|v| &v.pairs[k].result) {
                Some(hd) => SeparatorPlane::from_witnesses(a, b, &hd.witness_a, &hd.witness_b, t),
                None => max_margin_separator_with(a, b, t, &opts).map(|(p, _)| p),
            }
            .map_err(|_| invalid())?;
            calibrate_plane(&raw, a, b, cert.x0, cert.delta).map_err(|_| invalid())
        })
        .collect::<Result<_>>()?;
    Ok(LayerAffine::from_planes(&planes))
}

/// One node per class-1 part, row `i` separating all of `z2` (placed at or
/// below `x0`) from `z1_parts[i]`.
pub fn build_second_layer(
    z1_parts: &[PointSet],
    z2: &PointSet,
    cert: &MarginCertificate,
    tol: &Tolerances,
) -> Result<LayerAffine> {
    if z1_parts.is_empty() {
        return Err(Error::ZeroParts);
    }
    let opts = tol.hull_options();
    let planes: Vec<SeparatorPlane> = z1_parts
        .par_iter()
        .enumerate()
        .map(|(i, zi)| {
            let t = scale_tol(tol, &[zi, z2]);
            let fail = |e: Error| Error::Construction {
                layer: 2,
                reason: format!("class-2 images not separable from class-1 part {i}: {e}"),
            };
            let (raw, _) = max_margin_separator_with(z2, zi, t, &opts).map_err(fail)?;
            calibrate_plane(&raw, z2, zi, cert.x0, cert.delta).map_err(fail)
        })
        .collect::<Result<_>>()?;
    Ok(LayerAffine::from_planes(&planes))
}

/// Output functional, positive on class 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputPlane {
    pub plane: SeparatorPlane,
    /// `true` for the certificate's coordinate-sum plane, `false` when the
    /// max-margin plane on the final images had to be used instead.
    pub analytic: bool,
}

/// Coordinate-sum plane at the certificate's block threshold, or the
/// max-margin plane of the final images if the former misclassifies.
pub fn output_plane(
    zf1: &PointSet,
    zf2: &PointSet,
    cert: &MarginCertificate,
    tol: &Tolerances,
) -> Result<OutputPlane> {
    zf1.check_dim(zf2.dim())?;
    let n = zf1.dim();
    let w = vec![1.0; n];
    let plane = SeparatorPlane {
        b: -cert.block_threshold(),
        margin: 0.0,
        w,
    };
    let (hi, lo) = bounds(&plane, zf2, zf1);
    if hi < 0.0 && lo > 0.0 {
        let margin = lo.min(-hi) / (n as f64).sqrt();
        return Ok(OutputPlane {
            plane: SeparatorPlane { margin, ..plane },
            analytic: true,
        });
    }
    let t = scale_tol(tol, &[zf1, zf2]);
    let (plane, _) = max_margin_separator_with(zf2, zf1, t, &tol.hull_options()).map_err(|e| {
        Error::Construction {
            layer: 3,
            reason: format!("final images not linearly separable: {e}"),
        }
    })?;
    Ok(OutputPlane {
        plane,
        analytic: false,
    })
}

/// One hidden layer together with the certificate it was built against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertifiedLayer {
    pub layer: LayerAffine,
    pub cert: MarginCertificate,
    /// Whether the certificate's ratio condition holds. Always true for
    /// asymptotic kinds; for leaky kinds it depends on the data.
    pub certified: bool,
}

/// Solves the layer certificate and builds the layer with it. Kinds without
/// a left asymptote are calibrated at `x0 = 0` first, then certified on the
/// diameter of the pre-activations of `inputs`.
fn certified_layer<F>(
    a: &ActivationSpec,
    parts: usize,
    inputs: &PointSet,
    tol: &Tolerances,
    build: F,
) -> Result<CertifiedLayer>
where
    F: FnOnce(&MarginCertificate) -> Result<LayerAffine>,
{
    if a.left_asymptote().is_some() {
        let delta = a.construction_delta(parts, tol.slack, None, 0.0)?;
        let cert = a.solve_x0(delta, parts, tol.slack, None, tol.x0_ratio_tol)?;
        let layer = build(&cert)?;
        return Ok(CertifiedLayer {
            layer,
            cert,
            certified: true,
        });
    }
    let (c1, c2) = a.leaky_slopes().ok_or(Error::WrongActivationKind {
        expected: "asymptotic or leaky",
        got: a.name(),
    })?;
    let delta = a.unit_delta().max(f64::MIN_POSITIVE);
    let probe = MarginCertificate {
        x0: 0.0,
        delta,
        epsilon: 0.0,
        parts,
        ratio: 0.0,
        low: 0.0,
        high: c2 * delta,
        floor: 0.0,
        diameter: None,
    };
    let layer = build(&probe)?;
    let d = diameter(&layer.pre_activations(inputs)?)?;
    match a.solve_x0(delta, parts, tol.slack, Some(d), tol.x0_ratio_tol) {
        Ok(cert) => Ok(CertifiedLayer {
            layer,
            cert,
            certified: true,
        }),
        Err(Error::DeltaTooSmall { .. }) => {
            let epsilon = c1 * d;
            let high = c2 * delta;
            Ok(CertifiedLayer {
                layer,
                cert: MarginCertificate {
                    x0: 0.0,
                    delta,
                    epsilon,
                    parts,
                    ratio: epsilon / (high + epsilon),
                    low: 0.0,
                    high,
                    floor: -epsilon,
                    diameter: Some(d),
                },
                certified: false,
            })
        }
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConstructedNetwork {
    pub schema_version: u32,
    pub activation: ActivationSpec,
    pub input_dim: usize,
    /// Class names `(class 1, class 2)`, when known.
    #[serde(default)]
    pub labels: Option<(String, String)>,
    /// `L1 * L2` nodes.
    pub layer1: CertifiedLayer,
    /// `L1` nodes.
    pub layer2: CertifiedLayer,
    pub output: OutputPlane,
    pub decomposition: PartAssignment,
}

impl ConstructedNetwork {
    pub fn hidden_sizes(&self) -> (usize, usize) {
        (self.layer1.layer.out_dim(), self.layer2.layer.out_dim())
    }

    /// Images of `x` after both hidden layers.
    pub fn final_images(&self, x: &PointSet) -> Result<PointSet> {
        let z = forward_images(&self.layer1.layer, &self.activation, x)?;
        forward_images(&self.layer2.layer, &self.activation, &z)
    }

    /// Output functional on each point; positive means class 1.
    pub fn scores(&self, x: &PointSet) -> Result<Vec<f64>> {
        Ok(self
            .final_images(x)?
            .iter()
            .map(|z| self.output.plane.eval(z))
            .collect())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let net: Self = serde_json::from_str(s)?;
        if net.schema_version != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "unsupported network schema_version {} (expected {SCHEMA_VERSION})",
                net.schema_version
            )));
        }
        net.layer1.layer.check()?;
        net.layer2.layer.check()?;
        if net.layer1.layer.in_dim() != net.input_dim
            || net.layer2.layer.in_dim() != net.layer1.layer.out_dim()
            || net.output.plane.w.len() != net.layer2.layer.out_dim()
        {
            return Err(Error::Config("layer dimensions do not chain".into()));
        }
        Ok(net)
    }
}

/// Builds the full network for classes `x` and `y` with decomposition `d`.
pub fn construct(
    x: &PointSet,
    y: &PointSet,
    d: &Decomposition,
    a: &ActivationSpec,
    tol: &Tolerances,
) -> Result<ConstructedNetwork> {
    construct_reusing(x, y, d, a, tol, None)
}

/// As [`construct`], reusing the pair witnesses of an earlier
/// [`crate::decomposition::validate_decomposition`] call on `d`.
pub fn construct_reusing(
    x: &PointSet,
    y: &PointSet,
    d: &Decomposition,
    a: &ActivationSpec,
    tol: &Tolerances,
    validation: Option<&ValidationReport>,
) -> Result<ConstructedNetwork> {
    x.check_dim(y.dim())?;
    let both = x.concat(y)?;
    let layer1 = certified_layer(a, d.l2(), &both, tol, |cert| {
        build_first_layer_reusing(d, cert, tol, validation)
    })?;

    let z1 = forward_images(&layer1.layer, a, x)?;
    let z2 = forward_images(&layer1.layer, a, y)?;
    let z1_parts: Vec<PointSet> = d.parts_1.iter().map(|p| z1.select(&p.indices)).collect();
    let z_both = z1.concat(&z2)?;
    let layer2 = certified_layer(a, d.l1(), &z_both, tol, |cert| {
        build_second_layer(&z1_parts, &z2, cert, tol)
    })?;

    let zf1 = forward_images(&layer2.layer, a, &z1)?;
    let zf2 = forward_images(&layer2.layer, a, &z2)?;
    let output = output_plane(&zf1, &zf2, &layer2.cert, tol)?;

    Ok(ConstructedNetwork {
        schema_version: SCHEMA_VERSION,
        activation: a.clone(),
        input_dim: x.dim(),
        labels: None,
        layer1,
        layer2,
        output,
        decomposition: d.assignment(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparationReport {
    pub all_correct: bool,
    /// Misclassified points: indices into `x`, then `x.len() + j` for `y`.
    pub misclassified: Vec<usize>,
    /// Hull distance between the final images of the two classes.
    pub final_hull_distance: f64,
    /// Smallest output value on class 1 minus largest on class 2, over `|w|`.
    pub output_margin: f64,
    pub epsilon_1: f64,
    pub epsilon_2: f64,
    pub delta_used_1: f64,
    pub delta_used_2: f64,
    pub certified: bool,
    pub analytic_output: bool,
}

/// Forward-maps every point and checks the sign of the output plane.
pub fn verify_separation(
    net: &ConstructedNetwork,
    x: &PointSet,
    y: &PointSet,
) -> Result<SeparationReport> {
    for set in [x, y] {
        if set.dim() != net.input_dim {
            return Err(Error::DimensionMismatch {
                expected: net.input_dim,
                got: set.dim(),
            });
        }
    }
    let zf1 = net.final_images(x)?;
    let zf2 = net.final_images(y)?;
    let plane = &net.output.plane;
    let s1: Vec<f64> = zf1.iter().map(|z| plane.eval(z)).collect();
    let s2: Vec<f64> = zf2.iter().map(|z| plane.eval(z)).collect();
    let misclassified: Vec<usize> = s1
        .iter()
        .enumerate()
        .filter(|(_, s)| !(**s > 0.0))
        .map(|(i, _)| i)
        .chain(
            s2.iter()
                .enumerate()
                .filter(|(_, s)| !(**s < 0.0))
                .map(|(j, _)| x.len() + j),
        )
        .collect();
    let lo = s1.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = s2.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let w_norm = norm(&plane.w);
    let output_margin = if w_norm > 0.0 {
        (lo - hi) / w_norm
    } else {
        0.0
    };
    let final_hull_distance = if zf1.is_empty() || zf2.is_empty() {
        f64::INFINITY
    } else {
        hull_distance_with(&zf1, &zf2, &Tolerances::default().hull_options())?.distance
    };
    Ok(SeparationReport {
        all_correct: misclassified.is_empty(),
        misclassified,
        final_hull_distance,
        output_margin,
        epsilon_1: net.layer1.cert.epsilon,
        epsilon_2: net.layer2.cert.epsilon,
        delta_used_1: net.layer1.cert.delta,
        delta_used_2: net.layer2.cert.delta,
        certified: net.layer1.certified && net.layer2.certified,
        analytic_output: net.output.analytic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::{estimate_decomposition, validate_decomposition};

    fn set(rows: &[&[f64]]) -> PointSet {
        PointSet::from_rows(rows).unwrap()
    }

    fn xor() -> (PointSet, PointSet) {
        (
            set(&[&[0.0, 0.0], &[1.0, 1.0]]),
            set(&[&[0.0, 1.0], &[1.0, 0.0]]),
        )
    }

    fn plane(w: &[f64], b: f64) -> SeparatorPlane {
        SeparatorPlane {
            w: w.to_vec(),
            b,
            margin: 0.0,
        }
    }

    #[test]
    fn calibrate_two_points() {
        let a = set(&[&[0.0, 0.0]]);
        let b = set(&[&[2.0, 0.0]]);
        let q = calibrate_plane(&plane(&[1.0, 0.0], -1.0), &a, &b, 0.0, 1.0).unwrap();
        assert!((q.w[0] - 0.5).abs() < 1e-15 && q.w[1] == 0.0);
        assert!(q.b.abs() < 1e-15);
    }

    #[test]
    fn calibrate_shifted_threshold() {
        let a = set(&[&[0.0, 0.0], &[0.0, 1.0]]);
        let b = set(&[&[3.0, 0.0]]);
        let q = calibrate_plane(&plane(&[1.0, 0.0], -1.5), &a, &b, -2.0, 4.0).unwrap();
        // s = 4 / 3, t chosen so that both points of a sit at -2
        assert!((q.w[0] - 4.0 / 3.0).abs() < 1e-12);
        assert!((q.eval(&[0.0, 0.5]) + 2.0).abs() < 1e-12);
        assert!(q.eval(&[3.0, 0.0]) >= 2.0 - 1e-12);
    }

    #[test]
    fn calibrate_identity() {
        let a = set(&[&[0.0], &[-1.0]]);
        let b = set(&[&[1.0], &[5.0]]);
        let q = calibrate_plane(&plane(&[1.0], 0.0), &a, &b, 0.0, 1.0).unwrap();
        assert!((q.w[0] - 1.0).abs() < 1e-12 && q.b.abs() < 1e-12);
    }

    #[test]
    fn calibrate_rejects_non_separating_plane() {
        let a = set(&[&[0.0], &[2.0]]);
        let b = set(&[&[1.0]]);
        assert!(calibrate_plane(&plane(&[1.0], 0.0), &a, &b, 0.0, 1.0).is_err());
    }

    #[test]
    fn forward_examples() {
        let layer = LayerAffine {
            weights: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            biases: vec![-1.0, 0.0],
        };
        let z = forward_images(&layer, &ActivationSpec::relu(), &set(&[&[0.0, 2.0]])).unwrap();
        assert_eq!(z.point(0), &[0.0, 2.0]);
        let z = forward_images(&layer, &ActivationSpec::sigmoid(), &set(&[&[1.0, 0.0]])).unwrap();
        assert_eq!(z.point(0), &[0.5, 0.5]);
        let z = forward_images(&layer, &ActivationSpec::tanh(), &PointSet::empty(2)).unwrap();
        assert!(z.is_empty() && z.dim() == 2);
    }

    #[test]
    fn xor_all_activations() {
        let (x, y) = xor();
        let d = Decomposition::singletons(&x, &y);
        for a in ActivationSpec::standard() {
            let net = construct(&x, &y, &d, &a, &Tolerances::default()).unwrap();
            assert_eq!(net.hidden_sizes(), (4, 2));
            let r = verify_separation(&net, &x, &y).unwrap();
            assert!(r.all_correct, "{a}: {r:?}");
            assert!(r.final_hull_distance > 0.0);
        }
    }

    #[test]
    fn xor_first_layer_constraints() {
        let (x, y) = xor();
        let d = Decomposition::singletons(&x, &y);
        let a = ActivationSpec::sigmoid();
        let net = construct(&x, &y, &d, &a, &Tolerances::default()).unwrap();
        let c = &net.layer1.cert;
        for i in 0..2 {
            for j in 0..2 {
                let row = net.layer1.layer.row(i * 2 + j);
                assert!((row.eval(x.point(i)) - c.x0).abs() < 1e-9);
                assert!(row.eval(y.point(j)) >= c.x0 + c.delta - 1e-9);
            }
        }
    }

    #[test]
    fn relu_second_layer_sees_zero_images() {
        let (x, y) = xor();
        let d = Decomposition::singletons(&x, &y);
        let net = construct(&x, &y, &d, &ActivationSpec::relu(), &Tolerances::default()).unwrap();
        let zf2 = net.final_images(&y).unwrap();
        assert!(zf2.as_flat().iter().all(|&v| v == 0.0));
        assert!(net.output.analytic);
    }

    #[test]
    fn separable_blobs_degenerate() {
        let x = set(&[&[0.0, 0.0], &[0.3, 0.1], &[0.1, 0.5]]);
        let y = set(&[&[2.0, 2.0], &[2.5, 1.5]]);
        let d = estimate_decomposition(&x, &y, 50, 0).unwrap();
        let v = validate_decomposition(&d, 1e-9).unwrap();
        for a in ActivationSpec::standard() {
            let net = construct_reusing(&x, &y, &d, &a, &Tolerances::default(), Some(&v)).unwrap();
            assert_eq!(net.hidden_sizes(), (1, 1));
            assert!(verify_separation(&net, &x, &y).unwrap().all_correct);
        }
    }

    #[test]
    fn sabotaged_layer_two_misclassifies_a_whole_class() {
        let (x, y) = xor();
        let d = Decomposition::singletons(&x, &y);
        let mut net =
            construct(&x, &y, &d, &ActivationSpec::tanh(), &Tolerances::default()).unwrap();
        net.layer2
            .layer
            .weights
            .iter_mut()
            .flatten()
            .for_each(|w| *w = 0.0);
        let r = verify_separation(&net, &x, &y).unwrap();
        assert!(!r.all_correct);
        assert!(r.misclassified == vec![0, 1] || r.misclassified == vec![2, 3]);
    }

    #[test]
    fn json_round_trip() {
        let (x, y) = xor();
        let d = Decomposition::singletons(&x, &y);
        let net = construct(
            &x,
            &y,
            &d,
            &ActivationSpec::parse("leaky_relu").unwrap(),
            &Tolerances::default(),
        )
        .unwrap();
        let back = ConstructedNetwork::from_json(&net.to_json().unwrap()).unwrap();
        assert_eq!(back.layer1, net.layer1);
        assert_eq!(back.layer2, net.layer2);
        assert_eq!(back.output, net.output);
        assert_eq!(back.activation, net.activation);
        assert!(verify_separation(&back, &x, &y).unwrap().all_correct);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let (x, y) = xor();
        let net = construct(
            &x,
            &y,
            &Decomposition::singletons(&x, &y),
            &ActivationSpec::relu(),
            &Tolerances::default(),
        )
        .unwrap();
        let z = set(&[&[0.0, 0.0, 0.0]]);
        assert!(verify_separation(&net, &z, &y).is_err());
    }
}
