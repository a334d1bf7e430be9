//! Activation functions and the margin analysis that decides how far apart
//! two classes must be, after an affine map, for one layer of a given
//! activation to make them separable.
//!
//! Each activation is a trait object registered by name in an
//! [`ActivationRegistry`]; [`ActivationSpec`] is the shareable handle the
//! rest of the crate passes around. Names accepted by the default registry:
//! `sigmoid`, `tanh`, `relu`, `leaky_relu` and `leaky_relu:<c1>:<c2>`.
//!
//! For kinds with a left asymptote `c`, everything is phrased in terms of
//! `f(x) - c` so that tanh is handled by the same code as the sigmoid.

mod kinds;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub use kinds::{LeakyRelu, Relu, Sigmoid, Tanh};

/// A non-decreasing activation function.
pub trait Activation: Send + Sync + fmt::Debug {
    /// Canonical name; parsing it through the registry yields an equal
    /// activation.
    fn name(&self) -> String;

    fn eval(&self, x: f64) -> f64;

    fn derivative(&self, x: f64) -> f64;

    /// `lim f(x)` as `x -> -inf`, if finite.
    fn left_asymptote(&self) -> Option<f64>;

    /// `(c1, c2)` for piecewise-linear leaky kinds.
    fn leaky_slopes(&self) -> Option<(f64, f64)> {
        None
    }

    /// `f(x) - c` for asymptotic kinds. Override when a more accurate form
    /// exists in the left tail.
    fn shifted(&self, x: f64) -> f64 {
        self.eval(x) - self.left_asymptote().unwrap_or(0.0)
    }

    /// Smallest delta whose limiting (infimum) ratio equals `ratio`.
    fn limit_delta(&self, ratio: f64, diameter: Option<f64>) -> Result<f64>;

    /// Delta used when the analysis imposes no positive minimum. Only
    /// meaningful for positively homogeneous kinds, where scale is free.
    fn unit_delta(&self) -> f64 {
        0.0
    }

    /// Lower end of the x0 search bracket.
    fn x0_floor(&self) -> f64 {
        -700.0
    }

    /// Finds a threshold `x0` with `(f(x0) - c) / (f(x0 + delta) - c)` at most
    /// `(1 - slack) / parts`. The default bisects on x0, which is valid for
    /// any kind whose shifted ratio increases with x0.
    fn solve_x0(
        &self,
        delta: f64,
        parts: usize,
        slack: f64,
        diameter: Option<f64>,
        ratio_tol: f64,
    ) -> Result<MarginCertificate> {
        if parts == 0 {
            return Err(Error::ZeroParts);
        }
        let c = self.left_asymptote().ok_or(Error::WrongActivationKind {
            expected: "asymptotic",
            got: self.name(),
        })?;
        let min_delta = self.limit_delta(1.0 / parts as f64, diameter)?;
        let target = (1.0 - slack) / parts as f64;
        let ratio = |x0: f64| ratio_of(self.shifted(x0), self.shifted(x0 + delta));
        let too_small = || Error::DeltaTooSmall {
            activation: self.name(),
            delta,
            min_delta,
            parts,
        };
        let mut lo = self.x0_floor();
        if !(delta > min_delta) || !(ratio(lo) <= target) {
            return Err(too_small());
        }
        let mut hi = 0.0;
        while ratio(hi) <= target {
            lo = hi;
            hi += 64.0;
            if hi > 1e6 {
                return Err(too_small());
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if ratio(mid) <= target {
                lo = mid;
            } else {
                hi = mid;
            }
            if ratio(hi) - ratio(lo) <= ratio_tol {
                break;
            }
        }
        let x0 = lo;
        let epsilon = self.shifted(x0);
        Ok(MarginCertificate {
            x0,
            delta,
            epsilon,
            parts,
            ratio: ratio(x0),
            low: c + epsilon,
            high: self.eval(x0 + delta),
            floor: c,
            diameter,
        })
    }
}

fn ratio_of(num: f64, den: f64) -> f64 {
    if num == 0.0 && den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// Threshold data for one layer: pre-activations at most `x0` land in
/// `[floor, low]`, pre-activations at least `x0 + delta` land at or above
/// `high`, and `high - floor > parts * (low - floor)` on asymptotic kinds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarginCertificate {
    pub x0: f64,
    pub delta: f64,
    /// `f(x0) - c`, or `-f(-D)` for leaky kinds.
    pub epsilon: f64,
    /// The part count `L` the certificate serves.
    pub parts: usize,
    /// Achieved ratio, below `1 / parts`.
    pub ratio: f64,
    /// `f(x0)`.
    pub low: f64,
    /// `f(x0 + delta)`.
    pub high: f64,
    /// Lower bound of `f` over every pre-activation of the layer.
    pub floor: f64,
    /// Pre-activation diameter `D` (leaky kinds).
    #[serde(default)]
    pub diameter: Option<f64>,
}

impl MarginCertificate {
    /// Upper bound on a block sum over `parts` coordinates of the hull-side
    /// class.
    pub fn block_low(&self) -> f64 {
        self.parts as f64 * self.low
    }

    /// Lower bound on a block sum for the other class: one coordinate at or
    /// above `high`, the rest at or above `floor`.
    pub fn block_high(&self) -> f64 {
        self.high + (self.parts as f64 - 1.0) * self.floor
    }

    /// Midpoint between [`Self::block_low`] and [`Self::block_high`].
    pub fn block_threshold(&self) -> f64 {
        0.5 * (self.block_low() + self.block_high())
    }
}

/// Shared handle to a registered activation.
#[derive(Clone)]
pub struct ActivationSpec(Arc<dyn Activation>);

impl ActivationSpec {
    pub fn new<A: Activation + 'static>(a: A) -> Self {
        Self(Arc::new(a))
    }

    pub fn sigmoid() -> Self {
        Self::new(Sigmoid)
    }

    pub fn tanh() -> Self {
        Self::new(Tanh)
    }

    pub fn relu() -> Self {
        Self::new(Relu)
    }

    pub fn leaky_relu(c1: f64, c2: f64) -> Result<Self> {
        Ok(Self::new(LeakyRelu::new(c1, c2)?))
    }

    /// The four kinds in their default parameterization.
    pub fn standard() -> Vec<Self> {
        vec![
            Self::sigmoid(),
            Self::tanh(),
            Self::relu(),
            Self::new(LeakyRelu::default()),
        ]
    }

    pub fn parse(s: &str) -> Result<Self> {
        ActivationRegistry::with_defaults().parse(s)
    }

    /// Element-wise application.
    pub fn apply(&self, xs: &mut [f64]) {
        xs.iter_mut().for_each(|x| *x = self.0.eval(*x));
    }

    /// Construction delta for a layer serving `parts` parts: the delta
    /// whose limiting ratio is `(1 - slack) / parts`, inflated by
    /// `1 + slack`, and never below `requested`.
    pub fn construction_delta(
        &self,
        parts: usize,
        slack: f64,
        diameter: Option<f64>,
        requested: f64,
    ) -> Result<f64> {
        if parts == 0 {
            return Err(Error::ZeroParts);
        }
        let target = (1.0 - slack) / parts as f64;
        let d = self.0.limit_delta(target, diameter)? * (1.0 + slack);
        Ok(d.max(requested).max(self.0.unit_delta()))
    }
}

impl std::ops::Deref for ActivationSpec {
    type Target = dyn Activation;

    fn deref(&self) -> &Self::Target {
        &*self.0
    }
}

impl fmt::Debug for ActivationSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ActivationSpec({})", self.0.name())
    }
}

impl fmt::Display for ActivationSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.name())
    }
}

impl PartialEq for ActivationSpec {
    fn eq(&self, other: &Self) -> bool {
        self.0.name() == other.0.name()
    }
}

impl Serialize for ActivationSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.name())
    }
}

impl<'de> Deserialize<'de> for ActivationSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        ActivationSpec::parse(&s).map_err(serde::de::Error::custom)
    }
}

type Factory = Box<dyn Fn(&[f64]) -> Result<ActivationSpec> + Send + Sync>;

/// Activation constructors keyed by name. A spec string is
/// `name[:param[:param...]]`.
pub struct ActivationRegistry {
    factories: BTreeMap<String, Factory>,
}

impl ActivationRegistry {
    pub fn empty() -> Self {
        Self {
            factories: BTreeMap::new(),
        }
    }

    pub fn with_defaults() -> Self {
        let mut r = Self::empty();
        r.register("sigmoid", no_params(ActivationSpec::sigmoid));
        r.register("tanh", no_params(ActivationSpec::tanh));
        r.register("relu", no_params(ActivationSpec::relu));
        r.register("leaky_relu", |p: &[f64]| match p {
            [] => Ok(ActivationSpec::new(LeakyRelu::default())),
            [c1, c2] => ActivationSpec::leaky_relu(*c1, *c2),
            _ => Err(Error::ActivationParams {
                name: "leaky_relu".into(),
                reason: format!("expected 0 or 2 parameters, got {}", p.len()),
            }),
        });
        r
    }

    pub fn register<F>(&mut self, name: &str, factory: F)
    where
        F: Fn(&[f64]) -> Result<ActivationSpec> + Send + Sync + 'static,
    {
        self.factories.insert(name.to_string(), Box::new(factory));
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.factories.keys().map(String::as_str)
    }

    pub fn parse(&self, spec: &str) -> Result<ActivationSpec> {
        let mut fields = spec.trim().split(':');
        let name = fields.next().unwrap_or_default();
        let factory = self
            .factories
            .get(name)
            .ok_or_else(|| Error::UnknownActivation(spec.to_string()))?;
        let params = fields
            .map(|f| {
                f.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::ActivationParams {
                        name: name.to_string(),
                        reason: format!("'{f}' is not a number"),
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        factory(&params)
    }
}

fn no_params(
    make: fn() -> ActivationSpec,
) -> impl Fn(&[f64]) -> Result<ActivationSpec> + Send + Sync {
    move |p: &[f64]| {
        if p.is_empty() {
            Ok(make())
        } else {
            Err(Error::ActivationParams {
                name: make().name(),
                reason: "takes no parameters".into(),
            })
        }
    }
}

/// `(f(x0) - c) / (f(x0 + delta) - c)` with `0 / 0 = 0`.
pub fn shifted_ratio(a: &dyn Activation, x0: f64, delta: f64) -> Result<f64> {
    if a.left_asymptote().is_none() {
        return Err(Error::WrongActivationKind {
            expected: "asymptotic",
            got: a.name(),
        });
    }
    Ok(ratio_of(a.shifted(x0), a.shifted(x0 + delta)))
}

/// `(f(x0) - f(x0 - D)) / (f(x0 + delta) - f(x0 - D))` for leaky kinds.
pub fn leaky_ratio(a: &dyn Activation, x0: f64, delta: f64, diameter: f64) -> Result<f64> {
    if a.leaky_slopes().is_none() {
        return Err(Error::WrongActivationKind {
            expected: "leaky_relu",
            got: a.name(),
        });
    }
    let base = a.eval(x0 - diameter);
    Ok(ratio_of(a.eval(x0) - base, a.eval(x0 + delta) - base))
}

/// Minimal delta for a layer serving `parts` parts: `ln L` for the
/// sigmoid, `ln L / 2` for tanh, 0 for relu and `(L - 1) D c1 / c2` for
/// leaky relu.
pub fn min_delta(a: &dyn Activation, parts: usize, diameter: Option<f64>) -> Result<f64> {
    if parts == 0 {
        return Err(Error::ZeroParts);
    }
    a.limit_delta(1.0 / parts as f64, diameter)
}

/// See [`Activation::solve_x0`].
pub fn solve_x0(
    a: &dyn Activation,
    delta: f64,
    parts: usize,
    slack: f64,
    diameter: Option<f64>,
) -> Result<MarginCertificate> {
    a.solve_x0(delta, parts, slack, diameter, 1e-10)
}
