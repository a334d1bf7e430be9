use super::{Activation, MarginCertificate};
use crate::error::{Error, Result};

/// Numerically stable logistic function.
#[inline]
pub(crate) fn logistic(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Sigmoid;

impl Activation for Sigmoid {
    fn name(&self) -> String {
        "sigmoid".into()
    }

    fn eval(&self, x: f64) -> f64 {
        logistic(x)
    }

    fn derivative(&self, x: f64) -> f64 {
        let s = logistic(x);
        s * (1.0 - s)
    }

    fn left_asymptote(&self) -> Option<f64> {
        Some(0.0)
    }

    fn limit_delta(&self, ratio: f64, _diameter: Option<f64>) -> Result<f64> {
        // (e^{-d} + e^{x0}) / (1 + e^{x0}) -> e^{-d} as x0 -> -inf
        Ok((-ratio.ln()).max(0.0))
    }

    fn x0_floor(&self) -> f64 {
        -700.0
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Tanh;

impl Activation for Tanh {
    fn name(&self) -> String {
        "tanh".into()
    }

    fn eval(&self, x: f64) -> f64 {
        x.tanh()
    }

    fn derivative(&self, x: f64) -> f64 {
        let t = x.tanh();
        1.0 - t * t
    }

    fn left_asymptote(&self) -> Option<f64> {
        Some(-1.0)
    }

    fn shifted(&self, x: f64) -> f64 {
        // tanh(x) + 1 = 2 * logistic(2x), exact far into the left tail
        2.0 * logistic(2.0 * x)
    }

    fn limit_delta(&self, ratio: f64, _diameter: Option<f64>) -> Result<f64> {
        // ratio of tanh + 1 tends to e^{-2d}
        Ok((-0.5 * ratio.ln()).max(0.0))
    }

    fn x0_floor(&self) -> f64 {
        -350.0
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Relu;

impl Activation for Relu {
    fn name(&self) -> String {
        "relu".into()
    }

    fn eval(&self, x: f64) -> f64 {
        x.max(0.0)
    }

    fn derivative(&self, x: f64) -> f64 {
        if x > 0.0 {
            1.0
        } else {
            0.0
        }
    }

    fn left_asymptote(&self) -> Option<f64> {
        Some(0.0)
    }

    fn limit_delta(&self, _ratio: f64, _diameter: Option<f64>) -> Result<f64> {
        Ok(0.0)
    }

    fn unit_delta(&self) -> f64 {
        1.0
    }

    fn solve_x0(
        &self,
        delta: f64,
        parts: usize,
        _slack: f64,
        _diameter: Option<f64>,
        _ratio_tol: f64,
    ) -> Result<MarginCertificate> {
        if parts == 0 {
            return Err(Error::ZeroParts);
        }
        if !(delta > 0.0) {
            return Err(Error::DeltaTooSmall {
                activation: self.name(),
                delta,
                min_delta: 0.0,
                parts,
            });
        }
        // semi-positive: everything at or below 0 maps to exactly 0, so any
        // epsilon below f(delta) / L certifies the separation
        let epsilon = delta / (2.0 * parts as f64);
        Ok(MarginCertificate {
            x0: 0.0,
            delta,
            epsilon,
            parts,
            ratio: 0.0,
            low: 0.0,
            high: delta,
            floor: 0.0,
            diameter: None,
        })
    }
}

/// `f(x) = c1 x` for `x <= 0`, `c2 x` for `x >= 0`, with `c2 > c1 > 0`.
#[derive(Debug, Clone, Copy)]
pub struct LeakyRelu {
    pub c1: f64,
    pub c2: f64,
}

impl LeakyRelu {
    pub fn new(c1: f64, c2: f64) -> Result<Self> {
        if !(c1 > 0.0 && c2 > c1 && c2.is_finite()) {
            return Err(Error::ActivationParams {
                name: "leaky_relu".into(),
                reason: format!("need c2 > c1 > 0, got c1 = {c1}, c2 = {c2}"),
            });
        }
        Ok(Self { c1, c2 })
    }
}

impl Default for LeakyRelu {
    fn default() -> Self {
        Self { c1: 0.2, c2: 1.0 }
    }
}

impl Activation for LeakyRelu {
    fn name(&self) -> String {
        format!("leaky_relu:{}:{}", self.c1, self.c2)
    }

    fn eval(&self, x: f64) -> f64 {
        if x >= 0.0 {
            self.c2 * x
        } else {
            self.c1 * x
        }
    }

    fn derivative(&self, x: f64) -> f64 {
        if x >= 0.0 {
            self.c2
        } else {
            self.c1
        }
    }

    fn left_asymptote(&self) -> Option<f64> {
        None
    }

    fn leaky_slopes(&self) -> Option<(f64, f64)> {
        Some((self.c1, self.c2))
    }

    fn limit_delta(&self, ratio: f64, diameter: Option<f64>) -> Result<f64> {
        // D c1 / (delta c2 + D c1) = ratio, attained at x0 = 0
        let d = diameter.ok_or(Error::MissingDiameter)?;
        Ok((d * self.c1 * (1.0 / ratio - 1.0) / self.c2).max(0.0))
    }

    fn unit_delta(&self) -> f64 {
        1.0
    }

    fn solve_x0(
        &self,
        delta: f64,
        parts: usize,
        slack: f64,
        diameter: Option<f64>,
        _ratio_tol: f64,
    ) -> Result<MarginCertificate> {
        if parts == 0 {
            return Err(Error::ZeroParts);
        }
        let d = diameter.ok_or(Error::MissingDiameter)?;
        let min_delta = self.limit_delta(1.0 / parts as f64, Some(d))?;
        let epsilon = -self.eval(-d);
        let high = self.eval(delta);
        let ratio = if epsilon == 0.0 {
            0.0
        } else {
            epsilon / (high + epsilon)
        };
        let target = (1.0 - slack) / parts as f64;
        if !(delta > min_delta) || !(ratio <= target) || !(delta > 0.0) {
            return Err(Error::DeltaTooSmall {
                activation: self.name(),
                delta,
                min_delta,
                parts,
            });
        }
        Ok(MarginCertificate {
            x0: 0.0,
            delta,
            epsilon,
            parts,
            ratio,
            low: 0.0,
            high,
            floor: -epsilon,
            diameter: Some(d),
        })
    }
}
