//! Functions of one real variable used as inputs to transforms, translations
//! and convolutions, together with the metadata the integrators need.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type RealToComplex = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
    None,
}

/// How a profile behaves at infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Decay {
    /// Vanishes identically for `|x| > radius`.
    Compact { radius: f64 },
    /// Decays at least like `exp(-|x| / scale)`.
    Exponential { scale: f64 },
    /// Decays like a power of `|x|` beyond `scale`.
    Algebraic { scale: f64 },
    /// No decay; not integrable over the line.
    Unbounded,
}

impl Decay {
    pub fn scale(&self) -> Option<f64> {
        match *self {
            Decay::Compact { radius } => Some(radius),
            Decay::Exponential { scale } | Decay::Algebraic { scale } => Some(scale),
            Decay::Unbounded => None,
        }
    }

    /// Decay of a product: the faster of the two, keeping the wider scale
    /// when both are of the same kind.
    pub fn tighter(self, other: Decay) -> Decay {
        use Decay::*;
        match (self, other) {
            (Compact { radius: r1 }, Compact { radius: r2 }) => Compact { radius: r1.min(r2) },
            (Compact { radius }, _) | (_, Compact { radius }) => Compact { radius },
            (Exponential { scale: s1 }, Exponential { scale: s2 }) => {
                Exponential { scale: s1.max(s2) }
            }
            (Exponential { scale }, _) | (_, Exponential { scale }) => Exponential { scale },
            (Algebraic { scale: s1 }, Algebraic { scale: s2 }) => Algebraic { scale: s1.max(s2) },
            (Algebraic { scale }, Unbounded) | (Unbounded, Algebraic { scale }) => {
                Algebraic { scale }
            }
            (Unbounded, Unbounded) => Unbounded,
        }
    }
}

/// A point where the profile varies on a short length scale (a peak, a kink,
/// a support edge). Integrators place panel edges around it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Feature {
    pub at: f64,
    pub width: f64,
}

impl Feature {
    /// The same feature reflected onto the positive half-line.
    pub fn abs_folded(&self) -> Feature {
        Feature { at: self.at.abs(), width: self.width }
    }
}

#[derive(Clone)]
pub struct Profile {
    eval: RealToComplex,
    derivative: Option<RealToComplex>,
    parity: Parity,
    decay: Decay,
    features: Vec<Feature>,
    oscillation: Option<f64>,
    description: String,
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Profile")
            .field("description", &self.description)
            .field("parity", &self.parity)
            .field("decay", &self.decay)
            .field("features", &self.features)
            .field("oscillation", &self.oscillation)
            .field("analytic_derivative", &self.derivative.is_some())
            .finish()
    }
}

impl Profile {
    pub fn new<F>(description: impl Into<String>, decay: Decay, f: F) -> Self
    where
        F: Fn(f64) -> Complex64 + Send + Sync + 'static,
    {
        Profile {
            eval: Arc::new(f),
            derivative: None,
            parity: Parity::None,
            decay,
            features: Vec::new(),
            oscillation: None,
            description: description.into(),
        }
    }

    /// Real-valued convenience constructor.
    pub fn real<F>(description: impl Into<String>, decay: Decay, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::new(description, decay, move |x| Complex64::new(f(x), 0.0))
    }

    /// Declares a parity, verified on 32 sample points.
    pub fn with_parity(mut self, parity: Parity) -> Result<Self> {
        if parity != Parity::None {
            let scale = self.decay.scale().unwrap_or(1.0);
            for k in 1..=32 {
                let x = scale * k as f64 / 8.0;
                let (a, b) = (self.eval(x), self.eval(-x));
                let gap = match parity {
                    Parity::Even => (a - b).norm(),
                    Parity::Odd => (a + b).norm(),
                    Parity::None => 0.0,
                };
                if gap > 1e-12 * (1.0 + a.norm()) {
                    return Err(Error::Domain(format!(
                        "profile '{}' is not {:?} at x = {x}",
                        self.description, parity
                    )));
                }
            }
        }
        self.parity = parity;
        Ok(self)
    }

    pub fn with_derivative<F>(mut self, d: F) -> Self
    where
        F: Fn(f64) -> Complex64 + Send + Sync + 'static,
    {
        self.derivative = Some(Arc::new(d));
        self
    }

    pub fn with_feature(mut self, at: f64, width: f64) -> Self {
        self.features.push(Feature { at, width });
        self
    }

    pub fn with_features(mut self, features: impl IntoIterator<Item = Feature>) -> Self {
        self.features.extend(features);
        self
    }

    /// Angular frequency of oscillation in the tail, if any.
    pub fn with_oscillation(mut self, frequency: f64) -> Self {
        self.oscillation = (frequency > 0.0).then_some(frequency);
        self
    }

    #[inline]
    pub fn eval(&self, x: f64) -> Complex64 {
        (self.eval)(x)
    }

    pub fn analytic_derivative(&self, x: f64) -> Option<Complex64> {
        self.derivative.as_ref().map(|d| d(x))
    }

    pub fn has_derivative(&self) -> bool {
        self.derivative.is_some()
    }

    pub fn even_part(&self, x: f64) -> Complex64 {
        match self.parity {
            Parity::Even => self.eval(x),
            Parity::Odd => Complex64::new(0.0, 0.0),
            Parity::None => 0.5 * (self.eval(x) + self.eval(-x)),
        }
    }

    pub fn odd_part(&self, x: f64) -> Complex64 {
        match self.parity {
            Parity::Even => Complex64::new(0.0, 0.0),
            Parity::Odd => self.eval(x),
            Parity::None => 0.5 * (self.eval(x) - self.eval(-x)),
        }
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn decay(&self) -> Decay {
        self.decay
    }

    pub fn features(&self) -> &[Feature] {
        &self.features
    }

    pub fn oscillation(&self) -> Option<f64> {
        self.oscillation
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub(crate) fn evaluator(&self) -> RealToComplex {
        Arc::clone(&self.eval)
    }

    /// `c · f`, keeping all metadata.
    pub fn scaled(&self, c: Complex64) -> Profile {
        let f = Arc::clone(&self.eval);
        let mut out = self.clone();
        out.eval = Arc::new(move |x| c * f(x));
        out.derivative = self.derivative.as_ref().map(|d| {
            let d = Arc::clone(d);
            Arc::new(move |x| c * d(x)) as RealToComplex
        });
        out.description = format!("({c})*{}", self.description);
        out
    }

    /// `x ↦ f(-x)`.
    pub fn reflected(&self) -> Profile {
        let f = Arc::clone(&self.eval);
        let mut out = self.clone();
        out.eval = Arc::new(move |x| f(-x));
        out.derivative = self.derivative.as_ref().map(|d| {
            let d = Arc::clone(d);
            Arc::new(move |x: f64| -d(-x)) as RealToComplex
        });
        out.features = self
            .features
            .iter()
            .map(|f| Feature { at: -f.at, width: f.width })
            .collect();
        out.description = format!("reflect({})", self.description);
        out
    }

    /// `x ↦ |f(x)|^p` as a real, nonnegative profile.
    pub fn abs_pow(&self, p: f64) -> Profile {
        let f = Arc::clone(&self.eval);
        let parity = match self.parity {
            Parity::None => Parity::None,
            _ => Parity::Even,
        };
        Profile {
            eval: Arc::new(move |x| Complex64::new(f(x).norm().powf(p), 0.0)),
            derivative: None,
            parity,
            decay: self.decay,
            features: self.features.clone(),
            oscillation: None,
            description: format!("|{}|^{p}", self.description),
        }
    }

    /// Pointwise `f - g`; decay and features are merged conservatively.
    pub fn minus(&self, other: &Profile) -> Profile {
        let f = Arc::clone(&self.eval);
        let g = Arc::clone(&other.eval);
        let decay = merge_decay(self.decay, other.decay);
        let parity = if self.parity == other.parity { self.parity } else { Parity::None };
        let mut features = self.features.clone();
        features.extend_from_slice(&other.features);
        Profile {
            eval: Arc::new(move |x| f(x) - g(x)),
            derivative: None,
            parity,
            decay,
            features,
            oscillation: None,
            description: format!("{} - {}", self.description, other.description),
        }
    }

    // Standard profiles.

    /// `exp(-x² / (2 s²))`, with its analytic derivative.
    pub fn gaussian(s: f64) -> Profile {
        let inv = 1.0 / (s * s);
        Profile::real(format!("gauss(s={s})"), Decay::Exponential { scale: s }, move |x| {
            (-0.5 * x * x * inv).exp()
        })
        .with_derivative(move |x| Complex64::new(-x * inv * (-0.5 * x * x * inv).exp(), 0.0))
        .with_parity(Parity::Even)
        .expect("gaussian is even")
    }

    /// `x exp(-x² / (2 s²))`.
    pub fn odd_gaussian(s: f64) -> Profile {
        let inv = 1.0 / (s * s);
        Profile::real(format!("x*gauss(s={s})"), Decay::Exponential { scale: s }, move |x| {
            x * (-0.5 * x * x * inv).exp()
        })
        .with_derivative(move |x| {
            Complex64::new((1.0 - x * x * inv) * (-0.5 * x * x * inv).exp(), 0.0)
        })
        .with_parity(Parity::Odd)
        .expect("odd gaussian is odd")
    }

    /// `exp(-(x - c)² / (2 s²))`, no parity.
    pub fn shifted_gaussian(c: f64, s: f64) -> Profile {
        let inv = 1.0 / (s * s);
        Profile::real(
            format!("gauss(c={c},s={s})"),
            Decay::Exponential { scale: s + c.abs() },
            move |x| (-0.5 * (x - c) * (x - c) * inv).exp(),
        )
        .with_derivative(move |x| {
            Complex64::new(-(x - c) * inv * (-0.5 * (x - c) * (x - c) * inv).exp(), 0.0)
        })
    }

    pub fn constant(c: f64) -> Profile {
        Profile::real(format!("const({c})"), Decay::Unbounded, move |_| c)
            .with_derivative(|_| Complex64::new(0.0, 0.0))
            .with_parity(Parity::Even)
            .expect("constant is even")
    }

    /// Smooth bump supported on `{center - radius <= x <= center + radius}`.
    pub fn bump(center: f64, radius: f64) -> Profile {
        Profile::real(
            format!("bump(c={center},r={radius})"),
            Decay::Compact { radius: center.abs() + radius },
            move |x| {
                let s = (x - center) / radius;
                if s.abs() < 1.0 {
                    (-1.0 / (1.0 - s * s)).exp() * std::f64::consts::E
                } else {
                    0.0
                }
            },
        )
        .with_feature(center - radius, 0.0)
        .with_feature(center + radius, 0.0)
    }

    /// Even smooth bump supported on the annulus `{r1 <= |x| <= r2}`.
    pub fn annular_bump(r1: f64, r2: f64) -> Profile {
        let c = 0.5 * (r1 + r2);
        let h = 0.5 * (r2 - r1);
        Profile::real(
            format!("annulus({r1},{r2})"),
            Decay::Compact { radius: r2 },
            move |x| {
                let s = (x.abs() - c) / h;
                if s.abs() < 1.0 {
                    (-1.0 / (1.0 - s * s)).exp() * std::f64::consts::E
                } else {
                    0.0
                }
            },
        )
        .with_feature(r1, 0.0)
        .with_feature(r2, 0.0)
        .with_feature(-r1, 0.0)
        .with_feature(-r2, 0.0)
        .with_parity(Parity::Even)
        .expect("annular bump is even")
    }

    /// Indicator of `[lo, hi]`.
    pub fn indicator(lo: f64, hi: f64) -> Profile {
        Profile::real(
            format!("1[{lo},{hi}]"),
            Decay::Compact { radius: lo.abs().max(hi.abs()) },
            move |x| if x >= lo && x <= hi { 1.0 } else { 0.0 },
        )
        .with_feature(lo, 0.0)
        .with_feature(hi, 0.0)
    }
}

fn merge_decay(a: Decay, b: Decay) -> Decay {
    use Decay::*;
    match (a, b) {
        (Unbounded, _) | (_, Unbounded) => Unbounded,
        (Algebraic { scale: s }, other) | (other, Algebraic { scale: s }) => Algebraic {
            scale: s.max(other.scale().unwrap_or(0.0)),
        },
        (Exponential { scale: s }, other) | (other, Exponential { scale: s }) => Exponential {
            scale: s.max(other.scale().unwrap_or(0.0)),
        },
        (Compact { radius: r1 }, Compact { radius: r2 }) => Compact { radius: r1.max(r2) },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parity_is_checked_at_construction() {
        let p = Profile::real("x^2 e^-x^2", Decay::Exponential { scale: 1.0 }, |x| {
            x * x * (-x * x).exp()
        });
        assert!(p.clone().with_parity(Parity::Even).is_ok());
        assert!(p.with_parity(Parity::Odd).is_err());
        let shifted = Profile::shifted_gaussian(0.5, 1.0);
        assert!(shifted.with_parity(Parity::Even).is_err());
    }

    #[test]
    fn even_and_odd_parts_recombine() {
        let f = Profile::shifted_gaussian(0.7, 0.9);
        for &x in &[-2.0, -0.3, 0.0, 0.4, 1.7] {
            let sum = f.even_part(x) + f.odd_part(x);
            assert!((sum - f.eval(x)).norm() < 1e-15);
        }
    }

    #[test]
    fn bump_vanishes_outside_support() {
        let b = Profile::bump(1.0, 0.5);
        assert_eq!(b.eval(0.4).re, 0.0);
        assert_eq!(b.eval(1.6).re, 0.0);
        assert!((b.eval(1.0).re - 1.0).abs() < 1e-15);
    }
}
