//! Numerical integration: Gauss–Jacobi rules, half-line integrals and
//! integrals over the line against `|x|^{2λ} dx`.

mod halfline;
mod jacobi;
mod wynn;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dunkl::WeightedLine;
use crate::error::{Error, Result};
use crate::profile::{Decay, Feature, Parity, Profile};

pub(crate) use halfline::{Estimate, HalfLine, Tail};
pub use jacobi::{build_jacobi_rule, cached_jacobi_rule, legendre, JacobiRule};
#[allow(unused_imports)]
pub(crate) use wynn::wynn_epsilon;

/// Numerical policy shared by every integration routine.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureSpec {
    pub jacobi_order: usize,
    pub halfline_nodes: usize,
    pub truncation_radius_factor: f64,
    pub line_tolerance: f64,
    pub max_refinement_levels: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            jacobi_order: 64,
            halfline_nodes: 256,
            truncation_radius_factor: 20.0,
            line_tolerance: 1e-10,
            max_refinement_levels: 6,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.jacobi_order == 0 || self.halfline_nodes == 0 || self.max_refinement_levels == 0 {
            return Err(Error::Config("orders and refinement levels must be positive".into()));
        }
        if !(self.truncation_radius_factor > 0.0 && self.truncation_radius_factor.is_finite()) {
            return Err(Error::Config(format!(
                "truncation_radius_factor = {} must be positive",
                self.truncation_radius_factor
            )));
        }
        if !(self.line_tolerance > 0.0 && self.line_tolerance < 1.0) {
            return Err(Error::Config(format!(
                "line_tolerance = {} must lie in (0, 1)",
                self.line_tolerance
            )));
        }
        Ok(())
    }

    /// Jacobi rule of the configured order.
    pub fn jacobi(&self, a: f64, b: f64) -> Result<std::sync::Arc<JacobiRule>> {
        cached_jacobi_rule(a, b, self.jacobi_order)
    }
}

fn tail_for(decay: Decay, oscillation: Option<f64>) -> Result<Tail> {
    match (decay, oscillation) {
        (Decay::Compact { .. }, _) => Ok(Tail::None),
        (Decay::Unbounded, _) => {
            Err(Error::Domain("profile does not decay; integral over an unbounded range".into()))
        }
        (_, Some(w)) if w > 0.0 => Ok(Tail::Oscillatory { frequency: w }),
        _ => Ok(Tail::Decaying),
    }
}

fn core_radius(decay: Decay, decay_scale: f64, spec: &QuadratureSpec) -> f64 {
    match decay {
        Decay::Compact { radius } => radius,
        _ => spec.truncation_radius_factor * decay_scale,
    }
}

/// `∫_0^∞ f(x) x^power dx` for a bare closure with an explicit policy.
#[allow(clippy::too_many_arguments)]
pub(crate) fn halfline_with<F>(
    f: F,
    power: f64,
    decay: Decay,
    decay_scale: f64,
    features: &[Feature],
    oscillation: Option<f64>,
    spec: &QuadratureSpec,
) -> Result<Estimate>
where
    F: Fn(f64) -> Complex64 + Sync,
{
    spec.validate()?;
    if !(decay_scale > 0.0) {
        return Err(Error::Domain(format!("decay scale {decay_scale} must be positive")));
    }
    let tail = tail_for(decay, oscillation)?;
    let radius = core_radius(decay, decay_scale, spec);
    HalfLine {
        f: &f,
        power,
        core_radius: radius,
        features: features.to_vec(),
        tail,
    }
    .integrate(spec)
}

/// `∫_ℝ f(x) |x|^{2λ} dx` for a bare closure; the line is folded onto `(0, ∞)`.
#[allow(clippy::too_many_arguments)]
pub(crate) fn weighted_line_with<F>(
    f: F,
    parity: Parity,
    lambda: f64,
    decay: Decay,
    features: &[Feature],
    oscillation: Option<f64>,
    spec: &QuadratureSpec,
) -> Result<Estimate>
where
    F: Fn(f64) -> Complex64 + Sync,
{
    if parity == Parity::Odd {
        return Ok(Estimate { value: Complex64::new(0.0, 0.0), magnitude: 0.0 });
    }
    let scale = decay
        .scale()
        .ok_or_else(|| Error::Domain("profile does not decay; weighted integral undefined".into()))?;
    let folded: Vec<Feature> = features
        .iter()
        .map(|ft| Feature { at: ft.at.abs(), width: ft.width })
        .collect();
    let power = 2.0 * lambda;
    match parity {
        Parity::Even => {
            let est = halfline_with(&f, power, decay, scale, &folded, oscillation, spec)?;
            Ok(Estimate { value: est.value * 2.0, magnitude: est.magnitude * 2.0 })
        }
        _ => halfline_with(|x| f(x) + f(-x), power, decay, scale, &folded, oscillation, spec),
    }
}

/// `∫_0^∞ f(ξ) dξ`, with the core interval `[0, R]` set by `decay_scale`.
pub fn integrate_halfline(f: &Profile, decay_scale: f64, spec: &QuadratureSpec) -> Result<Complex64> {
    let eval = f.evaluator();
    halfline_with(
        |x| eval(x),
        0.0,
        f.decay(),
        decay_scale,
        f.features(),
        f.oscillation(),
        spec,
    )
    .map(|e| e.value)
}

/// `∫_ℝ f(x) |x|^{2λ} dx`.
pub fn integrate_weighted_line(
    f: &Profile,
    line: &WeightedLine,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    let eval = f.evaluator();
    weighted_line_with(
        |x| eval(x),
        f.parity(),
        line.lambda(),
        f.decay(),
        f.features(),
        f.oscillation(),
        spec,
    )
    .map(|e| e.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::function::gamma::gamma;

    #[test]
    fn spec_deserializes_from_exact_keys() {
        let json = r#"{"jacobi_order": 32, "halfline_nodes": 128,
            "truncation_radius_factor": 25.0, "line_tolerance": 1e-9,
            "max_refinement_levels": 5}"#;
        let spec: QuadratureSpec = serde_json::from_str(json).unwrap();
        assert_eq!(spec.jacobi_order, 32);
        assert_eq!(spec.max_refinement_levels, 5);
        assert!(serde_json::from_str::<QuadratureSpec>(r#"{"order": 3}"#).is_err());
    }

    #[test]
    fn halfline_examples() {
        let spec = QuadratureSpec::default();
        let e = Profile::real("e^-x", Decay::Exponential { scale: 1.0 }, |x| (-x).exp());
        assert!((integrate_halfline(&e, 1.0, &spec).unwrap().re - 1.0).abs() < 1e-12);

        let lambda: f64 = 0.7;
        let y = 1.5;
        let g = Profile::real("x^2l e^-yx", Decay::Exponential { scale: 1.0 / y }, move |x| {
            x.powf(2.0 * lambda) * (-y * x).exp()
        });
        let exact = gamma(2.0 * lambda + 1.0) / y.powf(2.0 * lambda + 1.0);
        let got = integrate_halfline(&g, 1.0 / y, &spec).unwrap().re;
        assert!((got - exact).abs() < 1e-9 * exact, "{got} vs {exact}");

        let s = Profile::real("e^-x sin x", Decay::Exponential { scale: 1.0 }, |x| {
            (-x).exp() * x.sin()
        });
        assert!((integrate_halfline(&s, 1.0, &spec).unwrap().re - 0.5).abs() < 1e-12);
    }

    #[test]
    fn weighted_line_examples() {
        let spec = QuadratureSpec::default();
        for &lambda in &[0.3, 0.5, 1.0, 2.5] {
            let line = WeightedLine::new(lambda).unwrap();
            let v = integrate_weighted_line(&Profile::gaussian(1.0), &line, &spec).unwrap();
            assert!((line.c_lambda() * v.re - 1.0).abs() < 1e-12, "lambda={lambda}");
            assert!(v.im.abs() < 1e-13);
            let odd = integrate_weighted_line(&Profile::odd_gaussian(1.0), &line, &spec).unwrap();
            assert_eq!(odd.norm(), 0.0);
        }
        let half = WeightedLine::new(0.5).unwrap();
        let v = integrate_weighted_line(&Profile::indicator(0.0, 1.0), &half, &spec).unwrap();
        assert!((v.re - 0.5).abs() < 1e-12);
    }

    #[test]
    fn unbounded_profile_is_a_domain_error() {
        let line = WeightedLine::new(1.0).unwrap();
        let res = integrate_weighted_line(&Profile::constant(1.0), &line, &QuadratureSpec::default());
        assert!(matches!(res, Err(Error::Domain(_))));
    }

    #[test]
    fn closed_form_from_jacobi_rule_weight() {
        // c'_λ ∫ (1+t)(1-t²)^{λ-1} dt = 1
        for &lambda in &[0.3, 0.5, 1.0, 2.5] {
            let line = WeightedLine::new(lambda).unwrap();
            let rule = build_jacobi_rule(lambda - 1.0, lambda - 1.0, 24).unwrap();
            let v: f64 = rule.sum(|t| 1.0 + t);
            assert!((line.c_prime() * v - 1.0).abs() < 1e-13, "{lambda}: {}", line.c_prime() * v - 1.0);
        }
    }
}
