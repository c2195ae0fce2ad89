//! Composite integration on `(0, ∞)`.
//!
//! The core interval `[0, R]` is split into uniform panels plus geometrically
//! graded panels around declared features; the first panel carries the
//! `x^power` weight exactly through a Gauss–Jacobi rule. All panels are
//! bisected level by level until two successive estimates agree. The tail
//! `[R, ∞)` is summed over doubling panels (with a geometric remainder
//! estimate for power-law decay) or, for oscillatory integrands, over
//! half-period panels accelerated by the epsilon algorithm.

use num_complex::Complex64;

use super::jacobi::{cached_jacobi_rule, legendre, JacobiRule};
use super::wynn::wynn_epsilon;
use super::QuadratureSpec;
use crate::error::{Error, Result};
use crate::profile::Feature;

const PANEL_ORDER: usize = 16;
const MAX_TAIL_PANELS: usize = 160;
const MAX_OSCILLATORY_PANELS: usize = 600;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Tail {
    None,
    Decaying,
    Oscillatory { frequency: f64 },
}

/// `∫_0^∞ f(x) x^power dx` with the integration policy attached.
pub(crate) struct HalfLine<'a> {
    pub f: &'a (dyn Fn(f64) -> Complex64 + Sync),
    pub power: f64,
    pub core_radius: f64,
    pub features: Vec<Feature>,
    pub tail: Tail,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Estimate {
    pub value: Complex64,
    /// Quadrature of `|f| x^power`, used as the scale for relative tolerances.
    pub magnitude: f64,
}

impl HalfLine<'_> {
    pub fn integrate(&self, spec: &QuadratureSpec) -> Result<Estimate> {
        let core = self.core(spec)?;
        let tail = match self.tail {
            Tail::None => Estimate { value: Complex64::new(0.0, 0.0), magnitude: 0.0 },
            Tail::Decaying => self.decaying_tail(spec, core.magnitude)?,
            Tail::Oscillatory { frequency } => {
                self.oscillatory_tail(spec, frequency, core.magnitude)?
            }
        };
        Ok(Estimate {
            value: core.value + tail.value,
            magnitude: core.magnitude + tail.magnitude,
        })
    }

    fn base_edges(&self, spec: &QuadratureSpec) -> Vec<f64> {
        let r = self.core_radius;
        let n = (spec.halfline_nodes / PANEL_ORDER).max(1);
        let width = r / n as f64;
        let mut edges: Vec<f64> = (0..=n).map(|k| r * k as f64 / n as f64).collect();
        for feat in &self.features {
            // a feature within its own width of the origin is graded from the origin,
            // which keeps the x^power weight inside the first (Jacobi) panel
            let at = if feat.at.abs() < feat.width.max(1e-6 * r) { 0.0 } else { feat.at.abs() };
            if at > 0.0 && at < r {
                edges.push(at);
            }
            if feat.width > 0.0 {
                let mut h = feat.width;
                while h < width {
                    for e in [at - h, at + h] {
                        if e > 0.0 && e < r {
                            edges.push(e);
                        }
                    }
                    h *= 2.0;
                }
                // a peak sitting at the origin is graded from the origin outward
                if at == 0.0 {
                    edges.push(feat.width.min(r));
                }
            }
        }
        edges.sort_by(|a, b| a.total_cmp(b));
        edges.dedup_by(|a, b| (*a - *b).abs() <= 1e-13 * a.abs().max(b.abs()));
        // the x^power weight is only absorbed on the first panel, so that panel
        // must not be a sliver next to a much wider second one
        while edges.len() > 2 && edges[1] < 0.25 * edges[2] {
            edges.remove(1);
        }
        edges
    }

    fn panel_sum(
        &self,
        lo: f64,
        hi: f64,
        first: Option<&JacobiRule>,
        gl: &JacobiRule,
    ) -> (Complex64, f64) {
        let mut value = Complex64::new(0.0, 0.0);
        let mut magnitude = 0.0;
        match first {
            Some(rule) => {
                // x^power absorbed into the rule's (1+t)^power weight
                let half = 0.5 * (hi - lo);
                let scale = half.powf(self.power + 1.0);
                for (&t, &w) in rule.nodes().iter().zip(rule.weights()) {
                    let v = (self.f)(half * (1.0 + t));
                    value += v * (w * scale);
                    magnitude += v.norm() * w * scale;
                }
            }
            None => {
                let half = 0.5 * (hi - lo);
                let mid = 0.5 * (hi + lo);
                for (&t, &w) in gl.nodes().iter().zip(gl.weights()) {
                    let x = mid + half * t;
                    let weight = w * half * if self.power != 0.0 { x.powf(self.power) } else { 1.0 };
                    let v = (self.f)(x);
                    value += v * weight;
                    magnitude += v.norm() * weight;
                }
            }
        }
        (value, magnitude)
    }

    fn core(&self, spec: &QuadratureSpec) -> Result<Estimate> {
        if !(self.core_radius > 0.0 && self.core_radius.is_finite()) {
            return Err(Error::Domain(format!("core radius {} must be positive", self.core_radius)));
        }
        let gl = legendre(PANEL_ORDER);
        let origin = if self.power != 0.0 {
            Some(cached_jacobi_rule(0.0, self.power, PANEL_ORDER)?)
        } else {
            None
        };
        let base = self.base_edges(spec);
        let mut previous: Option<Estimate> = None;
        for level in 0..=spec.max_refinement_levels {
            let split = 1usize << level;
            let mut value = Complex64::new(0.0, 0.0);
            let mut magnitude = 0.0;
            for (i, pair) in base.windows(2).enumerate() {
                let step = (pair[1] - pair[0]) / split as f64;
                for j in 0..split {
                    let lo = pair[0] + step * j as f64;
                    let hi = if j + 1 == split { pair[1] } else { lo + step };
                    let first = if i == 0 && j == 0 { origin.as_deref() } else { None };
                    let (v, m) = self.panel_sum(lo, hi, first, &gl);
                    value += v;
                    magnitude += m;
                }
            }
            if !value.re.is_finite() || !value.im.is_finite() {
                return Err(Error::Divergent("non-finite integrand on core interval".into()));
            }
            let current = Estimate { value, magnitude };
            if let Some(prev) = previous {
                let gap = (current.value - prev.value).norm();
                if gap <= spec.line_tolerance * current.magnitude.max(1e-300) {
                    return Ok(current);
                }
                if level == spec.max_refinement_levels {
                    return Err(Error::NotConverged { last: current.value, previous: prev.value });
                }
            }
            previous = Some(current);
        }
        unreachable!("loop returns on its final level")
    }

    fn decaying_tail(&self, spec: &QuadratureSpec, core_magnitude: f64) -> Result<Estimate> {
        let gl = legendre(PANEL_ORDER);
        let mut lo = self.core_radius;
        let mut value = Complex64::new(0.0, 0.0);
        let mut magnitude = 0.0;
        let mut contributions: Vec<Complex64> = Vec::new();
        for _ in 0..MAX_TAIL_PANELS {
            let hi = 2.0 * lo;
            let (c, m) = self.panel_sum(lo, hi, None, &gl);
            if !c.re.is_finite() || !c.im.is_finite() {
                return Err(Error::Divergent("non-finite integrand in tail".into()));
            }
            value += c;
            magnitude += m;
            contributions.push(c);
            lo = hi;

            let scale = (core_magnitude + magnitude).max(1e-300);
            let k = contributions.len();
            if k >= 2
                && contributions[k - 1].norm() <= 0.1 * spec.line_tolerance * scale
                && contributions[k - 2].norm() <= spec.line_tolerance * scale
            {
                return Ok(Estimate { value, magnitude });
            }
            if k >= 4 {
                let (c1, c2, c3) = (contributions[k - 1], contributions[k - 2], contributions[k - 3]);
                if c2.norm() > 0.0 && c3.norm() > 0.0 {
                    let r = c1 / c2;
                    let r_prev = c2 / c3;
                    if r.norm() < 0.97 {
                        let remainder = c1 * r / (1.0 - r);
                        let err = remainder.norm() * (r - r_prev).norm() / (1.0 - r).norm();
                        if err <= spec.line_tolerance * scale {
                            return Ok(Estimate {
                                value: value + remainder,
                                magnitude: magnitude + remainder.norm(),
                            });
                        }
                    }
                }
            }
        }
        let k = contributions.len();
        let ratio = contributions[k - 1].norm() / contributions[k - 2].norm().max(1e-300);
        if ratio >= 1.0 {
            Err(Error::Divergent(format!(
                "tail contributions stopped decreasing (ratio {ratio:.3})"
            )))
        } else {
            Err(Error::NotConverged {
                last: value,
                previous: value - contributions[k - 1],
            })
        }
    }

    fn oscillatory_tail(
        &self,
        spec: &QuadratureSpec,
        frequency: f64,
        core_magnitude: f64,
    ) -> Result<Estimate> {
        let gl = legendre(PANEL_ORDER);
        let h = std::f64::consts::PI / frequency;
        let mut lo = self.core_radius;
        let mut value = Complex64::new(0.0, 0.0);
        let mut magnitude = 0.0;
        let mut sums: Vec<Complex64> = Vec::new();
        let mut last_small = false;
        let mut previous_extrapolation: Option<Complex64> = None;
        for k in 0..MAX_OSCILLATORY_PANELS {
            let (c, m) = self.panel_sum(lo, lo + h, None, &gl);
            lo += h;
            value += c;
            magnitude += m;
            sums.push(value);
            let scale = (core_magnitude + magnitude).max(1e-300);

            let small = c.norm() <= 0.1 * spec.line_tolerance * scale;
            if small && last_small {
                return Ok(Estimate { value, magnitude });
            }
            last_small = small;

            if k >= 5 {
                let window = &sums[sums.len().saturating_sub(16)..];
                let estimate = wynn_epsilon(window);
                if let Some(prev) = previous_extrapolation {
                    if (estimate - prev).norm() <= spec.line_tolerance * scale {
                        return Ok(Estimate { value: estimate, magnitude });
                    }
                }
                previous_extrapolation = Some(estimate);
            }
        }
        let last = previous_extrapolation.unwrap_or(value);
        Err(Error::NotConverged { last, previous: value })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::function::gamma::gamma;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn exponential_tail_converges() {
        let f = |x: f64| Complex64::new((-x).exp(), 0.0);
        let est = HalfLine { f: &f, power: 0.0, core_radius: 20.0, features: vec![], tail: Tail::Decaying }
            .integrate(&spec())
            .unwrap();
        assert!((est.value.re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn power_weight_is_exact_on_first_panel() {
        // ∫ x^{0.6} e^{-x} dx = Γ(1.6)
        let f = |x: f64| Complex64::new((-x).exp(), 0.0);
        let est = HalfLine { f: &f, power: 0.6, core_radius: 20.0, features: vec![], tail: Tail::Decaying }
            .integrate(&spec())
            .unwrap();
        assert!((est.value.re - gamma(1.6)).abs() < 1e-11);
    }

    #[test]
    fn algebraic_tail_uses_geometric_remainder() {
        // ∫_0^∞ 1/(1+x)^2 dx = 1
        let f = |x: f64| Complex64::new((1.0 + x).powi(-2), 0.0);
        let est = HalfLine { f: &f, power: 0.0, core_radius: 20.0, features: vec![], tail: Tail::Decaying }
            .integrate(&spec())
            .unwrap();
        assert!((est.value.re - 1.0).abs() < 1e-9, "{}", est.value);
    }

    #[test]
    fn slowly_decaying_oscillatory_tail() {
        // ∫_0^∞ sin(x)/x dx = π/2
        let f = |x: f64| Complex64::new(if x == 0.0 { 1.0 } else { x.sin() / x }, 0.0);
        let est = HalfLine {
            f: &f,
            power: 0.0,
            core_radius: 20.0,
            features: vec![],
            tail: Tail::Oscillatory { frequency: 1.0 },
        }
        .integrate(&spec())
        .unwrap();
        assert!((est.value.re - std::f64::consts::FRAC_PI_2).abs() < 1e-9, "{}", est.value);
    }

    #[test]
    fn divergent_tail_is_reported() {
        let f = |x: f64| Complex64::new(1.0 / (1.0 + x), 0.0);
        let res = HalfLine { f: &f, power: 0.0, core_radius: 20.0, features: vec![], tail: Tail::Decaying }
            .integrate(&spec());
        assert!(matches!(res, Err(Error::Divergent(_))), "{res:?}");
    }

    #[test]
    fn narrow_peak_is_resolved_through_its_feature() {
        // ∫ y / ((x-1)^2 + y^2) dx over (0, ∞) = π/2 + atan(1/y)
        let y = 1e-3;
        let f = move |x: f64| Complex64::new(y / ((x - 1.0).powi(2) + y * y), 0.0);
        let est = HalfLine {
            f: &f,
            power: 0.0,
            core_radius: 20.0,
            features: vec![Feature { at: 1.0, width: y }],
            tail: Tail::Decaying,
        }
        .integrate(&spec())
        .unwrap();
        let exact = std::f64::consts::FRAC_PI_2 + (1.0 / y).atan();
        assert!((est.value.re - exact).abs() < 1e-9, "{} vs {exact}", est.value.re);
    }
}
