//! Fields `F = u + iv` on the upper half-plane: spectral constructions,
//! closed-form kernel fields, the λ-Cauchy–Riemann and λ-harmonicity
//! residuals, and the `H^p_λ` quasi-norm estimator.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dunkl::{dunkl_derivative, dunkl_kernel, dunkl_kernel_derivative, finite_difference, lp_quasinorm};
use crate::dunkl::{NormSpec, WeightedLine};
use crate::error::{Error, Result};
use crate::profile::{Decay, Profile};
use crate::quadrature::{halfline_with, QuadratureSpec};

pub type FieldFn = Arc<dyn Fn(f64, f64) -> Complex64 + Send + Sync>;
/// `(∂_x F, ∂_y F)`.
pub type PartialsFn = Arc<dyn Fn(f64, f64) -> (Complex64, Complex64) + Send + Sync>;
pub type DensityFn = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

const NAN: Complex64 = Complex64::new(f64::NAN, f64::NAN);

/// Max that propagates NaN instead of discarding it.
pub(crate) fn nan_max(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

/// A density `φ` on `(0, ∞)`, extended by zero to `(-∞, 0]`.
#[derive(Clone)]
pub struct SpectralDensity {
    phi: DensityFn,
    decay_rate: f64,
    cauchy: Option<(u32, f64)>,
    description: String,
}

impl fmt::Debug for SpectralDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpectralDensity")
            .field("description", &self.description)
            .field("decay_rate", &self.decay_rate)
            .finish()
    }
}

impl SpectralDensity {
    /// `φ` with `|φ(ξ)| ≲ (1+ξ)^k e^{-decay_rate ξ}` for some `k`.
    pub fn new<F>(description: impl Into<String>, decay_rate: f64, phi: F) -> Result<Self>
    where
        F: Fn(f64) -> Complex64 + Send + Sync + 'static,
    {
        if !(decay_rate >= 0.0 && decay_rate.is_finite()) {
            return Err(Error::Domain(format!("decay rate {decay_rate} must be finite and >= 0")));
        }
        Ok(SpectralDensity { phi: Arc::new(phi), decay_rate, cauchy: None, description: description.into() })
    }

    /// `ξ^m e^{-y0 ξ}`.
    pub fn cauchy(m: u32, y0: f64) -> Result<Self> {
        if !(y0 > 0.0 && y0.is_finite()) {
            return Err(Error::Domain(format!("y0 = {y0} must be positive")));
        }
        let mut d = Self::new(format!("xi^{m} e^(-{y0} xi)"), y0, move |xi| {
            Complex64::new(xi.powi(m as i32) * (-y0 * xi).exp(), 0.0)
        })?;
        d.cauchy = Some((m, y0));
        Ok(d)
    }

    /// `φ(ξ)`; zero for `ξ < 0` and the right limit at `ξ = 0`.
    pub fn eval(&self, xi: f64) -> Complex64 {
        if xi >= 0.0 {
            (self.phi)(xi)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    pub fn decay_rate(&self) -> f64 {
        self.decay_rate
    }

    /// `(m, y0)` when this is `ξ^m e^{-y0 ξ}`.
    pub fn cauchy_parameters(&self) -> Option<(u32, f64)> {
        self.cauchy
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    /// Whether `φ(0+) = 0`, i.e. whether the zero extension is continuous at the origin.
    pub fn vanishes_at_origin(&self) -> bool {
        (self.phi)(1e-12).norm() < 1e-9
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelField {
    /// `u = P_y(x)`, `v = 0`.
    P,
    /// `u = Q_y(x)`, `v = 0`.
    Q,
    /// `u + iv = P_y(x) + i Q_y(x)`.
    Cauchy,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FieldFamily {
    Spectral { description: String },
    Cauchy { y0: f64, m: u32 },
    Kernel(KernelField),
    Custom,
}

/// `F = u + iv` on `y > 0`.
#[derive(Clone)]
pub struct HalfPlaneField {
    eval: FieldFn,
    partials: Option<PartialsFn>,
    line: WeightedLine,
    family: FieldFamily,
    homogeneity_degree: Option<f64>,
    shift: f64,
    description: String,
}

impl fmt::Debug for HalfPlaneField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HalfPlaneField")
            .field("description", &self.description)
            .field("lambda", &self.line.lambda())
            .field("family", &self.family)
            .field("homogeneity_degree", &self.homogeneity_degree)
            .field("analytic_partials", &self.partials.is_some())
            .finish()
    }
}

impl HalfPlaneField {
    /// A field from a complex evaluator. `shift` is the offset in `y` of the
    /// field's length scale: sections at height `y` vary on scale `y + shift`.
    pub fn new<F>(line: &WeightedLine, description: impl Into<String>, shift: f64, f: F) -> Self
    where
        F: Fn(f64, f64) -> Complex64 + Send + Sync + 'static,
    {
        HalfPlaneField {
            eval: Arc::new(f),
            partials: None,
            line: *line,
            family: FieldFamily::Custom,
            homogeneity_degree: None,
            shift: shift.max(0.0),
            description: description.into(),
        }
    }

    /// A field from its real and imaginary parts.
    pub fn from_parts<U, V>(line: &WeightedLine, description: impl Into<String>, shift: f64, u: U, v: V) -> Self
    where
        U: Fn(f64, f64) -> f64 + Send + Sync + 'static,
        V: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        Self::new(line, description, shift, move |x, y| Complex64::new(u(x, y), v(x, y)))
    }

    pub fn with_partials<P>(mut self, p: P) -> Self
    where
        P: Fn(f64, f64) -> (Complex64, Complex64) + Send + Sync + 'static,
    {
        self.partials = Some(Arc::new(p));
        self
    }

    /// Declares `F(x/t, y/t) = t^d F(x, y)`.
    pub fn with_homogeneity(mut self, d: f64) -> Self {
        self.homogeneity_degree = Some(d);
        self
    }

    pub(crate) fn with_family(mut self, family: FieldFamily) -> Self {
        self.family = family;
        self
    }

    pub fn eval(&self, x: f64, y: f64) -> Complex64 {
        (self.eval)(x, y)
    }

    pub fn u(&self, x: f64, y: f64) -> f64 {
        self.eval(x, y).re
    }

    pub fn v(&self, x: f64, y: f64) -> f64 {
        self.eval(x, y).im
    }

    pub fn has_analytic_partials(&self) -> bool {
        self.partials.is_some()
    }

    /// `(∂_x F, ∂_y F)`: analytic when attached, else Richardson differences.
    pub fn partials(&self, x: f64, y: f64) -> (Complex64, Complex64) {
        match &self.partials {
            Some(p) => p(x, y),
            None => self.numeric_partials(x, y),
        }
    }

    pub fn numeric_partials(&self, x: f64, y: f64) -> (Complex64, Complex64) {
        let fx = finite_difference(|s| self.eval(s, y), x);
        // keep the stencil inside y > 0
        let h = 1e-5 * y.clamp(1e-3, 1.0);
        let g = |s: f64| self.eval(x, y + s);
        let d1 = (g(h) - g(-h)) / (2.0 * h);
        let d2 = (g(0.5 * h) - g(-0.5 * h)) / h;
        (fx, (4.0 * d2 - d1) / 3.0)
    }

    pub fn line(&self) -> &WeightedLine {
        &self.line
    }

    pub fn family(&self) -> &FieldFamily {
        &self.family
    }

    pub fn homogeneity_degree(&self) -> Option<f64> {
        self.homogeneity_degree
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    /// `c F`; analytic partials and homogeneity carry over.
    pub fn scaled(&self, c: Complex64) -> HalfPlaneField {
        let f = self.eval.clone();
        let mut out = HalfPlaneField {
            eval: Arc::new(move |x, y| c * f(x, y)),
            partials: None,
            line: self.line,
            family: FieldFamily::Custom,
            homogeneity_degree: self.homogeneity_degree,
            shift: self.shift,
            description: format!("({c}) {}", self.description),
        };
        if let Some(p) = self.partials.clone() {
            out.partials = Some(Arc::new(move |x, y| {
                let (a, b) = p(x, y);
                (c * a, c * b)
            }));
        }
        out
    }

    /// `(u, v) ↦ (-v, u)`, i.e. `F ↦ iF`.
    pub fn conjugate_swap(&self) -> HalfPlaneField {
        self.scaled(Complex64::new(0.0, 1.0))
    }

    /// `x ↦ F(x, y)` as a profile carrying `∂_x F` when available.
    pub fn section(&self, y: f64) -> Profile {
        let scale = y + self.shift;
        let f = self.eval.clone();
        let mut p = Profile::new(format!("{} at y={y}", self.description), Decay::Algebraic { scale }, move |x| f(x, y))
            .with_feature(0.0, scale);
        // images under averaging operators also vary on scale y near the axis
        if self.shift > 0.0 && y < 0.25 * scale {
            p = p.with_feature(0.0, y);
        }
        if let Some(d) = self.partials.clone() {
            p = p.with_derivative(move |x| d(x, y).0);
        }
        p
    }

    /// `D_x F(x, y)`.
    pub fn dunkl_x(&self, x: f64, y: f64) -> Complex64 {
        let section = match &self.partials {
            Some(_) => self.section(y),
            None => {
                let f = self.eval.clone();
                Profile::new("section", Decay::Unbounded, move |s| f(s, y))
            }
        };
        dunkl_derivative(&section, x, &self.line)
    }
}

/// Points of the half-plane on which residuals are measured.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldGrid {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
}

impl FieldGrid {
    /// 9 × 5: `x ∈ {-4, -3, …, 4}`, `y ∈ {1/4, 1/2, 1, 2, 4}`.
    pub fn standard() -> FieldGrid {
        FieldGrid {
            xs: (0..9).map(|i| -4.0 + i as f64).collect(),
            ys: vec![0.25, 0.5, 1.0, 2.0, 4.0],
        }
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.ys.iter().flat_map(move |&y| self.xs.iter().map(move |&x| (x, y)))
    }
}

impl Default for FieldGrid {
    fn default() -> Self {
        Self::standard()
    }
}

/// `max |D_x u - ∂_y v| + |∂_y u + D_x v|` over the grid.
pub fn cr_residual(field: &HalfPlaneField, grid: &FieldGrid) -> f64 {
    grid.points()
        .map(|(x, y)| {
            let dx = field.dunkl_x(x, y);
            let dy = field.partials(x, y).1;
            // D_x F + i ∂_y F = (D_x u - ∂_y v) + i (∂_y u + D_x v)
            let t = dx + Complex64::new(0.0, 1.0) * dy;
            t.re.abs() + t.im.abs()
        })
        .fold(0.0, nan_max)
}

/// `max |Δ_λ F|` with `Δ_λ = D_x² + ∂_y²`, from second differences of `F`.
///
/// `D_x² f = f'' + 2λ f'/x - λ (f(x) - f(-x)) / x²`, and `(1+2λ) f''(0)` at the origin.
pub fn harmonic_residual(field: &HalfPlaneField, grid: &FieldGrid) -> f64 {
    let lambda = field.line.lambda();
    let laplacian = |x: f64, y: f64, h: f64| {
        let f = |a: f64, b: f64| field.eval(a, b);
        let c = f(x, y);
        let fxx = (f(x + h, y) - 2.0 * c + f(x - h, y)) / (h * h);
        let fyy = (f(x, y + h) - 2.0 * c + f(x, y - h)) / (h * h);
        let dxx = if x.abs() < 1e-8 {
            (1.0 + 2.0 * lambda) * fxx
        } else {
            let fx = (f(x + h, y) - f(x - h, y)) / (2.0 * h);
            fxx + 2.0 * lambda * fx / x - lambda * (c - f(-x, y)) / (x * x)
        };
        dxx + fyy
    };
    grid.points()
        .map(|(x, y)| {
            // one Richardson step on the O(h²) stencil
            let h = 4e-3 * y.min(1.0);
            let coarse = laplacian(x, y, h);
            let fine = laplacian(x, y, 0.5 * h);
            ((4.0 * fine - coarse) / 3.0).norm()
        })
        .fold(0.0, nan_max)
}

/// `max |analytic - numeric|` over the given points, relative to `1 + |analytic|`.
pub fn partials_gap(field: &HalfPlaneField, points: &[(f64, f64)]) -> f64 {
    if !field.has_analytic_partials() {
        return 0.0;
    }
    points
        .iter()
        .map(|&(x, y)| {
            let (ax, ay) = field.partials(x, y);
            let (nx, ny) = field.numeric_partials(x, y);
            ((ax - nx).norm() / (1.0 + ax.norm())).max((ay - ny).norm() / (1.0 + ay.norm()))
        })
        .fold(0.0, nan_max)
}

/// `(F, ∂_x F, ∂_Y F)` for `F = (m_λ/2) (-∂_Y)^m [w^{-λ} w̄^{-λ-1}]`, `w = Y + ix`.
fn cauchy_closed(lambda: f64, m_lambda: f64, m: u32, x: f64, big_y: f64) -> (Complex64, Complex64, Complex64) {
    let w = Complex64::new(big_y, x);
    let a = w.powf(-lambda);
    // w̄^{-λ-1} = conj(w^{-λ-1}) since Re w > 0
    let b = (a / w).conj();
    let (iw, iwb) = (w.inv(), w.conj().inv());
    let i = Complex64::new(0.0, 1.0);
    let m_us = m as usize;
    let mut f = Complex64::new(0.0, 0.0);
    let mut fx = f;
    let mut fy = f;
    let mut binom = 1.0;
    for k in 0..=m_us {
        let kf = k as f64;
        if k > 0 {
            binom *= (m_us - k + 1) as f64 / kf;
        }
        let (s1, s2) = (lambda + kf, lambda + 1.0 + (m_us - k) as f64);
        let coef = binom * pochhammer(lambda, k) * pochhammer(lambda + 1.0, m_us - k);
        let t = a * iw.powu(k as u32) * b * iwb.powu((m_us - k) as u32) * coef;
        f += t;
        fx += t * (-i * s1 * iw + i * s2 * iwb);
        fy += t * (-s1 * iw - s2 * iwb);
    }
    let c = 0.5 * m_lambda;
    (f * c, fx * c, fy * c)
}

fn pochhammer(a: f64, k: usize) -> f64 {
    (0..k).map(|j| a + j as f64).product()
}

/// `c_λ ∫_0^∞ e^{-yξ} φ(ξ) E_λ(ixξ) ξ^{2λ} dξ`, with partials from
/// differentiating under the integral.
pub fn spectral_field(phi: &SpectralDensity, line: &WeightedLine, spec: &QuadratureSpec) -> Result<HalfPlaneField> {
    spec.validate()?;
    let (l, s) = (*line, *spec);
    let value = {
        let phi = phi.clone();
        move |x: f64, y: f64| spectral_integral(&phi, &l, &s, x, y, 0).unwrap_or(NAN)
    };
    let partials = {
        let phi = phi.clone();
        move |x: f64, y: f64| {
            (
                spectral_integral(&phi, &l, &s, x, y, 1).unwrap_or(NAN),
                spectral_integral(&phi, &l, &s, x, y, 2).unwrap_or(NAN),
            )
        }
    };
    let shift = if phi.decay_rate > 0.0 { phi.decay_rate } else { 0.0 };
    Ok(HalfPlaneField::new(line, format!("spectral[{}]", phi.description), shift, value)
        .with_partials(partials)
        .with_family(FieldFamily::Spectral { description: phi.description.clone() }))
}

/// `which`: 0 for `F`, 1 for `∂_x F`, 2 for `∂_y F`.
fn spectral_integral(
    phi: &SpectralDensity,
    line: &WeightedLine,
    spec: &QuadratureSpec,
    x: f64,
    y: f64,
    which: u8,
) -> Result<Complex64> {
    if !(y > 0.0) {
        return Err(Error::Domain(format!("y = {y} must be positive")));
    }
    let lambda = line.lambda();
    let rate = y + phi.decay_rate;
    // the integrand is u^k e^{-u} in u = rate ξ; cut where that has fallen by
    // e^{-F}, i.e. at the root of u = F + k ln u
    let k = 2.0 * lambda + 2.0 + phi.cauchy.map_or(0.0, |(m, _)| m as f64);
    let f = spec.truncation_radius_factor;
    let u = (0..3).fold(f, |u, _| f + k * u.ln());
    let est = halfline_with(
        |xi| {
            let damp = (-y * xi).exp() * phi.eval(xi);
            match which {
                0 => damp * dunkl_kernel(lambda, x * xi),
                1 => damp * xi * dunkl_kernel_derivative(lambda, x * xi),
                _ => -damp * xi * dunkl_kernel(lambda, x * xi),
            }
        },
        2.0 * lambda,
        Decay::Exponential { scale: 1.0 / rate },
        u / (f * rate),
        &[],
        None,
        spec,
    )?;
    Ok(est.value * line.c_lambda())
}

/// The spectral field of `ξ^m e^{-y0 ξ}` in closed form.
pub fn cauchy_field(line: &WeightedLine, y0: f64, m: u32) -> Result<HalfPlaneField> {
    if !(y0 > 0.0 && y0.is_finite()) {
        return Err(Error::Domain(format!("y0 = {y0} must be positive")));
    }
    let (lambda, ml) = (line.lambda(), line.m_lambda());
    Ok(HalfPlaneField::new(line, format!("cauchy(m={m}, y0={y0})"), y0, move |x, y| {
        cauchy_closed(lambda, ml, m, x, y + y0).0
    })
    .with_partials(move |x, y| {
        let (_, fx, fy) = cauchy_closed(lambda, ml, m, x, y + y0);
        (fx, fy)
    })
    .with_family(FieldFamily::Cauchy { y0, m }))
}

/// Smallest `p` (exclusive) for which `F` may enter an `H^p_λ` computation.
pub fn admission_threshold(field: &HalfPlaneField) -> f64 {
    let lambda = field.line.lambda();
    let k = 2.0 * lambda + 1.0;
    let base = 2.0 * lambda / k;
    let decay = match field.family {
        // |F| ~ |x|^{-(2λ+1+m)}
        FieldFamily::Cauchy { m, .. } => k / (k + m as f64),
        // P_y ~ |x|^{-(2λ+2)}; Q_y ~ |x|^{-(2λ+1)}
        FieldFamily::Kernel(KernelField::P) => k / (k + 1.0),
        FieldFamily::Kernel(_) => 1.0,
        _ => base,
    };
    base.max(decay)
}

/// Accepts `(F, p)` when `p` exceeds [`admission_threshold`].
pub fn admit(field: &HalfPlaneField, p: f64) -> Result<()> {
    let threshold = admission_threshold(field);
    if p > threshold {
        Ok(())
    } else {
        Err(Error::NotAdmitted(format!(
            "{} needs p > {threshold} (lambda = {}), got p = {p}",
            field.description,
            field.line.lambda()
        )))
    }
}

/// `P_y(x)`, `Q_y(x)` or `P_y(x) + i Q_y(x)`, homogeneous of degree `2λ+1`.
pub fn homogeneous_kernel_field(line: &WeightedLine, kind: KernelField) -> HalfPlaneField {
    let (lambda, ml) = (line.lambda(), line.m_lambda());
    let e = -lambda - 1.0;
    // (P, Q, ∂xP, ∂yP, ∂xQ, ∂yQ)
    let parts = move |x: f64, y: f64| {
        let d = x * x + y * y;
        let de = d.powf(e);
        let de1 = de / d;
        let p = ml * y * de;
        let q = ml * x * de;
        let px = 2.0 * e * ml * y * x * de1;
        let py = ml * de + 2.0 * e * ml * y * y * de1;
        let qx = ml * de + 2.0 * e * ml * x * x * de1;
        let qy = 2.0 * e * ml * x * y * de1;
        [p, q, px, py, qx, qy]
    };
    let c = |a: f64, b: f64| Complex64::new(a, b);
    let field = match kind {
        KernelField::P => HalfPlaneField::new(line, "P_y(x)", 0.0, move |x, y| c(parts(x, y)[0], 0.0))
            .with_partials(move |x, y| {
                let v = parts(x, y);
                (c(v[2], 0.0), c(v[3], 0.0))
            }),
        KernelField::Q => HalfPlaneField::new(line, "Q_y(x)", 0.0, move |x, y| c(parts(x, y)[1], 0.0))
            .with_partials(move |x, y| {
                let v = parts(x, y);
                (c(v[4], 0.0), c(v[5], 0.0))
            }),
        KernelField::Cauchy => {
            HalfPlaneField::new(line, "P_y(x) + i Q_y(x)", 0.0, move |x, y| {
                let v = parts(x, y);
                c(v[0], v[1])
            })
            .with_partials(move |x, y| {
                let v = parts(x, y);
                (c(v[2], v[4]), c(v[3], v[5]))
            })
        }
    };
    field.with_homogeneity(2.0 * lambda + 1.0).with_family(FieldFamily::Kernel(kind))
}

/// Log-spaced heights over which the section norms are maximized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct YGrid {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
    pub golden_iterations: usize,
}

impl Default for YGrid {
    fn default() -> Self {
        YGrid { lo: 1e-3, hi: 1e2, points: 24, golden_iterations: 3 }
    }
}

impl YGrid {
    pub fn with_points(points: usize) -> YGrid {
        YGrid { points, ..YGrid::default() }
    }

    pub fn heights(&self) -> Vec<f64> {
        let n = self.points.max(2);
        let (a, b) = (self.lo.ln(), self.hi.ln());
        let mut ys: Vec<f64> = (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect();
        ys[0] = self.lo;
        ys[n - 1] = self.hi;
        ys
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuasinormReport {
    pub p: f64,
    pub value: f64,
    pub argmax_y: f64,
    /// The section norms still grow at an end of the y-grid.
    pub possibly_infinite: bool,
    pub sections: Vec<(f64, f64)>,
}

/// Logarithmic slope of the section norm at a grid end above which the
/// supremum is reported as possibly infinite.
const GROWTH_FLAG: f64 = 0.05;

/// `‖F(·, y)‖_{L^p_λ}` of the section at height `y`.
pub fn section_norm(field: &HalfPlaneField, p: f64, y: f64, spec: &QuadratureSpec) -> Result<f64> {
    let norm = NormSpec::new(p)?;
    let v = lp_quasinorm(&field.section(y), &norm, &field.line, spec)?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Divergent(format!("section norm of {} at y = {y} is {v}", field.description)))
    }
}

/// `sup_y ‖F(·, y)‖_{L^p_λ}` over a log grid, refined by golden-section
/// search around the grid maximum.
pub fn hardy_quasinorm(field: &HalfPlaneField, p: f64, spec: &QuadratureSpec, grid: &YGrid) -> Result<QuasinormReport> {
    let lambda = field.line.lambda();
    if !(p > 2.0 * lambda / (2.0 * lambda + 1.0)) {
        return Err(Error::NotAdmitted(format!("p = {p} must exceed 2λ/(2λ+1) for λ = {lambda}")));
    }
    let ys = grid.heights();
    let mut sections = Vec::with_capacity(ys.len() + grid.golden_iterations);
    for &y in &ys {
        sections.push((y, section_norm(field, p, y, spec)?));
    }
    let (imax, _) = sections
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, &(_, v))| if v > acc.1 { (i, v) } else { acc });
    let n = sections.len();
    // growth rate of log-norm towards the end point i, per unit of |log y|
    let slope = |i: usize, j: usize| (sections[i].1 / sections[j].1).ln() / (sections[i].0 / sections[j].0).ln().abs();
    let possibly_infinite = (imax == 0 && slope(0, 1) > GROWTH_FLAG) || (imax == n - 1 && slope(n - 1, n - 2) > GROWTH_FLAG);

    // golden-section search in log y over the bracket around the maximum
    let lo = sections[imax.saturating_sub(1)].0.ln();
    let hi = sections[(imax + 1).min(n - 1)].0.ln();
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (lo, hi);
    let mut c1 = b - g * (b - a);
    let mut c2 = a + g * (b - a);
    let mut f1 = f64::NAN;
    let mut f2 = f64::NAN;
    for it in 0..grid.golden_iterations {
        if f1.is_nan() {
            f1 = section_norm(field, p, c1.exp(), spec)?;
            sections.push((c1.exp(), f1));
        }
        if f2.is_nan() {
            f2 = section_norm(field, p, c2.exp(), spec)?;
            sections.push((c2.exp(), f2));
        }
        if it + 1 == grid.golden_iterations {
            break;
        }
        if f1 >= f2 {
            b = c2;
            c2 = c1;
            f2 = f1;
            c1 = b - g * (b - a);
            f1 = f64::NAN;
        } else {
            a = c1;
            c1 = c2;
            f1 = f2;
            c2 = a + g * (b - a);
            f2 = f64::NAN;
        }
    }
    let (argmax_y, value) = sections
        .iter()
        .fold((f64::NAN, f64::NEG_INFINITY), |acc, &(y, v)| if v > acc.1 { (y, v) } else { acc });
    Ok(QuasinormReport { p, value, argmax_y, possibly_infinite, sections })
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::function::gamma::gamma;

    #[test]
    fn cauchy_zero_is_half_poisson_pair() {
        let line = WeightedLine::new(0.7).unwrap();
        let f = cauchy_field(&line, 1.0, 0).unwrap();
        let k = homogeneous_kernel_field(&line, KernelField::Cauchy);
        for &(x, y) in &[(0.3, 0.2), (-2.0, 1.0), (5.0, 0.01)] {
            let a = f.eval(x, y);
            let b = k.eval(x, y + 1.0) * 0.5;
            assert!((a - b).norm() < 1e-14 * b.norm(), "{a} vs {b}");
        }
    }

    #[test]
    fn closed_form_matches_spectral_quadrature() {
        let spec = QuadratureSpec::default();
        for &lambda in &[0.3, 1.0] {
            let line = WeightedLine::new(lambda).unwrap();
            for m in 0..3 {
                let closed = cauchy_field(&line, 1.0, m).unwrap();
                let quad = spectral_field(&SpectralDensity::cauchy(m, 1.0).unwrap(), &line, &spec).unwrap();
                for &(x, y) in &[(0.0, 0.5), (1.5, 0.25), (-3.0, 2.0)] {
                    let (a, b) = (closed.eval(x, y), quad.eval(x, y));
                    assert!((a - b).norm() < 1e-9 * (1.0 + a.norm()), "m={m} ({x},{y}): {a} vs {b}");
                    let (ca, qa) = (closed.partials(x, y), quad.partials(x, y));
                    assert!((ca.0 - qa.0).norm() < 1e-9 && (ca.1 - qa.1).norm() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn closed_form_partials_match_differences() {
        let line = WeightedLine::new(0.5).unwrap();
        let f = cauchy_field(&line, 0.5, 2).unwrap();
        let pts = [(0.1, 0.3), (-1.0, 2.0), (3.0, 0.05)];
        assert!(partials_gap(&f, &pts) < 1e-7);
    }

    #[test]
    fn kernel_fields_are_homogeneous() {
        let line = WeightedLine::new(0.5).unwrap();
        for kind in [KernelField::P, KernelField::Q, KernelField::Cauchy] {
            let f = homogeneous_kernel_field(&line, kind);
            let d = f.homogeneity_degree().unwrap();
            for &(x, y) in &[(0.4, 0.7), (-3.0, 0.1)] {
                let t: f64 = 0.5;
                let lhs = f.eval(x / t, y / t);
                let rhs = f.eval(x, y) * t.powf(d);
                assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm());
            }
        }
    }

    #[test]
    fn residuals_separate_analytic_from_broken_fields() {
        let line = WeightedLine::new(0.5).unwrap();
        let grid = FieldGrid::standard();
        let pair = homogeneous_kernel_field(&line, KernelField::Cauchy);
        assert!(cr_residual(&pair, &grid) < 1e-10);
        assert!(harmonic_residual(&pair, &grid) < 1e-4);
        let p = homogeneous_kernel_field(&line, KernelField::P);
        let broken = HalfPlaneField::new(&line, "(P, P)", 0.0, move |x, y| {
            let v = p.u(x, y);
            Complex64::new(v, v)
        });
        assert!(cr_residual(&broken, &grid) > 1e-2);
    }

    #[test]
    fn quasinorm_of_cauchy_field_matches_plancherel() {
        let line = WeightedLine::new(0.5).unwrap();
        let spec = QuadratureSpec::default();
        let f = cauchy_field(&line, 1.0, 0).unwrap();
        let rep = hardy_quasinorm(&f, 2.0, &spec, &YGrid::default()).unwrap();
        assert_eq!(rep.argmax_y, 1e-3);
        assert!(!rep.possibly_infinite);
        // ‖F(·,y)‖² = c_λ Γ(2λ+1) / (2(1+y))^{2λ+1}
        let big_y: f64 = 1.0 + 1e-3;
        let exact = (line.c_lambda() * gamma(2.0) / (2.0 * big_y).powi(2)).sqrt();
        assert!((rep.value - exact).abs() < 1e-4 * exact, "{} vs {exact}", rep.value);
    }

    #[test]
    fn admission_rules() {
        let line = WeightedLine::new(0.5).unwrap();
        assert!(admit(&cauchy_field(&line, 1.0, 0).unwrap(), 2.0).is_ok());
        assert!(admit(&cauchy_field(&line, 1.0, 0).unwrap(), 0.9).is_err());
        assert!(admit(&cauchy_field(&line, 1.0, 2).unwrap(), 0.8).is_ok());
    }
}
