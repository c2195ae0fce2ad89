//! The Cesàro operator `(C_α F)(x, y) = ∫_0^1 t^{-1} F(x/t, y/t) φ_α(t) dt`,
//! `φ_α(t) = α (1-t)^{α-1}`, on half-plane fields and on vector fields over
//! `ℝ^N × (0, ∞)`, its spectral form `B_α`, and the bound constants.

use std::fmt;
use std::ops::{Add, Mul};
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use statrs::function::beta::beta;

use crate::dunkl::WeightedLine;
use crate::error::{Error, Result};
use crate::hardy::{admit, cr_residual, hardy_quasinorm, nan_max, FieldGrid, HalfPlaneField, SpectralDensity, YGrid};
use crate::quadrature::{cached_jacobi_rule, legendre, JacobiRule, QuadratureSpec};

/// Geometric panels `[2^{-k-1}, 2^{-k}]` on `(0, 1/2]`, down to about `1e-12`.
const GRADED_PANELS: usize = 40;
const GRADED_ORDER: usize = 10;
/// Components of a vector field are capped at `N + 1 <= 4`.
pub const MAX_AXES: usize = 3;

/// `φ_α` together with the Gauss–Jacobi rule for `(1-t)^{α-1}` on `[1/2, 1]`.
#[derive(Debug, Clone)]
pub struct CesaroWeight {
    alpha: f64,
    rule: Arc<JacobiRule>,
}

impl CesaroWeight {
    pub fn new(alpha: f64, spec: &QuadratureSpec) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::Domain(format!("alpha = {alpha} must be positive")));
        }
        Ok(CesaroWeight { alpha, rule: cached_jacobi_rule(alpha - 1.0, 0.0, spec.jacobi_order)? })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn rule(&self) -> &JacobiRule {
        &self.rule
    }

    pub fn density(&self, t: f64) -> f64 {
        self.alpha * (1.0 - t).powf(self.alpha - 1.0)
    }

    /// `∫_a^b φ_α = (1-a)^α - (1-b)^α`.
    pub fn block_mass(&self, a: f64, b: f64) -> f64 {
        (1.0 - a).powf(self.alpha) - (1.0 - b).powf(self.alpha)
    }

    /// `∫_0^1 φ_α` by the same composite rule the operator uses.
    pub fn mass(&self) -> f64 {
        self.average(|_| 1.0).unwrap_or(f64::NAN)
    }

    /// `∫_0^1 g(t) φ_α(t) dt`.
    pub fn average<T, G>(&self, g: G) -> Result<T>
    where
        T: Accumulate,
        G: Fn(f64) -> T,
    {
        let mut total = self.rule.integrate_on(0.5, 1.0, &g) * self.alpha;
        let gl = legendre(GRADED_ORDER);
        let mut quiet = 0;
        let mut last = [0.0f64; 2];
        let mut last_c = T::default();
        let mut hi = 0.5;
        for _ in 0..GRADED_PANELS {
            let lo = 0.5 * hi;
            let c: T = gl.integrate_on(lo, hi, |t| g(t) * self.density(t));
            total = total + c;
            last = [last[1], c.size()];
            last_c = c;
            hi = lo;
            if c.size().is_nan() {
                return Err(Error::Domain("integrand is not finite".into()));
            }
            if c.size() <= 1e-16 * total.size() {
                quiet += 1;
                if quiet == 2 {
                    return Ok(total);
                }
            } else {
                quiet = 0;
            }
        }
        // not yet negligible at the floor: geometric remainder, or divergence
        let ratio = last[1] / last[0];
        if !(ratio < 0.999) {
            return Err(Error::Divergent(format!(
                "t^-1 F(x/t, y/t) does not decay as t -> 0 (panel ratio {ratio})"
            )));
        }
        let remainder = last[1] * ratio / (1.0 - ratio);
        if remainder > 1e-8 * total.size() {
            return Err(Error::Divergent(format!(
                "slowly decaying integrand at t -> 0: remainder {remainder} against {}",
                total.size()
            )));
        }
        Ok(total + last_c * (ratio / (1.0 - ratio)))
    }
}

/// Values that can be summed by the quadrature rules.
pub trait Accumulate: Copy + Default + Add<Output = Self> + Mul<f64, Output = Self> {
    fn size(&self) -> f64;
}

impl Accumulate for f64 {
    fn size(&self) -> f64 {
        self.abs()
    }
}

impl Accumulate for Complex64 {
    fn size(&self) -> f64 {
        self.norm()
    }
}

/// Up to four real components.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Components(pub [f64; MAX_AXES + 1]);

impl Add for Components {
    type Output = Components;
    fn add(self, o: Components) -> Components {
        let mut r = self.0;
        r.iter_mut().zip(o.0).for_each(|(a, b)| *a += b);
        Components(r)
    }
}

impl Mul<f64> for Components {
    type Output = Components;
    fn mul(self, s: f64) -> Components {
        Components(self.0.map(|a| a * s))
    }
}

impl Accumulate for Components {
    fn size(&self) -> f64 {
        self.0.iter().map(|a| a * a).sum::<f64>().sqrt()
    }
}

/// `(C_α F)(x, y)`.
pub fn cesaro_scalar(field: &HalfPlaneField, w: &CesaroWeight, x: f64, y: f64) -> Result<Complex64> {
    if !(y > 0.0) {
        return Err(Error::Domain(format!("y = {y} must be positive")));
    }
    w.average(|t| field.eval(x / t, y / t) / t)
}

/// `C_α F` as a field. Partials of `F` are carried through the average
/// (`∂(C_α F) = C_α[t^{-1} ∂F]`); evaluation failures become NaN.
pub fn cesaro_field(field: &HalfPlaneField, w: &CesaroWeight) -> HalfPlaneField {
    let nan = Complex64::new(f64::NAN, f64::NAN);
    let (f, wv) = (field.clone(), w.clone());
    let mut out = HalfPlaneField::new(
        field.line(),
        format!("C_{}[{}]", w.alpha, field.description()),
        field.shift(),
        move |x, y| cesaro_scalar(&f, &wv, x, y).unwrap_or(nan),
    );
    if field.has_analytic_partials() {
        let (f, wv) = (field.clone(), w.clone());
        out = out.with_partials(move |x, y| {
            let fx = wv.average(|t| f.partials(x / t, y / t).0 / (t * t)).unwrap_or(nan);
            let fy = wv.average(|t| f.partials(x / t, y / t).1 / (t * t)).unwrap_or(nan);
            (fx, fy)
        });
    }
    if let Some(d) = field.homogeneity_degree() {
        out = out.with_homogeneity(d);
    }
    out
}

/// `(B_α φ)(ξ) = ∫_0^1 φ(tξ) φ_α(t) t^{2λ} dt`, `ξ >= 0`.
pub fn cesaro_multiplier(
    phi: &SpectralDensity,
    w: &CesaroWeight,
    line: &WeightedLine,
    xi: f64,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    if !(xi >= 0.0) {
        return Err(Error::Domain(format!("xi = {xi} must be nonnegative")));
    }
    let rule = cached_jacobi_rule(w.alpha - 1.0, 2.0 * line.lambda(), spec.jacobi_order)?;
    Ok(rule.integrate_on(0.0, 1.0, |t| phi.eval(t * xi)) * w.alpha)
}

/// `B_α φ` as a density. It keeps only algebraic decay, so its decay rate is zero.
pub fn multiplied_density(
    phi: &SpectralDensity,
    w: &CesaroWeight,
    line: &WeightedLine,
    spec: &QuadratureSpec,
) -> Result<SpectralDensity> {
    let rule = cached_jacobi_rule(w.alpha - 1.0, 2.0 * line.lambda(), spec.jacobi_order)?;
    let (phi2, alpha) = (phi.clone(), w.alpha);
    SpectralDensity::new(format!("B_{alpha}[{}]", phi.description()), 0.0, move |xi| {
        rule.integrate_on(0.0, 1.0, |t| phi2.eval(t * xi)) * alpha
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// `α B(β/p, α)`, valid for `p >= 1`.
    ExactBeta,
    /// `1/(2^β - 1) + 1/(2^{pα} - 1)`; the absolute prefactor is left unspecified.
    SeriesFlagged,
    None,
}

impl BoundKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            BoundKind::ExactBeta => "exact_beta",
            BoundKind::SeriesFlagged => "series_flagged",
            BoundKind::None => "none",
        }
    }
}

/// The measure `Π |x_i|^{2λ_i} dx_i` on `ℝ^N`, with `β = N + Σ 2λ_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductWeight {
    lambdas: Vec<f64>,
    beta: f64,
}

impl ProductWeight {
    pub fn new(lambdas: &[f64]) -> Result<Self> {
        if lambdas.is_empty() || lambdas.len() > MAX_AXES {
            return Err(Error::Domain(format!("need 1 <= N <= {MAX_AXES}, got N = {}", lambdas.len())));
        }
        if let Some(l) = lambdas.iter().find(|l| !(**l > 0.0 && l.is_finite())) {
            return Err(Error::Domain(format!("lambda = {l} must be positive")));
        }
        let beta = lambdas.len() as f64 + lambdas.iter().map(|l| 2.0 * l).sum::<f64>();
        Ok(ProductWeight { lambdas: lambdas.to_vec(), beta })
    }

    pub fn dimension(&self) -> usize {
        self.lambdas.len()
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub p: f64,
    pub alpha: f64,
    pub beta: f64,
    pub value: f64,
    pub kind: BoundKind,
    /// Set when `value` is only the series factor of a bound `C · value`.
    pub prefactor_unspecified: bool,
}

/// The norm bound for `C_α`: `α B(β/p, α)` when `p >= 1`, the dyadic series
/// factor when `p < 1`.
pub fn lp_bound_constant(p: f64, alpha: f64, beta_exp: f64) -> Result<BoundReport> {
    if !(p > 0.0 && alpha > 0.0 && beta_exp > 0.0) {
        return Err(Error::Domain(format!("need p, alpha, beta > 0 (got {p}, {alpha}, {beta_exp})")));
    }
    let (value, kind) = if p >= 1.0 {
        (alpha * beta(beta_exp / p, alpha), BoundKind::ExactBeta)
    } else {
        (1.0 / (2f64.powf(beta_exp) - 1.0) + 1.0 / (2f64.powf(p * alpha) - 1.0), BoundKind::SeriesFlagged)
    };
    Ok(BoundReport { p, alpha, beta: beta_exp, value, kind, prefactor_unspecified: kind == BoundKind::SeriesFlagged })
}

/// [`lp_bound_constant`] for a product weight.
pub fn lp_bound_for(p: f64, alpha: f64, weight: &ProductWeight) -> Result<BoundReport> {
    lp_bound_constant(p, alpha, weight.beta)
}

/// `max` of `g` over 8 Chebyshev–Lobatto points of `[a, b]`.
fn block_sup<G: Fn(f64) -> f64>(a: f64, b: f64, g: G) -> f64 {
    (0..8)
        .map(|j| {
            let c = (std::f64::consts::PI * j as f64 / 7.0).cos();
            g(0.5 * (a + b) + 0.5 * (b - a) * c)
        })
        .fold(0.0, nan_max)
}

/// Upper bound for `|C_α F(x, y)|^p`, `0 < p <= 1`: the sum over the dyadic
/// blocks `[2^{k-1}, 2^k]` and `[1-2^k, 1-2^{k-1}]`, `k <= -1`, of
/// `(sup_block |t^{-1} F(x/t, y/t)| · ∫_block φ_α)^p`.
pub fn dyadic_majorant(field: &HalfPlaneField, w: &CesaroWeight, p: f64, x: f64, y: f64) -> Result<f64> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::Domain(format!("p = {p} must lie in (0, 1]")));
    }
    let g = |t: f64| (field.eval(x / t, y / t) / t).norm();
    let mut total = 0.0;
    let mut near_zero_done = false;
    let mut near_one_done = false;
    for k in 1..200 {
        let (hi, lo) = (0.5f64.powi(k), 0.5f64.powi(k + 1));
        if !near_zero_done {
            let c = (block_sup(lo, hi, g) * w.block_mass(lo, hi)).powf(p);
            total += c;
            near_zero_done = c < 1e-14 * total || lo < 1e-300;
        }
        if !near_one_done {
            let (a, b) = (1.0 - hi, 1.0 - lo);
            let c = (block_sup(a, b, g) * w.block_mass(a, b)).powf(p);
            total += c;
            // 1 - 2^{-k} rounds to 1 near k = 53
            near_one_done = c < 1e-14 * total || b >= 1.0;
        }
        if total.is_nan() {
            return Err(Error::Domain("field is not finite on a dyadic block".into()));
        }
        if near_zero_done && near_one_done {
            break;
        }
    }
    Ok(total)
}

/// Outcome of one `‖C_α F‖ / ‖F‖` measurement. Divergences are recorded, not raised.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    pub lambda: f64,
    pub alpha: f64,
    pub p: f64,
    pub field: String,
    pub norm_field: f64,
    pub norm_image: f64,
    pub ratio: f64,
    pub possibly_infinite: bool,
    pub cr_residual_field: f64,
    pub cr_residual_image: f64,
    pub error: Option<String>,
}

/// `hardy_quasinorm(C_α F) / hardy_quasinorm(F)`, with the λ-CR residuals of both.
pub fn operator_ratio(
    field: &HalfPlaneField,
    w: &CesaroWeight,
    p: f64,
    spec: &QuadratureSpec,
    ygrid: &YGrid,
) -> Result<RatioReport> {
    admit(field, p)?;
    let image = cesaro_field(field, w);
    let grid = FieldGrid::standard();
    let mut report = RatioReport {
        lambda: field.line().lambda(),
        alpha: w.alpha,
        p,
        field: field.description().to_string(),
        norm_field: f64::NAN,
        norm_image: f64::NAN,
        ratio: f64::NAN,
        possibly_infinite: false,
        cr_residual_field: cr_residual(field, &grid),
        cr_residual_image: cr_residual(&image, &grid),
        error: None,
    };
    let (nf, ni) = match (hardy_quasinorm(field, p, spec, ygrid), hardy_quasinorm(&image, p, spec, ygrid)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => {
            report.error = Some(e.to_string());
            return Ok(report);
        }
    };
    report.norm_field = nf.value;
    report.norm_image = ni.value;
    report.ratio = ni.value / nf.value;
    report.possibly_infinite = nf.possibly_infinite || ni.possibly_infinite;
    Ok(report)
}

pub type VectorFn = Arc<dyn Fn(&[f64], f64) -> Components + Send + Sync>;

/// `f = (u_0, …, u_N)` on `ℝ^N × (0, ∞)` with the product weight. Sections at
/// height `y` are assumed to decay on the scale `scale.0 + scale.1 · y`.
#[derive(Clone)]
pub struct VectorField {
    eval: VectorFn,
    weight: ProductWeight,
    scale: (f64, f64),
    description: String,
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("VectorField")
            .field("description", &self.description)
            .field("weight", &self.weight)
            .field("scale", &self.scale)
            .finish()
    }
}

impl VectorField {
    pub fn new<F>(weight: &ProductWeight, description: impl Into<String>, scale: (f64, f64), f: F) -> Self
    where
        F: Fn(&[f64], f64) -> Components + Send + Sync + 'static,
    {
        VectorField { eval: Arc::new(f), weight: weight.clone(), scale, description: description.into() }
    }

    /// `u_0 = (1+y)^{-β} G`, `u_j = (1+y)^{-β} (x_j/(1+y)) G` with
    /// `G = exp(-|x|²/(1+y)²)`; sections are nonincreasing in `y` for every `p >= 1`.
    pub fn gaussian_family(weight: &ProductWeight) -> VectorField {
        let beta = weight.beta;
        let n = weight.dimension();
        VectorField::new(weight, format!("gaussian family N={n}"), (1.0, 1.0), move |x, y| {
            let s = 1.0 + y;
            let r2: f64 = x.iter().map(|v| v * v).sum::<f64>() / (s * s);
            let amp = s.powf(-beta) * (-r2).exp();
            let mut c = [0.0; MAX_AXES + 1];
            c[0] = amp;
            for j in 0..n {
                c[j + 1] = amp * x[j] / s * (1.0 + 0.5 * j as f64);
            }
            Components(c)
        })
    }

    pub fn weight(&self) -> &ProductWeight {
        &self.weight
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn components(&self) -> usize {
        self.weight.dimension() + 1
    }

    pub fn eval(&self, x: &[f64], y: f64) -> Components {
        (self.eval)(x, y)
    }

    /// `|f(x, y)|`.
    pub fn magnitude(&self, x: &[f64], y: f64) -> f64 {
        self.eval(x, y).size()
    }

    pub fn scale_at(&self, y: f64) -> f64 {
        self.scale.0 + self.scale.1 * y
    }
}

fn check_point(f: &VectorField, x: &[f64], y: f64) -> Result<()> {
    if x.len() != f.weight.dimension() {
        return Err(Error::Domain(format!("point has {} coordinates, field has N = {}", x.len(), f.weight.dimension())));
    }
    if !(y > 0.0) {
        return Err(Error::Domain(format!("y = {y} must be positive")));
    }
    Ok(())
}

/// Componentwise `C_α f` at `(x, y)`.
pub fn cesaro_vector(f: &VectorField, w: &CesaroWeight, x: &[f64], y: f64) -> Result<Vec<f64>> {
    check_point(f, x, y)?;
    let c = w.average(|t| {
        let mut scaled = [0.0; MAX_AXES];
        for (s, v) in scaled.iter_mut().zip(x) {
            *s = v / t;
        }
        f.eval(&scaled[..x.len()], y / t) * (1.0 / t)
    })?;
    Ok(c.0[..f.components()].to_vec())
}

/// `(C_α |f|)(x, y)`, the scalar average of the magnitude.
pub fn cesaro_magnitude(f: &VectorField, w: &CesaroWeight, x: &[f64], y: f64) -> Result<f64> {
    check_point(f, x, y)?;
    w.average(|t| {
        let mut scaled = [0.0; MAX_AXES];
        for (s, v) in scaled.iter_mut().zip(x) {
            *s = v / t;
        }
        f.magnitude(&scaled[..x.len()], y / t) / t
    })
}

/// `C_α f` as a vector field; failures become NaN.
pub fn cesaro_vector_field(f: &VectorField, w: &CesaroWeight) -> VectorField {
    let (g, wv) = (f.clone(), w.clone());
    VectorField::new(&f.weight, format!("C_{}[{}]", w.alpha, f.description), f.scale, move |x, y| {
        match cesaro_vector(&g, &wv, x, y) {
            Ok(v) => {
                let mut c = [0.0; MAX_AXES + 1];
                c[..v.len()].copy_from_slice(&v);
                Components(c)
            }
            Err(_) => Components([f64::NAN; MAX_AXES + 1]),
        }
    })
}

/// Tensor-product rule settings for [`vector_lp_norm`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorNormSpec {
    /// Gauss points per panel on each axis.
    pub panel_order: usize,
    /// Per-axis truncation radius, in multiples of the section scale.
    pub radius_factor: f64,
    pub ygrid: YGrid,
}

impl Default for VectorNormSpec {
    fn default() -> Self {
        VectorNormSpec {
            panel_order: 12,
            radius_factor: 20.0,
            ygrid: YGrid { lo: 1e-3, hi: 1e2, points: 12, golden_iterations: 0 },
        }
    }
}

/// Nodes and weights on `[0, R]` for `x^{2λ} dx`: a Jacobi panel on `[0, s]`
/// and Legendre panels on `[s, 2s], [2s, 4s], …` up to `R`.
fn axis_rule(lambda: f64, s: f64, factor: f64, order: usize) -> Result<Vec<(f64, f64)>> {
    let mut out = Vec::new();
    let first = cached_jacobi_rule(0.0, 2.0 * lambda, order + 4)?;
    let half = 0.5 * s;
    let sc = half.powf(2.0 * lambda + 1.0);
    for (&t, &wt) in first.nodes().iter().zip(first.weights()) {
        out.push((half * (1.0 + t), wt * sc));
    }
    let gl = legendre(order);
    let radius = factor * s;
    let mut lo = s;
    while lo < radius {
        let hi = (2.0 * lo).min(radius);
        let (m, h) = (0.5 * (lo + hi), 0.5 * (hi - lo));
        for (&t, &wt) in gl.nodes().iter().zip(gl.weights()) {
            let x = m + h * t;
            out.push((x, wt * h * x.powf(2.0 * lambda)));
        }
        lo = hi;
    }
    Ok(out)
}

/// `(∫_{ℝ^N} |f(x, y)|^p dμ(x))^{1/p}` at one height.
pub fn vector_section_norm(f: &VectorField, p: f64, y: f64, spec: &VectorNormSpec) -> Result<f64> {
    if !(p > 0.0) {
        return Err(Error::Domain(format!("p = {p} must be positive")));
    }
    let n = f.weight.dimension();
    let s = f.scale_at(y);
    let rules = f
        .weight
        .lambdas
        .iter()
        .map(|&l| axis_rule(l, s, spec.radius_factor, spec.panel_order))
        .collect::<Result<Vec<_>>>()?;
    let mut idx = vec![0usize; n];
    let mut x = vec![0.0; n];
    let mut total = 0.0;
    'outer: loop {
        let mut wt = 1.0;
        for a in 0..n {
            let (xa, wa) = rules[a][idx[a]];
            x[a] = xa;
            wt *= wa;
        }
        // fold the 2^N sign patterns
        for signs in 0..(1usize << n) {
            let pt: Vec<f64> = (0..n).map(|a| if signs >> a & 1 == 1 { -x[a] } else { x[a] }).collect();
            total += wt * f.magnitude(&pt, y).powf(p);
        }
        for a in 0..n {
            idx[a] += 1;
            if idx[a] < rules[a].len() {
                continue 'outer;
            }
            idx[a] = 0;
        }
        break;
    }
    if !total.is_finite() {
        return Err(Error::Divergent(format!("section integral of {} at y = {y} is {total}", f.description)));
    }
    Ok(total.powf(1.0 / p))
}

/// `sup_y` of [`vector_section_norm`] over the grid of `spec`.
pub fn vector_lp_norm(f: &VectorField, p: f64, spec: &VectorNormSpec) -> Result<f64> {
    spec.ygrid
        .heights()
        .iter()
        .map(|&y| vector_section_norm(f, p, y, spec))
        .try_fold(0.0, |acc, v| v.map(|v| nan_max(acc, v)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hardy::{cauchy_field, homogeneous_kernel_field, KernelField};

    #[test]
    fn weight_is_a_probability_density() {
        let spec = QuadratureSpec::default();
        for &a in &[0.5, 1.0, 2.0, 3.5] {
            let w = CesaroWeight::new(a, &spec).unwrap();
            assert!((w.mass() - 1.0).abs() < 1e-12, "alpha={a}: {}", w.mass());
        }
    }

    #[test]
    fn homogeneous_field_spot_values() {
        let spec = QuadratureSpec::default();
        let line = WeightedLine::new(0.5).unwrap();
        let f = homogeneous_kernel_field(&line, KernelField::P);
        for &(a, r) in &[(1.0, 0.5), (2.0, 1.0 / 3.0)] {
            let w = CesaroWeight::new(a, &spec).unwrap();
            for &(x, y) in &[(0.3, 0.5), (-2.0, 0.1), (0.0, 3.0)] {
                let c = cesaro_scalar(&f, &w, x, y).unwrap();
                assert!((c.re / f.u(x, y) - r).abs() < 1e-12, "alpha={a}: {}", c.re / f.u(x, y));
            }
        }
    }

    #[test]
    fn non_decaying_field_is_divergent() {
        let spec = QuadratureSpec::default();
        let line = WeightedLine::new(0.5).unwrap();
        let w = CesaroWeight::new(1.0, &spec).unwrap();
        let flat = HalfPlaneField::new(&line, "1", 0.0, |_, _| Complex64::new(1.0, 0.0));
        assert!(matches!(cesaro_scalar(&flat, &w, 1.0, 1.0), Err(Error::Divergent(_))));
    }

    #[test]
    fn bound_constants() {
        let b = lp_bound_constant(2.0, 1.0, 2.0).unwrap();
        assert!((b.value - 1.0).abs() < 1e-14 && b.kind == BoundKind::ExactBeta);
        assert!((lp_bound_constant(1.0, 1.0, 2.0).unwrap().value - 0.5).abs() < 1e-14);
        let s = lp_bound_constant(0.9, 1.0, 2.0).unwrap();
        assert!((s.value - (1.0 / 3.0 + 1.0 / (2f64.powf(0.9) - 1.0))).abs() < 1e-14);
        assert!(s.prefactor_unspecified);
    }

    #[test]
    fn multiplier_at_origin() {
        let spec = QuadratureSpec::default();
        let line = WeightedLine::new(0.5).unwrap();
        let one = SpectralDensity::new("1", 0.0, |_| Complex64::new(1.0, 0.0)).unwrap();
        let w = CesaroWeight::new(2.0, &spec).unwrap();
        let v = cesaro_multiplier(&one, &w, &line, 0.0, &spec).unwrap();
        assert!((v.re - 2.0 * beta(2.0, 2.0)).abs() < 1e-14);
    }

    #[test]
    fn majorant_dominates() {
        let spec = QuadratureSpec::default();
        let line = WeightedLine::new(0.5).unwrap();
        let f = cauchy_field(&line, 1.0, 2).unwrap();
        let w = CesaroWeight::new(1.0, &spec).unwrap();
        for &(x, y) in &[(0.5, 0.5), (-3.0, 0.1), (0.0, 2.0)] {
            let lhs = cesaro_scalar(&f, &w, x, y).unwrap().norm().powf(0.9);
            let rhs = dyadic_majorant(&f, &w, 0.9, x, y).unwrap();
            assert!(lhs <= rhs, "({x},{y}): {lhs} > {rhs}");
        }
    }

    #[test]
    fn vector_field_matches_scalar_route() {
        let spec = QuadratureSpec::default();
        let line = WeightedLine::new(0.5).unwrap();
        let f = cauchy_field(&line, 1.0, 1).unwrap();
        let weight = ProductWeight::new(&[0.5]).unwrap();
        let g = f.clone();
        let vf = VectorField::new(&weight, "(Re F, Im F)", (1.0, 1.0), move |x, y| {
            let v = g.eval(x[0], y);
            Components([v.re, v.im, 0.0, 0.0])
        });
        let w = CesaroWeight::new(1.5, &spec).unwrap();
        let a = cesaro_vector(&vf, &w, &[0.7], 0.4).unwrap();
        let b = cesaro_scalar(&f, &w, 0.7, 0.4).unwrap();
        assert!((a[0] - b.re).abs() < 1e-15 && (a[1] - b.im).abs() < 1e-15);
    }

    #[test]
    fn vector_norm_of_gaussian_is_exact() {
        // ∫ e^{-p x²} |x|^{2λ} dx = Γ(λ+1/2) p^{-λ-1/2}
        let weight = ProductWeight::new(&[0.5]).unwrap();
        let f = VectorField::new(&weight, "gaussian", (1.0, 0.0), |x, _| Components([(-x[0] * x[0]).exp(), 0.0, 0.0, 0.0]));
        let spec = VectorNormSpec::default();
        let v = vector_section_norm(&f, 2.0, 1.0, &spec).unwrap();
        assert!((v * v - 0.5).abs() < 1e-12, "{}", v * v);
    }
}
