//! λ-Poisson and conjugate λ-Poisson kernels and integrals.
//!
//! With `c = 1 - cos θ` the kernels read
//! `c'_λ m_λ ∫_0^2 N(c) D(c)^{-λ-1} (c(2-c))^{λ-1} dc`,
//! `D = y² + (|x|-|t|)² + 2|xt| c`. For small `y` and `|x| ≈ |t|` the factor
//! `D^{-λ-1}` is concentrated in a layer of width `ε = D(0) / 2|xt|` at
//! `c = 0`, so the integral is split into panels graded geometrically away
//! from that endpoint.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dunkl::{bessel_norm_real, dunkl_kernel, dunkl_transform, finite_difference, WeightedLine};
use crate::error::{Error, Result};
use crate::profile::{Decay, Feature, Parity, Profile};
use crate::quadrature::{cached_jacobi_rule, halfline_with, legendre, weighted_line_with, QuadratureSpec};

const SMOOTH_ORDER: usize = 20;
const PANEL_ORDER: usize = 10;
const END_ORDER: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum KernelKind {
    /// `(τ_x P_y)(-t)`
    P,
    /// `(τ_x Q_y)(-t)`
    Q,
}

/// Which partial derivative (in `x` or `y`, with `t` fixed) to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Partial {
    None,
    X,
    Y,
    XX,
    YY,
}

/// A kernel value with its defining point, as emitted by the `field` tables.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoissonKernelPoint {
    pub lambda: f64,
    pub x: f64,
    pub y: f64,
    pub t: f64,
    pub value_p: f64,
    pub value_q: f64,
}

impl PoissonKernelPoint {
    pub fn new(line: &WeightedLine, x: f64, y: f64, t: f64) -> Result<Self> {
        Ok(PoissonKernelPoint {
            lambda: line.lambda(),
            x,
            y,
            t,
            value_p: poisson_kernel(line, x, y, t)?,
            value_q: conjugate_kernel(line, x, y, t)?,
        })
    }
}

/// `∫_0^2 g(c) (c(2-c))^{λ-1} dc` with panels graded towards `c = 0` at scale `eps`.
fn graded_angular<G: Fn(f64) -> f64>(lambda: f64, eps: f64, g: G) -> Result<f64> {
    let a = lambda - 1.0;
    if eps >= 0.5 {
        let rule = cached_jacobi_rule(a, a, SMOOTH_ORDER)?;
        return Ok(rule.integrate_on(0.0, 2.0, g));
    }
    let weight = |c: f64| (c * (2.0 - c)).powf(a);
    // [0, ε] carries c^{λ-1}
    let first = cached_jacobi_rule(0.0, a, END_ORDER)?;
    let mut total = first.integrate_on(0.0, eps, |c| g(c) * (2.0 - c).powf(a));
    let gl = legendre(PANEL_ORDER);
    let mut lo = eps;
    while lo < 1.0 {
        let hi = (2.0 * lo).min(1.0);
        let hi = if hi > 0.75 { 1.0 } else { hi };
        total += gl.integrate_on(lo, hi, |c| g(c) * weight(c));
        lo = hi;
    }
    // [1, 2] carries (2-c)^{λ-1}
    let last = cached_jacobi_rule(a, 0.0, END_ORDER)?;
    total += last.integrate_on(1.0, 2.0, |c| g(c) * c.powf(a));
    Ok(total)
}

/// Derivative of `N · D^e` along one variable, given `N, N', N''` and
/// `D, D', D''` along that variable.
#[inline]
fn chain(e: f64, n: [f64; 3], d: [f64; 3], order: usize) -> f64 {
    let de = d[0].powf(e);
    match order {
        0 => n[0] * de,
        1 => n[1] * de + e * n[0] * de / d[0] * d[1],
        _ => {
            let inv = 1.0 / d[0];
            n[2] * de
                + 2.0 * e * n[1] * de * inv * d[1]
                + e * n[0] * de * inv * ((e - 1.0) * inv * d[1] * d[1] + d[2])
        }
    }
}

/// A kernel or one of its partials, by the graded angular quadrature.
pub fn kernel_partial(
    line: &WeightedLine,
    kind: KernelKind,
    partial: Partial,
    x: f64,
    y: f64,
    t: f64,
) -> Result<f64> {
    if !(y > 0.0) {
        return Err(Error::Domain(format!("y = {y} must be positive")));
    }
    if x == 0.0 && t != 0.0 && matches!(partial, Partial::X | Partial::XX) {
        // sgn(xt) jumps across x = 0 in the integrand; the kernel itself is smooth
        let h = 1e-4 * t.abs().max(y);
        let f = |s: f64| Complex64::new(kernel_partial(line, kind, Partial::None, s, y, t).unwrap_or(f64::NAN), 0.0);
        return Ok(match partial {
            Partial::X => finite_difference(f, 0.0).re,
            _ => (f(h).re - 2.0 * f(0.0).re + f(-h).re) / (h * h),
        });
    }
    let lambda = line.lambda();
    let e = -lambda - 1.0;
    let s = (x * t).signum() * if x * t == 0.0 { 0.0 } else { 1.0 };
    let b = 2.0 * (x * t).abs();
    let d0 = y * y + (x.abs() - t.abs()).powi(2);
    let integrand = |c: f64| {
        let angular = 1.0 + s * (1.0 - c);
        let dd = d0 + b * c;
        let (nv, ord, dv) = match (kind, partial) {
            (_, Partial::None) => {
                let n = if kind == KernelKind::P { y } else { x - t };
                ([n * angular, 0.0, 0.0], 0, [dd, 0.0, 0.0])
            }
            (KernelKind::P, Partial::Y | Partial::YY) => {
                ([y * angular, angular, 0.0], if partial == Partial::Y { 1 } else { 2 }, [dd, 2.0 * y, 2.0])
            }
            (KernelKind::Q, Partial::Y | Partial::YY) => {
                ([(x - t) * angular, 0.0, 0.0], if partial == Partial::Y { 1 } else { 2 }, [dd, 2.0 * y, 2.0])
            }
            (_, Partial::X | Partial::XX) => {
                let dx = 2.0 * x - 2.0 * x.signum() * t.abs() * (1.0 - c);
                let n = if kind == KernelKind::P {
                    [y * angular, 0.0, 0.0]
                } else {
                    [(x - t) * angular, angular, 0.0]
                };
                (n, if partial == Partial::X { 1 } else { 2 }, [dd, dx, 2.0])
            }
        };
        chain(e, nv, dv, ord)
    };
    let pref = line.c_prime() * line.m_lambda();
    if b == 0.0 {
        // the angular integral of (c(2-c))^{λ-1} is 1/c'_λ; the s-term vanishes
        return Ok(line.m_lambda() * integrand(1.0));
    }
    Ok(pref * graded_angular(lambda, d0 / b, integrand)?)
}

/// `(τ_x P_y)(-t)`; equals `m_λ y (y² + x²)^{-λ-1}` at `t = 0`.
pub fn poisson_kernel(line: &WeightedLine, x: f64, y: f64, t: f64) -> Result<f64> {
    kernel_partial(line, KernelKind::P, Partial::None, x, y, t)
}

/// `(τ_x Q_y)(-t)`; equals `m_λ x (y² + x²)^{-λ-1}` at `t = 0`.
pub fn conjugate_kernel(line: &WeightedLine, x: f64, y: f64, t: f64) -> Result<f64> {
    kernel_partial(line, KernelKind::Q, Partial::None, x, y, t)
}

/// The profile `x ↦ P_y(x)`.
pub fn poisson_profile(line: &WeightedLine, y: f64) -> Profile {
    let m = line.m_lambda();
    let e = -line.lambda() - 1.0;
    Profile::real(format!("P_{y}"), Decay::Algebraic { scale: y }, move |x| {
        m * y * (y * y + x * x).powf(e)
    })
    .with_derivative(move |x| Complex64::new(2.0 * e * m * y * x * (y * y + x * x).powf(e - 1.0), 0.0))
    .with_feature(0.0, y)
    .with_parity(Parity::Even)
    .expect("P_y is even")
}

/// The profile `x ↦ Q_y(x)`.
pub fn conjugate_profile(line: &WeightedLine, y: f64) -> Profile {
    let m = line.m_lambda();
    let e = -line.lambda() - 1.0;
    Profile::real(format!("Q_{y}"), Decay::Algebraic { scale: y }, move |x| {
        m * x * (y * y + x * x).powf(e)
    })
    .with_derivative(move |x| {
        let d = y * y + x * x;
        Complex64::new(m * (d.powf(e) + 2.0 * e * x * x * d.powf(e - 1.0)), 0.0)
    })
    .with_feature(0.0, y)
    .with_parity(Parity::Odd)
    .expect("Q_y is odd")
}

fn integral_decay(f: &Profile, x: f64, y: f64, spec: &QuadratureSpec) -> Decay {
    let shift = (x.abs() + y) / spec.truncation_radius_factor;
    match f.decay() {
        Decay::Compact { radius } => Decay::Compact { radius },
        Decay::Exponential { scale } => Decay::Exponential { scale: scale.max(shift) },
        Decay::Algebraic { scale } => Decay::Algebraic { scale: scale.max(y) + shift },
        Decay::Unbounded => Decay::Algebraic { scale: y + shift },
    }
}

fn kernel_integral(
    kind: KernelKind,
    f: &Profile,
    x: f64,
    y: f64,
    line: &WeightedLine,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    if !(y > 0.0) {
        return Err(Error::Domain(format!("y = {y} must be positive")));
    }
    let mut features: Vec<Feature> = f.features().iter().map(|ft| ft.abs_folded()).collect();
    // a peak narrower than the spacing of doubles at |x| cannot be graded
    if y > 1e-12 * x.abs() {
        features.push(Feature { at: x.abs(), width: y });
    }
    let decay = integral_decay(f, x, y, spec);
    // far from the origin the core is wide, so resolve f's own scale separately
    if let (Some(own), Some(wide)) = (f.decay().scale(), decay.scale()) {
        if own < wide {
            features.push(Feature { at: 0.0, width: own });
        }
    }
    let est = weighted_line_with(
        |t| {
            let ft = f.eval(t);
            if ft == Complex64::new(0.0, 0.0) {
                return ft;
            }
            ft * kernel_partial(line, kind, Partial::None, x, y, t).unwrap_or(f64::NAN)
        },
        Parity::None,
        line.lambda(),
        decay,
        &features,
        None,
        spec,
    )?;
    Ok(est.value * line.c_lambda())
}

/// `(Pf)(x, y) = c_λ ∫ f(t) (τ_x P_y)(-t) |t|^{2λ} dt`.
pub fn poisson_integral(
    f: &Profile,
    x: f64,
    y: f64,
    line: &WeightedLine,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    kernel_integral(KernelKind::P, f, x, y, line, spec)
}

/// `(Qf)(x, y) = c_λ ∫ f(t) (τ_x Q_y)(-t) |t|^{2λ} dt`.
pub fn conjugate_integral(
    f: &Profile,
    x: f64,
    y: f64,
    line: &WeightedLine,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    kernel_integral(KernelKind::Q, f, x, y, line, spec)
}

/// The section `x ↦ (Pf)(x, y)` as a profile; failures surface as NaN.
pub fn poisson_section(f: &Profile, y: f64, line: &WeightedLine, spec: &QuadratureSpec) -> Profile {
    let decay = match f.decay() {
        Decay::Compact { radius } => Decay::Algebraic { scale: radius.max(y) },
        Decay::Exponential { scale } => Decay::Algebraic { scale: scale.max(y) },
        other => Decay::Algebraic { scale: other.scale().unwrap_or(y).max(y) },
    };
    let (g, line, spec) = (f.clone(), *line, *spec);
    let p = Profile::new(format!("P[{}](., {y})", f.description()), decay, move |x| {
        poisson_integral(&g, x, y, &line, &spec).unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    })
    .with_feature(0.0, y);
    match f.parity() {
        Parity::None => p,
        parity => p.with_parity(parity).unwrap_or_else(|_| unreachable!("P keeps parity")),
    }
}

/// The section `x ↦ (Pf)(x, y)` through the spectral side, for `f` with the
/// known transform `fhat`. Far out, where the oscillatory spectral integral
/// stops converging, the kernel integral takes over. Metadata comes from `f`.
pub fn spectral_section(f: &Profile, fhat: &Profile, y: f64, line: &WeightedLine, spec: &QuadratureSpec) -> Profile {
    let scale = f.decay().scale().unwrap_or(y).max(y);
    let (g, h, line, spec) = (f.clone(), fhat.clone(), *line, *spec);
    let p = Profile::new(format!("P[{}](., {y}) spectral", f.description()), Decay::Algebraic { scale }, move |x| {
        let far = x.abs() > spec.truncation_radius_factor * scale;
        let near = if far { None } else { spectral_poisson_from_transform(&h, x, y, &line, &spec).ok() };
        near.map(Ok)
            .unwrap_or_else(|| poisson_integral(&g, x, y, &line, &spec))
            .unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    })
    .with_feature(0.0, y);
    match f.parity() {
        Parity::None => p,
        parity => p.with_parity(parity).unwrap_or_else(|_| unreachable!("P keeps parity")),
    }
}

/// `c_λ ∫ e^{-y|ξ|} f̂(ξ) E_λ(ixξ) |ξ|^{2λ} dξ` for a supplied transform `f̂`.
pub fn spectral_poisson_from_transform(
    fhat: &Profile,
    x: f64,
    y: f64,
    line: &WeightedLine,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    if !(y > 0.0) {
        return Err(Error::Domain(format!("y = {y} must be positive")));
    }
    let lambda = line.lambda();
    let decay = fhat.decay().tighter(Decay::Exponential { scale: 1.0 / y });
    let scale = decay.scale().unwrap_or(1.0 / y);
    let features: Vec<Feature> = fhat.features().iter().map(|ft| ft.abs_folded()).collect();
    let k = 2.0 * lambda + 1.0;
    let est = halfline_with(
        |xi| {
            let damp = (-y * xi).exp();
            let z = x * xi;
            let even = bessel_norm_real(lambda - 0.5, z);
            let odd = z / k * bessel_norm_real(lambda + 0.5, z);
            let (hp, hm) = (fhat.eval(xi), fhat.eval(-xi));
            damp * ((hp + hm) * even + (hp - hm) * Complex64::new(0.0, odd))
        },
        2.0 * lambda,
        decay,
        scale,
        &features,
        None,
        spec,
    )?;
    Ok(est.value * line.c_lambda())
}

/// `c_λ ∫ e^{-y|ξ|} (F_λ f)(ξ) E_λ(ixξ) |ξ|^{2λ} dξ`, with the transform
/// computed numerically at every node.
pub fn spectral_poisson(
    f: &Profile,
    x: f64,
    y: f64,
    line: &WeightedLine,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    let (g, l, s) = (f.clone(), *line, *spec);
    let fhat = Profile::new(format!("F[{}]", f.description()), Decay::Unbounded, move |xi| {
        dunkl_transform(&g, &l, xi, &s).unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    });
    spectral_poisson_from_transform(&fhat, x, y, line, spec)
}

/// `c_λ ∫ e^{-y|ξ|} [-i sgn ξ]^{k} E_λ(ixξ) E_λ(-itξ) |ξ|^{2λ} dξ`: the kernels
/// through their spectral representation (`k = 0` for P, `k = 1` for Q).
pub fn spectral_kernel(
    line: &WeightedLine,
    kind: KernelKind,
    x: f64,
    y: f64,
    t: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let lambda = line.lambda();
    let est = halfline_with(
        |xi| {
            let a = dunkl_kernel(lambda, x * xi) * dunkl_kernel(lambda, t * xi).conj();
            let v = match kind {
                KernelKind::P => 2.0 * a.re,
                // -i (a - conj a) = 2 Im a
                KernelKind::Q => 2.0 * a.im,
            };
            Complex64::new((-y * xi).exp() * v, 0.0)
        },
        2.0 * lambda,
        Decay::Exponential { scale: 1.0 / y },
        1.0 / y,
        &[],
        None,
        spec,
    )?;
    Ok(est.value.re * line.c_lambda())
}

/// Evaluation grid for the derivative-ratio estimates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioGrid {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub zs: Vec<f64>,
}

impl Default for RatioGrid {
    /// `x, z` on 16 points of `[-8, 8]`, `y` on 8 log-spaced points of `[1e-2, 10]`.
    fn default() -> Self {
        let lin: Vec<f64> = (0..16).map(|i| -8.0 + 16.0 * i as f64 / 15.0).collect();
        let ys = (0..8).map(|i| 10f64.powf(-2.0 + 3.0 * i as f64 / 7.0)).collect();
        RatioGrid { xs: lin.clone(), ys, zs: lin }
    }
}

impl RatioGrid {
    pub fn scaled(&self, factor: f64) -> RatioGrid {
        let m = |v: &Vec<f64>| v.iter().map(|a| a * factor).collect();
        RatioGrid { xs: m(&self.xs), ys: m(&self.ys), zs: m(&self.zs) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DerivativeOrder {
    FirstX,
    FirstY,
    /// The larger of `|∂_xx|` and `|∂_yy|`.
    Second,
}

/// `max |∂K| (y² + (|x|-|z|)²)^e` over the grid (`e = λ+1` for first
/// derivatives, `λ + 3/2` for second), skipping `x = 0` and the band
/// `||x|-|z|| <= 1e-3 y`.
pub fn kernel_derivative_ratio(
    line: &WeightedLine,
    which: KernelKind,
    order: DerivativeOrder,
    grid: &RatioGrid,
) -> Result<f64> {
    let lambda = line.lambda();
    let e = match order {
        DerivativeOrder::Second => lambda + 1.5,
        _ => lambda + 1.0,
    };
    let mut worst: f64 = 0.0;
    for &x in &grid.xs {
        if x == 0.0 {
            continue;
        }
        for &y in &grid.ys {
            for &z in &grid.zs {
                let gap = x.abs() - z.abs();
                if gap.abs() <= 1e-3 * y {
                    continue;
                }
                let d = match order {
                    DerivativeOrder::FirstX => kernel_partial(line, which, Partial::X, x, y, z)?.abs(),
                    DerivativeOrder::FirstY => kernel_partial(line, which, Partial::Y, x, y, z)?.abs(),
                    DerivativeOrder::Second => kernel_partial(line, which, Partial::XX, x, y, z)?
                        .abs()
                        .max(kernel_partial(line, which, Partial::YY, x, y, z)?.abs()),
                };
                worst = worst.max(d * (y * y + gap * gap).powf(e));
            }
        }
    }
    Ok(worst)
}
