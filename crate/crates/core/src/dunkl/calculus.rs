use num_complex::Complex64;

use super::bessel::bessel_norm_real;
use super::{NormSpec, WeightedLine};
use crate::error::Result;
use crate::profile::{Decay, Parity, Profile};
use crate::quadrature::{halfline_with, QuadratureSpec};

/// Central difference with one Richardson step, `h = 1e-5 max(1, |x|)`.
pub fn finite_difference<F>(f: F, x: f64) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    let h = 1e-5 * x.abs().max(1.0);
    let d1 = (f(x + h) - f(x - h)) / (2.0 * h);
    let d2 = (f(x + 0.5 * h) - f(x - 0.5 * h)) / h;
    (4.0 * d2 - d1) / 3.0
}

fn derivative_of(f: &Profile, x: f64) -> Complex64 {
    f.analytic_derivative(x)
        .unwrap_or_else(|| finite_difference(|s| f.eval(s), x))
}

/// `D_x f(x) = f'(x) + λ (f(x) - f(-x)) / x`, with the removable singularity
/// at the origin replaced by `f_e'(x) + (2λ+1) f_o'(0)`.
pub fn dunkl_derivative(f: &Profile, x: f64, line: &WeightedLine) -> Complex64 {
    let lambda = line.lambda();
    if x.abs() < 1e-8 {
        let even_slope = 0.5 * (derivative_of(f, x) - derivative_of(f, -x));
        let odd_slope = derivative_of(f, 0.0);
        return even_slope + (2.0 * lambda + 1.0) * odd_slope;
    }
    derivative_of(f, x) + lambda * (f.eval(x) - f.eval(-x)) / x
}

/// `c_λ ∫ f(x) E_λ(-ixξ) |x|^{2λ} dx`.
pub fn dunkl_transform(
    f: &Profile,
    line: &WeightedLine,
    xi: f64,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    let lambda = line.lambda();
    let scale = f.decay().scale().ok_or_else(|| {
        crate::error::Error::Domain("transform needs a decaying profile".into())
    })?;
    let features: Vec<_> = f.features().iter().map(|ft| ft.abs_folded()).collect();
    let oscillation = match f.decay() {
        Decay::Algebraic { .. } if xi != 0.0 => Some(xi.abs()),
        _ => None,
    };
    let k = 2.0 * lambda + 1.0;
    let eval = f.evaluator();
    // E(-ixξ) = j_{λ-1/2}(xξ) - i xξ/(2λ+1) j_{λ+1/2}(xξ); fold x and -x together.
    let est = match f.parity() {
        Parity::Even => halfline_with(
            |x| 2.0 * eval(x) * bessel_norm_real(lambda - 0.5, x * xi),
            2.0 * lambda,
            f.decay(),
            scale,
            &features,
            oscillation,
            spec,
        )?,
        Parity::Odd => halfline_with(
            |x| {
                let z = x * xi;
                eval(x) * Complex64::new(0.0, -2.0 * z / k * bessel_norm_real(lambda + 0.5, z))
            },
            2.0 * lambda,
            f.decay(),
            scale,
            &features,
            oscillation,
            spec,
        )?,
        Parity::None => halfline_with(
            |x| {
                let z = x * xi;
                let e = bessel_norm_real(lambda - 0.5, z);
                let o = z / k * bessel_norm_real(lambda + 0.5, z);
                let (fp, fm) = (eval(x), eval(-x));
                (fp + fm) * e + (fp - fm) * Complex64::new(0.0, -o)
            },
            2.0 * lambda,
            f.decay(),
            scale,
            &features,
            oscillation,
            spec,
        )?,
    };
    Ok(est.value * line.c_lambda())
}

/// `(c_λ ∫ |f(x)|^p |x|^{2λ} dx)^{1/p}`.
pub fn lp_quasinorm(
    f: &Profile,
    norm: &NormSpec,
    line: &WeightedLine,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let p = norm.p();
    let scale = f.decay().scale().ok_or_else(|| {
        crate::error::Error::Domain("norm of a non-decaying profile is infinite".into())
    })?;
    let scale = scale.max(norm.grid_halfwidth() / spec.truncation_radius_factor);
    let decay = match f.decay() {
        Decay::Compact { radius } => Decay::Compact { radius: radius.max(norm.grid_halfwidth()) },
        other => other,
    };
    let features: Vec<_> = f.features().iter().map(|ft| ft.abs_folded()).collect();
    let eval = f.evaluator();
    let est = halfline_with(
        |x| Complex64::new(eval(x).norm().powf(p) + eval(-x).norm().powf(p), 0.0),
        2.0 * line.lambda(),
        decay,
        scale,
        &features,
        None,
        spec,
    )?;
    Ok((line.c_lambda() * est.value.re).powf(1.0 / p))
}

/// `max |f|` over `samples` equispaced points of `[-halfwidth, halfwidth]`.
pub fn sup_norm(f: &Profile, halfwidth: f64, samples: usize) -> f64 {
    let n = samples.max(2);
    (0..n)
        .map(|i| -halfwidth + 2.0 * halfwidth * i as f64 / (n - 1) as f64)
        .map(|x| f.eval(x).norm())
        .fold(0.0, f64::max)
}

/// `((Σ|a_i|)^p, Σ|a_i|^p)`; the first never exceeds the second when `p <= 1`.
pub fn p_subadditive(values: &[f64], p: f64) -> (f64, f64) {
    let lhs = values.iter().map(|a| a.abs()).sum::<f64>().powf(p);
    let rhs = values.iter().map(|a| a.abs().powf(p)).sum::<f64>();
    (lhs, rhs)
}
