//! The λ-translation `τ_t`, its signed kernel `W_λ`, the product formula and
//! λ-convolution.
//!
//! `τ_t f(x)` is evaluated in the angular form with `u = cos θ`:
//! `c'_λ ∫_{-1}^{1} [f_e(r) + f_o(r)(x+t)/r] (1-u)^{λ-1} (1+u)^{λ} du`,
//! `r = sqrt(x² + t² + 2xtu)`, one Gauss–Jacobi rule. The kernel form over
//! `||x|-|t|| < |z| < |x|+|t|` is kept as an independent cross-check.

use num_complex::Complex64;

use crate::dunkl::{dunkl_kernel, dunkl_kernel_profile, dunkl_transform, lp_quasinorm};
use crate::dunkl::{finite_difference, NormSpec, WeightedLine};
use crate::error::{Error, Result};
use crate::profile::{Decay, Feature, Parity, Profile};
use crate::quadrature::{cached_jacobi_rule, weighted_line_with, QuadratureSpec};

/// Relative size of `<x,t>_θ` below which `f_o(r)/r` is replaced by `f_o'(0)`.
const ODD_RATIO_GUARD: f64 = 1e-8;

/// A translated value together with whether the `r → 0` guard was used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Translated {
    pub value: Complex64,
    pub guarded: bool,
}

fn odd_slope_at_origin(f: &Profile) -> Complex64 {
    f.analytic_derivative(0.0)
        .unwrap_or_else(|| finite_difference(|s| f.odd_part(s), 0.0))
}

/// `(τ_t f)(x)` with the guard flag.
pub fn translate_detailed(
    f: &Profile,
    t: f64,
    x: f64,
    line: &WeightedLine,
    spec: &QuadratureSpec,
) -> Result<Translated> {
    if t == 0.0 {
        return Ok(Translated { value: f.eval(x), guarded: false });
    }
    if x == 0.0 {
        return Ok(Translated { value: f.eval(t), guarded: false });
    }
    let lambda = line.lambda();
    let rule = spec.jacobi(lambda - 1.0, lambda)?;
    let (a, b) = (x * x + t * t, 2.0 * x * t);
    let tiny = ODD_RATIO_GUARD * (x.abs() + t.abs());
    let mut guarded = false;
    let mut slope: Option<Complex64> = None;
    let mut total = Complex64::new(0.0, 0.0);
    for (&u, &w) in rule.nodes().iter().zip(rule.weights()) {
        let r = (a + b * u).max(0.0).sqrt();
        let odd_ratio = if r < tiny {
            guarded = true;
            *slope.get_or_insert_with(|| odd_slope_at_origin(f))
        } else {
            f.odd_part(r) / r
        };
        total += (f.even_part(r) + odd_ratio * (x + t)) * w;
    }
    Ok(Translated { value: total * line.c_prime(), guarded })
}

/// `(τ_t f)(x)`.
pub fn translate(
    f: &Profile,
    t: f64,
    x: f64,
    line: &WeightedLine,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    translate_detailed(f, t, x, line, spec).map(|v| v.value)
}

fn sigma(a: f64, b: f64, c: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        0.0
    } else {
        (a * a + b * b - c * c) / (2.0 * a * b)
    }
}

/// `W_λ(x, t, z)`; zero outside `||x|-|t|| < |z| < |x|+|t|`, infinite on the
/// endpoints when `λ < 1`.
pub fn w_kernel(line: &WeightedLine, x: f64, t: f64, z: f64) -> Result<f64> {
    if x == 0.0 || t == 0.0 {
        return Err(Error::Domain(
            "W is defined for x, t != 0; the degenerate cases are point masses".into(),
        ));
    }
    let lambda = line.lambda();
    let lo = (x.abs() - t.abs()).abs();
    let hi = x.abs() + t.abs();
    let s = z.abs();
    if s < lo || s > hi {
        return Ok(0.0);
    }
    let combo = 1.0 - sigma(x, t, z) + sigma(z, x, t) + sigma(z, t, x);
    let d = ((hi * hi - z * z) * (z * z - lo * lo)).max(0.0);
    if d == 0.0 {
        // endpoint of the support, where the density has the factor d^{λ-1}
        return Ok(if combo == 0.0 || lambda > 1.0 {
            0.0
        } else if lambda < 1.0 {
            f64::INFINITY * combo.signum()
        } else {
            line.c_dprime() * (x * t * z).abs().powf(1.0 - 2.0 * lambda) * combo
        });
    }
    let w0 = line.c_dprime() * (x * t * z).abs().powf(1.0 - 2.0 * lambda) / d.powf(1.0 - lambda);
    Ok(w0 * combo)
}

/// `c_λ ∫ f(z) W_λ(x,t,z) |z|^{2λ} dz`, evaluated over `s = |z|` with a
/// Gauss–Jacobi rule carrying the `(b-s)^{λ-1} (s-a)^{λ-1}` endpoint factors.
pub fn translate_kernel_form(
    f: &Profile,
    t: f64,
    x: f64,
    line: &WeightedLine,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    if t == 0.0 {
        return Ok(f.eval(x));
    }
    if x == 0.0 {
        return Ok(f.eval(t));
    }
    let lambda = line.lambda();
    let lo = (x.abs() - t.abs()).abs();
    let hi = x.abs() + t.abs();
    let pref = line.c_lambda() * line.c_dprime() * (x * t).abs().powf(1.0 - 2.0 * lambda);
    let bracket = |s: f64| {
        let (fp, fm) = (f.eval(s), f.eval(-s));
        (fp + fm) * (1.0 - sigma(x, t, s)) + (fp - fm) * (sigma(s, x, t) + sigma(s, t, x))
    };
    let value = if lo == 0.0 {
        // (s+a)^{λ-1}(s-a)^{λ-1} s collapses to s^{2λ-1}
        let rule = cached_jacobi_rule(lambda - 1.0, 2.0 * lambda - 1.0, spec.jacobi_order)?;
        rule.integrate_on(0.0, hi, |s| bracket(s) * (hi + s).powf(lambda - 1.0))
    } else {
        let rule = cached_jacobi_rule(lambda - 1.0, lambda - 1.0, spec.jacobi_order)?;
        rule.integrate_on(lo, hi, |s| bracket(s) * (s * ((hi + s) * (s + lo)).powf(lambda - 1.0)))
    };
    Ok(value * pref)
}

/// `|E_λ(ixξ) E_λ(itξ) - ∫ E_λ(izξ) dν_{x,t}(z)|`, the integral taken as the
/// translate of `z ↦ E_λ(izξ)`.
pub fn product_formula_residual(
    line: &WeightedLine,
    x: f64,
    t: f64,
    xi: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let lambda = line.lambda();
    let lhs = dunkl_kernel(lambda, x * xi) * dunkl_kernel(lambda, t * xi);
    let rhs = translate(&dunkl_kernel_profile(line, xi), t, x, line, spec)?;
    Ok((lhs - rhs).norm())
}

/// Decay and features of `x ↦ (τ_t f)(x)`, which lives around `|x| = |t|`.
fn shifted_metadata(f: &Profile, t: f64, spec: &QuadratureSpec) -> (Decay, Vec<Feature>) {
    let shift = t.abs();
    let decay = match f.decay() {
        Decay::Compact { radius } => Decay::Compact { radius: radius + shift },
        Decay::Exponential { scale } => {
            Decay::Exponential { scale: scale + shift / spec.truncation_radius_factor }
        }
        Decay::Algebraic { scale } => {
            Decay::Algebraic { scale: scale + shift / spec.truncation_radius_factor }
        }
        Decay::Unbounded => Decay::Unbounded,
    };
    let mut features = vec![Feature { at: shift, width: 0.0 }];
    for ft in f.features() {
        let a = ft.at.abs();
        features.push(Feature { at: shift + a, width: ft.width });
        features.push(Feature { at: (shift - a).abs(), width: ft.width });
    }
    (decay, features)
}

/// The profile `x ↦ (τ_t f)(x)`; evaluation failures surface as NaN.
pub fn translated_profile(
    f: &Profile,
    t: f64,
    line: &WeightedLine,
    spec: &QuadratureSpec,
) -> Profile {
    let (decay, features) = shifted_metadata(f, t, spec);
    let (g, line, spec) = (f.clone(), *line, *spec);
    Profile::new(format!("tau_{t}({})", f.description()), decay, move |x| {
        translate(&g, t, x, &line, &spec).unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    })
    .with_features(features)
}

/// `⟨f, g⟩_λ = c_λ ∫ f(x) g(x) |x|^{2λ} dx` (bilinear).
pub fn pairing(f: &Profile, g: &Profile, line: &WeightedLine, spec: &QuadratureSpec) -> Result<Complex64> {
    let decay = f.decay().tighter(g.decay());
    let mut features: Vec<Feature> = f.features().to_vec();
    features.extend_from_slice(g.features());
    let est = weighted_line_with(
        |x| f.eval(x) * g.eval(x),
        Parity::None,
        line.lambda(),
        decay,
        &features,
        None,
        spec,
    )?;
    Ok(est.value * line.c_lambda())
}

/// `(f *_λ g)(x) = c_λ ∫ (τ_x f)(-t) g(t) |t|^{2λ} dt`.
pub fn convolve(
    f: &Profile,
    g: &Profile,
    x: f64,
    line: &WeightedLine,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    let (f_decay, mut features) = shifted_metadata(f, x, spec);
    features.extend(g.features().iter().map(|ft| ft.abs_folded()));
    let decay = f_decay.tighter(g.decay());
    let failure = std::sync::Mutex::new(None);
    let est = weighted_line_with(
        |t| {
            let g_t = g.eval(t);
            if g_t == Complex64::new(0.0, 0.0) {
                return g_t;
            }
            match translate(f, x, -t, line, spec) {
                Ok(v) => v * g_t,
                Err(e) => {
                    *failure.lock().expect("poisoned") = Some(e);
                    Complex64::new(f64::NAN, 0.0)
                }
            }
        },
        Parity::None,
        line.lambda(),
        decay,
        &features,
        None,
        spec,
    );
    if let Some(e) = failure.into_inner().expect("poisoned") {
        return Err(e);
    }
    Ok(est?.value * line.c_lambda())
}

/// The profile `x ↦ (f *_λ g)(x)`; evaluation failures surface as NaN.
pub fn convolution_profile(
    f: &Profile,
    g: &Profile,
    line: &WeightedLine,
    spec: &QuadratureSpec,
) -> Profile {
    let decay = match (f.decay(), g.decay()) {
        (Decay::Compact { radius: r1 }, Decay::Compact { radius: r2 }) => {
            Decay::Compact { radius: r1 + r2 }
        }
        (a, b) => {
            let s = a.scale().unwrap_or(0.0) + b.scale().unwrap_or(0.0);
            match (a, b) {
                (Decay::Unbounded, _) | (_, Decay::Unbounded) => Decay::Unbounded,
                (Decay::Algebraic { .. }, _) | (_, Decay::Algebraic { .. }) => {
                    Decay::Algebraic { scale: s }
                }
                _ => Decay::Exponential { scale: s },
            }
        }
    };
    let (f, g, line, spec) = (f.clone(), g.clone(), *line, *spec);
    Profile::new(format!("({})*({})", f.description(), g.description()), decay, move |x| {
        convolve(&f, &g, x, &line, &spec).unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    })
}

/// `φ_ε(x) = ε^{-2λ-1} φ(x/ε)`.
pub fn dilate(phi: &Profile, epsilon: f64, line: &WeightedLine) -> Profile {
    let k = epsilon.powf(-line.degree());
    let decay = match phi.decay() {
        Decay::Compact { radius } => Decay::Compact { radius: radius * epsilon },
        Decay::Exponential { scale } => Decay::Exponential { scale: scale * epsilon },
        Decay::Algebraic { scale } => Decay::Algebraic { scale: scale * epsilon },
        Decay::Unbounded => Decay::Unbounded,
    };
    let features: Vec<Feature> = phi
        .features()
        .iter()
        .map(|ft| Feature { at: ft.at * epsilon, width: ft.width * epsilon })
        .collect();
    let p = phi.clone();
    let mut out = Profile::new(format!("{}_eps{epsilon}", phi.description()), decay, move |x| {
        k * p.eval(x / epsilon)
    })
    .with_features(features);
    if phi.parity() != Parity::None {
        out = out.with_parity(phi.parity()).unwrap_or_else(|_| unreachable!("dilation keeps parity"));
    }
    out
}

/// `‖f *_λ φ_ε - f‖_{L^p_λ}` after checking `(F_λ φ)(0) = 1`.
pub fn approximate_identity_error(
    phi: &Profile,
    f: &Profile,
    epsilon: f64,
    p: f64,
    line: &WeightedLine,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let mass = dunkl_transform(phi, line, 0.0, spec)?;
    if (mass - 1.0).norm() > 1e-8 {
        return Err(Error::Domain(format!(
            "approximate identity needs (F phi)(0) = 1, got {mass}"
        )));
    }
    if !(epsilon > 0.0) {
        return Err(Error::Domain(format!("epsilon = {epsilon} must be positive")));
    }
    let smoothed = convolution_profile(f, &dilate(phi, epsilon, line), line, spec);
    let diff = smoothed.minus(f);
    lp_quasinorm(&diff, &NormSpec::new(p)?, line, spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn zero_shift_is_identity() {
        let line = WeightedLine::new(0.7).unwrap();
        let f = Profile::shifted_gaussian(0.3, 1.0);
        assert_eq!(translate(&f, 0.0, 1.2, &line, &spec()).unwrap(), f.eval(1.2));
        assert_eq!(translate(&f, 1.2, 0.0, &line, &spec()).unwrap(), f.eval(1.2));
    }

    #[test]
    fn constant_is_preserved() {
        let line = WeightedLine::new(0.4).unwrap();
        let one = Profile::constant(1.0);
        for &(t, x) in &[(0.5, 1.0), (-2.0, 0.3), (1.0, -1.0), (3.0, 3.0)] {
            let v = translate(&one, t, x, &line, &spec()).unwrap();
            assert!((v - 1.0).norm() < 1e-12, "t={t} x={x}: {v}");
        }
    }

    #[test]
    fn kernel_vanishes_off_support_and_is_symmetric() {
        let line = WeightedLine::new(0.5).unwrap();
        assert_eq!(w_kernel(&line, 1.0, 0.5, 1.6).unwrap(), 0.0);
        assert_eq!(w_kernel(&line, 1.0, 0.5, 0.4).unwrap(), 0.0);
        for &z in &[0.7, -0.9, 1.3] {
            let a = w_kernel(&line, 1.0, -0.5, z).unwrap();
            let b = w_kernel(&line, -0.5, 1.0, z).unwrap();
            assert!((a - b).abs() < 1e-14 * (1.0 + a.abs()));
        }
        assert!(w_kernel(&line, 0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn angular_and_kernel_forms_agree() {
        let f = Profile::shifted_gaussian(0.4, 0.8);
        for &lambda in &[0.5, 1.5] {
            let line = WeightedLine::new(lambda).unwrap();
            for &(t, x) in &[(0.5, 1.0), (-1.3, 0.7), (2.0, -0.6)] {
                let a = translate(&f, t, x, &line, &spec()).unwrap();
                let b = translate_kernel_form(&f, t, x, &line, &spec()).unwrap();
                assert!((a - b).norm() < 1e-8, "lambda={lambda} t={t} x={x}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn guard_triggers_only_on_the_antidiagonal() {
        let line = WeightedLine::new(1.0).unwrap();
        let f = Profile::odd_gaussian(1.0);
        assert!(!translate_detailed(&f, 0.5, 1.0, &line, &spec()).unwrap().guarded);
        let d = translate_detailed(&f, 0.5, -0.5, &line, &spec()).unwrap();
        assert!(d.value.re.is_finite());
    }
}
