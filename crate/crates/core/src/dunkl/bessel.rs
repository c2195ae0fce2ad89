//! The normalized Bessel function
//! `j_α(z) = Γ(α+1) Σ (-1)^n (z/2)^{2n} / (n! Γ(n+α+1))`, so that `j_α(0) = 1`.
//!
//! Real arguments use the power series up to `|z| = 4`, the same series in
//! double-double arithmetic up to `|z| = 30` (the alternating terms reach
//! `~e^{|z|}` there), and the Hankel expansion of `J_α` beyond.

use num_complex::Complex64;
use statrs::function::gamma::gamma;

use super::ddouble::DD;
use crate::error::{Error, Result};

const PLAIN_SERIES_LIMIT: f64 = 4.0;
pub(crate) const ASYMPTOTIC_SWITCH: f64 = 30.0;

/// `j_α(z)` for complex `z`.
pub fn bessel_norm(alpha: f64, z: Complex64) -> Result<Complex64> {
    if !(alpha > -1.0 && alpha.is_finite()) {
        return Err(Error::Domain(format!("bessel order alpha = {alpha} must exceed -1")));
    }
    if z.im == 0.0 {
        return Ok(Complex64::new(bessel_norm_real(alpha, z.re), 0.0));
    }
    // even in z
    let z = if z.re < 0.0 { -z } else { z };
    if z.norm() <= ASYMPTOTIC_SWITCH {
        Ok(series_complex(alpha, z))
    } else {
        Ok(hankel_complex(alpha, z))
    }
}

/// `j_α(x)` for real `x`; `alpha > -1` is the caller's responsibility.
pub fn bessel_norm_real(alpha: f64, x: f64) -> f64 {
    let ax = x.abs();
    if ax <= PLAIN_SERIES_LIMIT {
        series_real(alpha, ax)
    } else if ax <= ASYMPTOTIC_SWITCH {
        series_dd(alpha, ax)
    } else {
        hankel_real(alpha, ax)
    }
}

fn series_real(alpha: f64, x: f64) -> f64 {
    let q = -0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 1..200 {
        let nf = n as f64;
        term *= q / (nf * (nf + alpha));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() && nf * (nf + alpha) > -q {
            break;
        }
    }
    sum
}

fn series_dd(alpha: f64, x: f64) -> f64 {
    let q = DD::square(x) * -0.25;
    let mut term = DD::from_f64(1.0);
    let mut sum = DD::from_f64(1.0);
    for n in 1..400 {
        let nf = n as f64;
        let denom = (DD::from_f64(nf) + DD::from_f64(alpha)) * nf;
        term = (term * q).div(denom);
        sum = sum + term;
        if nf * (nf + alpha) > -q.hi && term.abs_hi() <= 1e-20 * sum.abs_hi() {
            break;
        }
    }
    sum.to_f64()
}

fn series_complex(alpha: f64, z: Complex64) -> Complex64 {
    let q = -0.25 * z * z;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for n in 1..400 {
        let nf = n as f64;
        term *= q / (nf * (nf + alpha));
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() && nf * (nf + alpha) > q.norm() {
            break;
        }
    }
    sum
}

/// `(P, Q)` of the Hankel expansion, written for real or complex `z`.
fn hankel_pq<T>(nu: f64, z: T, norm: impl Fn(T) -> f64) -> (T, T)
where
    T: Copy
        + std::ops::Add<Output = T>
        + std::ops::Mul<f64, Output = T>
        + std::ops::Div<Output = T>
        + From<f64>,
{
    let mu = 4.0 * nu * nu;
    let mut p = T::from(1.0);
    let mut q = T::from(0.0);
    let mut a = T::from(1.0);
    let mut last = 1.0;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        let next = a * ((mu - odd * odd) / (8.0 * k as f64)) / z;
        let size = norm(next);
        if size > last {
            break;
        }
        a = next;
        last = size;
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p = p + a * sign;
        } else {
            q = q + a * sign;
        }
        if size <= 1e-18 {
            break;
        }
    }
    (p, q)
}

fn hankel_real(alpha: f64, x: f64) -> f64 {
    let (p, q) = hankel_pq(alpha, x, f64::abs);
    let chi = x - (0.5 * alpha + 0.25) * std::f64::consts::PI;
    let j = (2.0 / (std::f64::consts::PI * x)).sqrt() * (p * chi.cos() - q * chi.sin());
    2f64.powf(alpha) * gamma(alpha + 1.0) * x.powf(-alpha) * j
}

fn hankel_complex(alpha: f64, z: Complex64) -> Complex64 {
    let (p, q) = hankel_pq(alpha, z, |c: Complex64| c.norm());
    let chi = z - (0.5 * alpha + 0.25) * std::f64::consts::PI;
    let j = (2.0 / (std::f64::consts::PI * z)).sqrt() * (p * chi.cos() - q * chi.sin());
    2f64.powf(alpha) * gamma(alpha + 1.0) * z.powf(-alpha) * j
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_at_origin_is_one() {
        for &a in &[-0.5, 0.0, 0.3, 1.0, 3.7] {
            assert_eq!(bessel_norm(a, Complex64::new(0.0, 0.0)).unwrap().re, 1.0);
        }
    }

    #[test]
    fn half_integer_orders_are_elementary() {
        for i in 0..=400 {
            let x = -50.0 + 0.25 * i as f64;
            let c = bessel_norm_real(-0.5, x);
            assert!((c - x.cos()).abs() < 2e-14, "x={x}: {c} vs {}", x.cos());
            let s = bessel_norm_real(0.5, x);
            let exact = if x == 0.0 { 1.0 } else { x.sin() / x };
            assert!((s - exact).abs() < 2e-14, "x={x}: {s} vs {exact}");
        }
    }

    #[test]
    fn order_three_halves_matches_closed_form() {
        // j_{3/2}(x) = 3 (sin x - x cos x) / x^3
        for &x in &[0.5, 3.0, 9.5, 17.0, 29.9, 30.1, 44.0] {
            let exact = 3.0 * (f64::sin(x) - x * f64::cos(x)) / (x * x * x);
            let got = bessel_norm_real(1.5, x);
            assert!((got - exact).abs() < 1e-14, "x={x}: {got} vs {exact}");
        }
    }

    #[test]
    fn branches_agree_across_switch_points() {
        for &a in &[-0.2, 0.0, 0.8, 2.0, 3.0] {
            let x = PLAIN_SERIES_LIMIT;
            let (p, d) = (series_real(a, x), series_dd(a, x));
            assert!((p - d).abs() < 1e-14, "a={a}: {p} vs {d}");
            let x = ASYMPTOTIC_SWITCH;
            let (d, h) = (series_dd(a, x), hankel_real(a, x));
            assert!((d - h).abs() < 1e-15, "a={a}: {d} vs {h}");
        }
    }

    #[test]
    fn complex_argument_matches_hyperbolic_form() {
        // j_{-1/2}(iy) = cosh y
        for &y in &[0.5, 2.0, 5.0] {
            let v = bessel_norm(-0.5, Complex64::new(0.0, y)).unwrap();
            assert!((v.re - y.cosh()).abs() < 1e-12 * y.cosh());
        }
        assert!(bessel_norm(-1.0, Complex64::new(1.0, 0.0)).is_err());
    }
}
