use num_complex::Complex64;

use super::bessel::{bessel_norm, bessel_norm_real};
use super::WeightedLine;
use crate::error::Result;
use crate::profile::{Decay, Profile};
use crate::quadrature::QuadratureSpec;

/// `E_λ(iz) = j_{λ-1/2}(z) + iz/(2λ+1) j_{λ+1/2}(z)` for real `z`.
pub fn dunkl_kernel(lambda: f64, z: f64) -> Complex64 {
    let even = bessel_norm_real(lambda - 0.5, z);
    let odd = z / (2.0 * lambda + 1.0) * bessel_norm_real(lambda + 0.5, z);
    Complex64::new(even, odd)
}

/// `E_λ(iz)` for complex `z` from the two-Bessel combination.
pub fn dunkl_kernel_series(line: &WeightedLine, z: Complex64) -> Complex64 {
    let lambda = line.lambda();
    if z.im == 0.0 {
        return dunkl_kernel(lambda, z.re);
    }
    let i = Complex64::new(0.0, 1.0);
    let even = bessel_norm(lambda - 0.5, z).expect("order above -1 for lambda > 0");
    let odd = bessel_norm(lambda + 0.5, z).expect("order above -1 for lambda > 0");
    even + i * z / (2.0 * lambda + 1.0) * odd
}

/// `d/dz E_λ(iz)` for real `z`, from `j_α' (z) = -z j_{α+1}(z) / (2α+2)`.
pub fn dunkl_kernel_derivative(lambda: f64, z: f64) -> Complex64 {
    let k = 2.0 * lambda + 1.0;
    let jb = bessel_norm_real(lambda + 0.5, z);
    let jc = bessel_norm_real(lambda + 1.5, z);
    Complex64::new(-z / k * jb, (jb - z * z / (k + 2.0) * jc) / k)
}

/// `c'_λ ∫_{-1}^{1} e^{izt} (1+t) (1-t²)^{λ-1} dt` by Gauss–Jacobi quadrature.
pub fn dunkl_kernel_integral(line: &WeightedLine, z: f64, spec: &QuadratureSpec) -> Result<Complex64> {
    let a = line.lambda() - 1.0;
    let rule = spec.jacobi(a, a)?;
    let s: Complex64 = rule.sum(|t| Complex64::from_polar(1.0 + t, z * t));
    Ok(s * line.c_prime())
}

/// The profile `x ↦ E_λ(ixξ)` with its analytic derivative.
pub fn dunkl_kernel_profile(line: &WeightedLine, xi: f64) -> Profile {
    let lambda = line.lambda();
    let mut p = Profile::new(format!("E_{lambda}(i x {xi})"), Decay::Unbounded, move |x| {
        dunkl_kernel(lambda, x * xi)
    })
    .with_derivative(move |x| xi * dunkl_kernel_derivative(lambda, x * xi));
    if xi != 0.0 {
        p = p.with_oscillation(xi.abs());
    }
    p
}
