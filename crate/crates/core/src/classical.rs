//! The `λ = 0` reference mode. The Dunkl machinery needs `λ > 0`, so the
//! classical objects are hard-coded here and only used as limits to compare
//! against.

use num_complex::Complex64;

/// `sqrt(2/π)`, the `λ → 0` limit of `m_λ`.
pub const M_ZERO: f64 = 0.797_884_560_802_865_4;

/// `e^{iz}`, the `λ → 0` limit of `E_λ(iz)`.
pub fn kernel(z: f64) -> Complex64 {
    Complex64::from_polar(1.0, z)
}

/// `sqrt(2/π) y / (x² + y²)`, the Poisson kernel for `dx / sqrt(2π)`.
pub fn poisson_kernel(x: f64, y: f64) -> f64 {
    M_ZERO * y / (x * x + y * y)
}

/// `sqrt(2/π) x / (x² + y²)`.
pub fn conjugate_kernel(x: f64, y: f64) -> f64 {
    M_ZERO * x / (x * x + y * y)
}

/// The Cesàro bound constant for `λ = 0` (`β = 1`): `α B(1/p, α)`.
pub fn cesaro_constant(p: f64, alpha: f64) -> f64 {
    alpha * statrs::function::beta::beta(1.0 / p, alpha)
}
