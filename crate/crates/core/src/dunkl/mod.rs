//! Line-level Dunkl calculus: the weighted line and its constants, the
//! normalized Bessel function, the kernel `E_λ`, the operator `D_x`, the
//! transform and weighted `L^p` quasi-norms.

mod bessel;
mod calculus;
mod ddouble;
mod kernel;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::{gamma, ln_gamma};

use crate::error::{Error, Result};

pub use bessel::{bessel_norm, bessel_norm_real};
pub use calculus::{
    dunkl_derivative, dunkl_transform, finite_difference, lp_quasinorm, p_subadditive,
    sup_norm,
};
pub use kernel::{
    dunkl_kernel, dunkl_kernel_derivative, dunkl_kernel_integral, dunkl_kernel_profile,
    dunkl_kernel_series,
};

/// The weighted line `(ℝ, |x|^{2λ} dx)` with its normalizing constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightedLine {
    lambda: f64,
    c_lambda: f64,
    c_prime: f64,
    c_dprime: f64,
    m_lambda: f64,
}

impl WeightedLine {
    pub fn new(lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::Domain(format!(
                "lambda = {lambda} must be positive (use the classical module for lambda = 0)"
            )));
        }
        let sqrt_pi = std::f64::consts::PI.sqrt();
        let g_half = gamma(lambda + 0.5);
        let c_lambda = 1.0 / (2f64.powf(lambda + 0.5) * g_half);
        let c_prime = (ln_gamma(lambda + 0.5) - ln_gamma(lambda)).exp() / sqrt_pi;
        let c_dprime = (2f64.powf(1.5 - lambda)
            * (2.0 * ln_gamma(lambda + 0.5) - ln_gamma(lambda)).exp())
            / sqrt_pi;
        let m_lambda = 2f64.powf(lambda + 0.5) * gamma(lambda + 1.0) / sqrt_pi;
        Ok(WeightedLine { lambda, c_lambda, c_prime, c_dprime, m_lambda })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// `1 / (2^{λ+1/2} Γ(λ+1/2))`
    pub fn c_lambda(&self) -> f64 {
        self.c_lambda
    }

    /// `Γ(λ+1/2) / (Γ(λ) √π)`
    pub fn c_prime(&self) -> f64 {
        self.c_prime
    }

    /// `2^{3/2-λ} Γ(λ+1/2)² / (√π Γ(λ))`
    pub fn c_dprime(&self) -> f64 {
        self.c_dprime
    }

    /// `2^{λ+1/2} Γ(λ+1) / √π`
    pub fn m_lambda(&self) -> f64 {
        self.m_lambda
    }

    /// The homogeneity degree `2λ + 1` of the measure `|x|^{2λ} dx dy`.
    pub fn degree(&self) -> f64 {
        2.0 * self.lambda + 1.0
    }
}

/// Exponent data for a weighted `L^p` (quasi-)norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormSpec {
    p: f64,
    /// Smallest core interval half-width used when integrating `|f|^p`.
    grid_halfwidth: f64,
    conjugate_q: Option<f64>,
}

impl NormSpec {
    pub fn new(p: f64) -> Result<Self> {
        Self::with_halfwidth(p, 0.0)
    }

    pub fn with_halfwidth(p: f64, grid_halfwidth: f64) -> Result<Self> {
        if !(p > 0.0 && p.is_finite()) {
            return Err(Error::Domain(format!("exponent p = {p} must be positive and finite")));
        }
        if !(grid_halfwidth >= 0.0) {
            return Err(Error::Domain("grid half-width must be nonnegative".into()));
        }
        let conjugate_q = (p > 1.0).then(|| p / (p - 1.0));
        Ok(NormSpec { p, grid_halfwidth, conjugate_q })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn grid_halfwidth(&self) -> f64 {
        self.grid_halfwidth
    }

    pub fn conjugate_q(&self) -> Option<f64> {
        self.conjugate_q
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_match_their_definitions() {
        for &lambda in &[0.1, 0.5, 1.0, 2.5, 7.0] {
            let l = WeightedLine::new(lambda).unwrap();
            let sp = std::f64::consts::PI.sqrt();
            let cp = gamma(lambda + 0.5) / (gamma(lambda) * sp);
            let cdp = 2f64.powf(1.5 - lambda) * gamma(lambda + 0.5).powi(2) / (sp * gamma(lambda));
            assert!((l.c_prime() - cp).abs() <= 1e-14 * cp);
            assert!((l.c_dprime() - cdp).abs() <= 1e-14 * cdp);
            assert!(l.c_lambda() > 0.0 && l.m_lambda() > 0.0);
        }
        assert!(WeightedLine::new(0.0).is_err());
        assert!(WeightedLine::new(-1.0).is_err());
    }

    #[test]
    fn conjugate_exponent_only_above_one() {
        assert_eq!(NormSpec::new(1.0).unwrap().conjugate_q(), None);
        assert_eq!(NormSpec::new(0.5).unwrap().conjugate_q(), None);
        let n = NormSpec::new(3.0).unwrap();
        let q = n.conjugate_q().unwrap();
        assert!((1.0 / 3.0 + 1.0 / q - 1.0).abs() < 1e-14);
        assert!(NormSpec::new(0.0).is_err());
    }
}
