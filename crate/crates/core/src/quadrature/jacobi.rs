//! Gauss–Jacobi rules for integrals of the form
//! `∫_{-1}^{1} f(t) (1 - t)^a (1 + t)^b dt`.
//!
//! Nodes start from the Golub–Welsch eigenvalues of the Jacobi matrix and are
//! then polished by Newton iteration on the three-term recurrence; weights come
//! from the closed-form Christoffel expression, which keeps full relative
//! accuracy for the tiny weights next to the endpoints.

use std::collections::HashMap;
use std::ops::{Add, Mul};
use std::sync::{Arc, OnceLock, RwLock};

use nalgebra::DMatrix;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// A Gauss–Jacobi rule of a given order.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobiRule {
    a_exponent: f64,
    b_exponent: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl JacobiRule {
    pub fn a_exponent(&self) -> f64 {
        self.a_exponent
    }

    pub fn b_exponent(&self) -> f64 {
        self.b_exponent
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `Σ w_i f(t_i)`, the rule applied on the reference interval.
    pub fn sum<T, F>(&self, mut f: F) -> T
    where
        T: Copy + Default + Add<Output = T> + Mul<f64, Output = T>,
        F: FnMut(f64) -> T,
    {
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(T::default(), |acc, (&t, &w)| acc + f(t) * w)
    }

    /// `∫_lo^hi f(x) (hi - x)^a (x - lo)^b dx` by the affine image of the rule.
    pub fn integrate_on<T, F>(&self, lo: f64, hi: f64, mut f: F) -> T
    where
        T: Copy + Default + Add<Output = T> + Mul<f64, Output = T>,
        F: FnMut(f64) -> T,
    {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        let scale = half.powf(self.a_exponent + self.b_exponent + 1.0);
        self.sum(|t| f(mid + half * t)) * scale
    }
}

/// Builds the `order`-point Gauss–Jacobi rule for the weight `(1-t)^a (1+t)^b`.
pub fn build_jacobi_rule(a: f64, b: f64, order: usize) -> Result<JacobiRule> {
    if !(a.is_finite() && a > -1.0) {
        return Err(Error::Domain(format!("jacobi exponent a = {a} must exceed -1")));
    }
    if !(b.is_finite() && b > -1.0) {
        return Err(Error::Domain(format!("jacobi exponent b = {b} must exceed -1")));
    }
    if order == 0 {
        return Err(Error::Domain("jacobi rule order must be at least 1".into()));
    }

    let mut nodes = golub_welsch_nodes(a, b, order);
    let ln_norm = (a + b + 1.0) * std::f64::consts::LN_2 + ln_gamma(order as f64 + a + 1.0)
        + ln_gamma(order as f64 + b + 1.0)
        - ln_gamma(order as f64 + a + b + 1.0)
        - ln_gamma(order as f64 + 1.0);

    let mut weights = Vec::with_capacity(order);
    for x in nodes.iter_mut() {
        for _ in 0..8 {
            let (p, dp) = jacobi_with_derivative(order, a, b, *x);
            let step = p / dp;
            *x -= step;
            if step.abs() <= 1e-16 * (1.0 + x.abs()) {
                break;
            }
        }
        let (_, dp) = jacobi_with_derivative(order, a, b, *x);
        let w = (ln_norm - ((1.0 - *x) * (1.0 + *x)).ln() - 2.0 * dp.abs().ln()).exp();
        weights.push(w);
    }

    // The Christoffel formula carries the rounding of four large log-gammas as
    // a common factor; pin the total mass to its Beta-function value instead.
    let mass = ((a + b + 1.0) * std::f64::consts::LN_2 + ln_gamma(a + 1.0) + ln_gamma(b + 1.0)
        - ln_gamma(a + b + 2.0))
    .exp();
    let total: f64 = weights.iter().sum();
    for w in weights.iter_mut() {
        *w *= mass / total;
    }

    let mut pairs: Vec<(f64, f64)> = nodes.into_iter().zip(weights).collect();
    pairs.sort_by(|l, r| l.0.total_cmp(&r.0));
    let (nodes, weights): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();

    let ordered = nodes.windows(2).all(|w| w[0] < w[1]);
    let inside = nodes.iter().all(|&t| t > -1.0 && t < 1.0);
    let positive = weights.iter().all(|&w| w > 0.0 && w.is_finite());
    if !(ordered && inside && positive) {
        return Err(Error::Domain(format!(
            "jacobi rule (a={a}, b={b}, n={order}) failed node/weight invariants"
        )));
    }

    Ok(JacobiRule {
        a_exponent: a,
        b_exponent: b,
        nodes,
        weights,
    })
}

/// Process-wide cache of rules, keyed by exact exponent bits and order.
pub fn cached_jacobi_rule(a: f64, b: f64, order: usize) -> Result<Arc<JacobiRule>> {
    type Cache = RwLock<HashMap<(u64, u64, usize), Arc<JacobiRule>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (a.to_bits(), b.to_bits(), order);
    if let Some(rule) = cache.read().expect("rule cache poisoned").get(&key) {
        return Ok(Arc::clone(rule));
    }
    let rule = Arc::new(build_jacobi_rule(a, b, order)?);
    cache
        .write()
        .expect("rule cache poisoned")
        .entry(key)
        .or_insert_with(|| Arc::clone(&rule));
    Ok(rule)
}

/// Gauss–Legendre rule (`a = b = 0`), cached.
pub fn legendre(order: usize) -> Arc<JacobiRule> {
    cached_jacobi_rule(0.0, 0.0, order).expect("legendre rule with positive order")
}

fn golub_welsch_nodes(a: f64, b: f64, n: usize) -> Vec<f64> {
    let ab = a + b;
    let mut m = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        let kf = k as f64;
        let diag = if k == 0 {
            (b - a) / (ab + 2.0)
        } else {
            (b * b - a * a) / ((2.0 * kf + ab) * (2.0 * kf + ab + 2.0))
        };
        m[(k, k)] = diag;
        if k + 1 < n {
            let j = kf + 1.0;
            let beta = if k == 0 {
                4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab).powi(2) * (3.0 + ab))
            } else {
                let c = 2.0 * j + ab;
                4.0 * j * (j + a) * (j + b) * (j + ab) / (c * c * (c + 1.0) * (c - 1.0))
            };
            let off = beta.sqrt();
            m[(k, k + 1)] = off;
            m[(k + 1, k)] = off;
        }
    }
    m.symmetric_eigenvalues()
        .iter()
        .map(|x| x.clamp(-1.0 + 1e-300, 1.0 - 1e-16))
        .collect()
}

/// `(P_n^{(a,b)}(x), d/dx P_n^{(a,b)}(x))` via the standard recurrence.
fn jacobi_with_derivative(n: usize, a: f64, b: f64, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = 0.5 * ((a + b + 2.0) * x + (a - b));
    if n == 1 {
        return (p, 0.5 * (a + b + 2.0));
    }
    for k in 2..=n {
        let kf = k as f64;
        let c = 2.0 * kf + a + b;
        let a1 = 2.0 * kf * (kf + a + b) * (c - 2.0);
        let a2 = (c - 1.0) * (a * a - b * b);
        let a3 = (c - 2.0) * (c - 1.0) * c;
        let a4 = 2.0 * (kf + a - 1.0) * (kf + b - 1.0) * c;
        let next = ((a2 + a3 * x) * p - a4 * p_prev) / a1;
        p_prev = p;
        p = next;
    }
    let nf = n as f64;
    let c = 2.0 * nf + a + b;
    let dp = (nf * ((a - b) - c * x) * p + 2.0 * (nf + a) * (nf + b) * p_prev) / (c * (1.0 - x * x));
    (p, dp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::function::beta::beta;

    /// Moment `∫ t^k (1-t)^a (1+t)^b dt` through the binomial expansion of
    /// `t = 2s - 1` against Beta integrals, plus the sum of absolute terms.
    fn moment(a: f64, b: f64, k: u32) -> (f64, f64) {
        let mut total = 0.0;
        let mut scale = 0.0;
        let mut binom = 1.0;
        for j in 0..=k {
            if j > 0 {
                binom *= (k - j + 1) as f64 / j as f64;
            }
            let sign = if (k - j).is_multiple_of(2) { 1.0 } else { -1.0 };
            let term = binom * 2f64.powi(j as i32) * beta(b + j as f64 + 1.0, a + 1.0);
            total += sign * term;
            scale += term;
        }
        let f = 2f64.powf(a + b + 1.0);
        (f * total, f * scale)
    }

    #[test]
    fn single_point_legendre_is_midpoint() {
        let rule = build_jacobi_rule(0.0, 0.0, 1).unwrap();
        assert_eq!(rule.nodes().len(), 1);
        assert!(rule.nodes()[0].abs() < 1e-15);
        assert!((rule.weights()[0] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn odd_monomial_vanishes_for_symmetric_weight() {
        let rule = build_jacobi_rule(0.0, 0.0, 5).unwrap();
        let v: f64 = rule.sum(|t| t.powi(9));
        assert!(v.abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(build_jacobi_rule(-1.0, 0.0, 4), Err(Error::Domain(_))));
        assert!(matches!(build_jacobi_rule(0.0, -1.5, 4), Err(Error::Domain(_))));
        assert!(matches!(build_jacobi_rule(0.0, 0.0, 0), Err(Error::Domain(_))));
    }

    #[test]
    fn monomials_are_exact_up_to_degree_2n_minus_1() {
        for &(a, b) in &[(-0.7, -0.7), (-0.5, -0.5), (0.0, 0.6), (1.5, -0.3), (2.0, 0.0)] {
            for n in [1usize, 3, 8, 20] {
                let rule = build_jacobi_rule(a, b, n).unwrap();
                for k in 0..(2 * n as u32) {
                    let (exact, scale) = moment(a, b, k);
                    let got: f64 = rule.sum(|t| t.powi(k as i32));
                    assert!(
                        (got - exact).abs() <= 1e-12 * scale,
                        "a={a} b={b} n={n} k={k}: {got} vs {exact}"
                    );
                }
            }
        }
    }

    #[test]
    fn order_64_rule_is_valid_for_small_exponents() {
        let rule = build_jacobi_rule(-0.7, -0.7, 64).unwrap();
        assert_eq!(rule.order(), 64);
        let mass: f64 = rule.sum(|_| 1.0);
        let exact = 2f64.powf(-0.4) * beta(0.3, 0.3);
        assert!((mass - exact).abs() < 1e-12 * exact);
    }

    #[test]
    fn mapped_rule_integrates_on_subinterval() {
        // ∫_1^3 (3-x)^{1/2} dx = (2/3) 2^{3/2}
        let rule = build_jacobi_rule(0.5, 0.0, 6).unwrap();
        let v: f64 = rule.integrate_on(1.0, 3.0, |_| 1.0);
        assert!((v - 2.0 / 3.0 * 2f64.powf(1.5)).abs() < 1e-13);
    }
}
