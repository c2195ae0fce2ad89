//! Property tests for the invariants of each module, checked against
//! independent oracles (Gamma/Beta functions, symmetry, elementary integrals).

use dunkl_lab::cesaro::{cesaro_scalar, lp_bound_constant, BoundKind, CesaroWeight};
use dunkl_lab::dunkl::{dunkl_kernel, p_subadditive};
use dunkl_lab::hardy::{homogeneous_kernel_field, KernelField};
use dunkl_lab::harness::report::{CheckRecord, Comparison, VerificationReport};
use dunkl_lab::poisson::{conjugate_kernel, poisson_kernel};
use dunkl_lab::translation::{translate, w_kernel};
use dunkl_lab::{build_jacobi_rule, integrate_weighted_line, Complex64, Profile, QuadratureSpec, WeightedLine};
use proptest::prelude::*;
use statrs::function::beta::beta;
use statrs::function::gamma::gamma;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn jacobi_rules_are_well_formed(a in -0.9f64..3.0, b in -0.9f64..3.0, n in 1usize..40) {
        let rule = build_jacobi_rule(a, b, n).unwrap();
        prop_assert_eq!(rule.order(), n);
        prop_assert!(rule.nodes().windows(2).all(|w| w[0] < w[1]));
        prop_assert!(rule.nodes().iter().all(|&t| -1.0 < t && t < 1.0));
        prop_assert!(rule.weights().iter().all(|&w| w > 0.0));
        // ∫ (1+t)^k (1-t)^a (1+t)^b dt = 2^{a+b+k+1} B(a+1, b+k+1), exact for k <= 2n-1
        for k in [0usize, 1, 2 * n - 1] {
            let exact = 2f64.powf(a + b + k as f64 + 1.0) * beta(a + 1.0, b + k as f64 + 1.0);
            let got = rule.sum(|t: f64| (1.0 + t).powi(k as i32));
            prop_assert!((got - exact).abs() <= 1e-12 * exact, "k={} got={} exact={}", k, got, exact);
        }
    }

    #[test]
    fn gaussian_mass_matches_the_gamma_oracle(lambda in 0.05f64..3.0, s in 0.3f64..3.0) {
        let line = WeightedLine::new(lambda).unwrap();
        let got = integrate_weighted_line(&Profile::gaussian(s), &line, &QuadratureSpec::default()).unwrap();
        // ∫ e^{-x²/(2s²)} |x|^{2λ} dx = (2s²)^{λ+1/2} Γ(λ+1/2)
        let exact = (2.0 * s * s).powf(lambda + 0.5) * gamma(lambda + 0.5);
        prop_assert!((got.re - exact).abs() <= 1e-10 * exact);
        prop_assert!(got.im.abs() < 1e-13);
    }

    #[test]
    fn odd_profiles_integrate_to_zero(lambda in 0.05f64..3.0, s in 0.3f64..3.0) {
        let line = WeightedLine::new(lambda).unwrap();
        let got = integrate_weighted_line(&Profile::odd_gaussian(s), &line, &QuadratureSpec::default()).unwrap();
        prop_assert!(got.norm() < 1e-12);
    }

    #[test]
    fn dunkl_kernel_is_bounded_by_one_on_the_real_line(lambda in 0.01f64..4.0, z in -200f64..200.0) {
        let e = dunkl_kernel(lambda, z);
        prop_assert!(e.norm() <= 1.0 + 1e-12);
        // E(-iz) = conj E(iz)
        prop_assert!((dunkl_kernel(lambda, -z) - e.conj()).norm() < 1e-14);
    }

    #[test]
    fn p_sums_are_subadditive(values in prop::collection::vec(-1e3f64..1e3, 1..20), p in 0.01f64..=1.0) {
        let (lhs, rhs) = p_subadditive(&values, p);
        prop_assert!(lhs <= rhs * (1.0 + 1e-12));
    }

    #[test]
    fn poisson_kernels_have_their_symmetries(lambda in 0.1f64..2.5, x in -5f64..5.0, t in -5f64..5.0, y in 0.05f64..5.0) {
        let line = WeightedLine::new(lambda).unwrap();
        let p = poisson_kernel(&line, x, y, t).unwrap();
        prop_assert!(p >= 0.0);
        prop_assert!((p - poisson_kernel(&line, t, y, x).unwrap()).abs() <= 1e-12 * (1.0 + p.abs()));
        let q = conjugate_kernel(&line, x, y, t).unwrap();
        prop_assert!((q + conjugate_kernel(&line, -x, y, -t).unwrap()).abs() <= 1e-12 * (1.0 + q.abs()));
    }

    #[test]
    fn translation_kernel_is_symmetric(lambda in 0.1f64..2.5, x in -4f64..4.0, t in -4f64..4.0, z in -8f64..8.0) {
        let line = WeightedLine::new(lambda).unwrap();
        let a = w_kernel(&line, x, t, z).unwrap();
        prop_assert!((a - w_kernel(&line, t, x, z).unwrap()).abs() <= 1e-12 * (1.0 + a.abs()));
    }

    #[test]
    fn translation_preserves_constants(lambda in 0.1f64..2.5, x in -4f64..4.0, t in -4f64..4.0) {
        let line = WeightedLine::new(lambda).unwrap();
        let v = translate(&Profile::constant(1.0), t, x, &line, &QuadratureSpec::default()).unwrap();
        prop_assert!((v - 1.0).norm() < 1e-10);
    }

    #[test]
    fn cesaro_acts_on_homogeneous_fields_by_a_beta_factor(
        lambda in 0.1f64..2.0, alpha in 0.3f64..4.0, x in -4f64..4.0, y in 0.1f64..4.0,
    ) {
        let line = WeightedLine::new(lambda).unwrap();
        let w = CesaroWeight::new(alpha, &QuadratureSpec::default()).unwrap();
        let f = homogeneous_kernel_field(&line, KernelField::Cauchy);
        let want = alpha * beta(2.0 * lambda + 1.0, alpha);
        let ratio = cesaro_scalar(&f, &w, x, y).unwrap() / f.eval(x, y);
        prop_assert!((ratio - Complex64::new(want, 0.0)).norm() < 1e-8);
    }

    #[test]
    fn bound_constants(p in 0.2f64..6.0, alpha in 0.2f64..5.0, b in 0.5f64..6.0) {
        let r = lp_bound_constant(p, alpha, b).unwrap();
        prop_assert!(r.value.is_finite() && r.value > 0.0);
        if p >= 1.0 {
            prop_assert_eq!(r.kind, BoundKind::ExactBeta);
            prop_assert!((r.value - alpha * beta(b / p, alpha)).abs() <= 1e-12 * r.value);
        } else {
            prop_assert_eq!(r.kind, BoundKind::SeriesFlagged);
            prop_assert!(r.prefactor_unspecified);
        }
    }

    #[test]
    fn reports_round_trip_bit_for_bit(measured in any::<f64>(), threshold in -1e300f64..1e300) {
        let rec = CheckRecord::new("id", "anchor", measured, threshold, Comparison::AtMost);
        let rep = VerificationReport::new("s", 42, vec![rec], 1.0);
        let back = VerificationReport::from_json(&rep.to_json()).unwrap();
        let (a, b) = (&rep.records[0], &back.records[0]);
        prop_assert!(a.measured.to_bits() == b.measured.to_bits() || (a.measured.is_nan() && b.measured.is_nan()));
        prop_assert_eq!(a.threshold.to_bits(), b.threshold.to_bits());
        prop_assert_eq!(a.pass, b.pass);
        prop_assert_eq!(rep.pass, back.pass);
    }
}
