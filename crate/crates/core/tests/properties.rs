use std::f64::consts::PI;

use fraclap_core::fraclap::relative_discrepancy;
use fraclap_core::mellin::{
    caputo_mellin_factor, caputo_rl_bridge_factor, laplacian_multiplier, riesz_multiplier,
    FracOrder,
};
use fraclap_core::onesided::{caputo, HalfLineFunction};
use fraclap_core::quadrature::QuadConfig;
use fraclap_core::specfun::{gamma, gamma_real, sin_pi_complex, Complex};
use proptest::prelude::*;

fn rel(a: Complex, b: Complex) -> f64 {
    (a - b).norm() / a.norm().max(b.norm())
}

proptest! {
    #[test]
    fn gamma_reflection(re in 1e-3f64..0.999, im in -10.0f64..10.0) {
        let z = Complex::new(re, im);
        let lhs = gamma(z).unwrap() * gamma(1.0 - z).unwrap();
        let rhs = Complex::new(PI, 0.0) / sin_pi_complex(z);
        prop_assert!(rel(lhs, rhs) < 1e-12, "{z}: {lhs} vs {rhs}");
    }

    #[test]
    fn gamma_duplication(re in 1e-3f64..3.0, im in -10.0f64..10.0) {
        let z = Complex::new(re, im);
        let lhs = gamma(z).unwrap() * gamma(z + 0.5).unwrap();
        let rhs = Complex::new(2.0, 0.0).powc(1.0 - 2.0 * z) * PI.sqrt() * gamma(2.0 * z).unwrap();
        prop_assert!(rel(lhs, rhs) < 1e-12, "{z}: {lhs} vs {rhs}");
    }

    #[test]
    fn one_dimensional_multipliers_agree(
        re in 0.01f64..0.99,
        im in -20.0f64..20.0,
        alpha in 0.01f64..1.99,
    ) {
        // removable points of either form
        prop_assume!(im.abs() > 1e-3 || ((re - alpha).abs() > 1e-3 && (re - alpha + 1.0).abs() > 1e-3));
        let s = Complex::new(re, im);
        let a = laplacian_multiplier(s, FracOrder::new(alpha, 1).unwrap()).unwrap();
        let b = riesz_multiplier(s, alpha).unwrap();
        prop_assert!(rel(a, b) < 1e-10, "s={s} alpha={alpha}: {a} vs {b}");
    }

    #[test]
    fn bridge_links_caputo_and_riesz_factors(
        re in 0.01f64..0.99,
        im in -20.0f64..20.0,
        alpha in 0.01f64..1.99,
    ) {
        prop_assume!(im.abs() > 1e-3 || ((re - alpha).abs() > 1e-3 && (re - alpha + 1.0).abs() > 1e-3));
        let s = Complex::new(re, im);
        let lhs = caputo_rl_bridge_factor(s, alpha).unwrap() * caputo_mellin_factor(s, alpha).unwrap();
        let rhs = riesz_multiplier(s, alpha).unwrap();
        prop_assert!(rel(lhs, rhs) < 1e-10, "s={s} alpha={alpha}: {lhs} vs {rhs}");
    }

    #[test]
    fn discrepancy_is_symmetric_and_bounded(a in -1e6f64..1e6, b in -1e6f64..1e6) {
        let d = relative_discrepancy(a, b);
        prop_assert_eq!(d, relative_discrepancy(b, a));
        prop_assert!((0.0..=2.0).contains(&d));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn caputo_power_rule(p in 2usize..5, alpha in 0.05f64..1.95, t in 0.05f64..8.0) {
        let mut coeffs = vec![0.0; p + 1];
        coeffs[p] = 1.0;
        let f = HalfLineFunction::polynomial(&coeffs);
        let cfg = QuadConfig::with_tolerance(1e-12, 1e-15);
        let v = caputo(&f, alpha, t, &cfg).unwrap();
        let q = p as f64;
        let exact = gamma_real(q + 1.0) / gamma_real(q + 1.0 - alpha) * t.powf(q - alpha);
        prop_assert!((v - exact).abs() <= 1e-9 * exact.abs(), "p={p} alpha={alpha} t={t}: {v} vs {exact}");
    }
}
