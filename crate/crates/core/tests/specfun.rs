use std::f64::consts::PI;

use critline::hcatalog::HFunctionSpec;
use critline::quadrature::gauss_legendre;
use critline::specfun::*;
use num_complex::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

/// Plain Dirichlet sum with the first two tail corrections, for Re s >= 3.
fn zeta_direct(s: Complex64) -> Complex64 {
    let n = 20000;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in (1..n).rev() {
        acc += (-s * (k as f64).ln()).exp();
    }
    let big = n as f64;
    let nms = (-s * big.ln()).exp();
    acc + nms * big / (s - 1.0) + 0.5 * nms
}

fn cfg(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(cfg(200))]

    #[test]
    fn gamma_recurrence(x in -8.0f64..20.0, y in -40.0f64..40.0) {
        let z = c(x, y);
        prop_assume!(z.norm() > 1e-3 && (x.fract().abs() > 1e-3 || y.abs() > 1e-3));
        // ln Gamma(z + 1) = ln Gamma(z) + ln z up to a multiple of 2 pi i
        let d = ln_gamma(z + 1.0).unwrap() - ln_gamma(z).unwrap() - z.ln();
        let k = (d.im / (2.0 * PI)).round();
        prop_assert!(d.re.abs() <= 1e-11 * (1.0 + z.norm().ln().abs()), "{d}");
        prop_assert!((d.im - 2.0 * PI * k).abs() <= 1e-10, "{d}");
    }

    #[test]
    fn gamma_reflection(x in -3.0f64..4.0, y in -6.0f64..6.0) {
        let z = c(x, y);
        prop_assume!(y.abs() > 1e-2 || (x - x.round()).abs() > 1e-2);
        let lhs = gamma(z).unwrap() * gamma(1.0 - z).unwrap();
        let rhs = PI / (PI * z).sin();
        prop_assert!(rel(lhs, rhs) <= 1e-12, "{lhs} vs {rhs}");
    }

    #[test]
    fn gamma_conjugate(x in 0.1f64..10.0, y in -30.0f64..30.0) {
        let z = c(x, y);
        prop_assert!(rel(gamma(z.conj()).unwrap(), gamma(z).unwrap().conj()) <= 1e-14);
    }
}

proptest! {
    #![proptest_config(cfg(40))]

    #[test]
    fn zeta_matches_direct_sum(x in 3.0f64..6.0, y in -30.0f64..30.0) {
        let s = c(x, y);
        prop_assert!(rel(riemann_zeta(s).unwrap(), zeta_direct(s)) <= 1e-10);
    }

    #[test]
    fn xi_symmetries(x in -2.0f64..3.0, y in -40.0f64..40.0) {
        let s = c(x, y);
        let v = completed_xi(s).unwrap();
        prop_assert!(rel(completed_xi(1.0 - s).unwrap(), v) <= 1e-11);
        prop_assert!(rel(completed_xi(s.conj()).unwrap(), v.conj()) <= 1e-11);
    }

    #[test]
    fn epstein_class_invariance(a in 0.5f64..3.0, b in -0.4f64..0.4, x in 1.3f64..3.0, y in -10.0f64..10.0) {
        // (a, b, c) and (a, b + 2a, a + b + c) are properly equivalent
        let cc = 1.0 + b * b;
        let q = QuadraticForm::new(a, b, cc).unwrap();
        let q2 = QuadraticForm::new(a, b + 2.0 * a, a + b + cc).unwrap();
        let z = c(x, y);
        prop_assert!(rel(epstein_zeta(&q2, z).unwrap(), epstein_zeta(&q, z).unwrap()) <= 1e-10);
    }

    #[test]
    fn epstein_functional_equation(a in 0.5f64..3.0, b in -0.4f64..0.4, x in -1.0f64..2.0, y in 0.5f64..15.0) {
        let q = QuadraticForm::new(a, b, 1.0 + b * b).unwrap();
        let z = c(x, y);
        let l = ln_epstein_xi(&q, z).unwrap();
        let r = ln_epstein_xi(&q, 1.0 - z).unwrap();
        prop_assert!(rel(l.exp(), r.exp()) <= 1e-10);
    }

    #[test]
    fn c_ratio_unimodular_and_involutive(t in -60.0f64..60.0, x in -1.5f64..2.5, y in -25.0f64..25.0) {
        let specs = [
            HFunctionSpec::rational(&[c(0.75, 0.0), c(-1.0, 2.0), c(-1.0, -2.0)], &[c(-0.5, 0.0)], 3.0, &[0.75]).unwrap(),
            HFunctionSpec::riemann_xi_2s(),
            HFunctionSpec::riemann_xi_2s_y(3.0).unwrap(),
            HFunctionSpec::epstein(QuadraticForm::new(1.0, 0.5, 2.0).unwrap()).unwrap(),
        ];
        let s = c(x, y);
        for h in &specs {
            prop_assert!((h.c_ratio(c(0.5, t)).unwrap().norm() - 1.0).abs() <= 1e-10, "{}", h.label);
            let (Ok(a), Ok(b)) = (h.c_ratio(s), h.c_ratio(1.0 - s)) else { continue };
            prop_assert!((a * b - 1.0).norm() <= 1e-10, "{}", h.label);
            prop_assert!(rel(h.c_ratio(s.conj()).unwrap(), a.conj()) <= 1e-10, "{}", h.label);
        }
    }
}

proptest! {
    #![proptest_config(cfg(100))]

    #[test]
    fn gauss_legendre_exact_for_polynomials(n in 1usize..40, coef in proptest::collection::vec(-1.0f64..1.0, 80)) {
        let (x, w) = gauss_legendre(n);
        let deg = 2 * n - 1;
        let p = |t: f64| coef[..=deg].iter().rev().fold(0.0, |acc, &a| acc * t + a);
        let quad: f64 = x.iter().zip(&w).map(|(&t, &wt)| wt * p(t)).sum();
        // int_{-1}^{1} t^k = 2/(k+1) for even k
        let exact: f64 = coef[..=deg].iter().enumerate().filter(|(k, _)| k % 2 == 0).map(|(k, a)| 2.0 * a / (k as f64 + 1.0)).sum();
        prop_assert!((quad - exact).abs() <= 1e-12 * (1.0 + coef.iter().map(|a| a.abs()).sum::<f64>()));
    }
}

#[test]
fn xi_two_values() {
    // xi(2) = pi/6 and xi(0) = 1/2
    assert!(rel(completed_xi(c(2.0, 0.0)).unwrap(), c(PI / 6.0, 0.0)) <= 1e-14);
    assert!(rel(completed_xi(c(0.0, 0.0)).unwrap(), c(0.5, 0.0)) <= 1e-13);
    let h = HFunctionSpec::riemann_xi_2s();
    assert!(rel(h.c_ratio(c(1.0, 0.0)).unwrap(), c(3.0 / PI, 0.0)) <= 1e-13);
}
