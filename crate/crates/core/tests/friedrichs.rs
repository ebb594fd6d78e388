use critline::error::Error;
use critline::friedrichs::*;
use critline::hcatalog::{EtaSign, HFunctionSpec};
use critline::report::Status;
use critline::specfun::QuadraticForm;
use num_complex::Complex64;
use proptest::prelude::*;

fn r075() -> HFunctionSpec {
    HFunctionSpec::rational(&[Complex64::new(0.75, 0.0)], &[], 1.0, &[0.75]).unwrap()
}

fn catalog() -> Vec<(HFunctionSpec, EtaSign)> {
    vec![
        (r075(), EtaSign::Minus),
        (HFunctionSpec::riemann_xi_2s(), EtaSign::Plus),
        (HFunctionSpec::riemann_xi_2s_y(2.0).unwrap(), EtaSign::Plus),
        (HFunctionSpec::epstein(QuadraticForm::new(1.0, 0.0, 1.0).unwrap()).unwrap(), EtaSign::Plus),
    ]
}

#[test]
fn rational_model_shape() {
    let m = build_model(&r075(), EtaSign::Minus, 10.0, 8, None).unwrap();
    assert_eq!(m.lambda_points(), vec![0.75 * -0.25]);
    assert_eq!(m.c_shift, 1.0);
    assert!(m.lambda_line().iter().all(|l| *l <= -0.25));
    assert!(matches!(build_model(&r075(), EtaSign::Plus, 10.0, 8, None), Err(Error::SignCondition(_))));
}

#[test]
fn toy_models() {
    let m = DiscreteModel::toy(&[-1.0, -2.0], &[1.0, 1.0]).unwrap();
    let d = constrained_spectrum(&m).unwrap();
    assert!((d.eigenvalues[0] + 1.5).abs() < 1e-14);
    let r = secular_roots(&m, (-5.0, 5.0)).unwrap();
    assert!(r.len() == 1 && (r[0] + 1.5).abs() < 1e-14);
}

#[test]
fn secular_and_dense_agree_on_small_models() {
    for (h, eta) in catalog() {
        let m = build_model(&h, eta, 6.0, 4, None).unwrap();
        let (diff, sec, dense) = method_agreement(&m).unwrap_or_else(|e| panic!("{}: {e}", h.label));
        println!("{}: entries {} diff {diff:e}", h.label, m.len());
        assert!(diff <= 1e-10, "{}: {diff}", h.label);
        assert!(sec.residuals.iter().all(|r| r.1 <= 1e-9));
        assert!(dense.residuals.iter().all(|r| r.0 <= 1e-9 && r.1 <= 1e-9), "{:?}", dense.residuals);
        // line-only models stay at or below -1/4
        if h.declared_sigmas.is_empty() {
            assert!(dense.eigenvalues.iter().all(|l| *l <= -0.25));
        }
        let inv = shift_invariance(&m).unwrap();
        assert!(inv <= 1e-9, "{}: {inv}", h.label);
    }
}

#[test]
fn secular_roots_interlace() {
    let m = build_model(&HFunctionSpec::riemann_xi_2s(), EtaSign::Plus, 20.0, 8, None).unwrap();
    let poles = merged_poles(&m);
    let lo = poles[0].0 - 1.0;
    let roots = secular_roots(&m, (lo, 0.0)).unwrap();
    assert_eq!(roots.len(), poles.len() - 1);
    for (k, r) in roots.iter().enumerate() {
        assert!(poles[k].0 < *r && *r < poles[k + 1].0);
    }
}

#[test]
fn rational_point_is_matched() {
    // eta = -1: theta = 1 - c vanishes at s = 1/2 only, where lambda = -1/4
    let mut last = f64::INFINITY;
    for (t, n) in [(20.0, 8), (40.0, 16), (80.0, 32)] {
        let (_, row) = spectral_zero_correspondence(&r075(), EtaSign::Minus, t, n, (0.0, 10.0), 1.0).unwrap();
        println!("{row:?}");
        assert_eq!(row.zero_count, 1);
        assert!(row.max_pair_distance < last);
        last = row.max_pair_distance;
    }
}

#[test]
fn xi_correspondence_converges() {
    let h = HFunctionSpec::riemann_xi_2s();
    let (rep, coarse) = spectral_zero_correspondence(&h, EtaSign::Plus, 60.0, 16, (0.0, 30.0), 1e-3).unwrap();
    assert_eq!(rep.status(), Status::Pass, "{rep:?}");
    let (rep, fine) = spectral_zero_correspondence(&h, EtaSign::Plus, 120.0, 32, (0.0, 30.0), 1e-4).unwrap();
    assert_eq!(rep.status(), Status::Pass, "{rep:?}");
    assert!(fine.max_pair_distance < coarse.max_pair_distance);
    assert_eq!(coarse.zero_count, 13);
}

#[test]
fn lambda_map_round_trip() {
    for l in [-5.0, -0.25, -0.2, 0.3] {
        for w in map_lambda_to_w(l) {
            assert!((w * (w - 1.0) - l).norm() < 1e-14);
        }
    }
}

fn small_model() -> DiscreteModel {
    build_model(&HFunctionSpec::riemann_xi_2s(), EtaSign::Plus, 4.0, 4, None).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 100, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn riesz_inverse_is_a_contraction(seed in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 36)) {
        let m = small_model();
        let f: Vec<Complex64> = (0..m.len()).map(|e| {
            let (a, b) = seed[e % seed.len()];
            Complex64::new(a, b)
        }).collect();
        let u = riesz_inverse(&m, &f);
        let n1 = h1_inner(&m, &u, &u).re.sqrt();
        let n0 = h0_inner(&m, &f, &f).re.sqrt();
        prop_assert!(n1 <= n0 * (1.0 + 1e-12));
        // <A f, g>_1 = <f, g>_0
        let g: Vec<Complex64> = f.iter().rev().cloned().collect();
        let lhs = h1_inner(&m, &u, &g);
        let rhs = h0_inner(&m, &f, &g);
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (n0 * h0_inner(&m, &g, &g).re.sqrt()).max(1e-300));
    }
}
