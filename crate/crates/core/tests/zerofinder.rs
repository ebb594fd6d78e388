use std::f64::consts::PI;

use critline::hcatalog::{EtaSign, HFunctionSpec};
use critline::specfun::QuadraticForm;
use critline::zerofinder::{
    circle_winding, locate_zeros, online_phase_zeros, real_segment_zeros, simplicity_check, winding_number, Rect,
};
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn r075() -> HFunctionSpec {
    HFunctionSpec::rational(&[c(0.75, 0.0)], &[], 1.0, &[0.75]).unwrap()
}

#[test]
fn rational_rect_examples() {
    let rect = Rect::new(0.3, 0.9, -0.5, 0.5).unwrap();
    let z = locate_zeros(&r075(), EtaSign::Minus, &rect, 30).unwrap();
    assert_eq!(z.len(), 1);
    assert!((z[0].w - c(0.5, 0.0)).norm() < 1e-12);
    assert_eq!(z[0].multiplicity, 1);
    assert!(locate_zeros(&r075(), EtaSign::Plus, &rect, 30).unwrap().is_empty());
}

#[test]
fn rational_phase_examples() {
    let z = online_phase_zeros(&r075(), EtaSign::Minus, -1.0, 1.0, 0.05).unwrap();
    assert_eq!(z.len(), 1);
    assert!(z[0].w.im.abs() < 1e-12);
    assert!(online_phase_zeros(&r075(), EtaSign::Plus, -10.0, 10.0, 0.05).unwrap().is_empty());
}

#[test]
fn xi_two_methods_agree() {
    let h = HFunctionSpec::riemann_xi_2s();
    let rect = Rect::new(0.1, 0.9, 0.0, 30.0).unwrap();
    let a = locate_zeros(&h, EtaSign::Plus, &rect, 40).unwrap();
    let b = online_phase_zeros(&h, EtaSign::Plus, 0.0, 30.0, 0.05).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a.len(), b.len(), "{a:?}\n{b:?}");
    for (x, y) in a.iter().zip(&b) {
        assert!(x.online_defect <= 1e-8, "{x:?}");
        assert!((x.w - y.w).norm() <= 1e-9, "{:?} vs {:?}", x.w, y.w);
        assert!(x.refinement_residual <= 1e-10, "{x:?}");
    }
    let total = winding_number(&|s| h.n_cleared(EtaSign::Plus, s), &rect, PI / 2.0).unwrap();
    assert_eq!(total, a.iter().map(|r| r.multiplicity as i64).sum::<i64>());
    let first = simplicity_check(&h, EtaSign::Plus, &a[0], 1e-3).unwrap();
    assert_eq!(first.multiplicity, 1);
    assert!(first.derivative_magnitude > 0.0);
}

#[test]
fn epstein_two_methods_agree() {
    let h = HFunctionSpec::epstein(QuadraticForm::new(1.0, 0.0, 1.0).unwrap()).unwrap();
    let rect = Rect::new(0.1, 0.9, 0.0, 30.0).unwrap();
    let a: Vec<_> = locate_zeros(&h, EtaSign::Plus, &rect, 40).unwrap().into_iter().filter(|r| !r.is_real()).collect();
    let b = online_phase_zeros(&h, EtaSign::Plus, 1e-6, 30.0, 0.05).unwrap();
    assert_eq!(a.len(), b.len(), "{a:?}\n{b:?}");
    for (x, y) in a.iter().zip(&b) {
        assert!(x.online_defect <= 1e-8, "{x:?}");
        assert!((x.w - y.w).norm() <= 1e-9, "{:?} vs {:?}", x.w, y.w);
    }
}

#[test]
fn double_zero_is_counted_twice() {
    let f = |s: Complex64| Ok((s - 0.5) * (s - 0.5));
    assert_eq!(circle_winding(&f, c(0.5, 0.0), 1e-2).unwrap(), 2);
}

#[test]
fn real_segment_scan() {
    let z = real_segment_zeros(&r075(), EtaSign::Minus, -2.0, 3.0, 0.01).unwrap();
    assert_eq!(z.len(), 1);
    assert!((z[0].x - 0.5).abs() < 1e-12);
    assert!(z[0].in_reflected_interval && z[0].in_symmetric_interval);
}
