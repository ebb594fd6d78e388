use std::f64::consts::PI;

use num_complex::Complex64;

use super::{finish_record, ZeroRecord};
use crate::error::{Error, Result};
use crate::hcatalog::{EtaSign, HFunctionSpec};

const MIN_STEP: f64 = 1e-10;

/// Samples (t, phi(t)) of the continuous phase of c(1/2 + it) on [t0, t1],
/// with every step changing phi by less than pi/2.
pub fn unwrapped_phase(spec: &HFunctionSpec, t0: f64, t1: f64, t_step: f64) -> Result<Vec<(f64, f64, Complex64)>> {
    let c = |t: f64| spec.c_ratio(Complex64::new(0.5, t));
    let mut t = t0;
    let mut ct = c(t)?;
    let mut phi = ct.arg();
    let mut out = vec![(t, phi, ct)];
    let mut h = t_step;
    while t < t1 {
        let step = h.min(t1 - t);
        let cm = c(t + 0.5 * step)?;
        let cb = c(t + step)?;
        let d = (cb / ct).arg();
        let d1 = (cm / ct).arg();
        let d2 = (cb / cm).arg();
        if d.abs() < PI / 2.0 && (d1 + d2 - d).abs() < 1e-9 {
            t += step;
            phi += d;
            ct = cb;
            out.push((t, phi, ct));
            h = t_step;
        } else {
            h = 0.5 * step;
            if h < MIN_STEP {
                return Err(Error::PhaseTracking(t));
            }
        }
    }
    Ok(out)
}

/// Zeros of theta on the segment 1/2 + i[t0, t1] from the phase condition
/// c = -eta, refined to |theta| <= 1e-12.
pub fn online_phase_zeros(
    spec: &HFunctionSpec,
    eta: EtaSign,
    t0: f64,
    t1: f64,
    t_step: f64,
) -> Result<Vec<ZeroRecord>> {
    let target = Complex64::new(-eta.value(), 0.0);
    // g(t) = arg(c / target), continuous near its zeros
    let g = |t: f64| -> Result<(f64, f64)> {
        let ct = spec.c_ratio(Complex64::new(0.5, t))?;
        Ok(((ct / target).arg(), (Complex64::new(1.0, 0.0) + eta.value() * ct).norm()))
    };
    let samples = unwrapped_phase(spec, t0, t1, t_step)?;
    let mut roots: Vec<f64> = Vec::new();
    for k in 0..samples.len() {
        let (ta, _, ca) = samples[k];
        let ga = (ca / target).arg();
        if ga == 0.0 {
            roots.push(ta);
            continue;
        }
        if k + 1 == samples.len() {
            break;
        }
        let (tb, _, cb) = samples[k + 1];
        let gb = (cb / target).arg();
        if gb == 0.0 || ga.abs() >= PI / 2.0 || gb.abs() >= PI / 2.0 || (ga < 0.0) == (gb < 0.0) {
            continue;
        }
        // Illinois variant of regula falsi, with bisection safeguard
        let (mut a, mut b, mut fa, mut fb) = (ta, tb, ga, gb);
        let mut root = 0.5 * (a + b);
        let mut side = 0;
        for it in 0..200 {
            let mut x = if it % 3 == 2 { 0.5 * (a + b) } else { b - fb * (b - a) / (fb - fa) };
            if !(x > a && x < b) {
                x = 0.5 * (a + b);
            }
            let (fx, th) = g(x)?;
            root = x;
            if th <= 1e-12 || fx == 0.0 || (b - a) <= 4.0 * f64::EPSILON * b.abs().max(1.0) {
                break;
            }
            if (fx < 0.0) == (fa < 0.0) {
                a = x;
                fa = fx;
                if side == -1 {
                    fb *= 0.5;
                }
                side = -1;
            } else {
                b = x;
                fb = fx;
                if side == 1 {
                    fa *= 0.5;
                }
                side = 1;
            }
        }
        roots.push(root);
    }
    roots.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    roots.into_iter().map(|t| finish_record(spec, eta, Complex64::new(0.5, t), 1)).collect()
}
