//! Zeros of theta = 1 + eta c_s, equivalently of N(s) = h(s) + eta h(1-s):
//! argument-principle search in rectangles, phase tracking on the critical
//! line, a real-axis scan and simplicity checks.

mod locate;
mod phase;
mod winding;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::hcatalog::{EtaSign, HFunctionSpec};

pub use locate::{locate_zeros, real_segment_zeros, RealZero};
pub use phase::{online_phase_zeros, unwrapped_phase};
pub use winding::{circle_winding, winding_number, Rect};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroRecord {
    pub w: Complex64,
    pub eta: EtaSign,
    pub multiplicity: u32,
    pub online_defect: f64,
    pub refinement_residual: f64,
    pub simultaneous_flag: bool,
    pub derivative_magnitude: f64,
}

impl ZeroRecord {
    pub fn is_real(&self) -> bool {
        self.w.im.abs() <= 1e-8
    }
}

/// d/ds of f by the five-point central difference.
pub(crate) fn derivative<F>(f: &F, s: Complex64, h: f64) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let h = Complex64::new(h, 0.0);
    Ok((f(s - 2.0 * h)? - 8.0 * f(s - h)? + 8.0 * f(s + h)? - f(s + 2.0 * h)?) / (12.0 * h))
}

/// |f(w)| relative to the largest |f| on a circle of radius 1e-3 about w.
pub(crate) fn relative_residual<F>(f: &F, w: Complex64) -> Result<f64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let mut scale = 0f64;
    for k in 0..8 {
        let p = w + Complex64::from_polar(1e-3, std::f64::consts::PI * k as f64 / 4.0);
        scale = scale.max(f(p)?.norm());
    }
    Ok(f(w)?.norm() / scale.max(f64::MIN_POSITIVE))
}

fn finish_record(spec: &HFunctionSpec, eta: EtaSign, w: Complex64, multiplicity: u32) -> Result<ZeroRecord> {
    let cleared = |s: Complex64| spec.n_cleared(eta, s);
    let n = |s: Complex64| spec.n_eta(eta, s);
    Ok(ZeroRecord {
        w,
        eta,
        multiplicity,
        online_defect: (w.re - 0.5).abs(),
        refinement_residual: relative_residual(&cleared, w)?,
        simultaneous_flag: spec.simultaneous_zero(w),
        derivative_magnitude: derivative(&n, w, 1e-3)?.norm(),
    })
}

/// Sets the multiplicity from the winding of N around a small circle and the
/// derivative magnitude from a five-point difference.
pub fn simplicity_check(
    spec: &HFunctionSpec,
    eta: EtaSign,
    record: &ZeroRecord,
    circle_radius: f64,
) -> Result<ZeroRecord> {
    let cleared = |s: Complex64| spec.n_cleared(eta, s);
    let m = circle_winding(&cleared, record.w, circle_radius)?;
    if m < 1 {
        return Err(crate::error::Error::Isolation {
            at: record.w,
            detail: format!("winding {m} around the recorded zero"),
        });
    }
    let mut out = record.clone();
    out.multiplicity = m as u32;
    let n = |s: Complex64| spec.n_eta(eta, s);
    out.derivative_magnitude = derivative(&n, record.w, (0.25 * circle_radius).min(1e-3))?.norm();
    Ok(out)
}
