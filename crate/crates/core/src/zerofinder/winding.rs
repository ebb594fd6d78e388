use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Axis-aligned rectangle [re0, re1] x [im0, im1].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub re0: f64,
    pub re1: f64,
    pub im0: f64,
    pub im1: f64,
}

impl Rect {
    pub fn new(re0: f64, re1: f64, im0: f64, im1: f64) -> Result<Self> {
        if !(re0 < re1 && im0 < im1) || ![re0, re1, im0, im1].iter().all(|x| x.is_finite()) {
            return Err(Error::Precondition(format!("degenerate rectangle [{re0},{re1}]x[{im0},{im1}]")));
        }
        Ok(Rect { re0, re1, im0, im1 })
    }

    pub fn contains(&self, s: Complex64) -> bool {
        s.re > self.re0 && s.re < self.re1 && s.im > self.im0 && s.im < self.im1
    }

    pub fn width(&self) -> f64 {
        self.re1 - self.re0
    }

    pub fn height(&self) -> f64 {
        self.im1 - self.im0
    }

    pub fn center(&self) -> Complex64 {
        Complex64::new(0.5 * (self.re0 + self.re1), 0.5 * (self.im0 + self.im1))
    }

    pub fn grow(&self, d: f64) -> Rect {
        Rect { re0: self.re0 - d, re1: self.re1 + d, im0: self.im0 - d, im1: self.im1 + d }
    }

    pub fn quadrants(&self) -> [Rect; 4] {
        let c = self.center();
        [
            Rect { re0: self.re0, re1: c.re, im0: self.im0, im1: c.im },
            Rect { re0: c.re, re1: self.re1, im0: self.im0, im1: c.im },
            Rect { re0: self.re0, re1: c.re, im0: c.im, im1: self.im1 },
            Rect { re0: c.re, re1: self.re1, im0: c.im, im1: self.im1 },
        ]
    }

    fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.re0, self.im0),
            Complex64::new(self.re1, self.im0),
            Complex64::new(self.re1, self.im1),
            Complex64::new(self.re0, self.im1),
        ]
    }
}

const MIN_STEP: f64 = 1e-12;
/// Longest accepted step in the s-plane; guards against a full turn of the
/// phase hiding between two samples.
const MAX_STEP: f64 = 0.05;

fn eval_checked<F>(f: &F, s: Complex64) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    match f(s) {
        Ok(v) if v.is_finite() && v != Complex64::new(0.0, 0.0) => Ok(v),
        Ok(_) | Err(Error::Pole(_)) | Err(Error::Indeterminate(_)) => Err(Error::Boundary(s)),
        Err(e) => Err(e),
    }
}

/// Phase change of f along the segment a -> b, with every accepted step
/// changing the phase by less than `cap` and agreeing with its two halves.
fn segment_phase<F>(f: &F, a: Complex64, b: Complex64, cap: f64) -> Result<f64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let path = |tau: f64| a + (b - a) * tau;
    let mut tau = 0.0;
    let mut fa = eval_checked(f, a)?;
    let len = (b - a).norm();
    let h_max = (MAX_STEP / len).min(0.25);
    let mut h: f64 = h_max;
    let mut total = 0.0;
    let mut scale = fa.norm();
    while tau < 1.0 {
        let step = h.min(1.0 - tau);
        let fm = eval_checked(f, path(tau + 0.5 * step))?;
        let fb = eval_checked(f, path(tau + step))?;
        let d = (fb / fa).arg();
        let d1 = (fm / fa).arg();
        let d2 = (fb / fm).arg();
        scale = scale.max(fm.norm()).max(fb.norm());
        if d.abs() < cap && d1.abs() < cap && d2.abs() < cap && (d1 + d2 - d).abs() < 1e-6 {
            total += d;
            tau += step;
            fa = fb;
            h = (2.0 * step).min(h_max);
        } else {
            h = 0.5 * step;
            if h * len < MIN_STEP {
                let at = path(tau);
                if fa.norm() < 1e-8 * scale {
                    return Err(Error::Boundary(at));
                }
                return Err(Error::NonConvergence(format!("boundary walk stalled at {at}")));
            }
        }
    }
    Ok(total)
}

/// Number of zeros minus poles of f inside the rectangle.
pub fn winding_number<F>(f: &F, rect: &Rect, phase_step_cap: f64) -> Result<i64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let c = rect.corners();
    let mut total = 0.0;
    for k in 0..4 {
        total += segment_phase(f, c[k], c[(k + 1) % 4], phase_step_cap)?;
    }
    close_to_integer(total)
}

/// Winding of f around the circle |s - center| = r.
pub fn circle_winding<F>(f: &F, center: Complex64, r: f64) -> Result<i64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let n = 64;
    let pts: Vec<Complex64> =
        (0..n).map(|k| center + Complex64::from_polar(r, 2.0 * PI * k as f64 / n as f64)).collect();
    let mut total = 0.0;
    for k in 0..n {
        // chords of the circle; the polygon and the circle enclose the same
        // zeros when the chord sag r(1 - cos(pi/n)) is below their distance
        total += segment_phase(f, pts[k], pts[(k + 1) % n], PI / 2.0)?;
    }
    close_to_integer(total)
}

fn close_to_integer(total: f64) -> Result<i64> {
    let w = total / (2.0 * PI);
    let k = w.round();
    if (w - k).abs() > 0.05 {
        return Err(Error::NonConvergence(format!("winding {w} is not close to an integer")));
    }
    Ok(k as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn examples() {
        let f = |s: Complex64| Ok(s - 0.5);
        let unit = Rect::new(0.0, 1.0, -0.5, 0.5).unwrap();
        assert_eq!(winding_number(&f, &unit, PI / 2.0).unwrap(), 1);
        let g = |s: Complex64| Ok((2.0 * s - 1.0) / (s - 0.75));
        let r1 = Rect::new(0.4, 0.6, -0.1, 0.1).unwrap();
        assert_eq!(winding_number(&g, &r1, PI / 2.0).unwrap(), 1);
        let r2 = Rect::new(0.3, 0.9, -0.1, 0.1).unwrap();
        assert_eq!(winding_number(&g, &r2, PI / 2.0).unwrap(), 0);
    }

    #[test]
    fn double_zero_on_circle() {
        let f = |s: Complex64| Ok((s - 0.5) * (s - 0.5));
        assert_eq!(circle_winding(&f, c(0.5, 0.0), 0.01).unwrap(), 2);
    }

    #[test]
    fn zero_on_boundary_is_reported() {
        let f = |s: Complex64| Ok(s - 0.5);
        let r = Rect::new(0.5, 1.0, -0.5, 0.5).unwrap();
        assert!(matches!(winding_number(&f, &r, PI / 2.0), Err(Error::Boundary(_))));
    }

    #[test]
    fn many_zeros() {
        let f = |s: Complex64| Ok((s * 20.0).sin());
        let r = Rect::new(-1.01, 1.02, -0.3, 0.3).unwrap();
        // zeros at k pi / 20 with |k| <= 6
        assert_eq!(winding_number(&f, &r, PI / 2.0).unwrap(), 13);
    }
}
