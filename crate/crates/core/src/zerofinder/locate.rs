use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::winding::{circle_winding, winding_number, Rect};
use super::{derivative, finish_record, ZeroRecord};
use crate::error::{Error, Result};
use crate::hcatalog::{EtaSign, HFunctionSpec};

const MIN_RECT: f64 = 1e-9;
const SPLITS: [f64; 4] = [0.5371, 0.4629, 0.5813, 0.4187];

fn newton<F>(f: &F, start: Complex64, within: &Rect) -> Option<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let mut s = start;
    let size = within.width().max(within.height());
    let mut best = (s, f64::INFINITY);
    let mut stale = 0;
    for _ in 0..80 {
        let fs = f(s).ok()?;
        if fs.norm() < best.1 {
            best = (s, fs.norm());
            stale = 0;
        } else {
            stale += 1;
        }
        if fs.norm() == 0.0 {
            break;
        }
        let h = (1e-6 * size).max(1e-9 * s.norm().max(1.0));
        let d = derivative(f, s, h).ok()?;
        if d.norm() == 0.0 || !d.is_finite() {
            return None;
        }
        let step = fs / d;
        let tiny = step.norm() <= 1e-12 * s.norm().max(1.0);
        // at rounding level the iterates wander; keep the best one
        if (tiny && stale >= 2) || step.norm() <= 1e-16 * s.norm().max(1.0) {
            break;
        }
        s -= step;
        if !within.grow(1e-3 * size).contains(s) {
            return None;
        }
    }
    let s = best.0;
    if best.1.is_finite() && within.contains(s) {
        let fs = f(s).ok()?;
        let d = derivative(f, s, (1e-6 * size).max(1e-9 * s.norm().max(1.0))).ok()?;
        if (fs / d).norm() <= 1e-10 * s.norm().max(1.0) {
            return Some(s);
        }
    }
    None
}

fn split(rect: &Rect, fx: f64, fy: f64) -> [Rect; 4] {
    let x = rect.re0 + fx * rect.width();
    let y = rect.im0 + fy * rect.height();
    [
        Rect { re0: rect.re0, re1: x, im0: rect.im0, im1: y },
        Rect { re0: x, re1: rect.re1, im0: rect.im0, im1: y },
        Rect { re0: rect.re0, re1: x, im0: y, im1: rect.im1 },
        Rect { re0: x, re1: rect.re1, im0: y, im1: rect.im1 },
    ]
}

enum Found {
    Zero(Complex64, u32),
    Unresolved(Rect),
}

fn search<F>(f: &F, rect: Rect, count: i64, depth: usize) -> Result<Vec<Found>>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    if count <= 0 {
        return Ok(vec![]);
    }
    if let Some(w) = newton(f, rect.center(), &rect) {
        if count == 1 {
            return Ok(vec![Found::Zero(w, 1)]);
        }
        let r = (0.25 * rect.width().min(rect.height())).min(1e-3);
        let inside = w.re - r > rect.re0 && w.re + r < rect.re1 && w.im - r > rect.im0 && w.im + r < rect.im1;
        if inside && r > MIN_RECT && circle_winding(f, w, r).ok() == Some(count) {
            return Ok(vec![Found::Zero(w, count as u32)]);
        }
    }
    if rect.width() < MIN_RECT && rect.height() < MIN_RECT {
        return Ok(vec![Found::Zero(rect.center(), count as u32)]);
    }
    if depth == 0 {
        return Ok(vec![Found::Unresolved(rect)]);
    }
    let mut last_err = None;
    for (k, &fx) in SPLITS.iter().enumerate() {
        let fy = SPLITS[(k + 1) % SPLITS.len()];
        let quads = split(&rect, fx, fy);
        let counts: Vec<Result<i64>> = quads.par_iter().map(|q| winding_number(f, q, PI / 2.0)).collect();
        let counts: Result<Vec<i64>> = counts.into_iter().collect();
        match counts {
            Ok(c) if c.iter().sum::<i64>() == count => {
                let parts: Vec<Result<Vec<Found>>> =
                    quads.par_iter().zip(c.par_iter()).map(|(q, &n)| search(f, *q, n, depth - 1)).collect();
                let mut out = Vec::new();
                for p in parts {
                    out.extend(p?);
                }
                return Ok(out);
            }
            Ok(c) => {
                last_err = Some(Error::NonConvergence(format!("sub-rectangle windings {c:?} do not add up to {count}")))
            }
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.unwrap_or_else(|| Error::NonConvergence("split failed".into())))
}

/// Winding of f over rect, growing the rectangle by 1e-6 up to three times
/// when a zero or pole sits on the boundary.
pub(crate) fn robust_winding<F>(f: &F, rect: &Rect) -> Result<(Rect, i64)>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let mut r = *rect;
    let mut err = None;
    for _ in 0..4 {
        match winding_number(f, &r, PI / 2.0) {
            Ok(w) => return Ok((r, w)),
            Err(e @ Error::Boundary(_)) => {
                err = Some(e);
                r = r.grow(1e-6);
            }
            Err(e) => return Err(e),
        }
    }
    Err(err.unwrap())
}

/// All zeros of N inside rect (rect grown by up to 3e-6 if a zero lies on
/// its boundary), sorted by (Im w, Re w).
pub fn locate_zeros(spec: &HFunctionSpec, eta: EtaSign, rect: &Rect, max_depth: usize) -> Result<Vec<ZeroRecord>> {
    let f = |s: Complex64| spec.n_cleared(eta, s);
    let (r, total) = robust_winding(&f, rect)?;
    if total < 0 {
        return Err(Error::NonConvergence(format!("negative winding {total} for a pole-free function")));
    }
    let found = search(&f, r, total, max_depth)?;
    let mut unresolved = Vec::new();
    let mut zeros = Vec::new();
    for item in found {
        match item {
            Found::Zero(w, m) => zeros.push((w, m)),
            Found::Unresolved(q) => unresolved.push([q.re0, q.re1, q.im0, q.im1]),
        }
    }
    if !unresolved.is_empty() {
        return Err(Error::DepthExhausted(unresolved));
    }
    let records: Vec<Result<ZeroRecord>> = zeros.par_iter().map(|&(w, m)| finish_record(spec, eta, w, m)).collect();
    let mut records: Vec<ZeroRecord> = records.into_iter().collect::<Result<_>>()?;
    records.sort_by(|a, b| a.w.im.total_cmp(&b.w.im).then(a.w.re.total_cmp(&b.w.re)));
    Ok(records)
}

/// A zero of N on the real axis with the two interval readings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RealZero {
    pub x: f64,
    /// inside [1 - sigma_n, sigma_n]
    pub in_reflected_interval: bool,
    /// inside [-sigma_n, sigma_n]
    pub in_symmetric_interval: bool,
}

/// Sign changes of N on [a, b] (sampled every `step`), refined by bisection.
pub fn real_segment_zeros(spec: &HFunctionSpec, eta: EtaSign, a: f64, b: f64, step: f64) -> Result<Vec<RealZero>> {
    let f = |x: f64| -> Result<f64> { Ok(spec.n_cleared(eta, Complex64::new(x, 0.0))?.re) };
    let n = ((b - a) / step).ceil().max(1.0) as usize;
    let xs: Vec<f64> = (0..=n).map(|k| a + (b - a) * k as f64 / n as f64).collect();
    let vals: Vec<Option<f64>> = xs.par_iter().map(|&x| f(x).ok()).collect();
    let sigma_n = spec.declared_sigmas.last().copied().unwrap_or(0.5);
    let mut out: Vec<f64> = Vec::new();
    for k in 0..n {
        let (Some(fa), Some(fb)) = (vals[k], vals[k + 1]) else { continue };
        if fa == 0.0 {
            if out.last().is_none_or(|&l| (l - xs[k]).abs() > 1e-12) {
                out.push(xs[k]);
            }
            continue;
        }
        if fa * fb < 0.0 {
            let (mut lo, mut hi, mut flo) = (xs[k], xs[k + 1], fa);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid == lo || mid == hi {
                    break;
                }
                let fm = f(mid)?;
                if fm == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if (fm < 0.0) == (flo < 0.0) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            out.push(0.5 * (lo + hi));
        }
    }
    if let Some(&fl) = vals[n].as_ref() {
        if fl == 0.0 {
            out.push(xs[n]);
        }
    }
    Ok(out
        .into_iter()
        .map(|x| RealZero {
            x,
            in_reflected_interval: x >= 1.0 - sigma_n - 1e-12 && x <= sigma_n + 1e-12,
            in_symmetric_interval: x >= -sigma_n - 1e-12 && x <= sigma_n + 1e-12,
        })
        .collect())
}
