use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{EtaSign, HFunctionSpec};
use crate::error::{Error, Result};
use crate::quadrature::{gauss_legendre, pairwise_sum};
use crate::report::{Check, Status, VerificationReport};
use crate::zerofinder::{winding_number, Rect};

pub type CheckBox = Rect;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// max |Im h| / max(1, |h|) on the real axis
    pub reality: f64,
    /// max ||c| - 1| on the line
    pub unit_modulus: f64,
    /// allowed |Im R| and allowed negative eta R
    pub residue: f64,
    /// the fitted growth exponent must stay below 1 - min_epsilon
    pub min_epsilon: f64,
    /// growth ratio of the truncated L2 integral per doubling of T
    pub divergence_ratio: f64,
    /// GL nodes per unit panel for the L2 growth integrals
    pub l2_nodes_per_unit: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            reality: 1e-10,
            unit_modulus: 1e-10,
            residue: 1e-8,
            min_epsilon: 0.05,
            divergence_ratio: 1.5,
            l2_nodes_per_unit: 6,
        }
    }
}

fn inconclusive(name: &str, tol: f64, err: &Error) -> Check {
    Check::new(name, Status::Inconclusive, tol).witness("evaluation_failed", 1.0).note(err.to_string())
}

fn check_reality(spec: &HFunctionSpec, tol: f64) -> Check {
    let xs: Vec<f64> = (0..=140).map(|k| -3.0 + 0.05 * k as f64 + 1e-3).collect();
    let vals: Vec<Option<f64>> = xs
        .par_iter()
        .map(|&x| {
            let v = spec.h_eval(Complex64::new(x, 0.0)).ok()?;
            v.is_finite().then(|| v.im.abs() / v.norm().max(1.0))
        })
        .collect();
    let used = vals.iter().flatten().count();
    let worst = vals.iter().flatten().fold(0f64, |a, &b| a.max(b));
    Check::new("reality", Status::from_bool(used > 0 && worst <= tol), tol)
        .witness("max_rel_imag", worst)
        .witness("samples", used as f64)
}

fn check_zero_free(spec: &HFunctionSpec, rect: &Rect) -> Check {
    let h = |s: Complex64| spec.h_eval(s);
    let expected_zeros = spec.declared_sigmas.iter().filter(|&&s| rect.contains(Complex64::new(s, 0.0))).count() as i64;
    let poles = spec.poles().iter().filter(|p| rect.contains(**p)).count() as i64;
    match winding_number(&h, rect, PI / 2.0) {
        Ok(w) => Check::new("zero_free", Status::from_bool(w == expected_zeros - poles), 0.0)
            .witness("winding", w as f64)
            .witness("declared_inside", expected_zeros as f64)
            .witness("poles_inside", poles as f64),
        Err(e) => inconclusive("zero_free", 0.0, &e),
    }
}

/// Least-squares slope of ln max|c| against ln|s| over half-arcs in
/// Re s >= 1/2.
pub fn growth_exponent(spec: &HFunctionSpec) -> Result<f64> {
    let mut singular: Vec<Complex64> = spec.declared_sigmas.iter().map(|&s| Complex64::new(s, 0.0)).collect();
    singular.extend(spec.poles().iter().map(|p| Complex64::new(1.0, 0.0) - p));
    if let super::Variant::Rational { zeros, .. } = &spec.variant {
        singular.extend(zeros.iter().copied());
    }
    let radii: Vec<f64> = (2..=8).map(|k| (1u64 << k) as f64).collect();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for &r in &radii {
        let pts: Vec<Complex64> = (0..64)
            .map(|k| Complex64::from_polar(r, -PI / 2.0 + PI * (k as f64 + 0.5) / 64.0))
            .filter(|s| s.re >= 0.5 && singular.iter().all(|p| (s - p).norm() > 0.05))
            .collect();
        let mags: Vec<Result<f64>> = pts.par_iter().map(|&s| Ok(spec.c_ratio(s)?.norm().ln())).collect();
        let mut best = f64::NEG_INFINITY;
        for m in mags {
            best = best.max(m?);
        }
        if best.is_finite() {
            xs.push(r.ln());
            ys.push(best);
        }
    }
    if xs.len() < 2 {
        return Err(Error::Degenerate("no usable growth samples".into()));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(sxy / sxx)
}

fn check_growth(spec: &HFunctionSpec, min_eps: f64) -> Check {
    match growth_exponent(spec) {
        Ok(slope) => Check::new("growth", Status::from_bool(slope <= 1.0 - min_eps), min_eps)
            .witness("slope", slope)
            .witness("epsilon", 1.0 - slope),
        Err(e) => inconclusive("growth", min_eps, &e),
    }
}

fn check_residues(spec: &HFunctionSpec, eta: EtaSign, tol: f64) -> Check {
    let mut c = Check::new("residue_signs", Status::Pass, tol).witness("count", spec.declared_sigmas.len() as f64);
    match spec.residues(eta) {
        Ok(rs) => {
            for (i, r) in rs.iter().enumerate() {
                c = c.witness(format!("eta_r_{i}"), r.eta_r).witness(format!("imag_defect_{i}"), r.imag_defect);
                if r.eta_r < -tol || r.imag_defect > tol {
                    c.status = Status::Fail;
                }
            }
            c
        }
        Err(e) => inconclusive("residue_signs", tol, &e),
    }
}

fn check_unit_modulus(spec: &HFunctionSpec, tol: f64) -> Check {
    let ts: Vec<f64> = (0..=200).map(|k| 0.25 * k as f64 + 1e-3).collect();
    let vals: Vec<Result<f64>> =
        ts.par_iter().map(|&t| Ok((spec.c_ratio(Complex64::new(0.5, t))?.norm() - 1.0).abs())).collect();
    let mut worst = 0f64;
    let mut used = 0;
    for v in vals.into_iter().flatten() {
        worst = worst.max(v);
        used += 1;
    }
    Check::new("unit_modulus", Status::from_bool(used > 0 && worst <= tol), tol)
        .witness("max_defect", worst)
        .witness("samples", used as f64)
}

/// Truncated integrals of |theta|^2 over [-T, T] for T = 50, 100, 200, 400.
pub fn theta_l2_growth(spec: &HFunctionSpec, eta: EtaSign, nodes_per_unit: usize) -> Result<Vec<(f64, f64)>> {
    let (gx, gw) = gauss_legendre(nodes_per_unit);
    let panels = 400usize;
    let mut pts = Vec::with_capacity(panels * nodes_per_unit);
    for p in 0..panels {
        for (x, w) in gx.iter().zip(&gw) {
            pts.push((p as f64 + 0.5 + 0.5 * x, 0.5 * w));
        }
    }
    let vals: Vec<Result<f64>> = pts
        .par_iter()
        .map(|&(t, w)| {
            let th = Complex64::new(1.0, 0.0) + eta.value() * spec.c_ratio(Complex64::new(0.5, t))?;
            Ok(2.0 * w * th.norm_sqr())
        })
        .collect();
    let vals: Vec<f64> = vals.into_iter().collect::<Result<_>>()?;
    let per_panel: Vec<f64> = vals.chunks(nodes_per_unit).map(pairwise_sum).collect();
    Ok([50usize, 100, 200, 400].iter().map(|&t| (t as f64, pairwise_sum(&per_panel[..t]))).collect())
}

fn check_l2(spec: &HFunctionSpec, eta: EtaSign, tol: &Tolerances) -> Check {
    let name = "not_square_integrable";
    match theta_l2_growth(spec, eta, tol.l2_nodes_per_unit) {
        Ok(v) => {
            let last = v[3].1;
            let ratio = last / v[2].1.max(f64::MIN_POSITIVE);
            let status = if last <= 1e-20 * v[3].0 {
                Status::Fail
            } else if ratio >= tol.divergence_ratio {
                Status::Pass
            } else {
                Status::Inconclusive
            };
            let mut c = Check::new(name, status, tol.divergence_ratio)
                .witness("last_ratio", if last <= 1e-20 * v[3].0 { 0.0 } else { ratio })
                .note("diagnostic only: growth of truncated integrals, not a proof");
            for (t, i) in v {
                c = c.witness(format!("l2_T{t}"), i);
            }
            c
        }
        Err(e) => inconclusive(name, tol.divergence_ratio, &e),
    }
}

/// Runs the six hypothesis checks (a)-(f).
pub fn check_hypotheses(spec: &HFunctionSpec, eta: EtaSign, rect: &CheckBox, tol: &Tolerances) -> VerificationReport {
    let mut rep = VerificationReport::new(format!("hypotheses {} eta={}", spec.label, eta.name()));
    rep.push(check_reality(spec, tol.reality));
    rep.push(check_zero_free(spec, rect));
    rep.push(check_growth(spec, tol.min_epsilon));
    rep.push(check_residues(spec, eta, tol.residue));
    rep.push(check_unit_modulus(spec, tol.unit_modulus));
    rep.push(check_l2(spec, eta, tol));
    rep
}
