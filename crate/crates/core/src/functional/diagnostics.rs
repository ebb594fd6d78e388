use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{boundary_value, checked_residues, lambda, pairing_on_samples, LineSamples, ONE};
use crate::error::{Error, Result};
use crate::hcatalog::{EtaSign, HFunctionSpec, ResidueData};
use crate::quadrature::{gauss_legendre, pairwise_sum, LineQuadrature};
use crate::report::{Check, Status, VerificationReport};

/// Relative errors below this are treated as converged when judging the
/// monotone decrease across the T schedule.
const ERROR_FLOOR: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityRow {
    pub w: Complex64,
    pub t_max: f64,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub rel_err: f64,
}

/// Pairing against theta(w)/(1 - 2w) for each T in the schedule.
pub fn verify_identity(
    spec: &HFunctionSpec,
    eta: EtaSign,
    w: Complex64,
    schedule: &[f64],
    per_panel: usize,
) -> Result<(VerificationReport, Vec<IdentityRow>)> {
    if w.re <= 0.5 {
        return Err(Error::Precondition(format!("identity check needs Re w > 1/2, got {w}")));
    }
    if spec.declared_sigmas.iter().any(|&s| (w - s).norm() < 1e-12) {
        return Err(Error::Precondition(format!("w = {w} is a declared sigma")));
    }
    let t_top = schedule.iter().copied().fold(0.0, f64::max);
    let quad = LineQuadrature::new(t_top, per_panel)?;
    let samples = LineSamples::new(spec, &quad)?;
    let residues = checked_residues(spec, eta)?;
    verify_identity_on(spec, eta, w, schedule, &samples, &residues)
}

/// As `verify_identity`, reusing line samples computed for max(schedule).
pub fn verify_identity_on(
    spec: &HFunctionSpec,
    eta: EtaSign,
    w: Complex64,
    schedule: &[f64],
    samples: &LineSamples,
    residues: &[ResidueData],
) -> Result<(VerificationReport, Vec<IdentityRow>)> {
    let rhs = boundary_value(spec, eta, w)?;
    let mut rows = Vec::new();
    for &t in schedule {
        let lhs = pairing_on_samples(spec, eta, w, samples, t, residues)?.value;
        rows.push(IdentityRow { w, t_max: t, lhs, rhs, rel_err: (lhs - rhs).norm() / rhs.norm() });
    }
    let mut rep = VerificationReport::new(format!("identity {} eta={} w={w}", spec.label, eta.name()));
    let last = rows.last().map_or(f64::NAN, |r| r.rel_err);
    rep.push(
        Check::new("boundary_identity", Status::from_bool(last <= 1e-6), 1e-6)
            .witness("final_rel_err", last)
            .witness("rhs_re", rhs.re)
            .witness("rhs_im", rhs.im),
    );
    let decreasing = rows.windows(2).all(|p| p[1].rel_err <= p[0].rel_err || p[1].rel_err <= ERROR_FLOOR);
    let fit: Vec<(f64, f64)> =
        rows.iter().filter(|r| r.rel_err > 0.0).map(|r| (r.t_max.ln(), r.rel_err.ln())).collect();
    let order = if fit.len() >= 2 {
        let n = fit.len() as f64;
        let mx = fit.iter().map(|p| p.0).sum::<f64>() / n;
        let my = fit.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = fit.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = fit.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
        sxy / sxx
    } else {
        f64::NAN
    };
    rep.push(
        Check::new("errors_decreasing", Status::from_bool(decreasing), ERROR_FLOOR)
            .witness("fitted_order", order)
            .witness("first_rel_err", rows.first().map_or(f64::NAN, |r| r.rel_err)),
    );
    Ok((rep, rows))
}

fn theta_line(spec: &HFunctionSpec, eta: EtaSign, t: f64) -> Result<Complex64> {
    Ok(ONE + eta.value() * spec.c_ratio(Complex64::new(0.5, t))?)
}

/// (1/4pi) int |u_w|^2 dt over the line for w = 1/2 + ib a zero of theta;
/// the integrand is regular at t = +-b.
fn line_norm_sq(spec: &HFunctionSpec, eta: EtaSign, b: f64, samples: &LineSamples, t_max: f64) -> Result<f64> {
    let e = eta.value();
    let s = samples.restrict(t_max);
    let mut fill = None;
    let terms: Vec<f64> =
        s.t.iter()
            .zip(&s.weight)
            .zip(&s.c)
            .map(|((&t, &wt), &ct)| {
                let den = t * t - b * b;
                if den.abs() < 1e-6 {
                    fill = Some(wt);
                    return 0.0;
                }
                wt * (ONE + e * ct).norm_sqr() / (den * den)
            })
            .collect();
    let mut acc = 2.0 * pairwise_sum(&terms);
    if let Some(wt) = fill {
        let h = 1e-3;
        let d = (theta_line(spec, eta, b - 2.0 * h)? - 8.0 * theta_line(spec, eta, b - h)?
            + 8.0 * theta_line(spec, eta, b + h)?
            - theta_line(spec, eta, b + 2.0 * h)?)
            / (12.0 * h);
        acc += 2.0 * wt * d.norm_sqr() / (4.0 * b * b);
    }
    // |theta|^2 averages 2 + 2 eta A beyond T; 1/(t^2 - b^2)^2 ~ t^-4
    acc += 2.0 * 2.0 / (3.0 * t_max.powi(3));
    Ok(acc / (4.0 * PI))
}

/// Compares the w-derivative of the continued pairing at an on-line zero
/// with (2 w0 - 1) times the squared norm of u_{w0}.
pub fn derivative_identity(
    spec: &HFunctionSpec,
    eta: EtaSign,
    w0: Complex64,
    quad: &LineQuadrature,
) -> Result<VerificationReport> {
    let samples = LineSamples::new(spec, quad)?;
    derivative_identity_on(spec, eta, w0, &samples, quad.t_max)
}

/// As `derivative_identity`, reusing line samples that reach at least `t_max`.
pub fn derivative_identity_on(
    spec: &HFunctionSpec,
    eta: EtaSign,
    w0: Complex64,
    samples: &LineSamples,
    t_max: f64,
) -> Result<VerificationReport> {
    if (w0.re - 0.5).abs() > 1e-8 {
        return Err(Error::Precondition(format!("w0 = {w0} is not on the critical line")));
    }
    if (w0 - 0.5).norm() < 1e-4 {
        return Err(Error::Precondition("w0 = 1/2 is the excluded point".into()));
    }
    let b = w0.im;
    let w0 = Complex64::new(0.5, b);
    let residues = checked_residues(spec, eta)?;
    let h = 1e-5 * w0.norm().max(1.0);
    let gp = pairing_on_samples(spec, eta, Complex64::new(0.5, b + h), samples, t_max, &residues)?.value;
    let gm = pairing_on_samples(spec, eta, Complex64::new(0.5, b - h), samples, t_max, &residues)?.value;
    // dw = i dt along the line
    let numeric = (gp - gm) / Complex64::new(0.0, 2.0 * h);
    let line_norm = line_norm_sq(spec, eta, b.abs(), samples, t_max)?;
    let lw0 = lambda(w0);
    let point_norm: f64 =
        residues.iter().map(|r| r.eta_r.max(0.0) / (lambda(Complex64::new(r.sigma, 0.0)) - lw0).norm_sqr()).sum();
    let norm_sq = line_norm + point_norm;
    let formula = (2.0 * w0 - 1.0) * norm_sq;
    let mismatch = (numeric - formula).norm() / formula.norm();
    // the same quantity with the prefactor -1/(4 pi i) and |u|^2 = int |u|^2 dt
    let literal = -(2.0 * w0 - 1.0) / Complex64::new(0.0, 4.0 * PI) * (4.0 * PI * line_norm);
    let literal_mismatch = (numeric - literal).norm() / literal.norm();
    let theta_w0 = (ONE + eta.value() * spec.c_ratio(w0)?).norm();
    let mut rep = VerificationReport::new(format!("derivative {} eta={} w0={w0}", spec.label, eta.name()));
    rep.push(
        Check::new("derivative_matches_norm", Status::from_bool(mismatch <= 1e-4), 1e-4)
            .witness("rel_mismatch", mismatch)
            .witness("numeric_re", numeric.re)
            .witness("numeric_im", numeric.im)
            .witness("formula_re", formula.re)
            .witness("formula_im", formula.im)
            .witness("literal_prefactor_mismatch", literal_mismatch),
    );
    rep.push(
        Check::new("norm_positive", Status::from_bool(norm_sq > 0.0 && norm_sq.is_finite()), 0.0)
            .witness("norm_sq", norm_sq)
            .witness("theta_at_w0", theta_w0),
    );
    Ok(rep)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum H1Class {
    Convergent,
    Divergent,
    Unclear,
}

/// Panels on [x0, x1] of width at most 1, refined geometrically toward the
/// requested ends, starting from width `first`.
fn graded_panels(x0: f64, x1: f64, first: f64, grade_left: bool, grade_right: bool) -> Vec<(f64, f64)> {
    let mut cuts = vec![x0, x1];
    let mut d = first;
    while d < 0.5 * (x1 - x0) && d < 1.0 {
        if grade_left {
            cuts.push(x0 + d);
        }
        if grade_right {
            cuts.push(x1 - d);
        }
        d *= 2.0;
    }
    cuts.sort_by(f64::total_cmp);
    let mut out = Vec::new();
    for p in cuts.windows(2) {
        let n = ((p[1] - p[0]).ceil() as usize).max(1);
        for k in 0..n {
            let a = p[0] + (p[1] - p[0]) * k as f64 / n as f64;
            let b = p[0] + (p[1] - p[0]) * (k + 1) as f64 / n as f64;
            if b > a {
                out.push((a, b));
            }
        }
    }
    out
}

/// Truncated H^1-type norm of u_w for w = 1/2 + ib: the line part over
/// [-T, T] with (b - 1/T, b + 1/T) and its mirror cut out, plus the points.
fn excised_h1(
    spec: &HFunctionSpec,
    eta: EtaSign,
    b: f64,
    t_max: f64,
    c_shift: f64,
    residues: &[ResidueData],
) -> Result<f64> {
    let delta = 1.0 / t_max;
    let mut panels = Vec::new();
    if b - delta > 0.0 {
        panels.extend(graded_panels(0.0, b - delta, delta, false, true));
    }
    panels.extend(graded_panels((b + delta).max(0.0), t_max, delta, b + delta > 0.0, false));
    let (gx, gw) = gauss_legendre(16);
    let e = eta.value();
    let vals: Vec<Result<f64>> = panels
        .par_iter()
        .map(|&(p0, p1)| {
            let mut acc = 0.0;
            for (x, wt) in gx.iter().zip(&gw) {
                let t = 0.5 * (p0 + p1) + 0.5 * (p1 - p0) * x;
                let th = ONE + e * spec.c_ratio(Complex64::new(0.5, t))?;
                let den = t * t - b * b;
                acc += 0.5 * (p1 - p0) * wt * (c_shift + 0.25 + t * t) * th.norm_sqr() / (den * den);
            }
            Ok(acc)
        })
        .collect();
    let vals: Vec<f64> = vals.into_iter().collect::<Result<_>>()?;
    let line = 2.0 * pairwise_sum(&vals) / (4.0 * PI);
    let lw = -(0.25 + b * b);
    let points: f64 = residues
        .iter()
        .map(|r| {
            let ls = r.sigma * (r.sigma - 1.0);
            (c_shift - ls) * r.eta_r.max(0.0) / ((ls - lw) * (ls - lw))
        })
        .sum();
    Ok(line + points)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct H1Diagnostic {
    pub class: H1Class,
    pub norms: Vec<(f64, f64)>,
    pub last_ratio: f64,
    pub theta_abs: f64,
    pub report: VerificationReport,
}

/// Classifies u_w for on-line w as convergent (theta(w) = 0 expected) or
/// divergent from truncated, excised H^1 norms at T = 50, 100, 200, 400.
pub fn h1_membership_diagnostic(spec: &HFunctionSpec, eta: EtaSign, w: Complex64) -> Result<H1Diagnostic> {
    if (w.re - 0.5).abs() > 1e-8 {
        return Err(Error::Precondition(format!("w = {w} is not on the critical line")));
    }
    if (w - 0.5).norm() < 1e-4 {
        return Err(Error::Precondition("w = 1/2 is excluded".into()));
    }
    let b = w.im.abs();
    let residues = checked_residues(spec, eta)?;
    let c_shift = residues.iter().map(|r| r.sigma * (r.sigma - 1.0) + 1.0).fold(1.0, f64::max);
    let mut norms = Vec::new();
    for t in [50.0, 100.0, 200.0, 400.0] {
        norms.push((t, excised_h1(spec, eta, b, t, c_shift, &residues)?));
    }
    let ratio = norms[3].1 / norms[2].1;
    let class = if (ratio - 1.0).abs() <= 0.05 {
        H1Class::Convergent
    } else if ratio >= 1.5 {
        H1Class::Divergent
    } else {
        H1Class::Unclear
    };
    let theta_abs = (ONE + eta.value() * spec.c_ratio(Complex64::new(0.5, w.im))?).norm();
    let consistent = match class {
        H1Class::Convergent => theta_abs <= 1e-8,
        H1Class::Divergent => theta_abs > 1e-8,
        H1Class::Unclear => false,
    };
    let mut rep = VerificationReport::new(format!("h1 membership {} eta={} w={w}", spec.label, eta.name()));
    let mut chk =
        Check::new("classification", if class == H1Class::Unclear { Status::Inconclusive } else { Status::Pass }, 0.05)
            .witness("last_ratio", ratio)
            .note(format!("{class:?}").to_lowercase());
    for (t, v) in &norms {
        chk = chk.witness(format!("norm_T{t}"), *v);
    }
    rep.push(chk);
    rep.push(
        Check::new(
            "consistent_with_theta",
            if class == H1Class::Unclear { Status::Inconclusive } else { Status::from_bool(consistent) },
            1e-8,
        )
        .witness("theta_abs", theta_abs),
    );
    Ok(H1Diagnostic { class, norms, last_ratio: ratio, theta_abs, report: rep })
}
