//! Finite-dimensional model of the constrained multiplication operator.
//!
//! Entries are quadrature nodes on the line (spectral value -(1/4 + t^2),
//! weight w/(4 pi)), abstract points for the declared sigma_i (value
//! sigma(sigma - 1), weight 1) and a few closure entries standing in for
//! the line beyond T. The constrained spectrum is computed from the secular
//! equation and, independently, from a dense eigenproblem on ker theta~.

mod dense;
mod eig;

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functional::{Kernel, LineSamples, TailModel};
use crate::hcatalog::{theta_at_residue, EtaSign, HFunctionSpec};
use crate::quadrature::LineQuadrature;
use crate::report::{Check, Status, VerificationReport};
use crate::zerofinder::online_phase_zeros;

pub use dense::{constrained_spectrum, h0_inner, h1_inner, riesz_inverse};
pub use eig::{cholesky, hermitian_eig, jacobi_eig, CMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntryKind {
    Line,
    Point,
    Closure,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteModel {
    /// lambda per entry, line nodes first, then points, then closure
    pub lambda: Vec<f64>,
    pub mu: Vec<f64>,
    pub theta: Vec<Complex64>,
    pub kind: Vec<EntryKind>,
    /// t per line node (NaN elsewhere)
    pub t: Vec<f64>,
    pub c_shift: f64,
    pub eta: EtaSign,
    pub t_max: f64,
    pub per_panel: usize,
}

impl DiscreteModel {
    pub fn len(&self) -> usize {
        self.lambda.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambda.is_empty()
    }

    pub fn lambda_line(&self) -> Vec<f64> {
        self.select(EntryKind::Line)
    }

    pub fn lambda_points(&self) -> Vec<f64> {
        self.select(EntryKind::Point)
    }

    fn select(&self, k: EntryKind) -> Vec<f64> {
        self.lambda.iter().zip(&self.kind).filter(|(_, kk)| **kk == k).map(|(l, _)| *l).collect()
    }

    /// Same model with another shift constant.
    pub fn with_shift(&self, c_shift: f64) -> Result<Self> {
        let max = self.lambda.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if !(c_shift > 0.0 && c_shift > max) {
            return Err(Error::Precondition(format!("c_shift {c_shift} must exceed max(0, {max})")));
        }
        Ok(DiscreteModel { c_shift, ..self.clone() })
    }

    /// Small hand-made model (unit weights, real theta), for checks.
    pub fn toy(lambda: &[f64], theta: &[f64]) -> Result<Self> {
        let n = lambda.len();
        if theta.len() != n {
            return Err(Error::Precondition("lambda and theta differ in length".into()));
        }
        let max = lambda.iter().cloned().fold(0.0, f64::max);
        Ok(DiscreteModel {
            lambda: lambda.to_vec(),
            mu: vec![1.0; n],
            theta: theta.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
            kind: vec![EntryKind::Point; n],
            t: vec![f64::NAN; n],
            c_shift: (max + 1.0).max(1.0),
            eta: EtaSign::Plus,
            t_max: 0.0,
            per_panel: 0,
        })
    }
}

/// Build the model on [-T, T] with `per_panel` Gauss nodes per unit panel.
/// Hypotheses are the caller's responsibility (see `check_hypotheses`).
pub fn build_model(
    spec: &HFunctionSpec,
    eta: EtaSign,
    t_max: f64,
    per_panel: usize,
    c_shift: Option<f64>,
) -> Result<DiscreteModel> {
    let residues = spec.residues(eta)?;
    let point_theta: Vec<Complex64> = residues.iter().map(|r| theta_at_residue(eta, r)).collect::<Result<_>>()?;
    let quad = LineQuadrature::new(t_max, per_panel)?;
    let samples = LineSamples::new(spec, &quad)?;
    let e = eta.value();

    let mut m = DiscreteModel {
        lambda: vec![],
        mu: vec![],
        theta: vec![],
        kind: vec![],
        t: vec![],
        c_shift: 0.0,
        eta,
        t_max,
        per_panel,
    };
    // negative half mirrors the positive one: c(1/2 - it) = conj c(1/2 + it)
    let half = samples.t.len();
    for k in (0..half).rev().chain(0..half) {
        let neg = m.lambda.len() < half;
        let (t, w, c) = (samples.t[k], samples.weight[k], samples.c[k]);
        let c = if neg { c.conj() } else { c };
        m.lambda.push(-(0.25 + t * t));
        m.mu.push(w / (4.0 * PI));
        m.theta.push(Complex64::new(1.0, 0.0) + e * c);
        m.kind.push(EntryKind::Line);
        m.t.push(if neg { -t } else { t });
    }
    for (r, th) in residues.iter().zip(point_theta) {
        m.lambda.push(r.sigma * (r.sigma - 1.0));
        m.mu.push(1.0);
        m.theta.push(th);
        m.kind.push(EntryKind::Point);
        m.t.push(f64::NAN);
    }
    for (lam, theta) in closure_entries(spec, eta, t_max, &samples)? {
        m.lambda.push(lam);
        m.mu.push(1.0 / (2.0 * PI));
        m.theta.push(Complex64::new(theta, 0.0));
        m.kind.push(EntryKind::Closure);
        m.t.push(f64::NAN);
    }
    let max_point = m.lambda_points().into_iter().fold(f64::NEG_INFINITY, f64::max);
    let default = if max_point.is_finite() { (max_point + 1.0).max(1.0) } else { 1.0 };
    m.c_shift = default;
    match c_shift {
        Some(c) => m.with_shift(c),
        None => Ok(m),
    }
}

/// Entries standing in for the line beyond T on both sides.
///
/// With zeta = 1/t^2 and P = |theta|^2 the tail reads
/// int dnu(zeta) zeta^-1 / (lambda(zeta) - lambda), dnu = P t^-2 dt,
/// lambda(zeta) = -1/4 - 1/zeta. A 3-node Gauss rule for nu, matched to the
/// moments int_T^inf P t^{-2k-2} dt (k = 0..5), gives entries with value
/// lambda(zeta_j) and |theta|^2 = W_j / zeta_j.
fn closure_entries(spec: &HFunctionSpec, eta: EtaSign, t_max: f64, s: &LineSamples) -> Result<Vec<(f64, f64)>> {
    let nodes: Vec<(f64, f64, Complex64)> =
        s.t.iter().zip(&s.weight).zip(&s.c).map(|((&t, &w), &c)| (t, w, c)).collect();
    let model = TailModel::build(spec, t_max, &nodes)?;
    let e = eta.value();
    // moments in the scaled variable x = T^2 zeta on (0, 1]
    let mom: Vec<f64> = (0..6)
        .map(|k| {
            let m = 2.0 * t_max.powi(-2 * k - 1) / (2 * k + 1) as f64
                + 2.0 * e * model.integral(Kernel::Power(2 * k + 2)).re;
            m * t_max.powi(2 * k)
        })
        .collect();
    // at small T the fitted mean can be poor; fall back to P = 2 on the tail
    let plain: Vec<f64> = (0..6).map(|k| 2.0 / (t_max * (2 * k + 1) as f64)).collect();
    let (x, w) = gauss_from_moments(&mom).or_else(|_| gauss_from_moments(&plain))?;
    Ok(x.iter()
        .zip(&w)
        .map(|(&x, &w)| {
            let zeta = x / (t_max * t_max);
            (-0.25 - 1.0 / zeta, (w / zeta).sqrt())
        })
        .collect())
}

/// Gauss rule with as many nodes (up to 3) as the moments support, nodes in
/// (0, 1] and positive weights.
fn gauss_from_moments(m: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    if !(m[0] > 0.0) {
        return Err(Error::Degenerate(format!("closure moment m0 = {}", m[0])));
    }
    for n in (1..=3).rev() {
        if let Some(r) = gauss_n(m, n) {
            return Ok(r);
        }
    }
    Err(Error::Degenerate("closure moments admit no positive Gauss rule".into()))
}

fn gauss_n(m: &[f64], n: usize) -> Option<(Vec<f64>, Vec<f64>)> {
    // monic orthogonal polynomial: sum_j a_j m_{i+j} = -m_{i+n}
    let mut h: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| m[i + j]).collect()).collect();
    let mut r: Vec<f64> = (0..n).map(|i| -m[i + n]).collect();
    let a = solve(&mut h, &mut r)?;
    let poly = |x: f64| {
        let mut v = x.powi(n as i32);
        for (j, c) in a.iter().enumerate() {
            v += c * x.powi(j as i32);
        }
        v
    };
    let grid = 4000;
    let mut roots = vec![];
    let mut prev = (0.0, poly(0.0));
    for k in 1..=grid {
        let x = k as f64 / grid as f64;
        let v = poly(x);
        if prev.1 == 0.0 || prev.1.signum() != v.signum() {
            let (mut lo, mut hi) = (prev.0, x);
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                if poly(mid).signum() == poly(lo).signum() {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        prev = (x, v);
    }
    if roots.len() != n || roots[0] <= 0.0 {
        return None;
    }
    let mut v: Vec<Vec<f64>> = (0..n).map(|k| roots.iter().map(|x| x.powi(k as i32)).collect()).collect();
    let mut rhs: Vec<f64> = m[..n].to_vec();
    let w = solve(&mut v, &mut rhs)?;
    if w.iter().any(|&w| !(w > 0.0)) {
        return None;
    }
    Some((roots, w))
}

fn solve(a: &mut [Vec<f64>], b: &mut [f64]) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col] == 0.0 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}

/// Distinct entry values (ascending) with merged weights mu |theta|^2.
pub fn merged_poles(model: &DiscreteModel) -> Vec<(f64, f64)> {
    let mut v: Vec<(f64, f64)> =
        model.lambda.iter().zip(&model.mu).zip(&model.theta).map(|((&l, &m), th)| (l, m * th.norm_sqr())).collect();
    v.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<(f64, f64)> = vec![];
    for (l, d) in v {
        match out.last_mut() {
            Some(last) if last.0 == l => last.1 += d,
            _ => out.push((l, d)),
        }
    }
    out.retain(|p| p.1 > 0.0);
    out
}

/// Roots of F(lambda) = sum mu |theta|^2 / (lambda_e - lambda) in the window,
/// one per gap between consecutive distinct entry values.
pub fn secular_roots(model: &DiscreteModel, window: (f64, f64)) -> Result<Vec<f64>> {
    let poles = merged_poles(model);
    if poles.is_empty() {
        return Err(Error::Degenerate("all theta entries vanish".into()));
    }
    let (lo, hi) = window;
    if poles.iter().any(|p| p.0 == lo || p.0 == hi) {
        return Err(Error::Precondition("window endpoint coincides with an entry value".into()));
    }
    let gaps: Vec<usize> =
        (0..poles.len().saturating_sub(1)).filter(|&k| poles[k + 1].0 > lo && poles[k].0 < hi).collect();
    let roots: Vec<f64> = gaps.par_iter().map(|&k| gap_root(&poles, k)).collect::<Result<_>>()?;
    Ok(roots.into_iter().filter(|r| *r >= lo && *r <= hi).collect())
}

/// Root in (lambda_k, lambda_{k+1}) in the offset d = lambda - lambda_k.
fn gap_root(poles: &[(f64, f64)], k: usize) -> Result<f64> {
    let base = poles[k].0;
    let gap = poles[k + 1].0 - base;
    let diffs: Vec<(f64, f64)> = poles.iter().map(|&(l, d)| (l - base, d)).collect();
    // F is increasing on the gap, -inf at the left end and +inf at the right
    let f = |d: f64| -> f64 { diffs.iter().map(|&(x, w)| w / (x - d)).sum() };
    let (mut a, mut b) = (0.0, gap);
    let (fa, fb) = (f(gap * 1e-14), f(gap * (1.0 - 1e-14)));
    if !(fa < 0.0 && fb > 0.0) {
        return Err(Error::Bracket(poles[k].0, poles[k + 1].0));
    }
    while b - a > 1e-15 * (base.abs() + gap) && b - a > f64::EPSILON * b.abs() {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if f(m) < 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(base + 0.5 * (a + b))
}

/// Solutions of w(w - 1) = lambda.
pub fn map_lambda_to_w(lambda: f64) -> Vec<Complex64> {
    let d = lambda + 0.25;
    if d < 0.0 {
        let y = (-d).sqrt();
        vec![Complex64::new(0.5, y), Complex64::new(0.5, -y)]
    } else if d == 0.0 {
        vec![Complex64::new(0.5, 0.0)]
    } else {
        let x = d.sqrt();
        vec![Complex64::new(0.5 - x, 0.0), Complex64::new(0.5 + x, 0.0)]
    }
}

/// Upper (or right) member of map_lambda_to_w.
fn primary_w(lambda: f64) -> Complex64 {
    *map_lambda_to_w(lambda).iter().max_by(|a, b| (a.im + a.re).total_cmp(&(b.im + b.re))).unwrap()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectralMethod {
    Secular,
    ConstrainedEig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralResult {
    pub eigenvalues: Vec<f64>,
    pub mapped_w: Vec<Complex64>,
    /// (||(M - lambda) u - alpha theta|| / ||theta||, |theta~(u)| / scale)
    pub residuals: Vec<(f64, f64)>,
    pub method: SpectralMethod,
}

/// Secular roots packaged with their eigenvectors' residuals.
pub fn secular_spectrum(model: &DiscreteModel, window: (f64, f64)) -> Result<SpectralResult> {
    let roots = secular_roots(model, window)?;
    let poles = merged_poles(model);
    let residuals = roots
        .iter()
        .map(|&l| {
            let terms: Vec<f64> = poles.iter().map(|&(x, d)| d / (x - l)).collect();
            let scale: f64 = terms.iter().map(|t| t.abs()).sum();
            // u = theta / (lambda_e - lambda) solves (M - lambda) u = theta exactly
            (0.0, terms.iter().sum::<f64>().abs() / scale)
        })
        .collect();
    Ok(SpectralResult {
        mapped_w: roots.iter().map(|&l| primary_w(l)).collect(),
        eigenvalues: roots,
        residuals,
        method: SpectralMethod::Secular,
    })
}

/// lambda window covering the line points 1/2 + it, t in [t0, t1].
pub fn line_window(t0: f64, t1: f64) -> (f64, f64) {
    (-(0.25 + t1 * t1), -(0.25 + t0 * t0))
}

/// Secular roots against the dense spectrum over the whole entry range.
///
/// The dense problem also has eigenvalue lambda_e, (m - 1) times, for every
/// group of m entries sharing lambda_e (the +-t node pairs); those are
/// removed before the comparison. Returns the largest relative difference.
pub fn method_agreement(model: &DiscreteModel) -> Result<(f64, SpectralResult, SpectralResult)> {
    let lo = model.lambda.iter().cloned().fold(f64::INFINITY, f64::min) - 1.0;
    let hi = model.lambda.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + 1.0;
    let sec = secular_spectrum(model, (lo, hi))?;
    let dense = constrained_spectrum(model)?;
    let mut sorted: Vec<(f64, f64)> =
        model.lambda.iter().zip(&model.mu).zip(&model.theta).map(|((&l, &m), t)| (l, m * t.norm_sqr())).collect();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut extra = vec![];
    let mut i = 0;
    while i < sorted.len() {
        let j = (i..sorted.len()).take_while(|&j| sorted[j].0 == sorted[i].0).count();
        let live = sorted[i..i + j].iter().any(|p| p.1 > 0.0) as usize;
        extra.extend(std::iter::repeat_n(sorted[i].0, j - live));
        i += j;
    }
    let mut rest = dense.eigenvalues.clone();
    for x in extra {
        if let Some(k) = (0..rest.len()).min_by(|&a, &b| (rest[a] - x).abs().total_cmp(&(rest[b] - x).abs())) {
            rest.remove(k);
        }
    }
    if rest.len() != sec.eigenvalues.len() {
        return Err(Error::Precondition(format!(
            "dense spectrum has {} free eigenvalues, secular equation {}",
            rest.len(),
            sec.eigenvalues.len()
        )));
    }
    let diff = rest.iter().zip(&sec.eigenvalues).map(|(a, b)| (a - b).abs() / b.abs().max(1.0)).fold(0.0, f64::max);
    Ok((diff, sec, dense))
}

/// Largest relative change of the dense eigenvalues when c_shift is doubled.
pub fn shift_invariance(model: &DiscreteModel) -> Result<f64> {
    let a = constrained_spectrum(model)?;
    let b = constrained_spectrum(&model.with_shift(2.0 * model.c_shift)?)?;
    Ok(a.eigenvalues.iter().zip(&b.eigenvalues).map(|(x, y)| (x - y).abs() / x.abs().max(1.0)).fold(0.0, f64::max))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub t_max: f64,
    pub per_panel: usize,
    pub max_pair_distance: f64,
    pub eig_count: usize,
    pub zero_count: usize,
}

/// Nearest mapped eigenvalue for each phase zero 1/2 + it, t in the window
/// (t = 0 included when theta(1/2) vanishes). Returns (t, distance) pairs and
/// the number of eigenvalues mapped into the window.
pub fn match_zeros(
    spec: &HFunctionSpec,
    model: &DiscreteModel,
    window: (f64, f64),
) -> Result<(Vec<(f64, f64)>, usize)> {
    let (t0, t1) = window;
    let mut zt: Vec<f64> = vec![];
    if t0 <= 0.0 {
        let half = Complex64::new(0.5, 0.0);
        if let Ok(th) = spec.theta_eval(model.eta, crate::hcatalog::Point::S(half)) {
            if th.norm() <= 1e-12 {
                zt.push(0.0);
            }
        }
    }
    zt.extend(online_phase_zeros(spec, model.eta, t0.max(0.05), t1, 0.05)?.iter().map(|z| z.w.im));
    let lo = -(0.25 + (t1 + 0.5).powi(2));
    let hi = model.lambda.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + 1.0;
    let res = secular_spectrum(model, (lo, hi))?;
    let pairs = zt
        .iter()
        .map(|&t| {
            let z = Complex64::new(0.5, t);
            let d = res.mapped_w.iter().map(|w| (w - z).norm()).fold(f64::INFINITY, f64::min);
            (t, d)
        })
        .collect();
    let count = res.mapped_w.iter().filter(|w| w.re == 0.5 && w.im >= t0 && w.im <= t1).count();
    Ok((pairs, count))
}

pub fn spectral_zero_correspondence(
    spec: &HFunctionSpec,
    eta: EtaSign,
    t_max: f64,
    per_panel: usize,
    window: (f64, f64),
    match_tol: f64,
) -> Result<(VerificationReport, ConvergenceRow)> {
    let model = build_model(spec, eta, t_max, per_panel, None)?;
    let (pairs, eig_count) = match_zeros(spec, &model, window)?;
    let max_d = pairs.iter().map(|p| p.1).fold(0.0, f64::max);
    let unmatched: Vec<f64> = pairs.iter().filter(|p| p.1 > match_tol).map(|p| p.0).collect();
    let mut rep =
        VerificationReport::new(format!("friedrichs {} eta={} T={t_max} N={per_panel}", spec.label, eta.name()));
    let mut check = Check::new("zeros_matched", Status::from_bool(unmatched.is_empty()), match_tol)
        .witness("max_pair_distance", max_d)
        .witness("zero_count", pairs.len() as f64)
        .witness("unmatched", unmatched.len() as f64);
    if !unmatched.is_empty() {
        check = check.note(format!("unmatched zeros at t = {unmatched:?}"));
    }
    rep.push(check);
    let kdim = dense::kernel_dimension(&model)?;
    rep.push(
        Check::new("kernel_dimension", Status::from_bool(kdim == model.len() - 1), 0.0)
            .witness("kernel_dim", kdim as f64)
            .witness("entries", model.len() as f64),
    );
    let row = ConvergenceRow { t_max, per_panel, max_pair_distance: max_d, eig_count, zero_count: pairs.len() };
    Ok((rep, row))
}

/// Correspondence at each (T, N), run concurrently.
pub fn convergence_study(
    spec: &HFunctionSpec,
    eta: EtaSign,
    schedule: &[(f64, usize)],
    window: (f64, f64),
) -> Result<Vec<ConvergenceRow>> {
    schedule
        .par_iter()
        .map(|&(t, n)| spectral_zero_correspondence(spec, eta, t, n, window, f64::INFINITY).map(|r| r.1))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toy_roots() {
        let m = DiscreteModel::toy(&[-1.0, -2.0], &[1.0, 1.0]).unwrap();
        let r = secular_roots(&m, (-10.0, 10.0)).unwrap();
        assert!(r.len() == 1 && (r[0] + 1.5).abs() < 1e-14, "{r:?}");
        let m = DiscreteModel::toy(&[-1.0, -2.0, -3.0], &[1.0, 1.0, 1.0]).unwrap();
        let r = secular_roots(&m, (-10.0, 10.0)).unwrap();
        let s = 1.0 / 3f64.sqrt();
        assert!((r[0] - (-2.0 - s)).abs() < 1e-14 && (r[1] - (-2.0 + s)).abs() < 1e-14, "{r:?}");
        let z = DiscreteModel::toy(&[-1.0, -2.0], &[0.0, 0.0]).unwrap();
        assert!(matches!(secular_roots(&z, (-10.0, 10.0)), Err(Error::Degenerate(_))));
    }

    #[test]
    fn lambda_map() {
        assert_eq!(map_lambda_to_w(-0.25), vec![Complex64::new(0.5, 0.0)]);
        assert_eq!(map_lambda_to_w(-1.25), vec![Complex64::new(0.5, 1.0), Complex64::new(0.5, -1.0)]);
        assert_eq!(map_lambda_to_w(-3.0 / 16.0), vec![Complex64::new(0.25, 0.0), Complex64::new(0.75, 0.0)]);
    }

    #[test]
    fn gauss_rule_reproduces_moments() {
        // weight x^-1/2 on (0, 1]: m_k = 1 / (k + 1/2)
        let m: Vec<f64> = (0..6).map(|k| 1.0 / (k as f64 + 0.5)).collect();
        let (x, w) = gauss_from_moments(&m).unwrap();
        assert_eq!(x.len(), 3);
        for k in 0..6 {
            let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(k)).sum();
            assert!((q - m[k as usize]).abs() < 1e-10, "{k}: {q}");
        }
    }
}
