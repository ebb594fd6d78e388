//! The boundary functional theta~, the solutions u_w and the identities
//! tying them to theta(w) / (1 - 2w).
//!
//! For Re w >= 1/2 the pairing is computed as
//!
//! ```text
//! (1/4pi) [ int (P(t) - P(w)) g(t) dt + P(w) int g dt ] + sum_i eta R_i / (lambda_i - lambda_w)
//! ```
//!
//! with P(t) = |theta(1/2 + it)|^2, P(w) = (1 + eta c_{1-w})(1 + eta c_w) and
//! g(t) = 1 / (lambda_s - lambda_w) = -1 / (t^2 + a^2), a = w - 1/2. P(t) - P(w)
//! vanishes at both poles t = +-ia of g, so the first integrand is analytic
//! near the real axis and Gauss–Legendre converges spectrally; the second
//! integral is -pi/a, continued analytically to Re a = 0.

mod diagnostics;
mod tail;

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hcatalog::{EtaSign, HFunctionSpec, ResidueData};
use crate::quadrature::{pairwise_sum, LineQuadrature};

pub use diagnostics::{
    derivative_identity, derivative_identity_on, h1_membership_diagnostic, verify_identity, verify_identity_on,
    H1Class, H1Diagnostic, IdentityRow,
};
pub use tail::{Kernel, TailModel};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// lambda_s = s (s - 1)
pub fn lambda(s: Complex64) -> Complex64 {
    s * (s - 1.0)
}

/// Values of c on the positive quadrature nodes; the negative half follows
/// from c(1/2 - it) = conj c(1/2 + it).
#[derive(Debug, Clone)]
pub struct LineSamples {
    pub t: Vec<f64>,
    pub weight: Vec<f64>,
    pub c: Vec<Complex64>,
}

impl LineSamples {
    pub fn new(spec: &HFunctionSpec, quad: &LineQuadrature) -> Result<Self> {
        let idx = quad.positive_half();
        let t: Vec<f64> = quad.nodes[idx.clone()].to_vec();
        let weight: Vec<f64> = quad.weights[idx].to_vec();
        let c: Vec<Result<Complex64>> = t.par_iter().map(|&t| spec.c_ratio(Complex64::new(0.5, t))).collect();
        Ok(LineSamples { t, weight, c: c.into_iter().collect::<Result<_>>()? })
    }

    /// The nodes with t <= t_max (nested for integer truncations).
    pub fn restrict(&self, t_max: f64) -> LineSamples {
        let n = self.t.partition_point(|&t| t <= t_max);
        LineSamples { t: self.t[..n].to_vec(), weight: self.weight[..n].to_vec(), c: self.c[..n].to_vec() }
    }
}

/// u_w(s) = theta(s) / (lambda_s - lambda_w), and sqrt(eta R_i) / (lambda_i - lambda_w)
/// at the abstract points.
#[derive(Debug, Clone)]
pub struct UwSolution<'a> {
    pub spec: &'a HFunctionSpec,
    pub eta: EtaSign,
    pub w: Complex64,
    pub lambda_w: Complex64,
    pub residues: Vec<ResidueData>,
}

impl<'a> UwSolution<'a> {
    pub fn new(spec: &'a HFunctionSpec, eta: EtaSign, w: Complex64) -> Result<Self> {
        let residues = spec.residues(eta)?;
        for r in &residues {
            if r.eta_r < -1e-10 {
                return Err(Error::SignCondition(r.eta_r));
            }
        }
        Ok(UwSolution { spec, eta, w, lambda_w: lambda(w), residues })
    }

    pub fn at(&self, s: Complex64) -> Result<Complex64> {
        Ok((ONE + self.eta.value() * self.spec.c_ratio(s)?) / (lambda(s) - self.lambda_w))
    }

    pub fn at_point(&self, i: usize) -> Complex64 {
        let r = &self.residues[i];
        Complex64::new(r.eta_r.max(0.0).sqrt(), 0.0) / (lambda(Complex64::new(r.sigma, 0.0)) - self.lambda_w)
    }

    /// |c_s u_w(1-s) - eta u_w(s)| at s.
    pub fn fe_defect(&self, s: Complex64) -> Result<f64> {
        let lhs = self.spec.c_ratio(s)? * self.at(ONE - s)?;
        Ok((lhs - self.eta.value() * self.at(s)?).norm())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairingResult {
    pub value: Complex64,
    pub line_part: Complex64,
    pub point_part: Complex64,
    /// magnitude of the analytic tail correction beyond T
    pub tail_estimate: f64,
    pub t_max: f64,
}

/// theta(w) / (1 - 2w)
pub fn boundary_value(spec: &HFunctionSpec, eta: EtaSign, w: Complex64) -> Result<Complex64> {
    Ok((ONE + eta.value() * spec.c_ratio(w)?) / (ONE - 2.0 * w))
}

fn p_on_line(spec: &HFunctionSpec, eta: EtaSign, model: &TailModel, t: f64) -> Result<f64> {
    let re_c = model.effective(t, spec.c_ratio(Complex64::new(0.5, t))?.re);
    Ok(2.0 + 2.0 * eta.value() * re_c)
}

/// The pairing on precomputed samples, truncated at t_max.
pub fn pairing_on_samples(
    spec: &HFunctionSpec,
    eta: EtaSign,
    w: Complex64,
    samples: &LineSamples,
    t_max: f64,
    residues: &[ResidueData],
) -> Result<PairingResult> {
    let a = w - 0.5;
    if a.re < -1e-12 {
        return Err(Error::Precondition(format!("pairing needs Re w >= 1/2, got {w}")));
    }
    for r in residues {
        if (w - r.sigma).norm() < 1e-12 {
            return Err(Error::Precondition(format!("w coincides with sigma = {}", r.sigma)));
        }
    }
    let on_line = a.re.abs() <= 1e-12;
    let e = eta.value();
    let cw = spec.c_ratio(w)?;
    let c1w = spec.c_ratio(ONE - w)?;
    let pw = (ONE + e * c1w) * (ONE + e * cw);
    let s = samples.restrict(t_max);
    let b = a.im.abs();
    let nodes: Vec<(f64, f64, Complex64)> =
        s.t.iter().zip(&s.weight).zip(&s.c).map(|((&t, &w), &c)| (t, w, c)).collect();
    let model = TailModel::build(spec, t_max, &nodes)?;
    let mut fill = None;
    let terms: Vec<Complex64> =
        s.t.iter()
            .zip(&s.weight)
            .zip(&s.c)
            .map(|((&t, &wt), &ct)| {
                let p = 2.0 + 2.0 * e * model.effective(t, ct.re);
                let den = t * t + a * a;
                if on_line && den.norm() < 1e-6 {
                    fill = Some(t);
                    return Complex64::new(0.0, 0.0);
                }
                wt * (p - pw) * (-1.0 / den)
            })
            .collect();
    let mut body = 2.0 * pairwise_sum(&terms);
    if let Some(t) = fill {
        // removable singularity at t = b: limit -P'(b) / (2b)
        let h = 1e-3;
        let pp = (p_on_line(spec, eta, &model, b - 2.0 * h)? - 8.0 * p_on_line(spec, eta, &model, b - h)?
            + 8.0 * p_on_line(spec, eta, &model, b + h)?
            - p_on_line(spec, eta, &model, b + 2.0 * h)?)
            / (12.0 * h);
        let idx = s.t.iter().position(|&x| x == t).unwrap();
        body += 2.0 * s.weight[idx] * (-pp / (2.0 * b));
    }
    let kernel = Kernel::Resolvent(a);
    let tail = 2.0 * ((2.0 - pw) * kernel.moment(t_max, 0) + 2.0 * e * model.integral(kernel));
    let whole_g = -PI / a;
    let line_part = (body + tail + pw * whole_g) / (4.0 * PI);
    let lw = lambda(w);
    let point_part: Complex64 = residues.iter().map(|r| r.eta_r / (lambda(Complex64::new(r.sigma, 0.0)) - lw)).sum();
    Ok(PairingResult {
        value: line_part + point_part,
        line_part,
        point_part,
        tail_estimate: (tail / (4.0 * PI)).norm(),
        t_max,
    })
}

pub(crate) fn checked_residues(spec: &HFunctionSpec, eta: EtaSign) -> Result<Vec<ResidueData>> {
    let residues = spec.residues(eta)?;
    for r in &residues {
        if r.eta_r < -1e-10 {
            return Err(Error::SignCondition(r.eta_r));
        }
    }
    Ok(residues)
}

/// theta~(u_w) for Re w > 1/2.
pub fn theta_pairing(spec: &HFunctionSpec, eta: EtaSign, w: Complex64, quad: &LineQuadrature) -> Result<PairingResult> {
    if w.re <= 0.5 {
        return Err(Error::Precondition(format!("theta_pairing needs Re w > 1/2, got {w}")));
    }
    let residues = checked_residues(spec, eta)?;
    let samples = LineSamples::new(spec, quad)?;
    pairing_on_samples(spec, eta, w, &samples, quad.t_max, &residues)
}

/// The continuation of theta~(u_w) to w on the critical line, w != 1/2.
pub fn theta_pairing_regularized(
    spec: &HFunctionSpec,
    eta: EtaSign,
    w: Complex64,
    quad: &LineQuadrature,
) -> Result<PairingResult> {
    if (w.re - 0.5).abs() > 1e-12 {
        return Err(Error::Precondition(format!("regularized pairing needs Re w = 1/2, got {w}")));
    }
    if (w - 0.5).norm() < 1e-4 {
        return Err(Error::Precondition("w too close to 1/2".into()));
    }
    let residues = checked_residues(spec, eta)?;
    let samples = LineSamples::new(spec, quad)?;
    pairing_on_samples(spec, eta, Complex64::new(0.5, w.im), &samples, quad.t_max, &residues)
}
