//! The catalog of test functions h, the ratio c_s = h(1-s)/h(s), theta and
//! residues at declared real zeros, plus the hypothesis checks.

mod checks;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{completed_xi, ln_completed_xi, ln_epstein_xi, ln_rational, rational_eval, QuadraticForm};
use crate::zerofinder::circle_winding;

pub use checks::{check_hypotheses, CheckBox, Tolerances};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Variant {
    Rational {
        zeros: Vec<Complex64>,
        poles: Vec<Complex64>,
        scale: f64,
    },
    #[serde(rename = "riemann_xi_2s")]
    RiemannXi2s,
    #[serde(rename = "riemann_xi_2s_y")]
    RiemannXi2sY {
        y: f64,
    },
    #[serde(rename = "epstein_completed_2s")]
    EpsteinCompleted2s {
        q: QuadraticForm,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HFunctionSpec {
    pub variant: Variant,
    pub declared_sigmas: Vec<f64>,
    pub label: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EtaSign {
    #[serde(rename = "plus")]
    Plus,
    #[serde(rename = "minus")]
    Minus,
}

impl EtaSign {
    pub fn value(self) -> f64 {
        match self {
            EtaSign::Plus => 1.0,
            EtaSign::Minus => -1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            EtaSign::Plus => "plus",
            EtaSign::Minus => "minus",
        }
    }
}

impl std::str::FromStr for EtaSign {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plus" | "+" | "+1" | "1" => Ok(EtaSign::Plus),
            "minus" | "-" | "-1" => Ok(EtaSign::Minus),
            _ => Err(Error::Config(format!("eta must be plus or minus, got {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidueData {
    pub sigma: f64,
    pub r: Complex64,
    pub eta_r: f64,
    pub imag_defect: f64,
}

/// An ordinary point s or the abstract point attached to the i-th declared
/// sigma.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Point {
    S(Complex64),
    Abstract(usize),
}

fn conj_closed(pts: &[Complex64]) -> bool {
    let mut used = vec![false; pts.len()];
    for (i, p) in pts.iter().enumerate() {
        if used[i] {
            continue;
        }
        if p.im.abs() <= 1e-14 * p.norm().max(1.0) {
            used[i] = true;
            continue;
        }
        let partner =
            (0..pts.len()).find(|&j| j != i && !used[j] && (pts[j] - p.conj()).norm() <= 1e-12 * p.norm().max(1.0));
        match partner {
            Some(j) => {
                used[i] = true;
                used[j] = true;
            }
            None => return false,
        }
    }
    true
}

impl HFunctionSpec {
    pub fn new(variant: Variant, declared_sigmas: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        match &variant {
            Variant::Rational { zeros, poles, scale } => {
                if *scale == 0.0 || !scale.is_finite() {
                    return Err(Error::Precondition("rational scale must be nonzero".into()));
                }
                if !conj_closed(zeros) || !conj_closed(poles) {
                    return Err(Error::Precondition(
                        "rational zeros and poles must be closed under conjugation".into(),
                    ));
                }
            }
            Variant::RiemannXi2sY { y } => {
                if !(*y >= 1.0) || !y.is_finite() {
                    return Err(Error::Precondition(format!("y must be >= 1, got {y}")));
                }
            }
            Variant::EpsteinCompleted2s { q } => {
                QuadraticForm::new(q.a, q.b, q.c)?;
            }
            Variant::RiemannXi2s => {}
        }
        for (i, s) in declared_sigmas.iter().enumerate() {
            if !(*s > 0.5) || (i > 0 && !(declared_sigmas[i - 1] < *s)) {
                return Err(Error::Precondition("declared sigmas must be strictly increasing and > 1/2".into()));
            }
        }
        Ok(HFunctionSpec { variant, declared_sigmas, label: label.into() })
    }

    pub fn rational(zeros: &[Complex64], poles: &[Complex64], scale: f64, sigmas: &[f64]) -> Result<Self> {
        let label = format!("rational{}z{}p", zeros.len(), poles.len());
        Self::new(Variant::Rational { zeros: zeros.to_vec(), poles: poles.to_vec(), scale }, sigmas.to_vec(), label)
    }

    pub fn riemann_xi_2s() -> Self {
        HFunctionSpec { variant: Variant::RiemannXi2s, declared_sigmas: vec![], label: "xi2s".into() }
    }

    pub fn riemann_xi_2s_y(y: f64) -> Result<Self> {
        Self::new(Variant::RiemannXi2sY { y }, vec![], format!("xi2s_y{y}"))
    }

    pub fn epstein(q: QuadraticForm) -> Result<Self> {
        let label = format!("epstein_{}_{}_{}", q.a, q.b, q.c);
        Self::new(Variant::EpsteinCompleted2s { q }, vec![], label)
    }

    /// Known poles of h (only the finite, explicitly listed ones).
    pub fn poles(&self) -> Vec<Complex64> {
        match &self.variant {
            Variant::Rational { poles, .. } => poles.clone(),
            _ => vec![],
        }
    }

    /// Known poles of N(s) = h(s) + eta h(1-s).
    pub fn n_poles(&self) -> Vec<Complex64> {
        match &self.variant {
            Variant::Rational { poles, .. } => {
                let mut v = poles.clone();
                v.extend(poles.iter().map(|p| ONE - p));
                v
            }
            _ => vec![],
        }
    }

    /// Polynomial q(s) such that q(s) N(s) has no poles.
    pub fn pole_clearing(&self, s: Complex64) -> Complex64 {
        self.n_poles().iter().fold(ONE, |acc, p| acc * (s - p))
    }

    /// Some branch of ln h(s). Zeros of h give real part -inf.
    pub fn ln_h(&self, s: Complex64) -> Result<Complex64> {
        match &self.variant {
            Variant::Rational { zeros, poles, scale } => {
                if zeros.contains(&s) {
                    return Ok(Complex64::new(f64::NEG_INFINITY, 0.0));
                }
                ln_rational(zeros, poles, Complex64::new(*scale, 0.0), s)
            }
            Variant::RiemannXi2s => ln_completed_xi(2.0 * s),
            Variant::RiemannXi2sY { y } => Ok(ln_completed_xi(2.0 * s)? + s * y.ln()),
            Variant::EpsteinCompleted2s { q } => ln_epstein_xi(q, 2.0 * s),
        }
    }

    pub fn h_eval(&self, s: Complex64) -> Result<Complex64> {
        match &self.variant {
            Variant::Rational { zeros, poles, scale } => rational_eval(zeros, poles, Complex64::new(*scale, 0.0), s),
            Variant::RiemannXi2s => completed_xi(2.0 * s),
            Variant::RiemannXi2sY { y } => Ok(completed_xi(2.0 * s)? * (s * y.ln()).exp()),
            Variant::EpsteinCompleted2s { q } => Ok(ln_epstein_xi(q, 2.0 * s)?.exp()),
        }
    }

    /// c_s = h(1-s)/h(s), formed in log space so that large |s| does not
    /// overflow the individual factors.
    pub fn c_ratio(&self, s: Complex64) -> Result<Complex64> {
        if let Variant::Rational { zeros, poles, scale } = &self.variant {
            let sc = Complex64::new(*scale, 0.0);
            let num = rational_eval(zeros, poles, sc, ONE - s)?;
            let den = rational_eval(zeros, poles, sc, s)?;
            if den == Complex64::new(0.0, 0.0) {
                return Err(if num == den { Error::Indeterminate(s) } else { Error::Pole(s) });
            }
            return Ok(num / den);
        }
        let a = self.ln_h(ONE - s)?;
        let b = self.ln_h(s)?;
        if b.re == f64::NEG_INFINITY {
            return Err(if a.re == f64::NEG_INFINITY { Error::Indeterminate(s) } else { Error::Pole(s) });
        }
        Ok((a - b).exp())
    }

    /// N(s) = h(s) + eta h(1-s).
    pub fn n_eta(&self, eta: EtaSign, s: Complex64) -> Result<Complex64> {
        Ok(self.h_eval(s)? + eta.value() * self.h_eval(ONE - s)?)
    }

    /// N(s) multiplied by the pole-clearing polynomial.
    pub fn n_cleared(&self, eta: EtaSign, s: Complex64) -> Result<Complex64> {
        Ok(self.n_eta(eta, s)? * self.pole_clearing(s))
    }

    /// Both |h(s)| and |h(1-s)| below 1e-9 times the local scale, taken as
    /// the largest |h| on a small circle around each point.
    pub fn simultaneous_zero(&self, s: Complex64) -> bool {
        let local = |p: Complex64| -> Option<(f64, f64)> {
            let v = self.h_eval(p).ok()?.norm();
            let mut scale = 0f64;
            for k in 0..8 {
                let q = p + Complex64::from_polar(1e-3, PI * k as f64 / 4.0);
                scale = scale.max(self.h_eval(q).ok()?.norm());
            }
            Some((v, scale))
        };
        match (local(s), local(ONE - s)) {
            (Some((a, sa)), Some((b, sb))) => a <= 1e-9 * sa && b <= 1e-9 * sb,
            _ => false,
        }
    }

    /// Residue of c_s at sigma by the trapezoidal rule on a circle.
    pub fn residue_at(&self, sigma: f64, radius: Option<f64>) -> Result<ResidueData> {
        let r = radius.unwrap_or_else(|| self.default_radius(sigma));
        let center = Complex64::new(sigma, 0.0);
        let h = |s: Complex64| self.h_eval(s);
        let wind = circle_winding(&h, center, r)?;
        if wind != 1 {
            return Err(Error::Isolation {
                at: center,
                detail: format!("winding of h around sigma is {wind}, expected 1"),
            });
        }
        let n = 128;
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..n {
            let d = Complex64::from_polar(r, 2.0 * PI * (k as f64 + 0.5) / n as f64);
            acc += self.c_ratio(center + d)? * d;
        }
        let res = acc / n as f64;
        Ok(ResidueData { sigma, r: res, eta_r: res.re, imag_defect: res.im.abs() })
    }

    /// Half the distance to the nearest other singularity, capped at 0.1.
    pub fn default_radius(&self, sigma: f64) -> f64 {
        let s = Complex64::new(sigma, 0.0);
        let mut others: Vec<Complex64> =
            self.declared_sigmas.iter().filter(|&&x| x != sigma).map(|&x| Complex64::new(x, 0.0)).collect();
        others.push(Complex64::new(1.0 - sigma, 0.0));
        others.extend(self.poles());
        others.extend(self.poles().iter().map(|p| ONE - p));
        if let Variant::Rational { zeros, .. } = &self.variant {
            others.extend(zeros.iter().filter(|z| (**z - s).norm() > 1e-12));
        }
        let d = others.iter().map(|o| (o - s).norm()).fold(f64::INFINITY, f64::min);
        (0.5 * d).min(0.1)
    }

    pub fn residues(&self, eta: EtaSign) -> Result<Vec<ResidueData>> {
        self.declared_sigmas
            .iter()
            .map(|&sg| {
                let mut r = self.residue_at(sg, None)?;
                r.eta_r = eta.value() * r.r.re;
                Ok(r)
            })
            .collect()
    }

    /// theta_eta at an ordinary point, or sqrt(eta R_i) at an abstract point.
    pub fn theta_eval(&self, eta: EtaSign, point: Point) -> Result<Complex64> {
        match point {
            Point::S(s) => Ok(ONE + eta.value() * self.c_ratio(s)?),
            Point::Abstract(i) => {
                let sigma = *self
                    .declared_sigmas
                    .get(i)
                    .ok_or_else(|| Error::Precondition(format!("no declared sigma with index {i}")))?;
                let r = self.residue_at(sigma, None)?;
                theta_at_residue(eta, &r)
            }
        }
    }
}

/// sqrt(eta R) for a computed residue.
pub fn theta_at_residue(eta: EtaSign, r: &ResidueData) -> Result<Complex64> {
    let er = eta.value() * r.r.re;
    if er < -1e-10 {
        return Err(Error::SignCondition(er));
    }
    Ok(Complex64::new(er.max(0.0).sqrt(), 0.0))
}
