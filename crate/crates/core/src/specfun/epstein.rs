//! Epstein zeta of a positive-definite binary quadratic form and its
//! completion
//!
//! ```text
//! Z_Q(z) = sum'_{(m,n)} Q(m,n)^{-z}
//! L_Q(z) = (sqrt(d)/(2 pi))^z Gamma(z) Z_Q(z),      d = 4ac - b^2
//! ```
//!
//! which satisfies L_Q(z) = L_Q(1 - z) and has simple poles at z = 0
//! (residue -1) and z = 1 (residue +1). These residues follow from splitting
//! the theta-lift integral at t = 1:
//!
//! ```text
//! pi^{-z} Gamma(z) Z_Q(z) = -1/z - D^{-1/2}/(1-z) + sum' G(z, pi Q(v))
//!                         + D^{-1/2} sum' G(1-z, pi Q(v)/D),   D = d/4
//! ```
//!
//! with G(z, x) = int_1^inf t^{z-1} e^{-xt} dt. Multiplying by D^{z/2} gives
//! the symmetric normalization used here.
//!
//! For evaluation the lattice is summed column by column: for each n the sum
//! over m is a shifted Hurwitz-type sum handled by Euler–Maclaurin with an
//! exact tail integral, and columns beyond n0 are replaced by their
//! asymptotic term, which is accurate up to K-Bessel corrections of size
//! exp(-(2 pi beta_n - |z|)) and so negligible once 2 pi beta_n > 1.2|z| + 40.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::gamma::ln_gamma;
use super::zeta::{riemann_zeta, BERNOULLI_2K};
use crate::error::{Error, Result};

/// Q(m, n) = a m^2 + b m n + c n^2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadraticForm {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl QuadraticForm {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        let q = QuadraticForm { a, b, c };
        if !(a > 0.0) || !(q.disc() > 0.0) {
            return Err(Error::Precondition(format!("quadratic form ({a}, {b}, {c}) is not positive definite")));
        }
        Ok(q)
    }

    /// 4ac - b^2.
    pub fn disc(&self) -> f64 {
        4.0 * self.a * self.c - self.b * self.b
    }

    pub fn eval(&self, m: f64, n: f64) -> f64 {
        self.a * m * m + self.b * m * n + self.c * n * n
    }

    /// An SL2(Z)-equivalent form with |b| <= a <= c.
    pub fn reduced(&self) -> QuadraticForm {
        let (mut a, mut b, mut c) = (self.a, self.b, self.c);
        for _ in 0..200 {
            if b.abs() > a {
                let k = (b / (2.0 * a)).round();
                let nb = b - 2.0 * a * k;
                c += a * k * k - b * k;
                b = nb;
            } else if a > c {
                std::mem::swap(&mut a, &mut c);
                b = -b;
            } else {
                break;
            }
        }
        QuadraticForm { a, b, c }
    }
}

/// Taylor coefficients e_j of (1 + p1 h + p2 h^2)^{-z}; appended on demand.
struct PowSeries {
    z: Complex64,
    d: Vec<f64>,
    e: Vec<Complex64>,
    p1: f64,
    p2: f64,
}

impl PowSeries {
    fn new(z: Complex64, p1: f64, p2: f64) -> Self {
        PowSeries { z, d: vec![p1, 2.0 * p2 - p1 * p1], e: vec![Complex64::new(1.0, 0.0)], p1, p2 }
    }

    fn coef(&mut self, j: usize) -> Complex64 {
        while self.e.len() <= j {
            let k = self.e.len() - 1; // computing e_{k+1}
            while self.d.len() <= k {
                let n = self.d.len();
                let v = -self.p1 * self.d[n - 1] - self.p2 * self.d[n - 2];
                self.d.push(v);
            }
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..=k {
                acc += self.e[k - i] * self.d[i];
            }
            self.e.push(-self.z * acc / (k as f64 + 1.0));
        }
        self.e[j]
    }
}

/// sum_{k >= 0} ((u0 + k)^2 + beta^2)^{-z} by Euler–Maclaurin at u0.
fn em_tail(z: Complex64, u0: f64, beta2: f64) -> Complex64 {
    let r = u0 * u0 + beta2;
    let f0 = (-z * r.ln()).exp();
    // int_{u0}^inf (u^2 + beta^2)^{-z} du
    //   = u0 r^{-z} / (2z - 1) * 2F1(z, 1; z + 1/2; beta^2 / r)
    let y = beta2 / r;
    let mut s = Complex64::new(1.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    for j in 0..400 {
        let jf = j as f64;
        term *= (z + jf) / (z + jf + 0.5) * y;
        s += term;
        if term.norm() < 1e-18 * s.norm() {
            break;
        }
    }
    let integral = f0 * u0 * s / (2.0 * z - 1.0);
    let mut series = PowSeries::new(z, 2.0 * u0 / r, 1.0 / r);
    let mut corr = Complex64::new(0.0, 0.0);
    for (k, b2k) in BERNOULLI_2K.iter().enumerate() {
        let two_k = 2 * (k + 1);
        let t = series.coef(two_k - 1) * (b2k / two_k as f64);
        corr += t;
        if t.norm() < 1e-18 * (integral / f0).norm().max(1.0) {
            break;
        }
    }
    integral + f0 * (0.5 - corr)
}

/// sum_{m in Z} ((m + alpha)^2 + beta^2)^{-z}
fn column_sum(z: Complex64, alpha: f64, beta: f64) -> Complex64 {
    let alpha = alpha - alpha.round();
    let beta2 = beta * beta;
    let m_max = (0.6 * z.norm() + 10.0).max(beta + 1.0).ceil() as i64;
    let mut acc = Complex64::new(0.0, 0.0);
    for m in -m_max..=m_max {
        let u = m as f64 + alpha;
        acc += (-z * (u * u + beta2).ln()).exp();
    }
    let edge = (m_max + 1) as f64;
    acc + em_tail(z, edge + alpha, beta2) + em_tail(z, edge - alpha, beta2)
}

fn raw_bracket(q: &QuadraticForm, z: Complex64) -> Result<Complex64> {
    // Z_Q(z) = 2 a^{-z} * bracket
    let one = Complex64::new(1.0, 0.0);
    let sd = q.disc().sqrt();
    let beta_unit = sd / (2.0 * q.a);
    let n0 = ((1.2 * z.norm() + 40.0) / (2.0 * PI * beta_unit)).ceil().max(1.0) as usize;
    let mut acc = riemann_zeta(2.0 * z)?;
    let mut partial = Complex64::new(0.0, 0.0);
    for n in 1..=n0 {
        let nf = n as f64;
        acc += column_sum(z, q.b * nf / (2.0 * q.a), nf * beta_unit);
        partial += ((one - 2.0 * z) * nf.ln()).exp();
    }
    let ratio = (ln_gamma(z - 0.5)? - ln_gamma(z)? + (one - 2.0 * z) * beta_unit.ln()).exp();
    let tail = ratio * PI.sqrt() * (riemann_zeta(2.0 * z - 1.0)? - partial);
    Ok(acc + tail)
}

/// Z_Q(z) for z != 1, via the column decomposition. Near z = 1/2, where the
/// decomposition has cancelling poles, the value is recovered from a Cauchy
/// integral on a surrounding circle.
pub fn epstein_zeta(q: &QuadraticForm, z: Complex64) -> Result<Complex64> {
    let z = Complex64::new(z.re, z.im);
    if z == Complex64::new(1.0, 0.0) {
        return Err(Error::Pole(z));
    }
    let q = q.reduced();
    let half = Complex64::new(0.5, 0.0);
    let direct = |p: Complex64| -> Result<Complex64> { Ok(2.0 * (-p * q.a.ln()).exp() * raw_bracket(&q, p)?) };
    if (z - half).norm() < 0.02 {
        let radius = 0.05;
        let npts = 32;
        let mut num = Complex64::new(0.0, 0.0);
        let mut den = Complex64::new(0.0, 0.0);
        // barycentric form of the trapezoidal Cauchy integral
        for k in 0..npts {
            let ang = 2.0 * PI * (k as f64 + 0.5) / npts as f64;
            let node = half + Complex64::from_polar(radius, ang);
            let wgt = (node - half) / (node - z);
            num += wgt * direct(node)?;
            den += wgt;
        }
        return Ok(num / den);
    }
    direct(z)
}

/// ln L_Q(z) for the completed Epstein zeta (some branch).
pub fn ln_epstein_completed(q: &QuadraticForm, z: Complex64) -> Result<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    if z == one || z == Complex64::new(0.0, 0.0) {
        return Err(Error::Pole(z));
    }
    let w = if z.re < 0.5 { one - z } else { z };
    let zq = epstein_zeta(q, w)?;
    let big_d = q.disc() / 4.0;
    Ok(w * (0.5 * big_d.ln() - PI.ln()) + ln_gamma(w)? + zq.ln())
}

/// Completed Epstein zeta L_Q(z) = L_Q(1 - z).
pub fn epstein_completed(q: &QuadraticForm, z: Complex64) -> Result<Complex64> {
    Ok(ln_epstein_completed(q, z)?.exp())
}

/// ln of the entire completion z(z - 1) L_Q(z), symmetric under z -> 1 - z.
/// Near the removable points z = 0, 1 the Cauchy integral on a circle is used.
pub fn ln_epstein_xi(q: &QuadraticForm, z: Complex64) -> Result<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    let w = if z.re < 0.5 { one - z } else { z };
    if (w - one).norm() < 0.02 {
        let n = 32;
        let r = 0.05;
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..n {
            let p = one + Complex64::from_polar(r, 2.0 * PI * (k as f64 + 0.5) / n as f64);
            acc += (ln_epstein_completed(q, p)? + (p * (p - one)).ln()).exp() * (p - one) / (p - w);
        }
        return Ok((acc / n as f64).ln());
    }
    Ok(ln_epstein_completed(q, w)? + (w * (w - one)).ln())
}
