//! Riemann zeta by Euler–Maclaurin summation and the completed xi function.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::gamma::{ln_gamma, sin_pi};
use crate::error::{Error, Result};

/// B_{2k} for k = 1..=30.
pub(crate) const BERNOULLI_2K: [f64; 30] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
    -7709321041217.0 / 510.0,
    2577687858367.0 / 6.0,
    -26315271553053477373.0 / 1919190.0,
    2929993913841559.0 / 6.0,
    -261082718496449122051.0 / 13530.0,
    1520097643918070802691.0 / 1806.0,
    -27833269579301024235023.0 / 690.0,
    596451111593912163277961.0 / 282.0,
    -5609403368997817686249127547.0 / 46410.0,
    495057205241079648212477525.0 / 66.0,
    -801165718135489957347924991853.0 / 1590.0,
    29149963634884862421418123812691.0 / 798.0,
    -2479392929313226753685415739663229.0 / 870.0,
    84483613348880041862046775994036021.0 / 354.0,
    -1215233140483755572040304994079820246041491.0 / 56786730.0,
];

/// Largest tolerated Euler–Maclaurin remainder bound, relative to |result|.
const REMAINDER_LIMIT: f64 = 1e-10;
/// Target size of the last Bernoulli correction, relative to |result|.
const EM_TARGET: f64 = 1e-17;

/// (s - 1) * zeta(s) for Re s >= 0 by Euler–Maclaurin; regular at s = 1.
fn zeta_sm1_em(s: Complex64) -> Result<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    let n_terms = (((s.norm() + 40.0) / PI).ceil() as usize).max(10);
    let nf = n_terms as f64;
    let ln_n = nf.ln();
    let mut head = Complex64::new(0.0, 0.0);
    for n in 1..n_terms {
        head += (-s * (n as f64).ln()).exp();
    }
    let n_pow = (-s * ln_n).exp(); // N^{-s}
    let sm1 = s - one;
    // (s-1) * [head + N^{1-s}/(s-1) + N^{-s}/2 + corrections]
    let mut tail = n_pow * 0.5;
    let mut rising = s; // (s)_{2k-1}
    let mut npow = n_pow / nf; // N^{-s-2k+1}
    let mut fact = 2.0; // (2k)!
    let mut last = f64::INFINITY;
    let mut converged = false;
    let scale = (head + n_pow * nf / sm1.norm().max(1e-300)).norm().max(1e-300);
    for k in 1..=BERNOULLI_2K.len() {
        let term = rising * npow * (BERNOULLI_2K[k - 1] / fact);
        tail += term;
        last = term.norm();
        if last < EM_TARGET * scale {
            converged = true;
            break;
        }
        let kf = k as f64;
        rising *= (s + (2.0 * kf - 1.0)) * (s + 2.0 * kf);
        npow /= nf * nf;
        fact *= (2.0 * kf + 1.0) * (2.0 * kf + 2.0);
    }
    let value = sm1 * (head + tail) + n_pow * nf;
    if !converged {
        let bound = last * (s + 2.0 * BERNOULLI_2K.len() as f64 + 1.0).norm()
            / (s.re + 2.0 * BERNOULLI_2K.len() as f64 + 1.0)
            * sm1.norm();
        if bound > REMAINDER_LIMIT * value.norm().max(1e-300) {
            return Err(Error::Accuracy { what: "zeta", bound });
        }
    }
    Ok(value)
}

/// Riemann zeta. Reflection is used for Re s < 0.
pub fn riemann_zeta(s: Complex64) -> Result<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    if s == one {
        return Err(Error::Pole(s));
    }
    if s.re >= 0.0 {
        return Ok(zeta_sm1_em(s)? / (s - one));
    }
    // zeta(s) = 2^s pi^{s-1} sin(pi s / 2) Gamma(1-s) zeta(1-s)
    let r = one - s;
    let lg = ln_gamma(r)?;
    let pref = (s * 2f64.ln() + (s - 1.0) * PI.ln() + lg).exp();
    let z1 = zeta_sm1_em(r)? / (r - one);
    Ok(pref * sin_pi(s * 0.5) * z1)
}

fn xi_right(z: Complex64) -> Result<(Complex64, Complex64)> {
    // xi(z) = (z/2) pi^{-z/2} Gamma(z/2) (z-1) zeta(z), Re z >= 1/2
    let g = ln_gamma(z * 0.5)? - z * 0.5 * PI.ln();
    let zz = zeta_sm1_em(z)?;
    Ok((z * 0.5 * zz, g))
}

/// Completed xi(s) = s(s-1)/2 pi^{-s/2} Gamma(s/2) zeta(s); entire.
pub fn completed_xi(s: Complex64) -> Result<Complex64> {
    let z = if s.re < 0.5 { Complex64::new(1.0, 0.0) - s } else { s };
    let (poly_zeta, lg) = xi_right(z)?;
    Ok(poly_zeta * lg.exp())
}

/// ln xi(s) (some branch). Returns a value with real part -inf at zeros.
pub fn ln_completed_xi(s: Complex64) -> Result<Complex64> {
    let z = if s.re < 0.5 { Complex64::new(1.0, 0.0) - s } else { s };
    let (poly_zeta, lg) = xi_right(z)?;
    Ok(poly_zeta.ln() + lg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zeta_special_values() {
        let z2 = riemann_zeta(c(2.0, 0.0)).unwrap();
        assert!((z2.re - PI * PI / 6.0).abs() < 1e-14);
        let z0 = riemann_zeta(c(0.0, 0.0)).unwrap();
        assert!((z0.re + 0.5).abs() < 1e-14);
        let zm1 = riemann_zeta(c(-1.0, 0.0)).unwrap();
        assert!((zm1.re + 1.0 / 12.0).abs() < 1e-14, "{zm1}");
        assert!(matches!(riemann_zeta(c(1.0, 0.0)), Err(Error::Pole(_))));
    }

    #[test]
    fn first_riemann_zero() {
        let z = riemann_zeta(c(0.5, 14.134_725_141_734_693)).unwrap();
        assert!(z.norm() < 1e-12, "{z}");
    }

    #[test]
    fn xi_values() {
        let x2 = completed_xi(c(2.0, 0.0)).unwrap();
        assert!((x2.re - PI / 6.0).abs() < 1e-14);
        let x0 = completed_xi(c(0.0, 0.0)).unwrap();
        assert!((x0.re - 0.5).abs() < 1e-14);
        let x1 = completed_xi(c(1.0, 0.0)).unwrap();
        assert!((x1.re - 0.5).abs() < 1e-14);
        let a = completed_xi(c(0.3, 2.0)).unwrap();
        let b = completed_xi(c(0.7, -2.0)).unwrap();
        assert!((a - b).norm() < 1e-14 * a.norm());
    }

    #[test]
    fn high_on_the_one_line() {
        // |zeta(1 + it)| is O(log t); just confirm the bound check passes
        for t in [100.0, 400.0, 800.0] {
            let z = riemann_zeta(c(1.0, t)).unwrap();
            assert!(z.norm() < 10.0 && z.norm() > 0.01);
        }
    }
}
