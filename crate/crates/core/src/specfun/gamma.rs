//! Complex log-gamma.
//!
//! Lanczos (g = 7, n = 9) in the right half-plane for moderate arguments,
//! Stirling with recursion when |Im z| > 30 or |z| is large, and reflection
//! for Re z < 1/2.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// B_{2k} / (2k (2k-1)) for k = 1..=10.
const STIRLING_COEF: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43_867.0 / 244_188.0,
    -174_611.0 / 125_400.0,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
const LN_PI: f64 = 1.144_729_885_849_400_2;

fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0
}

/// Principal log-gamma. The imaginary part is the continuous branch in
/// Re z >= 1/2; in the reflected half-plane it is fixed modulo 2*pi, which is
/// all that ratios and exponentials of it depend on.
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    if is_nonpositive_integer(z) {
        return Err(Error::Pole(z));
    }
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Precondition(format!("non-finite argument {z}")));
    }
    if z.re < 0.5 {
        // Gamma(z) Gamma(1 - z) = pi / sin(pi z)
        let s = sin_pi(z);
        if s == Complex64::new(0.0, 0.0) {
            return Err(Error::Pole(z));
        }
        let reflected = ln_gamma_right(Complex64::new(1.0, 0.0) - z);
        return Ok(Complex64::new(LN_PI, 0.0) - ln_sin_pi(z) - reflected);
    }
    Ok(ln_gamma_right(z))
}

/// Gamma(z), computed as exp(ln_gamma(z)).
pub fn gamma(z: Complex64) -> Result<Complex64> {
    ln_gamma(z).map(|l| l.exp())
}

fn ln_gamma_right(z: Complex64) -> Complex64 {
    if z.im.abs() > 30.0 || z.norm() > 60.0 {
        stirling(z)
    } else {
        lanczos(z)
    }
}

fn lanczos(z: Complex64) -> Complex64 {
    let zm1 = z - 1.0;
    let mut acc = Complex64::new(LANCZOS_COEF[0], 0.0);
    for (k, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (zm1 + k as f64);
    }
    let t = zm1 + LANCZOS_G + 0.5;
    (zm1 + 0.5) * t.ln() - t + LN_SQRT_2PI + acc.ln()
}

fn stirling(z: Complex64) -> Complex64 {
    // shift up until |z| is comfortably inside the asymptotic regime
    let mut w = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while w.norm() < 15.0 {
        shift += w.ln();
        w += 1.0;
    }
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut pow = inv;
    for c in STIRLING_COEF {
        series += pow * c;
        pow *= inv2;
    }
    (w - 0.5) * w.ln() - w + LN_SQRT_2PI + series - shift
}

pub(crate) fn sin_pi(z: Complex64) -> Complex64 {
    // reduce the real part to keep sin(pi x) exact at integers
    let x = z.re - 2.0 * (z.re / 2.0).round();
    let (s, c) = (PI * x).sin_cos();
    let (sh, ch) = ((PI * z.im).sinh(), (PI * z.im).cosh());
    let s = if x.fract() == 0.0 { 0.0 } else { s };
    Complex64::new(s * ch, c * sh)
}

/// ln(sin(pi z)) without overflow for large |Im z|.
pub(crate) fn ln_sin_pi(z: Complex64) -> Complex64 {
    if z.im.abs() < 20.0 {
        return sin_pi(z).ln();
    }
    // sin(pi z) = (e^{i pi z} - e^{-i pi z}) / (2i); one exponential dominates
    let i = Complex64::i();
    if z.im > 0.0 {
        // -e^{-i pi z}/(2i) * (1 - e^{2 i pi z})
        let lead = -i * PI * z - (2.0 * i).ln() + Complex64::new(0.0, PI);
        lead + (Complex64::new(1.0, 0.0) - (2.0 * i * PI * z).exp()).ln()
    } else {
        let lead = i * PI * z - (2.0 * i).ln();
        lead + (Complex64::new(1.0, 0.0) - (-2.0 * i * PI * z).exp()).ln()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn known_values() {
        assert!(ln_gamma(c(1.0, 0.0)).unwrap().norm() < 1e-15);
        let half = ln_gamma(c(0.5, 0.0)).unwrap();
        assert!((half.re - 0.572_364_942_924_700_1).abs() < 1e-14);
        assert!(half.im.abs() < 1e-15);
        let five = ln_gamma(c(5.0, 0.0)).unwrap();
        assert!((five.re - 24f64.ln()).abs() < 1e-13);
    }

    #[test]
    fn poles_rejected() {
        assert!(matches!(ln_gamma(c(0.0, 0.0)), Err(Error::Pole(_))));
        assert!(matches!(ln_gamma(c(-3.0, 0.0)), Err(Error::Pole(_))));
    }

    #[test]
    fn lanczos_and_stirling_agree_at_switch() {
        for z in [c(3.0, 29.0), c(0.7, 25.0), c(40.0, 10.0), c(10.0, -28.0)] {
            let a = lanczos(z);
            let b = stirling(z);
            assert!((a - b).norm() < 1e-12 * (1.0 + a.norm()), "{z}: {a} vs {b}");
        }
    }

    #[test]
    fn reflection_matches_product() {
        // Gamma(z) Gamma(1-z) sin(pi z) = pi
        for z in [c(-2.3, 0.4), c(0.2, -3.0), c(-7.5, 12.0)] {
            let lhs = (ln_gamma(z).unwrap() + ln_gamma(c(1.0, 0.0) - z).unwrap()).exp() * sin_pi(z);
            assert!((lhs - PI).norm() < 1e-11 * PI, "{z}: {lhs}");
        }
    }

    #[test]
    fn large_imaginary_magnitude() {
        // |Gamma(1/2 + it)|^2 = pi / cosh(pi t)
        let t: f64 = 80.0;
        let l = ln_gamma(c(0.5, t)).unwrap();
        let expect = 0.5 * (PI.ln() - (PI * t - (2f64).ln() + (1.0 + (-2.0 * PI * t).exp()).ln()));
        assert!((l.re - expect).abs() < 1e-12 * expect.abs());
    }
}
