use num_complex::Complex64;

use crate::error::{Error, Result};

/// scale * prod(s - zeros) / prod(s - poles).
pub fn rational_eval(zeros: &[Complex64], poles: &[Complex64], scale: Complex64, s: Complex64) -> Result<Complex64> {
    let mut den = Complex64::new(1.0, 0.0);
    for p in poles {
        let d = s - p;
        if d.norm() == 0.0 {
            return Err(Error::Pole(s));
        }
        den *= d;
    }
    let mut num = scale;
    for z in zeros {
        num *= s - z;
    }
    Ok(num / den)
}

/// ln of the rational function, summed factor by factor (some branch).
pub fn ln_rational(zeros: &[Complex64], poles: &[Complex64], scale: Complex64, s: Complex64) -> Result<Complex64> {
    let mut acc = scale.ln();
    for p in poles {
        let d = s - p;
        if d.norm() == 0.0 {
            return Err(Error::Pole(s));
        }
        acc -= d.ln();
    }
    for z in zeros {
        acc += (s - z).ln();
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluates_and_rejects_poles() {
        let z = [Complex64::new(0.75, 0.0)];
        let p = [Complex64::new(-1.0, 0.0)];
        let one = Complex64::new(1.0, 0.0);
        let v = rational_eval(&z, &p, one, Complex64::new(1.0, 0.0)).unwrap();
        assert!((v - 0.125).norm() < 1e-15);
        assert!(rational_eval(&z, &p, one, Complex64::new(-1.0, 0.0)).is_err());
        let l = ln_rational(&z, &p, one, Complex64::new(0.3, 2.0)).unwrap();
        let r = rational_eval(&z, &p, one, Complex64::new(0.3, 2.0)).unwrap();
        assert!((l.exp() - r).norm() < 1e-14);
    }
}
