//! Smooth truncation of Re c(1/2 + it) for the line integrals.
//!
//! For rational h, Re c is even and analytic at infinity, so it is modelled
//! on [T, inf) as A + B/t^2 from values at T and 2T.
//!
//! Otherwise Re c is a rapidly turning phase plus a slowly decaying mean,
//! which comes from stationary points of the Dirichlet-series terms against
//! the gamma-factor phase (for xi(2s) the mean is sqrt(pi / 2t) to leading
//! order). The mean is fitted on [T/4, T] with a smooth window, Re c is
//! blended into it over [T/2, T], and the mean alone is integrated beyond T.

use num_complex::Complex64;

use crate::error::Result;
use crate::hcatalog::{HFunctionSpec, Variant};

#[derive(Debug, Clone, Copy)]
pub enum Kernel {
    /// -1 / (t^2 + a^2)
    Resolvent(Complex64),
    /// t^-m
    Power(i32),
}

impl Kernel {
    fn value(&self, t: f64) -> Complex64 {
        match *self {
            Kernel::Resolvent(a) => -1.0 / (t * t + a * a),
            Kernel::Power(m) => Complex64::new(t.powi(-m), 0.0),
        }
    }

    /// int_T^inf F(t) t^{-2j} dt for j in {0, 1}
    pub fn moment(&self, t: f64, j: i32) -> Complex64 {
        match *self {
            Kernel::Resolvent(a) => {
                let x = a / t;
                if j == 0 {
                    if x.norm() < 0.1 {
                        -series(x, 1) / t
                    } else {
                        -(x.atan()) / a
                    }
                } else if x.norm() < 0.1 {
                    -series(x, 3) / (t * t * t)
                } else {
                    -(1.0 / t - x.atan() / a) / (a * a)
                }
            }
            Kernel::Power(m) => {
                let p = m + 2 * j;
                Complex64::new(t.powi(1 - p) / (p as f64 - 1.0), 0.0)
            }
        }
    }
}

impl Kernel {
    /// int_T^inf F(t) t^-q dt, by Gauss–Legendre after t = T / v^2.
    pub fn power_moment(&self, t: f64, q: f64) -> Complex64 {
        let (x, w) = crate::quadrature::gauss_legendre(40);
        let mut acc = Complex64::new(0.0, 0.0);
        for (x, w) in x.iter().zip(&w) {
            let v = 0.5 * (x + 1.0);
            if v == 0.0 {
                continue;
            }
            let tt = t / (v * v);
            // dt = 2 T / v^3 dv
            acc += 0.5 * w * self.value(tt) * tt.powf(-q) * 2.0 * t / (v * v * v);
        }
        acc
    }
}

/// sum_k (-1)^k x^{2k} / (2k + first)
fn series(x: Complex64, first: i32) -> Complex64 {
    let x2 = x * x;
    let mut term = Complex64::new(1.0, 0.0);
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..40 {
        let add = term / (2 * k + first) as f64;
        acc += add;
        if add.norm() < 1e-18 {
            break;
        }
        term *= -x2;
    }
    acc
}

/// Exponents q of the fitted mean sum_q coef_q t^-q.
const MEAN_POWERS: [f64; 3] = [0.5, 1.0, 1.5];

#[derive(Debug, Clone, Copy)]
pub enum TailModel {
    Slow { t: f64, a: f64, b: f64 },
    Smooth { t: f64, mean: [f64; 3] },
}

fn bump(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        (-1.0 / x).exp()
    }
}

/// C-infinity step, 0 at x <= 0 and 1 at x >= 1.
fn smooth_step(x: f64) -> f64 {
    let (u, v) = (bump(x), bump(1.0 - x));
    u / (u + v)
}

impl TailModel {
    /// `nodes` are (t, weight, c) samples covering [T/4, T].
    pub fn build(spec: &HFunctionSpec, t: f64, nodes: &[(f64, f64, Complex64)]) -> Result<Self> {
        if matches!(spec.variant, Variant::Rational { .. }) {
            let r1 = spec.c_ratio(Complex64::new(0.5, t))?.re;
            let r2 = spec.c_ratio(Complex64::new(0.5, 2.0 * t))?.re;
            let b = (r1 - r2) * t * t * 4.0 / 3.0;
            return Ok(TailModel::Slow { t, a: r1 - b / (t * t), b });
        }
        let mut m = [[0.0f64; 3]; 3];
        let mut rhs = [0.0f64; 3];
        for &(x, w, c) in nodes.iter().filter(|n| n.0 > 0.25 * t && n.0 < t) {
            let y = (x - 0.25 * t) / (0.75 * t);
            let wt = w * bump(y) * bump(1.0 - y);
            let basis = MEAN_POWERS.map(|q| (x / t).powf(-q));
            for i in 0..3 {
                rhs[i] += wt * basis[i] * c.re;
                for j in 0..3 {
                    m[i][j] += wt * basis[i] * basis[j];
                }
            }
        }
        let scaled = solve3(m, rhs).unwrap_or([0.0; 3]);
        let mut mean = [0.0; 3];
        for i in 0..3 {
            mean[i] = scaled[i] * t.powf(MEAN_POWERS[i]);
        }
        Ok(TailModel::Smooth { t, mean })
    }

    pub fn t_max(&self) -> f64 {
        match *self {
            TailModel::Slow { t, .. } | TailModel::Smooth { t, .. } => t,
        }
    }

    /// Modelled Re c for t >= T.
    pub fn mean(&self, x: f64) -> f64 {
        match *self {
            TailModel::Slow { a, b, .. } => a + b / (x * x),
            TailModel::Smooth { mean, .. } => MEAN_POWERS.iter().zip(&mean).map(|(q, k)| k * x.powf(-q)).sum(),
        }
    }

    /// Re c as used on [0, T]: blended into the mean over [T/2, T].
    pub fn effective(&self, x: f64, re_c: f64) -> f64 {
        match *self {
            TailModel::Slow { .. } => re_c,
            TailModel::Smooth { t, .. } => {
                let chi = smooth_step(2.0 * x / t - 1.0);
                (1.0 - chi) * re_c + chi * self.mean(x)
            }
        }
    }

    /// int_T^inf mean(t) F(t) dt.
    pub fn integral(&self, kernel: Kernel) -> Complex64 {
        match *self {
            TailModel::Slow { t, a, b } => a * kernel.moment(t, 0) + b * kernel.moment(t, 1),
            TailModel::Smooth { t, mean } => {
                MEAN_POWERS.iter().zip(&mean).map(|(&q, &k)| k * kernel.power_moment(t, q)).sum()
            }
        }
    }
}

fn solve3(mut m: [[f64; 3]; 3], mut r: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let piv = (col..3).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
        if m[piv][col] == 0.0 {
            return None;
        }
        m.swap(col, piv);
        r.swap(col, piv);
        for row in col + 1..3 {
            let f = m[row][col] / m[col][col];
            for k in col..3 {
                m[row][k] -= f * m[col][k];
            }
            r[row] -= f * r[col];
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let mut acc = r[row];
        for k in row + 1..3 {
            acc -= m[row][k] * x[k];
        }
        x[row] = acc / m[row][row];
    }
    Some(x)
}
