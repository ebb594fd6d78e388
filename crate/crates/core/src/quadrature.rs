//! Gauss–Legendre rules and the composite rule on the critical line.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Nodes and weights of the n-point Gauss–Legendre rule on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p0 = 1.0;
                p1 = z;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

/// Composite Gauss–Legendre rule on [-T, T] with panels of width at most 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineQuadrature {
    pub t_max: f64,
    pub per_panel: usize,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl LineQuadrature {
    pub fn new(t_max: f64, per_panel: usize) -> Result<Self> {
        if !(t_max > 0.0) || !t_max.is_finite() || per_panel == 0 {
            return Err(Error::Precondition(format!(
                "line quadrature needs T > 0 and nodes per panel > 0 (T = {t_max}, n = {per_panel})"
            )));
        }
        let panels = (2.0 * t_max).ceil() as usize;
        let width = 2.0 * t_max / panels as f64;
        let (gx, gw) = gauss_legendre(per_panel);
        let mut nodes = Vec::with_capacity(panels * per_panel);
        let mut weights = Vec::with_capacity(panels * per_panel);
        for p in 0..panels {
            let mid = -t_max + width * (p as f64 + 0.5);
            for (x, w) in gx.iter().zip(&gw) {
                nodes.push(mid + 0.5 * width * x);
                weights.push(0.5 * width * w);
            }
        }
        // exact symmetry about 0
        let n = nodes.len();
        for i in 0..n / 2 {
            let t = 0.5 * (nodes[n - 1 - i] - nodes[i]);
            let w = 0.5 * (weights[i] + weights[n - 1 - i]);
            nodes[i] = -t;
            nodes[n - 1 - i] = t;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Ok(LineQuadrature { t_max, per_panel, nodes, weights })
    }

    /// Indices of the nodes with t > 0, in increasing order.
    pub fn positive_half(&self) -> std::ops::Range<usize> {
        self.nodes.len() / 2..self.nodes.len()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Pairwise summation in a fixed tree order.
pub fn pairwise_sum<T>(xs: &[T]) -> T
where
    T: Copy + std::ops::Add<Output = T> + Default,
{
    if xs.len() <= 8 {
        return xs.iter().fold(T::default(), |a, &b| a + b);
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_rules_integrate_polynomials() {
        for n in [1, 2, 5, 16] {
            let (x, w) = gauss_legendre(n);
            for deg in 0..2 * n {
                let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((q - exact).abs() < 1e-14, "n={n} deg={deg}");
            }
        }
    }

    #[test]
    fn line_rule_invariants() {
        let q = LineQuadrature::new(50.0, 16).unwrap();
        let s: f64 = q.weights.iter().sum();
        assert!((s - 100.0).abs() < 1e-12 * 100.0);
        assert!(q.nodes.windows(2).all(|p| p[0] < p[1]));
        let n = q.len();
        for i in 0..n {
            assert_eq!(q.nodes[i], -q.nodes[n - 1 - i]);
        }
        let f: f64 = q.nodes.iter().zip(&q.weights).map(|(t, w)| w * (3.0 * t).cos()).sum();
        assert!((f - 2.0 * (150.0f64).sin() / 3.0).abs() < 1e-12);
    }
}
