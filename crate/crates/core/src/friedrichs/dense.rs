//! Dense route: orthonormal basis of ker theta~ in the H^1 metric, then the
//! multiplication form against the H^0 gram on that kernel.
//!
//! Coordinates y_e = sqrt(mu_e (c - lambda_e)) u_e make the H^1 product
//! Euclidean. There theta~(u) = <a, y> with a_e = sqrt(mu_e / (c - lambda_e)) theta_e,
//! the H^0 gram is diag(1/(c - lambda)) and the multiplication form is
//! diag(lambda/(c - lambda)).

use num_complex::Complex64;

use super::eig::{hermitian_eig, CMatrix};
use super::{primary_w, DiscreteModel, SpectralMethod, SpectralResult};
use crate::error::{Error, Result};

/// Householder vector v with (I - 2 v v^* / v^* v) a = -phase(a_0) |a| e_0.
fn householder(a: &[Complex64]) -> Result<Vec<Complex64>> {
    let norm = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::Degenerate("theta vanishes identically".into()));
    }
    let phase = if a[0].norm() > 0.0 { a[0] / a[0].norm() } else { Complex64::new(1.0, 0.0) };
    let mut v = a.to_vec();
    v[0] += phase * norm;
    Ok(v)
}

fn constraint_vector(model: &DiscreteModel) -> Vec<Complex64> {
    (0..model.len()).map(|e| (model.mu[e] / (model.c_shift - model.lambda[e])).sqrt() * model.theta[e]).collect()
}

/// Columns 1.. of the Householder reflector: an H^1-orthonormal basis of
/// ker theta~ in y coordinates.
fn kernel_basis(model: &DiscreteModel) -> Result<(Vec<Complex64>, f64)> {
    let a = constraint_vector(model);
    let v = householder(&a)?;
    let beta = 2.0 / v.iter().map(|z| z.norm_sqr()).sum::<f64>();
    Ok((v, beta))
}

/// Q^* diag(d) Q restricted to columns 1..n of H = I - beta v v^*.
fn reduced(d: &[f64], v: &[Complex64], beta: f64) -> CMatrix {
    let n = d.len();
    let dv: Vec<Complex64> = d.iter().zip(v).map(|(d, v)| d * v).collect();
    let vdv: f64 = v.iter().zip(&dv).map(|(v, w)| (v.conj() * w).re).sum();
    let mut m = CMatrix::zeros(n - 1);
    for i in 1..n {
        for j in 1..n {
            // (H D H)_ij = D_ij - beta (Dv)_i v_j^* - beta v_i (Dv)_j^* + beta^2 (v^*Dv) v_i v_j^*
            let mut x =
                -beta * dv[i] * v[j].conj() - beta * v[i] * dv[j].conj() + beta * beta * vdv * v[i] * v[j].conj();
            if i == j {
                x += d[i];
            }
            m[(i - 1, j - 1)] = x;
        }
    }
    m
}

/// Dimension of the computed kernel basis, counting columns that are
/// orthonormal and annihilated by theta~ to 1e-12.
pub(super) fn kernel_dimension(model: &DiscreteModel) -> Result<usize> {
    let a = constraint_vector(model);
    let (v, beta) = kernel_basis(model)?;
    let an = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let va: Complex64 = v.iter().zip(&a).map(|(v, a)| v.conj() * a).sum();
    let n = a.len();
    let mut count = 0;
    for k in 1..n {
        // column k of H is e_k - beta v v_k^*
        let dot = a[k].conj() - beta * va.conj() * v[k].conj();
        let norm_sq = 1.0 - 2.0 * beta * v[k].norm_sqr()
            + beta * beta * v[k].norm_sqr() * v.iter().map(|z| z.norm_sqr()).sum::<f64>();
        if dot.norm() <= 1e-12 * an && (norm_sq - 1.0).abs() <= 1e-12 {
            count += 1;
        }
    }
    Ok(count)
}

/// Eigenvalues of the multiplication operator compressed to ker theta~.
pub fn constrained_spectrum(model: &DiscreteModel) -> Result<SpectralResult> {
    let n = model.len();
    if n < 2 {
        return Err(Error::Degenerate("model needs at least two entries".into()));
    }
    let c = model.c_shift;
    let (v, beta) = kernel_basis(model)?;
    let gram: Vec<f64> = model.lambda.iter().map(|l| 1.0 / (c - l)).collect();
    let form: Vec<f64> = model.lambda.iter().map(|l| l / (c - l)).collect();
    let a = reduced(&form, &v, beta);
    let b = reduced(&gram, &v, beta);
    let (vals, x) = hermitian_eig(&a, &b)?;
    let theta_norm = h0_inner(model, &model.theta, &model.theta).re.sqrt();
    let residuals = (0..vals.len())
        .map(|k| {
            // back to u: y = H[:, 1..] x, u_e = y_e / sqrt(mu_e (c - lambda_e))
            let xk: Vec<Complex64> = (0..n - 1).map(|i| x[(i, k)]).collect();
            let vx: Complex64 = (1..n).map(|i| v[i].conj() * xk[i - 1]).sum();
            let u: Vec<Complex64> = (0..n)
                .map(|e| {
                    let y = if e == 0 { Complex64::new(0.0, 0.0) } else { xk[e - 1] } - beta * v[e] * vx;
                    y / (model.mu[e] * (c - model.lambda[e])).sqrt()
                })
                .collect();
            let u_norm = h0_inner(model, &u, &u).re.sqrt();
            let r: Vec<Complex64> = (0..n).map(|e| (model.lambda[e] - vals[k]) * u[e]).collect();
            let alpha = h0_inner(model, &model.theta, &r) / (theta_norm * theta_norm);
            let res: Vec<Complex64> = r.iter().zip(&model.theta).map(|(r, t)| r - alpha * t).collect();
            let scale = (alpha.norm() * theta_norm).max(u_norm * vals[k].abs()).max(f64::MIN_POSITIVE);
            (
                h0_inner(model, &res, &res).re.sqrt() / scale,
                h0_inner(model, &model.theta, &u).norm() / (theta_norm * u_norm),
            )
        })
        .collect();
    Ok(SpectralResult {
        mapped_w: vals.iter().map(|&l| primary_w(l)).collect(),
        eigenvalues: vals,
        residuals,
        method: SpectralMethod::ConstrainedEig,
    })
}

/// The discrete map A: u with (c - lambda_e) u_e = f_e.
pub fn riesz_inverse(model: &DiscreteModel, f: &[Complex64]) -> Vec<Complex64> {
    f.iter().zip(&model.lambda).map(|(f, l)| f / (model.c_shift - l)).collect()
}

/// sum mu conj(u) v
pub fn h0_inner(model: &DiscreteModel, u: &[Complex64], v: &[Complex64]) -> Complex64 {
    (0..model.len()).map(|e| model.mu[e] * u[e].conj() * v[e]).sum()
}

/// sum mu (c - lambda) conj(u) v
pub fn h1_inner(model: &DiscreteModel, u: &[Complex64], v: &[Complex64]) -> Complex64 {
    (0..model.len()).map(|e| model.mu[e] * (model.c_shift - model.lambda[e]) * u[e].conj() * v[e]).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::friedrichs::secular_roots;

    #[test]
    fn toy_dense_matches_secular() {
        let m = DiscreteModel::toy(&[-1.0, -2.0], &[1.0, 1.0]).unwrap();
        let r = constrained_spectrum(&m).unwrap();
        assert_eq!(r.eigenvalues.len(), 1);
        assert!((r.eigenvalues[0] + 1.5).abs() < 1e-14);
        let m = DiscreteModel::toy(&[-1.0, -2.0, -3.0, -0.5], &[1.0, 0.3, 2.0, 0.7]).unwrap();
        let d = constrained_spectrum(&m).unwrap();
        let s = secular_roots(&m, (-10.0, 10.0)).unwrap();
        for (a, b) in d.eigenvalues.iter().zip(&s) {
            assert!((a - b).abs() < 1e-12, "{:?} {s:?}", d.eigenvalues);
        }
        assert!(d.residuals.iter().all(|r| r.0 < 1e-10 && r.1 < 1e-10), "{:?}", d.residuals);
        assert_eq!(kernel_dimension(&m).unwrap(), 3);
    }

    #[test]
    fn riesz_round_trip() {
        let m = DiscreteModel::toy(&[-1.0, -2.0], &[1.0, 1.0]).unwrap();
        let u = riesz_inverse(&m, &m.theta);
        assert!((u[0].re - 0.5).abs() < 1e-15 && (u[1].re - 1.0 / 3.0).abs() < 1e-15);
    }
}
