//! Dense Hermitian generalized eigenproblem A x = lambda B x.

use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const MAX_SWEEPS: usize = 100;

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    pub n: usize,
    pub data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        CMatrix { n, data: vec![ZERO; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_diag(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, v) in d.iter().enumerate() {
            m[(i, i)] = Complex64::new(*v, 0.0);
        }
        m
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        (0..self.n).map(|i| (0..self.n).map(|j| self[(i, j)] * x[j]).sum()).collect()
    }

    pub fn hermitian_defect(&self) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..self.n {
            for j in 0..=i {
                d = d.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        d
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

/// Lower Cholesky factor of a Hermitian positive-definite matrix.
pub fn cholesky(b: &CMatrix) -> Result<CMatrix> {
    let n = b.n;
    let scale = (0..n).map(|i| b[(i, i)].re.abs()).fold(0.0, f64::max);
    let mut l = CMatrix::zeros(n);
    for j in 0..n {
        let mut d = b[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if !(d > 1e-14 * scale) {
            return Err(Error::NotPositiveDefinite(d));
        }
        let d = d.sqrt();
        l[(j, j)] = Complex64::new(d, 0.0);
        for i in j + 1..n {
            let mut s = b[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / d;
        }
    }
    Ok(l)
}

/// Eigenpairs of a Hermitian matrix by cyclic Jacobi, ascending.
pub fn jacobi_eig(a: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let n = a.n;
    let mut a = a.clone();
    let mut v = CMatrix::identity(n);
    let norm = a.frobenius().max(f64::MIN_POSITIVE);
    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * norm {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged {
        return Err(Error::EigNonConvergence(MAX_SWEEPS));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let vals = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vecs = CMatrix::zeros(n);
    for (col, &i) in order.iter().enumerate() {
        for r in 0..n {
            vecs[(r, col)] = v[(r, i)];
        }
    }
    Ok((vals, vecs))
}

fn rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let b = apq.norm();
    if b == 0.0 {
        return;
    }
    let phase = apq / b;
    let (app, aqq) = (a[(p, p)].re, a[(q, q)].re);
    let theta = (aqq - app) / (2.0 * b);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    // J = diag(1, conj(phase)) * [[c, s], [-s, c]]
    let j = [[Complex64::new(c, 0.0), Complex64::new(s, 0.0)], [-s * phase.conj(), c * phase.conj()]];
    let n = a.n;
    for k in 0..n {
        let (x, y) = (a[(k, p)], a[(k, q)]);
        a[(k, p)] = x * j[0][0] + y * j[1][0];
        a[(k, q)] = x * j[0][1] + y * j[1][1];
        let (x, y) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = x * j[0][0] + y * j[1][0];
        v[(k, q)] = x * j[0][1] + y * j[1][1];
    }
    for k in 0..n {
        let (x, y) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = j[0][0].conj() * x + j[1][0].conj() * y;
        a[(q, k)] = j[0][1].conj() * x + j[1][1].conj() * y;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
}

/// Generalized eigenpairs of (A, B), B positive definite, by congruence with
/// the Cholesky factor of B and a Jacobi solve. Columns of the returned
/// matrix are B-orthonormal eigenvectors.
pub fn hermitian_eig(a: &CMatrix, b: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    if a.n != b.n {
        return Err(Error::Precondition(format!("size mismatch {} vs {}", a.n, b.n)));
    }
    let n = a.n;
    let l = cholesky(b)?;
    // C = L^-1 A L^-*: forward-solve the columns, then the rows
    let mut y = a.clone();
    for col in 0..n {
        for i in 0..n {
            let mut s = y[(i, col)];
            for k in 0..i {
                s -= l[(i, k)] * y[(k, col)];
            }
            y[(i, col)] = s / l[(i, i)];
        }
    }
    let mut c = CMatrix::zeros(n);
    for row in 0..n {
        for j in 0..n {
            let mut s = y[(row, j)];
            for k in 0..j {
                s -= c[(row, k)] * l[(j, k)].conj();
            }
            c[(row, j)] = s / l[(j, j)];
        }
    }
    for i in 0..n {
        for j in 0..i {
            let m = 0.5 * (c[(i, j)] + c[(j, i)].conj());
            c[(i, j)] = m;
            c[(j, i)] = m.conj();
        }
        c[(i, i)] = Complex64::new(c[(i, i)].re, 0.0);
    }
    let (vals, z) = jacobi_eig(&c)?;
    // x = L^-* z
    let mut x = z;
    for col in 0..n {
        for i in (0..n).rev() {
            let mut s = x[(i, col)];
            for k in i + 1..n {
                s -= l[(k, i)].conj() * x[(k, col)];
            }
            x[(i, col)] = s / l[(i, i)];
        }
    }
    Ok((vals, x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal() {
        let (v, _) = hermitian_eig(&CMatrix::from_diag(&[3.0, 1.0, 2.0]), &CMatrix::identity(3)).unwrap();
        assert_eq!(v, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn two_by_two_closed_form() {
        let mut a = CMatrix::zeros(2);
        a[(0, 0)] = Complex64::new(2.0, 0.0);
        a[(1, 1)] = Complex64::new(-1.0, 0.0);
        a[(0, 1)] = Complex64::new(0.5, 1.5);
        a[(1, 0)] = Complex64::new(0.5, -1.5);
        let mut b = CMatrix::identity(2);
        b[(0, 0)] = Complex64::new(2.0, 0.0);
        b[(0, 1)] = Complex64::new(0.0, 0.5);
        b[(1, 0)] = Complex64::new(0.0, -0.5);
        // det(A - l B) = 0 as a quadratic in l
        let (a11, a22, a12) = (2.0, -1.0, Complex64::new(0.5, 1.5));
        let (b11, b22, b12) = (2.0, 1.0, Complex64::new(0.0, 0.5));
        let qa = b11 * b22 - b12.norm_sqr();
        let qb = -(a11 * b22 + a22 * b11) + 2.0 * (a12 * b12.conj()).re;
        let qc = a11 * a22 - a12.norm_sqr();
        let disc = (qb * qb - 4.0 * qa * qc).sqrt();
        let want = [(-qb - disc) / (2.0 * qa), (-qb + disc) / (2.0 * qa)];
        let (v, x) = hermitian_eig(&a, &b).unwrap();
        for k in 0..2 {
            assert!((v[k] - want[k]).abs() < 1e-12, "{v:?} {want:?}");
            let col = [x[(0, k)], x[(1, k)]];
            let ax = a.mul_vec(&col);
            let bx = b.mul_vec(&col);
            let r: f64 = ax.iter().zip(&bx).map(|(p, q)| (p - v[k] * q).norm()).sum();
            assert!(r < 1e-12);
        }
    }

    #[test]
    fn singular_gram_rejected() {
        let b = CMatrix::from_diag(&[1.0, 0.0]);
        assert!(matches!(hermitian_eig(&CMatrix::identity(2), &b), Err(Error::NotPositiveDefinite(_))));
    }
}
