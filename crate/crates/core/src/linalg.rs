//! Thin wrappers over the dense eigen machinery.
//!
//! Everything spectral funnels through here: full nonsymmetric eigenvalues
//! via the real Schur form, polynomial roots via companion matrices, and
//! inverse iteration for a single eigenvector.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// All eigenvalues of a dense real square matrix (Francis QR / Schur form).
pub fn eigenvalues(rows: &[Vec<f64>]) -> Result<Vec<Complex64>> {
    let n = rows.len();
    let m = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
    let schur = nalgebra::linalg::Schur::try_new(m, 1e-13, 100_000)
        .ok_or(Error::NoConvergence { sweeps: 100_000, delta: f64::NAN })?;
    let ev = schur.complex_eigenvalues();
    Ok(ev.iter().map(|c| Complex64::new(c.re, c.im)).collect())
}

/// Roots of a real polynomial given coefficients low-to-high, via the
/// companion matrix. Trailing zero coefficients are stripped.
pub fn poly_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let mut c = coeffs.to_vec();
    while c.last() == Some(&0.0) {
        c.pop();
    }
    let deg = c.len().saturating_sub(1);
    if deg == 0 {
        return vec![];
    }
    let top = c[deg];
    let n = deg;
    let mut m = vec![vec![0.0; n]; n];
    for i in 1..n {
        m[i][i - 1] = 1.0;
    }
    for i in 0..n {
        m[i][n - 1] = -c[i] / top;
    }
    eigenvalues(&m).expect("companion eigenvalues")
}

/// Right eigenvector for the eigenvalue closest to `shift`, by inverse
/// iteration with an LU solve. Returns (eigenvalue_estimate, vector),
/// with the vector normalized to unit 2-norm and first nonzero entry > 0.
pub fn inverse_iteration(rows: &[Vec<f64>], shift: f64, iters: usize) -> Result<(f64, Vec<f64>)> {
    let n = rows.len();
    let a = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
    // tiny offset keeps the shifted matrix invertible at an exact eigenvalue
    let shifted = &a - DMatrix::identity(n, n) * (shift + 1e-11);
    let lu = shifted.lu();
    let mut v = DVector::from_element(n, 1.0 / (n as f64).sqrt());
    for _ in 0..iters {
        let mut w = lu.solve(&v).ok_or(Error::NoConvergence { sweeps: iters, delta: f64::NAN })?;
        let norm = w.norm();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::NoConvergence { sweeps: iters, delta: norm });
        }
        w /= norm;
        v = w;
    }
    let av = &a * &v;
    let lambda = v.dot(&av);
    // sign convention
    let first = v.iter().find(|x| x.abs() > 1e-9).copied().unwrap_or(1.0);
    let sign = if first < 0.0 { -1.0 } else { 1.0 };
    Ok((lambda, v.iter().map(|x| x * sign).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigenvalues_of_2x2() {
        // [[1,1],[1,0]] has eigenvalues phi and 1-phi
        let ev = eigenvalues(&[vec![1.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let mut re: Vec<f64> = ev.iter().map(|z| z.re).collect();
        re.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let phi = 1.6180339887498949;
        assert!((re[1] - phi).abs() < 1e-12);
        assert!((re[0] - (1.0 - phi)).abs() < 1e-12);
    }

    #[test]
    fn roots_of_quadratic() {
        // z^2 + 1 = 0
        let r = poly_roots(&[1.0, 0.0, 1.0]);
        assert_eq!(r.len(), 2);
        assert!(r.iter().all(|z| (z.norm() - 1.0).abs() < 1e-12 && z.re.abs() < 1e-12));
    }

    #[test]
    fn inverse_iteration_finds_dominant_pair() {
        let rows = vec![vec![2.0, 1.0], vec![1.0, 2.0]];
        let (l, v) = inverse_iteration(&rows, 3.1, 30).unwrap();
        assert!((l - 3.0).abs() < 1e-9);
        assert!((v[0] - v[1]).abs() < 1e-9);
    }
}
