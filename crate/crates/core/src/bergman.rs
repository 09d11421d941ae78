//! Bergman (Hessenberg) polynomials: the lower-triangular coefficient
//! matrix P generated by the shift recurrence of a Hessenberg matrix, its
//! explicit inverse R, the moment matrix M = R R^T, and the asymptotic
//! limits C(beta), B(beta), A(beta) that split at the golden ratio.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hessenberg::HessMatrix;
use crate::linalg;

/// Lower-triangular polynomial coefficients, stored scaled: the raw
/// coefficient is `scaled[n][k] * beta^n` (the diagonal grows like beta^n,
/// so the scaled rows stay O(1)-ish).
#[derive(Debug, Clone)]
pub struct PolyMatrix {
    pub dim: usize,
    pub beta: f64,
    scaled: Vec<Vec<f64>>,
}

impl PolyMatrix {
    /// Raw coefficient p_{nk} of z^k in p_n(z).
    pub fn coeff(&self, n: usize, k: usize) -> f64 {
        if k > n {
            return 0.0;
        }
        self.scaled[n][k] * self.beta.powi(n as i32)
    }

    pub fn scaled_row(&self, n: usize) -> &[f64] {
        &self.scaled[n]
    }

    /// Evaluate p_n at a complex point.
    pub fn eval(&self, n: usize, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in (0..=n).rev() {
            acc = acc * z + self.coeff(n, k);
        }
        acc
    }

    /// Raw column sum sum_k p_{nk} = p_n(1).
    pub fn column_sum(&self, n: usize) -> f64 {
        let s: f64 = self.scaled[n].iter().sum();
        s * self.beta.powi(n as i32)
    }

    /// Zeros of p_n via the (balanced) companion matrix.
    pub fn zeros(&self, n: usize) -> Vec<Complex64> {
        let coeffs: Vec<f64> = (0..=n).map(|k| self.coeff(n, k)).collect();
        linalg::poly_roots(&coeffs)
    }
}

/// Coefficients from the recurrence A_{n+1,n} p_{n+1,j} = p_{n,j-1} -
/// sum_k A_{kn} p_{kj}, with p_00 = 1. Fails with ReducibleMatrix when a
/// subdiagonal entry vanishes.
pub fn bergman_polys(a: &HessMatrix, n: usize) -> Result<PolyMatrix> {
    assert!(n <= a.dim);
    let beta = a.beta;
    let mut scaled: Vec<Vec<f64>> = Vec::with_capacity(n);
    scaled.push(vec![1.0]);
    for m in 0..n.saturating_sub(1) {
        let sub = a.entry(m + 1, m);
        if sub.abs() < 1e-14 {
            return Err(Error::ReducibleMatrix(m));
        }
        let mut row = vec![0.0; m + 2];
        for j in 0..=m + 1 {
            // scaled recurrence: p^_{m+1,j} = (1/beta) [p^_{m,j-1}
            //   - sum_k A_{km} beta^(k-m) p^_{kj}] / A_{m+1,m}
            let prev = if j >= 1 { scaled[m][j - 1] } else { 0.0 };
            let mut acc = prev;
            for k in j..=m {
                let pk = scaled[k].get(j).copied().unwrap_or(0.0);
                if pk != 0.0 {
                    acc -= a.entry(k, m) * beta.powi(k as i32 - m as i32) * pk;
                }
            }
            row[j] = acc / (beta * sub);
        }
        scaled.push(row);
    }
    Ok(PolyMatrix { dim: n, beta, scaled })
}

/// Lower-triangular inverse R = P^-1 by forward substitution (raw
/// entries; the diagonal 1/p_nn decays, products stay O(1)).
#[derive(Debug, Clone)]
pub struct InverseMatrix {
    pub dim: usize,
    pub beta: f64,
    rows: Vec<Vec<f64>>,
}

impl InverseMatrix {
    pub fn coeff(&self, n: usize, m: usize) -> f64 {
        if m > n {
            return 0.0;
        }
        self.rows[n][m]
    }
}

pub fn poly_inverse(p: &PolyMatrix) -> InverseMatrix {
    let n = p.dim;
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = vec![0.0; i + 1];
        let pii = p.coeff(i, i);
        row[i] = 1.0 / pii;
        for m in (0..i).rev() {
            let mut acc = 0.0;
            for k in m..i {
                let pik = p.coeff(i, k);
                if pik != 0.0 {
                    acc += pik * rows[k][m];
                }
            }
            row[m] = -acc / pii;
        }
        rows.push(row);
    }
    InverseMatrix { dim: n, beta: p.beta, rows }
}

/// Evaluate (p_n(z), p_n'(z)) by running the defining recurrence
/// z p_m = sum_k A_{km} p_k forward at the point z. Much better
/// conditioned than the expanded coefficients when zeros crowd together.
pub fn eval_recurrence(a: &HessMatrix, n: usize, z: Complex64) -> (Complex64, Complex64) {
    let zero = Complex64::new(0.0, 0.0);
    let mut p = vec![zero; n + 1];
    let mut d = vec![zero; n + 1];
    p[0] = Complex64::new(1.0, 0.0);
    for m in 0..n {
        let sub = a.entry(m + 1, m);
        let mut acc = z * p[m];
        let mut dacc = p[m] + z * d[m];
        for k in 0..=m {
            let akm = a.entry(k, m);
            if akm != 0.0 {
                acc -= akm * p[k];
                dacc -= akm * d[k];
            }
        }
        p[m + 1] = acc / sub;
        d[m + 1] = dacc / sub;
    }
    (p[n], d[n])
}

/// Zeros of p_n: companion-matrix seeds polished by guarded Newton on the
/// recurrence evaluation. Steps that wander (total move > 0.05) or fail to
/// reduce |p_n| are rejected in favor of the raw seed.
pub fn zeros_polished(p: &PolyMatrix, a: &HessMatrix, n: usize) -> Vec<Complex64> {
    p.zeros(n)
        .into_iter()
        .map(|seed| {
            let (f0, _) = eval_recurrence(a, n, seed);
            let mut z = seed;
            for _ in 0..60 {
                let (f, df) = eval_recurrence(a, n, z);
                if df.norm() < 1e-280 || f.norm() == 0.0 {
                    break;
                }
                let step = f / df;
                z -= step;
                if step.norm() < 1e-14 {
                    break;
                }
            }
            let (f1, _) = eval_recurrence(a, n, z);
            if (z - seed).norm() < 0.05 && f1.norm() <= f0.norm() {
                z
            } else {
                seed
            }
        })
        .collect()
}

/// Scale-invariant triangular product residual:
/// max over i, m <= i of beta^-i |sum_k p_{ik} r_{km} - delta_{im}|.
/// (The raw residual carries |P||R| ~ 1e12 at n = 60, which floors it near
/// 1e-3 in doubles; row scaling is the meaningful statement.)
pub fn triangular_residual_scaled(p: &PolyMatrix, r: &InverseMatrix) -> f64 {
    let n = p.dim.min(r.dim);
    let mut worst: f64 = 0.0;
    for i in 0..n {
        let scale = p.beta.powi(-(i as i32));
        for m in 0..=i {
            let mut acc = 0.0;
            for k in m..=i {
                acc += p.coeff(i, k) * r.coeff(k, m);
            }
            let expect = if i == m { 1.0 } else { 0.0 };
            worst = worst.max(((acc - expect) * scale).abs());
        }
    }
    worst
}

/// Symmetric moment matrix M = R R^T (raw entries).
#[derive(Debug, Clone)]
pub struct MomentMatrix {
    pub dim: usize,
    entries: Vec<Vec<f64>>,
}

impl MomentMatrix {
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.entries[i][j]
    }
}

pub fn moment_matrix(r: &InverseMatrix) -> MomentMatrix {
    let n = r.dim;
    let mut entries = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let mut acc = 0.0;
            for k in 0..=j.min(i) {
                acc += r.coeff(i, k) * r.coeff(j, k);
            }
            entries[i][j] = acc;
            entries[j][i] = acc;
        }
    }
    MomentMatrix { dim: n, entries }
}

/// Asymptotics of the moment matrix: C is the limiting ratio of successive
/// rows; below the golden ratio B is the limiting entry value; above it A
/// is the point-mass weight fitting M_{mn} ~ A C^(m+n+1).
#[derive(Debug, Clone, Copy)]
pub struct MomentAsymptotics {
    pub c: f64,
    pub b: Option<f64>,
    pub a: Option<f64>,
    /// Spread of the ratio estimates used for C (diagnostic).
    pub c_spread: f64,
}

pub fn asymptotics(m: &MomentMatrix) -> Result<MomentAsymptotics> {
    let n = m.dim;
    if n < 24 {
        return Err(Error::InvalidParam("moment matrix too small".into()));
    }
    // ratio of successive rows over the last 20 rows, a few columns
    let mut ratios = Vec::new();
    for row in n - 20..n {
        for col in [1usize, 2, 3] {
            let lo = m.entry(row - 1, col);
            let hi = m.entry(row, col);
            if lo.abs() > 1e-280 {
                ratios.push(hi / lo);
            }
        }
    }
    if ratios.is_empty() {
        return Err(Error::NoLimit(f64::NAN));
    }
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let spread = ratios.iter().fold(0.0_f64, |a, r| a.max((r - mean).abs()));
    // Richardson-flavored: average the last half only when drifting
    let c = ratios[ratios.len() / 2..].iter().sum::<f64>()
        / (ratios.len() - ratios.len() / 2) as f64;
    if spread > 1e-2 {
        return Err(Error::NoLimit(spread));
    }
    let phi = (1.0 + 5.0_f64.sqrt()) / 2.0;
    let (b, a) = if (c - 1.0).abs() < 0.02 {
        // beta < phi regime: entries converge to a constant
        let b = m.entry(n - 1, n / 2);
        (Some(b), None)
    } else {
        // point-mass regime: M_{mn} ~ A C^(m+n+1)
        let mut acc = 0.0;
        let mut cnt = 0;
        for i in n - 6..n {
            for j in n - 6..n {
                acc += m.entry(i, j) / c.powi((i + j + 1) as i32);
                cnt += 1;
            }
        }
        (None, Some(acc / cnt as f64))
    };
    let _ = phi;
    Ok(MomentAsymptotics { c, b, a, c_spread: spread })
}
