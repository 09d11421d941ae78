//! The transfer operator in the Hessenberg wavelet basis.
//!
//! The wavelets are two-arm step functions whose centers walk the midpoint
//! orbit m_p = T_beta^p(beta/2); each application of the transfer operator
//! maps wavelet breakpoints onto later midpoints, which is what makes the
//! matrix upper-Hessenberg. All matrix elements are exact finite sums over
//! merged step-function breakpoints; there is no quadrature on this path.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg;
use crate::maps::{beta_shift_step, Beta};
use crate::stepfn::StepFn;

/// Distance from 1/2 at which the midpoint orbit is declared to have hit
/// the discontinuity (double-precision backend).
pub const HALT_TOL: f64 = 1e-12;

/// The orbit of the midpoint beta/2.
#[derive(Debug, Clone)]
pub struct MidpointOrbit {
    pub beta: f64,
    /// m_0, m_1, ..., ending at the halt point when one occurs.
    pub points: Vec<f64>,
    /// Step index at which |m_k - 1/2| < HALT_TOL.
    pub halt: Option<usize>,
}

/// Iterate the midpoint up to n points, stopping early at a trouble spot.
pub fn midpoint_orbit(beta: Beta, n: usize) -> MidpointOrbit {
    let b = beta.get();
    let mut points = Vec::with_capacity(n.min(1 << 20));
    let mut m = b / 2.0;
    let mut halt = None;
    for k in 0..n {
        points.push(m);
        if (m - 0.5).abs() < HALT_TOL {
            halt = Some(k);
            break;
        }
        m = beta_shift_step(b, m);
    }
    MidpointOrbit { beta: b, points, halt }
}

/// One Hessenberg wavelet: +C/(m_p - m_l) on [m_l, m_p], -C/(m_u - m_p)
/// on (m_p, m_u], zero elsewhere. psi_0 is the flat top-hat on [0, beta/2].
#[derive(Debug, Clone)]
pub struct Wavelet {
    pub index: usize,
    pub lower: f64,
    pub center: f64,
    pub upper: f64,
    pub norm_c: f64,
}

impl Wavelet {
    pub fn step_fn(&self) -> StepFn {
        if self.index == 0 {
            // top-hat 1/sqrt(beta/2) on [0, beta/2]
            let v = 1.0 / self.center.sqrt();
            if self.center < 1.0 {
                StepFn::new(vec![self.center], vec![v, 0.0])
            } else {
                StepFn::constant(v)
            }
        } else {
            let pos = self.norm_c / (self.center - self.lower);
            let neg = -self.norm_c / (self.upper - self.center);
            let mut cuts = Vec::with_capacity(3);
            let mut vals = Vec::with_capacity(4);
            if self.lower > 0.0 {
                cuts.push(self.lower);
                vals.push(0.0);
            }
            vals.push(pos);
            cuts.push(self.center);
            vals.push(neg);
            if self.upper < 1.0 {
                cuts.push(self.upper);
                vals.push(0.0);
            }
            StepFn::new(cuts, vals)
        }
    }
}

/// First n wavelets. Fails with TroubleSpot when the orbit halts first and
/// DegenerateBasis when a midpoint repeats (as at beta = 2).
pub fn wavelet_basis(beta: Beta, n: usize) -> Result<Vec<Wavelet>> {
    let b = beta.get();
    let orbit = midpoint_orbit(beta, n);
    if let Some(k) = orbit.halt {
        if k < n {
            return Err(Error::TroubleSpot(k));
        }
    }
    let m0 = b / 2.0;
    let mut ws = Vec::with_capacity(n);
    ws.push(Wavelet { index: 0, lower: 0.0, center: m0, upper: m0, norm_c: 0.0 });
    // known midpoints in sorted order, seeded with the sentinels 0 and m_0
    let mut seen: Vec<f64> = vec![0.0, m0];
    for (p, &mp) in orbit.points.iter().enumerate().skip(1).take(n - 1) {
        let pos = seen.partition_point(|&x| x < mp);
        if pos == 0 || pos == seen.len() || seen[pos] == mp || (seen[pos] - mp) < 1e-13 {
            return Err(Error::DegenerateBasis(p));
        }
        let (lo, up) = (seen[pos - 1], seen[pos]);
        if mp - lo < 1e-13 {
            return Err(Error::DegenerateBasis(p));
        }
        let c = ((mp - lo) * (up - mp) / (up - lo)).sqrt();
        ws.push(Wavelet { index: p, lower: lo, center: mp, upper: up, norm_c: c });
        seen.insert(pos, mp);
    }
    Ok(ws)
}

/// Transfer operator applied to a step function supported in [0, beta/2]:
/// [Lf](y) = (1/beta) [f(y/beta) + f(y/beta + 1/2)] for y <= beta/2, else 0.
///
/// Breakpoints map through the same float expressions as the orbit step,
/// so images of midpoints are bitwise later midpoints.
pub fn transfer_step_fn(f: &StepFn, b: f64) -> StepFn {
    let cap = b / 2.0;
    let mut cuts: Vec<f64> = Vec::new();
    for &c in f.cuts() {
        if c < 0.5 {
            let y = b * c;
            if y > 0.0 && y < cap.min(1.0) {
                cuts.push(y);
            }
        }
        if c >= 0.5 {
            let y = b * (c - 0.5);
            if y > 0.0 && y < cap.min(1.0) {
                cuts.push(y);
            }
        }
    }
    if cap < 1.0 {
        cuts.push(cap);
    }
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    cuts.dedup();
    let eval2 = |y: f64| {
        let u1 = y / b;
        let u2 = y / b + 0.5;
        let a = f.eval(u1.min(1.0));
        let c = if u2 <= 1.0 { f.eval(u2) } else { 0.0 };
        (a + c) / b
    };
    let mut vals = Vec::with_capacity(cuts.len() + 1);
    let mut left = 0.0;
    for i in 0..=cuts.len() {
        let right = cuts.get(i).copied().unwrap_or(1.0);
        let mid = 0.5 * (left + right);
        vals.push(if mid > cap { 0.0 } else { eval2(mid) });
        left = right;
    }
    StepFn::new(cuts, vals)
}

/// Dense upper-Hessenberg matrix of the transfer operator.
#[derive(Debug, Clone)]
pub struct HessMatrix {
    pub beta: f64,
    pub dim: usize,
    rows: Vec<Vec<f64>>,
    enforcement: f64,
}

impl HessMatrix {
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    /// Largest magnitude found below the first subdiagonal before the zero
    /// pattern was enforced (diagnostic).
    pub fn enforcement_residual(&self) -> f64 {
        self.enforcement
    }

    pub fn principal(&self, n: usize) -> HessMatrix {
        HessMatrix {
            beta: self.beta,
            dim: n,
            rows: self.rows[..n].iter().map(|r| r[..n].to_vec()).collect(),
            enforcement: self.enforcement,
        }
    }
}

/// Matrix elements <n|L|m> = integral psi_n (L psi_m) in the wavelet basis.
/// Entries below the first subdiagonal are asserted tiny and then pinned to
/// exact zero. At beta = 2 the basis collapses and the 1x1 matrix [[1]] is
/// returned.
pub fn operator_matrix(beta: Beta, n: usize) -> Result<HessMatrix> {
    let b = beta.get();
    if (b - 2.0).abs() < 1e-12 {
        return Ok(HessMatrix { beta: b, dim: 1, rows: vec![vec![1.0]], enforcement: 0.0 });
    }
    let basis = wavelet_basis(beta, n)?;
    let fns: Vec<StepFn> = basis.iter().map(|w| w.step_fn()).collect();
    let cols: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|m| {
            let lpsi = transfer_step_fn(&fns[m], b);
            (0..n).map(|k| fns[k].inner(&lpsi)).collect()
        })
        .collect();
    let mut rows = vec![vec![0.0; n]; n];
    let mut worst: f64 = 0.0;
    for m in 0..n {
        for k in 0..n {
            let v = cols[m][k];
            if k > m + 1 {
                worst = worst.max(v.abs());
                if v.abs() > 1e-9 {
                    return Err(Error::InvalidParam(format!(
                        "Hessenberg pattern violated at ({k},{m}): {v:e}"
                    )));
                }
                // structural zero
            } else {
                rows[k][m] = v;
            }
        }
    }
    Ok(HessMatrix { beta: b, dim: n, rows, enforcement: worst })
}

/// Eigenvalues of the principal submatrix.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<Complex64>,
    pub dim: usize,
}

impl Spectrum {
    /// Fraction of non-FP eigenvalues within `tol` of the circle 1/beta.
    pub fn circle_fraction(&self, beta: f64, tol: f64) -> f64 {
        let mut total = 0usize;
        let mut near = 0usize;
        for ev in &self.eigenvalues {
            if (ev - Complex64::new(1.0, 0.0)).norm() < 1e-6 {
                continue; // the FP eigenvalue
            }
            total += 1;
            if (ev.norm() - 1.0 / beta).abs() < tol {
                near += 1;
            }
        }
        if total == 0 {
            return 1.0;
        }
        near as f64 / total as f64
    }
}

pub fn spectrum(matrix: &HessMatrix) -> Result<Spectrum> {
    let ev = linalg::eigenvalues(&matrix.rows)?;
    Ok(Spectrum { eigenvalues: ev, dim: matrix.dim })
}

/// Ruelle-Frobenius-Perron eigenvector: right eigenvector for the
/// eigenvalue nearest 1, scaled so sum_m v_m psi_m has unit integral
/// (only psi_0 carries mass, so the scale is 1/(v_0 sqrt(beta/2))).
pub fn fp_vector(matrix: &HessMatrix) -> Result<Vec<f64>> {
    if matrix.dim == 1 {
        // degenerate beta = 2 case: the measure is the top-hat itself
        return Ok(vec![1.0 / (matrix.beta / 2.0).sqrt()]);
    }
    let (_, v) = linalg::inverse_iteration(&matrix.rows, 1.0, 40)?;
    let scale = v[0] * (matrix.beta / 2.0).sqrt();
    if scale.abs() < 1e-300 {
        return Err(Error::NoConvergence { sweeps: 40, delta: f64::NAN });
    }
    Ok(v.iter().map(|x| x / scale).collect())
}

/// Assemble sum_m v_m psi_m as a step function.
pub fn reconstruct_measure(basis: &[Wavelet], v: &[f64]) -> StepFn {
    let mut acc = StepFn::constant(0.0);
    for (w, &c) in basis.iter().zip(v) {
        acc = acc.add(&w.step_fn().scale(c));
    }
    acc
}

/// Zeros of the truncated generating function sum_{m<=N} v_m z^m.
///
/// The coefficients decay geometrically, which leaves the raw companion
/// matrix badly scaled; the polynomial is balanced by z = s w with
/// s = (|v_0|/|v_n|)^(1/n) before the eigenvalue solve.
pub fn gen_function_zeros(v: &[f64], n: usize) -> Vec<Complex64> {
    let coeffs: Vec<f64> = v.iter().take(n + 1).copied().collect();
    if coeffs.len() < 2 {
        return vec![];
    }
    let n_eff = coeffs.len() - 1;
    let head = coeffs[0].abs().max(1e-300);
    let tail = coeffs[n_eff].abs().max(1e-300);
    let s = (head / tail).powf(1.0 / n_eff as f64);
    let balanced: Vec<f64> =
        coeffs.iter().enumerate().map(|(m, c)| c * s.powi(m as i32)).collect();
    linalg::poly_roots(&balanced).into_iter().map(|w| w * s).collect()
}

/// Exact moment integral x^(n-1) against wavelet p:
/// (C_p/n) [ (m_p^n - m_l^n)/(m_p - m_l) - (m_u^n - m_p^n)/(m_u - m_p) ].
pub fn wavelet_moment(w: &Wavelet, n: u32) -> f64 {
    let nn = n as i32;
    if w.index == 0 {
        // flat top-hat: integral x^(n-1) / sqrt(beta/2) over [0, beta/2]
        return w.center.powi(nn) / (n as f64) / w.center.sqrt();
    }
    let (ml, mp, mu) = (w.lower, w.center, w.upper);
    (w.norm_c / n as f64)
        * ((mp.powi(nn) - ml.powi(nn)) / (mp - ml) - (mu.powi(nn) - mp.powi(nn)) / (mu - mp))
}

/// Convenience form building the basis up to index p.
pub fn wavelet_moments(beta: Beta, p: usize, n: u32) -> Result<f64> {
    let basis = wavelet_basis(beta, p + 1)?;
    Ok(wavelet_moment(&basis[p], n))
}

/// L2 error of projecting f onto the first n wavelets:
/// sqrt(|f|^2 - sum <f, psi_k>^2).
pub fn identity_resolution_check(beta: Beta, n: usize, f: &StepFn) -> Result<f64> {
    let basis = wavelet_basis(beta, n)?;
    let norm2 = f.inner(f);
    let mut acc = 0.0;
    for w in &basis {
        let c = f.inner(&w.step_fn());
        acc += c * c;
    }
    Ok((norm2 - acc).max(0.0).sqrt())
}

/// CSV export: one row per matrix row, full %.17g precision.
pub fn matrix_to_csv(m: &HessMatrix) -> String {
    let mut out = String::new();
    for row in &m.rows {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:.17e}")).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Binary export: u32 LE rows, u32 LE cols, then row-major f64 LE.
pub fn matrix_to_binary(m: &HessMatrix) -> Vec<u8> {
    let mut out = Vec::with_capacity(8 + m.dim * m.dim * 8);
    out.extend_from_slice(&(m.dim as u32).to_le_bytes());
    out.extend_from_slice(&(m.dim as u32).to_le_bytes());
    for row in &m.rows {
        for v in row {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    out
}

/// Read the binary layout back (for round-trip checks and external users).
pub fn matrix_from_binary(bytes: &[u8]) -> Result<(usize, usize, Vec<f64>)> {
    if bytes.len() < 8 {
        return Err(Error::InvalidParam("binary matrix too short".into()));
    }
    let rows = u32::from_le_bytes(bytes[0..4].try_into().unwrap()) as usize;
    let cols = u32::from_le_bytes(bytes[4..8].try_into().unwrap()) as usize;
    let need = 8 + rows * cols * 8;
    if bytes.len() != need {
        return Err(Error::InvalidParam(format!("expected {need} bytes, got {}", bytes.len())));
    }
    let vals = bytes[8..]
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok((rows, cols, vals))
}
