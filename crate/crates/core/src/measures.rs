//! Invariant measures of the beta shift, three independent ways, plus the
//! rotated Renyi-Parry series, the holomorphic disk function D(beta; zeta)
//! whose zeros are transfer-operator eigenvalues, and the iterated-operator
//! tree function.
//!
//! The three routes to the invariant density are: orbit histograms
//! (stochastic), the Gel'fond-Parry series over the orbit of 1 (analytic),
//! and fixed-point iteration of the transfer recurrence on a grid (Ulam
//! style). They must agree; the acceptance suite checks this pairwise.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::maps::{beta_shift_step, Beta, UnitPoint};
use crate::rng::Substream;
use crate::stepfn::StepFn;
use crate::symbolic::BitSeq;

/// Averaged, normalized orbit histogram.
#[derive(Debug, Clone)]
pub struct Histogram {
    pub bins: usize,
    pub counts: Vec<u64>,
    pub samples: usize,
    pub iters: usize,
}

impl Histogram {
    /// Normalized density values (integrates to 1 over [0,1]).
    pub fn density(&self) -> Vec<f64> {
        let total: u64 = self.counts.iter().sum();
        let w = 1.0 / self.bins as f64;
        self.counts.iter().map(|&c| c as f64 / total as f64 / w).collect()
    }

    /// Density as a StepFn on the bin grid.
    pub fn step_fn(&self) -> StepFn {
        let d = self.density();
        let cuts: Vec<f64> = (1..self.bins).map(|i| i as f64 / self.bins as f64).collect();
        StepFn::new(cuts, d)
    }
}

/// Histogram of beta-shift orbits from uniformly random starts, averaged
/// over `samples` independent substreams. Bitwise deterministic for a given
/// seed, independent of the rayon schedule.
pub fn density_histogram(
    beta: Beta,
    bins: usize,
    samples: usize,
    iters: usize,
    seed: u64,
) -> Histogram {
    assert!(bins >= 1 && samples >= 1 && iters >= 1);
    let b = beta.get();
    let counts = (0..samples)
        .into_par_iter()
        .map(|s| {
            let mut rng = Substream::new(seed, s as u64);
            let mut x = rng.next_f64();
            let mut local = vec![0u64; bins];
            for _ in 0..iters {
                x = beta_shift_step(b, x);
                let j = ((x * bins as f64) as usize).min(bins - 1);
                local[j] += 1;
            }
            local
        })
        .reduce(
            || vec![0u64; bins],
            |mut a, c| {
                for (x, y) in a.iter_mut().zip(c) {
                    *x += y;
                }
                a
            },
        );
    Histogram { bins, counts, samples, iters }
}

/// Midpoint orbit with absorbing trouble-spot handling: a point within
/// 1e-12 of 1/2 takes the strict-less branch exactly (to 0, where it
/// stays), so halting orbits halt cleanly instead of spraying float dust.
fn clamped_midpoints(b: f64, n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n);
    let mut m = b / 2.0;
    for _ in 0..n {
        out.push(m);
        m = if (m - 0.5).abs() < 1e-12 || m < 1e-12 {
            0.0
        } else {
            beta_shift_step(b, m)
        };
    }
    out
}

/// Gel'fond-Parry measure assembled from breakpoint positions `points[n]`
/// carrying weight beta^-(n+1); points below 1e-12 are absent (the orbit
/// is at the fixed point) and points at/above `hi` fold into the base.
fn parry_from_points(b: f64, points: &[f64], hi: f64) -> StepFn {
    let mut base = 1.0; // the n = 0 term covers the whole support
    let mut weights: Vec<(f64, f64)> = Vec::new();
    let mut w = 1.0;
    for &p in points {
        w /= b;
        if p < 1e-12 {
            continue;
        } else if p >= hi {
            base += w;
        } else {
            weights.push((p, w));
        }
    }
    let mut cuts: Vec<f64> = weights.iter().map(|&(p, _)| p).collect();
    cuts.sort_by(|a, c| a.partial_cmp(c).unwrap());
    cuts.dedup();
    let mut vals = Vec::with_capacity(cuts.len() + 1);
    for i in 0..=cuts.len() {
        let left = if i == 0 { -1.0 } else { cuts[i - 1] };
        // a weight with breakpoint p covers every cell left of p
        let v: f64 =
            base + weights.iter().filter(|(p, _)| *p > left).map(|(_, w)| w).sum::<f64>();
        vals.push(v);
    }
    StepFn::new(cuts, vals)
}

/// Gel'fond-Parry invariant measure in beta-transform coordinates:
/// nu(y) proportional to sum_n eps_n(y) beta^-n with eps_n(y) = 1 when
/// y < t^n(1), normalized to unit integral on [0,1].
pub fn parry_measure(beta: Beta, terms: usize) -> StepFn {
    let b = beta.get();
    // t^n(1) = (2/beta) m_n, taken from the shift orbit so both coordinate
    // systems share breakpoints
    let ms = clamped_midpoints(b, terms);
    let points: Vec<f64> = ms.iter().skip(1).map(|m| 2.0 * m / b).collect();
    let f = parry_from_points(b, &points, 1.0);
    let norm = f.integral();
    f.scale(1.0 / norm)
}

/// Invariant density in beta-shift coordinates: rho(x) = nu(2x/beta) on
/// [0, beta/2], zero above, unit integral. Its breakpoints sit exactly on
/// the midpoint orbit m_p = T^p(beta/2) as computed by `beta_shift_step`.
pub fn parry_measure_shift(beta: Beta, terms: usize) -> StepFn {
    let b = beta.get();
    let half = b / 2.0;
    let ms = clamped_midpoints(b, terms);
    let f = parry_from_points(b, &ms[1..], half);
    let mut cuts = f.cuts().to_vec();
    let mut vals = f.values().to_vec();
    if half < 1.0 {
        cuts.push(half);
        vals.push(0.0);
    }
    let f = StepFn::new(cuts, vals);
    let norm = f.integral();
    f.scale(1.0 / norm)
}

/// Fixed point of the transfer recurrence on a uniform grid of cells,
/// L1-normalized. Errors with NoConvergence when the sweep budget runs out.
pub fn fp_recurse(beta: Beta, grid: usize, max_sweeps: usize) -> Result<StepFn> {
    assert!(grid >= 2);
    let b = beta.get();
    let w = 1.0 / grid as f64;
    let cell_of = |x: f64| ((x / w) as usize).min(grid - 1);
    let mut dens = vec![1.0_f64; grid];
    let cap = b / 2.0;
    let mut last_delta = f64::INFINITY;
    for _ in 0..max_sweeps {
        let mut next = vec![0.0_f64; grid];
        for (j, nj) in next.iter_mut().enumerate() {
            let y = (j as f64 + 0.5) * w;
            if y > cap {
                continue;
            }
            let a = dens[cell_of(y / b)];
            let c = {
                let u = y / b + 0.5;
                if u <= 1.0 {
                    dens[cell_of(u)]
                } else {
                    0.0
                }
            };
            *nj = (a + c) / b;
        }
        // L1 normalize
        let mass: f64 = next.iter().sum::<f64>() * w;
        for v in &mut next {
            *v /= mass;
        }
        last_delta = dens
            .iter()
            .zip(&next)
            .map(|(a, c)| (a - c).abs())
            .fold(0.0_f64, f64::max);
        dens = next;
        if last_delta < 1e-12 {
            let cuts = (1..grid).map(|i| i as f64 * w).collect();
            return Ok(StepFn::new(cuts, dens));
        }
    }
    Err(Error::NoConvergence { sweeps: max_sweeps, delta: last_delta })
}

/// Midpoint orbit prefix m_0 = beta/2, m_p = T(m_{p-1}).
fn midpoints(b: f64, n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n);
    let mut m = b / 2.0;
    for _ in 0..n {
        out.push(m);
        m = beta_shift_step(b, m);
    }
    out
}

/// Rotated Renyi-Parry series sum_n d_n(x) (z/beta)^n with
/// d_n(x) = [x < T^n(beta/2)]. Convergent for |z| < beta.
pub fn rotated_parry(beta: Beta, z: Complex64, x: UnitPoint, terms: usize) -> Result<Complex64> {
    let b = beta.get();
    if z.norm() >= b {
        return Err(Error::Divergent(z.norm()));
    }
    let q = z / b;
    let xv = x.get();
    let mut acc = Complex64::new(0.0, 0.0);
    let mut qi = Complex64::new(1.0, 0.0);
    let mut m = b / 2.0;
    for _ in 0..terms {
        if xv < m {
            acc += qi;
        }
        qi *= q;
        m = beta_shift_step(b, m);
    }
    Ok(acc)
}

/// Holomorphic disk function D(beta; zeta) = -1 + zeta sum_n zeta^n d_n(1/2),
/// where d_n(1/2) = [1/2 < m_n] is the orbit encoding bit.
pub fn disk_function(beta: Beta, zeta: Complex64, terms: usize) -> Result<Complex64> {
    if zeta.norm() >= 1.0 {
        return Err(Error::Divergent(zeta.norm()));
    }
    Ok(disk_function_unchecked(beta, zeta, terms))
}

fn disk_function_unchecked(beta: Beta, zeta: Complex64, terms: usize) -> Complex64 {
    let b = beta.get();
    let mut acc = Complex64::new(0.0, 0.0);
    let mut zi = zeta;
    let mut m = b / 2.0;
    for _ in 0..terms {
        if 0.5 < m {
            acc += zi;
        }
        zi *= zeta;
        m = beta_shift_step(b, m);
    }
    acc - 1.0
}

/// A polished zero of D(beta; .) inside the unit disk.
#[derive(Debug, Clone, Copy)]
pub struct DiskZero {
    pub zeta: Complex64,
    pub residual: f64,
    /// Transfer-operator eigenvalue lambda = 1/(beta zeta).
    pub eigenvalue: Complex64,
}

/// Zeros of the truncated D(beta; .) inside |zeta| < 1 - margin: coarse
/// polar modulus scan followed by Newton polish; keeps zeros with
/// |D| < 1e-10 and deduplicates.
pub fn disk_zeros(beta: Beta, terms: usize, grid: usize) -> Vec<DiskZero> {
    disk_zeros_margin(beta, terms, grid, 0.02)
}

pub fn disk_zeros_margin(beta: Beta, terms: usize, grid: usize, margin: f64) -> Vec<DiskZero> {
    let b = beta.get();
    let rmax = 1.0 - margin;
    let d = |z: Complex64| disk_function_unchecked(beta, z, terms);
    let dprime = |z: Complex64| {
        // derivative of the truncated series
        let mut acc = Complex64::new(0.0, 0.0);
        let mut zi = Complex64::new(1.0, 0.0);
        let mut m = b / 2.0;
        for n in 0..terms {
            if 0.5 < m {
                acc += zi * (n as f64 + 1.0);
            }
            zi *= z;
            m = beta_shift_step(b, m);
        }
        acc
    };
    // coarse scan for local minima of |D| on a polar grid
    let nr = grid;
    let nt = grid;
    let mut vals = vec![vec![0.0_f64; nt]; nr];
    vals.par_iter_mut().enumerate().for_each(|(i, row)| {
        let r = rmax * (i as f64 + 0.5) / nr as f64;
        for (j, v) in row.iter_mut().enumerate() {
            let th = 2.0 * std::f64::consts::PI * j as f64 / nt as f64;
            *v = d(Complex64::from_polar(r, th)).norm();
        }
    });
    let mut seeds = Vec::new();
    for i in 0..nr {
        for j in 0..nt {
            let v = vals[i][j];
            let mut is_min = v < 0.3;
            for (di, dj) in [(0i64, 1i64), (0, -1), (1, 0), (-1, 0)] {
                let ii = i as i64 + di;
                let jj = (j as i64 + dj).rem_euclid(nt as i64) as usize;
                if ii < 0 || ii >= nr as i64 {
                    continue;
                }
                if vals[ii as usize][jj] < v {
                    is_min = false;
                }
            }
            if is_min {
                let r = rmax * (i as f64 + 0.5) / nr as f64;
                let th = 2.0 * std::f64::consts::PI * j as f64 / nt as f64;
                seeds.push(Complex64::from_polar(r, th));
            }
        }
    }
    // Newton polish and filter
    let mut zeros: Vec<DiskZero> = Vec::new();
    for seed in seeds {
        let mut z = seed;
        let mut ok = false;
        for _ in 0..200 {
            let f = d(z);
            if f.norm() < 1e-13 {
                ok = true;
                break;
            }
            let df = dprime(z);
            if df.norm() < 1e-300 {
                break;
            }
            let step = f / df;
            z -= step;
            if z.norm() > 1.0 {
                break;
            }
            if step.norm() < 1e-15 {
                ok = d(z).norm() < 1e-10;
                break;
            }
        }
        let res = d(z).norm();
        if (ok || res < 1e-10) && z.norm() < rmax {
            if !zeros.iter().any(|c| (c.zeta - z).norm() < 1e-7) {
                zeros.push(DiskZero {
                    zeta: z,
                    residual: res,
                    eigenvalue: (Complex64::new(b, 0.0) * z).inv(),
                });
            }
        }
    }
    zeros.sort_by(|a, c| a.zeta.norm().partial_cmp(&c.zeta.norm()).unwrap());
    zeros
}

/// Spread (max - min over probes in [0, beta/2)) of [L v](y) - v(y)/z for
/// the rotated series v. The paper's observed constancy makes this small.
pub fn constancy_check(beta: Beta, z: Complex64, probes: usize, terms: usize) -> Result<f64> {
    let b = beta.get();
    if z.norm() >= b {
        return Err(Error::Divergent(z.norm()));
    }
    let v = |x: f64| rotated_parry(beta, z, UnitPoint::new(x.min(1.0)).unwrap(), terms).unwrap();
    let mut spread: f64 = 0.0;
    let mut first: Option<Complex64> = None;
    for i in 0..probes {
        let y = (i as f64 + 0.31) / probes as f64 * (b / 2.0 - 1e-9);
        let lv = (v(y / b) + v(y / b + 0.5)) / b;
        let c = lv - v(y) / z;
        match first {
            None => first = Some(c),
            Some(f0) => spread = spread.max((c - f0).norm()),
        }
    }
    Ok(spread)
}

/// Closed form of the iterated branch composition:
/// (gamma_{b_0} ... gamma_{b_n})(y) = (1/2) sum_j b_j beta^-j + y beta^-(n+1).
pub fn gamma_compose(beta: Beta, bits: &BitSeq, y: f64) -> f64 {
    let b = beta.get();
    let mut acc = 0.0;
    for &bit in bits.bits().iter().rev() {
        acc = acc / b + bit as f64 / 2.0;
    }
    acc + y / b.powi(bits.len() as i32)
}

/// Tree function: 1 iff every gamma prefix (and y itself) stays at or below
/// beta/2.
pub fn tree_function(beta: Beta, bits: &BitSeq, y: f64) -> u8 {
    let b = beta.get();
    let cap = b / 2.0;
    if y > cap {
        return 0;
    }
    for n in 0..bits.len() {
        let prefix = BitSeq::new(bits.bits()[..=n].to_vec());
        if gamma_compose(beta, &prefix, y) > cap {
            return 0;
        }
    }
    1
}
