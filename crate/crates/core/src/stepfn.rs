//! Piecewise-constant functions on [0, 1].
//!
//! Wavelets, invariant measures and transfer-operator images are all step
//! functions here, so products and integrals reduce to exact finite sums
//! over merged breakpoints. No quadrature anywhere on the main path.

use serde::Serialize;

/// A right-open piecewise-constant function on [0, 1].
///
/// `cuts` are the interior breakpoints, strictly increasing; `vals[i]` is
/// the value on `[cut[i-1], cut[i])` with the implicit endpoints 0 and 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepFn {
    cuts: Vec<f64>,
    vals: Vec<f64>,
}

impl StepFn {
    pub fn new(cuts: Vec<f64>, vals: Vec<f64>) -> Self {
        assert_eq!(vals.len(), cuts.len() + 1, "one value per interval");
        debug_assert!(cuts.windows(2).all(|w| w[0] < w[1]), "cuts must increase");
        debug_assert!(cuts.iter().all(|&c| (0.0..=1.0).contains(&c)));
        StepFn { cuts, vals }
    }

    pub fn constant(v: f64) -> Self {
        StepFn { cuts: vec![], vals: vec![v] }
    }

    /// Indicator of [a, b).
    pub fn indicator(a: f64, b: f64) -> Self {
        assert!(0.0 <= a && a < b && b <= 1.0);
        let mut cuts = vec![];
        let mut vals = vec![];
        if a > 0.0 {
            cuts.push(a);
            vals.push(0.0);
        }
        vals.push(1.0);
        if b < 1.0 {
            cuts.push(b);
            vals.push(0.0);
        }
        StepFn { cuts, vals }
    }

    pub fn cuts(&self) -> &[f64] {
        &self.cuts
    }

    pub fn values(&self) -> &[f64] {
        &self.vals
    }

    /// Value at x (right-open convention; x = 1 takes the last piece).
    pub fn eval(&self, x: f64) -> f64 {
        let i = self.cuts.partition_point(|&c| c <= x);
        self.vals[i]
    }

    /// Pointwise combination on the merged breakpoint grid.
    pub fn zip_with(&self, other: &StepFn, f: impl Fn(f64, f64) -> f64) -> StepFn {
        let mut cuts = Vec::with_capacity(self.cuts.len() + other.cuts.len());
        let (mut i, mut j) = (0, 0);
        while i < self.cuts.len() || j < other.cuts.len() {
            let a = self.cuts.get(i).copied().unwrap_or(f64::INFINITY);
            let b = other.cuts.get(j).copied().unwrap_or(f64::INFINITY);
            let c = a.min(b);
            if a == c {
                i += 1;
            }
            if b == c {
                j += 1;
            }
            cuts.push(c);
        }
        let mut vals = Vec::with_capacity(cuts.len() + 1);
        let (mut i, mut j) = (0, 0);
        for k in 0..=cuts.len() {
            vals.push(f(self.vals[i], other.vals[j]));
            if k < cuts.len() {
                if i < self.cuts.len() && self.cuts[i] == cuts[k] {
                    i += 1;
                }
                if j < other.cuts.len() && other.cuts[j] == cuts[k] {
                    j += 1;
                }
            }
        }
        StepFn { cuts, vals }
    }

    pub fn add(&self, other: &StepFn) -> StepFn {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn scale(&self, s: f64) -> StepFn {
        StepFn { cuts: self.cuts.clone(), vals: self.vals.iter().map(|v| v * s).collect() }
    }

    /// Exact integral over [0, 1].
    pub fn integral(&self) -> f64 {
        let mut acc = 0.0;
        let mut left = 0.0;
        for (k, &v) in self.vals.iter().enumerate() {
            let right = self.cuts.get(k).copied().unwrap_or(1.0);
            acc += v * (right - left);
            left = right;
        }
        acc
    }

    /// Exact inner product ∫ f·g.
    pub fn inner(&self, other: &StepFn) -> f64 {
        self.zip_with(other, |a, b| a * b).integral()
    }

    /// Exact L1 distance ∫ |f − g|.
    pub fn l1_distance(&self, other: &StepFn) -> f64 {
        self.zip_with(other, |a, b| (a - b).abs()).integral()
    }

    /// Exact L2 norm.
    pub fn l2_norm(&self) -> f64 {
        self.inner(self).sqrt()
    }

    /// Drop interior cuts whose adjacent values differ by less than `tol`.
    pub fn simplify(&self, tol: f64) -> StepFn {
        let mut cuts = vec![];
        let mut vals = vec![self.vals[0]];
        for (k, &c) in self.cuts.iter().enumerate() {
            let v = self.vals[k + 1];
            if (v - *vals.last().unwrap()).abs() > tol {
                cuts.push(c);
                vals.push(v);
            }
        }
        StepFn { cuts, vals }
    }

    /// ∫ x^(n−1) f(x) dx, exact per piece.
    pub fn power_moment(&self, n: u32) -> f64 {
        let n = n as i32;
        let mut acc = 0.0;
        let mut left: f64 = 0.0;
        for (k, &v) in self.vals.iter().enumerate() {
            let right = self.cuts.get(k).copied().unwrap_or(1.0);
            acc += v * (right.powi(n) - left.powi(n)) / n as f64;
            left = right;
        }
        acc
    }
}
