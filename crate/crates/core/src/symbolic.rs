//! Beta-expansions as bit strings: reconstruction, the compressor/expander
//! pair, the run-length bound, shifts with holes, and the skew Takagi/Haar
//! self-similar curves.

use crate::error::{Error, Result};
use crate::maps::{Beta, UnitPoint};

/// A finite sequence of bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitSeq(pub Vec<u8>);

impl BitSeq {
    pub fn new(bits: Vec<u8>) -> BitSeq {
        debug_assert!(bits.iter().all(|&b| b <= 1));
        BitSeq(bits)
    }

    /// Parse "1011..." (optionally with a leading "0.").
    pub fn parse(s: &str) -> Result<BitSeq> {
        let s = s.strip_prefix("0.").unwrap_or(s);
        let mut bits = Vec::with_capacity(s.len());
        for ch in s.chars() {
            match ch {
                '0' => bits.push(0),
                '1' => bits.push(1),
                _ => return Err(Error::InvalidParam(format!("bad bit char {ch:?}"))),
            }
        }
        Ok(BitSeq(bits))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    /// Longest run of consecutive ones.
    pub fn max_run_of_ones(&self) -> usize {
        let mut best = 0;
        let mut run = 0;
        for &b in &self.0 {
            if b == 1 {
                run += 1;
                best = best.max(run);
            } else {
                run = 0;
            }
        }
        best
    }
}

impl std::fmt::Display for BitSeq {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "0.")?;
        for &b in &self.0 {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// Reassemble bits at base beta: x = (1/2) sum k_n beta^-n.
pub fn reconstruct(beta: Beta, bits: &BitSeq) -> f64 {
    let b = beta.get();
    let mut acc = 0.0;
    for &bit in bits.0.iter().rev() {
        acc = acc / b + bit as f64;
    }
    acc / 2.0
}

/// Compressor cpr_beta(y): digits of y under T_beta, reassembled at base 2.
pub fn compressor(beta: Beta, y: UnitPoint, prefix: usize) -> f64 {
    let ds = crate::maps::digits(beta, y, prefix);
    let two = Beta::new(2.0).unwrap();
    reconstruct(two, &BitSeq(ds))
}

/// Expander pdr_beta(y): binary digits of y, reassembled at base beta.
pub fn expander(beta: Beta, y: UnitPoint, prefix: usize) -> f64 {
    let two = Beta::new(2.0).unwrap();
    let ds = crate::maps::digits(two, y, prefix);
    reconstruct(beta, &BitSeq(ds))
}

/// Longest run of ones that can appear in any beta-expansion:
/// n = 1 + floor(-log(2-beta)/log(beta)). Unbounded at beta = 2.
pub fn max_ones_run(beta: Beta) -> Result<usize> {
    let b = beta.get();
    if b >= 2.0 {
        return Err(Error::Unbounded);
    }
    // relative epsilon so exact-threshold betas (e.g. the golden ratio,
    // where the ratio is exactly an integer) land on the inclusive side
    let ratio = -(2.0 - b).ln() / b.ln();
    Ok(1 + (ratio + 1e-9).floor().max(0.0) as usize)
}

/// An open interval (a, c) punched out of the unit interval, with all its
/// preimages under the Bernoulli shift down to the given dyadic depth.
#[derive(Debug, Clone, Copy)]
pub struct HoleSpec {
    pub a: f64,
    pub c: f64,
    pub depth: usize,
}

impl HoleSpec {
    pub fn new(a: f64, c: f64, depth: usize) -> Result<HoleSpec> {
        if !(0.0..=1.0).contains(&a) || !(0.0..=1.0).contains(&c) || a >= c {
            return Err(Error::InvalidParam(format!("bad hole ({a}, {c})")));
        }
        Ok(HoleSpec { a, c, depth })
    }
}

/// Membership in the hole set H(a,c) = union over n <= depth, k < 2^n of
/// ((a+k)/2^n, (c+k)/2^n). The complement (restricted to [0,1]) is I(a,c).
pub fn hole_member(spec: &HoleSpec, x: UnitPoint) -> bool {
    let x = x.get();
    for n in 0..=spec.depth {
        let scale = (1u64 << n) as f64;
        // x in ((a+k)/2^n, (c+k)/2^n) for the single candidate k
        let k = (x * scale - spec.a).floor();
        if k < 0.0 || k >= scale {
            // also try the adjacent k when x sits at a cell edge
        }
        for kk in [k - 1.0, k, k + 1.0] {
            if kk >= 0.0 && kk < scale {
                let lo = (spec.a + kk) / scale;
                let hi = (spec.c + kk) / scale;
                if x > lo && x < hi {
                    return true;
                }
            }
        }
    }
    false
}

/// Parameters for the skew Takagi curve and its Haar-derivative curve.
#[derive(Debug, Clone, Copy)]
pub struct CurveParams {
    pub beta: Beta,
    pub w: f64,
    pub order: usize,
}

impl CurveParams {
    pub fn new(beta: Beta, w: f64, order: usize) -> Result<CurveParams> {
        if w.abs() >= 1.0 {
            return Err(Error::InvalidParam(format!("|w| = {} must be < 1", w.abs())));
        }
        Ok(CurveParams { beta, w, order })
    }
}

/// Skew triangle of height 1 with apex at 1/beta.
fn skew_triangle(beta: f64, x: f64) -> f64 {
    if x < 1.0 / beta {
        beta * x
    } else {
        beta * (1.0 - x) / (beta - 1.0)
    }
}

/// Skew tent normalized to map [0,1] onto itself. The branch split is
/// strict at 1/beta so it pairs with the mother wavelet's convention.
fn skew_tent(beta: f64, x: f64) -> f64 {
    if x < 1.0 / beta {
        (beta * x).min(1.0)
    } else {
        ((beta * x - 1.0) / (beta - 1.0)).clamp(0.0, 1.0)
    }
}

/// Skew Takagi (blancmange) curve built from triangles with apex at 1/beta,
/// truncated at `order` terms. Satisfies the left recursion
/// tak(x/beta) = x + w tak(x) and its right-hand mirror.
pub fn takagi(params: &CurveParams, x: UnitPoint) -> f64 {
    let b = params.beta.get();
    let mut acc = 0.0;
    let mut wk = 1.0;
    let mut y = x.get();
    for _ in 0..params.order {
        acc += wk * skew_triangle(b, y);
        y = skew_tent(b, y);
        wk *= params.w;
    }
    acc
}

/// Mother wavelet of the skew Haar curve.
pub fn haar_mother(beta: f64, x: f64) -> f64 {
    if x < 1.0 / beta {
        beta
    } else {
        -beta / (beta - 1.0)
    }
}

/// Skew Haar fractal wavelet: the piecewise-constant curve satisfying
/// har(x/beta) = beta + w har(x) and its right-hand mirror.
pub fn haar(params: &CurveParams, x: UnitPoint) -> f64 {
    let b = params.beta.get();
    let mut acc = 0.0;
    let mut wk = 1.0;
    let mut y = x.get();
    for _ in 0..params.order {
        acc += wk * haar_mother(b, y);
        y = skew_tent(b, y);
        wk *= params.w;
    }
    acc
}
