//! 128-bit fixed-point arithmetic, 96 fractional bits.
//!
//! Double precision runs out near 40 reliable bits when orbits are iterated
//! a hundred-plus steps; the identities checked in `orbits::midpoint_identity`
//! need more. Values live in [0, 4), which covers every quantity iterated
//! here (orbit points, beta, small sums).

/// Fixed-point value: `raw / 2^96`, in [0, 4).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Fix(pub u128);

pub const FRAC_BITS: u32 = 96;

impl Fix {
    pub const ZERO: Fix = Fix(0);
    pub const HALF: Fix = Fix(1u128 << (FRAC_BITS - 1));
    pub const ONE: Fix = Fix(1u128 << FRAC_BITS);

    pub fn from_f64(x: f64) -> Fix {
        debug_assert!((0.0..4.0).contains(&x));
        // split so the scaled value stays inside f64's exact-integer range
        let hi = x.floor();
        let lo = x - hi;
        let raw = (hi as u128) << FRAC_BITS;
        let frac = (lo * (1u64 << 48) as f64).floor();
        let rest = lo * (1u64 << 48) as f64 - frac;
        let raw_frac = ((frac as u128) << 48) + (rest * (1u64 << 48) as f64) as u128;
        Fix(raw + raw_frac)
    }

    pub fn to_f64(self) -> f64 {
        const SCALE_HI: f64 = 1.0 / (1u64 << 48) as f64;
        let hi = (self.0 >> 48) as u64 as f64;
        let lo = (self.0 & ((1u128 << 48) - 1)) as u64 as f64;
        hi * SCALE_HI + lo * SCALE_HI * SCALE_HI
    }

    /// Full 128x128 -> 256-bit product, then rescale by 2^-96.
    pub fn mul(self, other: Fix) -> Fix {
        let (a, b) = (self.0, other.0);
        let (a_hi, a_lo) = (a >> 64, a & u64::MAX as u128);
        let (b_hi, b_lo) = (b >> 64, b & u64::MAX as u128);
        let ll = a_lo * b_lo;
        let lh = a_lo * b_hi;
        let hl = a_hi * b_lo;
        let hh = a_hi * b_hi;
        // 256-bit result = hh<<128 + (lh+hl)<<64 + ll
        let mid = lh + hl; // fits: each < 2^128/2
        let carry = {
            let (sum, c) = ll.overflowing_add(mid << 64);
            (c as u128, sum)
        };
        let low = carry.1;
        let high = hh + (mid >> 64) + carry.0;
        // shift the 256-bit (high, low) right by FRAC_BITS
        Fix((low >> FRAC_BITS) | (high << (128 - FRAC_BITS)))
    }

    pub fn add(self, other: Fix) -> Fix {
        Fix(self.0 + other.0)
    }

    pub fn sub(self, other: Fix) -> Fix {
        Fix(self.0 - other.0)
    }

    /// Signed difference in f64, exact to ~2^-96.
    pub fn signed_diff(self, other: Fix) -> f64 {
        if self.0 >= other.0 {
            Fix(self.0 - other.0).to_f64()
        } else {
            -Fix(other.0 - self.0).to_f64()
        }
    }

    /// Fractional part (mod 1).
    pub fn frac(self) -> Fix {
        Fix(self.0 & (Fix::ONE.0 - 1))
    }

    pub fn double(self) -> Fix {
        Fix(self.0 << 1)
    }
}

/// One step of the beta shift in fixed point, strict-less rule at 1/2.
pub fn beta_shift_step(beta: Fix, x: Fix) -> Fix {
    if x < Fix::HALF {
        beta.mul(x)
    } else {
        beta.mul(x.sub(Fix::HALF))
    }
}

/// One step of the beta transform `x -> beta*x mod 1` in fixed point.
pub fn beta_transform_step(beta: Fix, x: Fix) -> Fix {
    beta.mul(x).frac()
}

/// First `n` beta-expansion digits of `x` in fixed point.
pub fn digits(beta: Fix, x: Fix, n: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(n);
    let mut y = x;
    for _ in 0..n {
        out.push(if y < Fix::HALF { 0 } else { 1 });
        y = beta_shift_step(beta, y);
    }
    out
}
