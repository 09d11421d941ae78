//! Bit-string models of multiplication on Cantor space.
//!
//! Multiplication decomposes into stages: column sums S (convolution of
//! digits), carry propagation C, remainder extraction A. The propagation
//! recursion d_n = s_n + floor(d_{n+1}/2) runs backwards from infinity; a
//! finite guard window makes it exact, since d_n <= 2n+1 needs only
//! 1 + log2(2n+1) bits and can perturb at most that many positions below
//! it. Dropping C altogether (XOR multiplication) kills every bifurcation
//! structure of the beta shift; that is the whole point of the exercise.

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::rng::Substream;
use crate::symbolic::BitSeq;

/// A bit string packed most-significant-first into 64-bit words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitStr {
    words: Vec<u64>,
    len: usize,
}

impl BitStr {
    pub fn zeros(len: usize) -> BitStr {
        BitStr { words: vec![0; len.div_ceil(64)], len }
    }

    pub fn from_bits(bits: &[u8]) -> BitStr {
        let mut s = BitStr::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b != 0 {
                s.set(i, 1);
            }
        }
        s
    }

    pub fn from_bitseq(b: &BitSeq) -> BitStr {
        BitStr::from_bits(b.bits())
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> u8 {
        debug_assert!(i < self.len);
        ((self.words[i / 64] >> (63 - (i % 64))) & 1) as u8
    }

    #[inline]
    pub fn set(&mut self, i: usize, b: u8) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (63 - (i % 64));
        if b != 0 {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn bits(&self) -> Vec<u8> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    /// Value of the prefix as a dyadic rational 0.b_0 b_1 ...
    pub fn value(&self) -> f64 {
        let mut acc = 0.0;
        for i in (0..self.len.min(64)).rev() {
            acc = (acc + self.get(i) as f64) / 2.0;
        }
        acc
    }

    /// Left shift by one (drop the most significant bit).
    pub fn shifted(&self) -> BitStr {
        let mut out = BitStr::zeros(self.len.saturating_sub(1));
        for i in 1..self.len {
            out.set(i - 1, self.get(i));
        }
        out
    }

    /// Pad with zeros on the right up to `len`.
    pub fn zero_extended(&self, len: usize) -> BitStr {
        let mut out = BitStr::zeros(len.max(self.len));
        for i in 0..self.len {
            out.set(i, self.get(i));
        }
        out
    }

    /// XOR of equal-length prefixes.
    pub fn xor(&self, other: &BitStr) -> BitStr {
        let len = self.len.min(other.len);
        let mut out = BitStr::zeros(len);
        for i in 0..len {
            out.set(i, self.get(i) ^ other.get(i));
        }
        out
    }

    /// Random bit string from a substream.
    pub fn random(rng: &mut Substream, len: usize) -> BitStr {
        let mut s = BitStr::zeros(len);
        for w in &mut s.words {
            *w = rng.next_u64();
        }
        // clear slack bits beyond len
        let slack = s.words.len() * 64 - len;
        if slack > 0 {
            let last = s.words.len() - 1;
            s.words[last] &= !0u64 << slack;
        }
        s
    }

    /// Parse "0.101101" or "101101"; also "0xABC..." as packed hex
    /// (most significant nibble first, bit length 4 per digit).
    pub fn parse(text: &str) -> Result<BitStr> {
        if let Some(hex) = text.strip_prefix("0x") {
            let mut bits = Vec::with_capacity(hex.len() * 4);
            for ch in hex.chars() {
                let v = ch
                    .to_digit(16)
                    .ok_or_else(|| Error::InvalidParam(format!("bad hex digit {ch:?}")))?;
                for k in (0..4).rev() {
                    bits.push(((v >> k) & 1) as u8);
                }
            }
            return Ok(BitStr::from_bits(&bits));
        }
        let body = text.strip_prefix("0.").unwrap_or(text);
        let seq = BitSeq::parse(body)?;
        Ok(BitStr::from_bitseq(&seq))
    }

    /// Binary text form "0.101101...".
    pub fn to_binary_string(&self) -> String {
        let mut out = String::with_capacity(self.len + 2);
        out.push_str("0.");
        for i in 0..self.len {
            out.push(char::from(b'0' + self.get(i)));
        }
        out
    }

    /// Packed hex form (bit length padded to a nibble with zeros).
    pub fn to_hex_string(&self) -> String {
        let mut out = String::from("0x");
        let nibbles = self.len.div_ceil(4);
        for n in 0..nibbles {
            let mut v = 0u32;
            for k in 0..4 {
                let i = n * 4 + k;
                v = (v << 1) | if i < self.len { self.get(i) as u32 } else { 0 };
            }
            out.push(char::from_digit(v, 16).unwrap());
        }
        out
    }
}

/// Column sums s_0 = 0, s_{n+1} = sum_k b_k c_{n-k} over the available
/// prefix positions.
pub fn column_sums(k: &BitStr, x: &BitStr, count: usize) -> Vec<u64> {
    let mut s = vec![0u64; count];
    for n in 1..count {
        let mut acc = 0u64;
        for j in 0..n.min(x.len()) {
            let ci = n - 1 - j;
            if ci < k.len() && x.get(j) == 1 && k.get(ci) == 1 {
                acc += 1;
            }
        }
        s[n] = acc;
    }
    s
}

/// Guard bits needed so the first `out_bits` bits of the remainder are
/// exact: find w with w - (2 + log2(2(out_bits + w) + 1)) >= 0.
pub fn guard_window(out_bits: usize) -> usize {
    let mut w = 4usize;
    loop {
        let n = out_bits + w;
        let c = 1 + (64 - (2 * n as u64 + 1).leading_zeros()) as usize;
        if w >= c + 1 {
            return w;
        }
        w += 1;
    }
}

/// Carry propagation d_n = s_n + floor(d_{n+1}/2), seeded with `seed` at
/// the top index; returns the remainder bits a_n = d_n mod 2.
fn propagate(s: &[u64], seed: u64) -> Vec<u8> {
    let mut d = seed;
    let mut a = vec![0u8; s.len()];
    for n in (0..s.len()).rev() {
        d = s[n] + d / 2;
        a[n] = (d % 2) as u8;
    }
    a
}

/// Shift-and-add product: the first `out_bits` bits of K*x, exact thanks
/// to the guard window. Inputs must supply out_bits + window bits.
pub fn shift_add_mul(k: &BitStr, x: &BitStr, out_bits: usize) -> Result<BitStr> {
    let w = guard_window(out_bits);
    let need = out_bits + w;
    let got = k.len().min(x.len());
    if got < need {
        return Err(Error::InsufficientPrefix { needed: need, got });
    }
    let s = column_sums(k, x, need);
    // arbitrary-seed strategy: the guard window guarantees the first
    // out_bits remainder bits are independent of the seed
    let a = propagate(&s, 2 * need as u64 + 1);
    Ok(BitStr::from_bits(&a[..out_bits]))
}

/// Find-a-zero completion strategy: grow the window until two opposite
/// seeds agree on the requested prefix (the scan has then passed a spot
/// where no carry propagates).
pub fn shift_add_mul_scan(k: &BitStr, x: &BitStr, out_bits: usize) -> Result<BitStr> {
    let mut w = 4usize;
    loop {
        let need = out_bits + w;
        let got = k.len().min(x.len());
        if got < need {
            return Err(Error::InsufficientPrefix { needed: need, got });
        }
        let s = column_sums(k, x, need);
        let lo = propagate(&s, 0);
        let hi = propagate(&s, 2 * need as u64 + 1);
        if lo[..out_bits] == hi[..out_bits] {
            return Ok(BitStr::from_bits(&lo[..out_bits]));
        }
        w += 4;
    }
}

/// XOR product: s_{n+1} = XOR_k b_k c_{n-k}, s_0 = 0.
pub fn xor_mul(k: &BitStr, x: &BitStr, out_bits: usize) -> BitStr {
    let count = out_bits;
    let mut out = BitStr::zeros(out_bits);
    for n in 1..count {
        let mut acc = 0u8;
        for j in 0..n.min(x.len()) {
            let ci = n - 1 - j;
            if ci < k.len() {
                acc ^= x.get(j) & k.get(ci);
            }
        }
        out.set(n, acc);
    }
    out
}

/// XOR analog of the beta shift: one step is a left shift followed by the
/// doubled XOR product with the bits of beta/2 (leading bit 1). Doubling
/// undoes the leading zero the XOR product always produces, so beta = 2
/// (multiplier string 1000...) reduces to the bare Bernoulli shift.
pub fn xor_beta_shift_step(beta_half: &BitStr, x: &BitStr, out_bits: usize) -> BitStr {
    let shifted = x.shifted();
    let prod = xor_mul(beta_half, &shifted, out_bits + 1);
    prod.shifted()
}

/// Iterate the XOR beta shift; returns the surviving prefix of each step.
pub fn xor_beta_shift(beta_half: &BitStr, x: &BitStr, steps: usize, out_bits: usize) -> Vec<BitStr> {
    let mut cur = x.clone();
    let mut out = Vec::with_capacity(steps);
    for _ in 0..steps {
        let keep = cur.len().saturating_sub(2).min(out_bits);
        cur = xor_beta_shift_step(beta_half, &cur, keep);
        out.push(cur.clone());
    }
    out
}

/// Elementwise carry-variant map applied between S and C.
#[derive(Clone)]
pub struct CarryVariant {
    pub name: String,
    pub f: fn(u64) -> u64,
}

impl CarryVariant {
    pub fn identity() -> CarryVariant {
        CarryVariant { name: "identity".into(), f: |n| n }
    }

    pub fn mod2() -> CarryVariant {
        CarryVariant { name: "mod2".into(), f: |n| n % 2 }
    }
}

/// Staged tape of the Cantor-space pipeline A . C . F . S.
#[derive(Debug, Clone)]
pub struct CarryTape {
    pub sums: Vec<u64>,
    pub mapped: Vec<u64>,
    pub propagated: Vec<u64>,
    pub remainder: Vec<u8>,
}

/// Full pipeline with every stage exposed. The identity variant is
/// shift-and-add; f(n) = n mod 2 is exactly the XOR product.
pub fn cantor_pipeline(
    k: &BitStr,
    x: &BitStr,
    variant: &CarryVariant,
    out_bits: usize,
) -> Result<CarryTape> {
    let w = guard_window(out_bits) + 4;
    let need = out_bits + w;
    let got = k.len().min(x.len());
    if got < need {
        return Err(Error::InsufficientPrefix { needed: need, got });
    }
    let sums = column_sums(k, x, need);
    let mapped: Vec<u64> = sums.iter().map(|&s| (variant.f)(s)).collect();
    // window for the mapped magnitudes
    let maxm = mapped.iter().copied().max().unwrap_or(0);
    let mut d = 2 * maxm + 1;
    let mut propagated = vec![0u64; need];
    for n in (0..need).rev() {
        d = mapped[n] + d / 2;
        propagated[n] = d;
    }
    let remainder: Vec<u8> = propagated.iter().map(|&dn| (dn % 2) as u8).collect();
    Ok(CarryTape {
        sums: sums[..out_bits].to_vec(),
        mapped: mapped[..out_bits].to_vec(),
        propagated: propagated[..out_bits].to_vec(),
        remainder: remainder[..out_bits].to_vec(),
    })
}

/// True iff x -> first n bits of (2K) (x) XOR-product is a bijection on
/// n-bit strings; checked exhaustively over all 2^n inputs.
pub fn xor_bijection_check(k: &BitStr, n: usize) -> bool {
    assert!(n <= 20 && k.len() >= n);
    if k.get(0) != 1 {
        return false;
    }
    // bits of the doubled product: w_m = XOR_{j<=m} x_j k_{m-j}
    let mut seen = vec![false; 1usize << n];
    for v in 0..(1u32 << n) {
        let mut out = 0u32;
        for m in 0..n {
            let mut acc = 0u8;
            for j in 0..=m {
                let xj = ((v >> (n - 1 - j)) & 1) as u8;
                acc ^= xj & k.get(m - j);
            }
            out = (out << 1) | acc as u32;
        }
        if seen[out as usize] {
            return false;
        }
        seen[out as usize] = true;
    }
    true
}

/// Big-integer product oracle: the first out_bits bits of (K as dyadic) *
/// (x as dyadic), exact.
pub fn bigint_product_bits(k: &BitStr, x: &BitStr, out_bits: usize) -> Vec<u8> {
    let to_big = |s: &BitStr| {
        let mut v = BigUint::ZERO;
        for i in 0..s.len() {
            v = (v << 1) + s.get(i);
        }
        v
    };
    let prod = to_big(k) * to_big(x);
    // product of 0.K (len a) and 0.x (len b) has 2^(a+b) denominator; the
    // bit at position i (0-based) of the product is bit (a+b-1-i) of prod
    let total = k.len() + x.len();
    (0..out_bits)
        .map(|i| {
            let pos = total - 1 - i;
            ((&prod >> pos) & BigUint::from(1u8) != BigUint::ZERO) as u8
        })
        .collect()
}
