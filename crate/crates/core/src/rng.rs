//! Counter-based pseudo-random numbers.
//!
//! Sampling jobs (histograms, recurrence grids) hand out one independent
//! substream per sample index, so results are bitwise identical no matter
//! how the work is scheduled across threads.

/// SplitMix64 step.
#[inline]
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// One substream of the counter generator.
#[derive(Debug, Clone)]
pub struct Substream {
    state: u64,
}

impl Substream {
    /// Substream `index` of the generator seeded with `seed`.
    pub fn new(seed: u64, index: u64) -> Self {
        let mut s = seed ^ 0x6a09_e667_f3bc_c909;
        let a = splitmix64(&mut s);
        let mut state = a ^ index.wrapping_mul(0x9e37_79b9_7f4a_7c15);
        // burn a few outputs so consecutive indices decorrelate
        for _ in 0..2 {
            splitmix64(&mut state);
        }
        Self { state }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        splitmix64(&mut self.state)
    }

    /// Uniform in [0, 1).
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform bit.
    #[inline]
    pub fn next_bit(&mut self) -> u8 {
        (self.next_u64() >> 63) as u8
    }
}
