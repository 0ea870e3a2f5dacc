//! A tiny deterministic generator (SplitMix64) for sampled axiom checks and
//! seeded property suites. Kept in-tree so that recorded seeds reproduce the
//! exact same samples on every platform and in every future build.

#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

/// Seed used by sampled checks when the caller does not provide one.
pub const DEFAULT_SEED: u64 = 0x5eed_0d1a_6a1e_b4a5;

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform value in `0..bound` (bound must be nonzero).
    pub fn below(&mut self, bound: usize) -> usize {
        (self.next_u64() % bound as u64) as usize
    }

    /// Small signed integer in `-range..=range`, handy for random exact
    /// coefficients.
    #[cfg_attr(not(test), allow(dead_code))]
    pub fn small_int(&mut self, range: i64) -> i64 {
        let span = 2 * range + 1;
        (self.next_u64() % span as u64) as i64 - range
    }
}
