//! Portable seeded randomness.
//!
//! Everything that must be reproducible from a seed (block shuffles, the
//! surprise topic pick, per-item batch seeds) draws from [`SplitMix64`]:
//!
//! ```text
//! state += 0x9E3779B97F4A7C15
//! z = (state ^ (state >> 30)) * 0xBF58476D1CE4E5B9
//! z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//! out = z ^ (z >> 31)
//! ```
//!
//! Bounded draws use Lemire's widening multiply with rejection, so results
//! are unbiased and identical on every platform.

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform integer in `0..bound`. `bound` must be non-zero.
    pub fn next_below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "next_below called with zero bound");
        let mut m = u128::from(self.next_u64()) * u128::from(bound);
        let mut low = m as u64;
        if low < bound {
            let threshold = bound.wrapping_neg() % bound;
            while low < threshold {
                m = u128::from(self.next_u64()) * u128::from(bound);
                low = m as u64;
            }
        }
        (m >> 64) as u64
    }

    pub fn next_index(&mut self, len: usize) -> usize {
        self.next_below(len as u64) as usize
    }
}

/// Derives an independent seed for item `index` of a batch.
pub fn derive_seed(base: u64, index: u64) -> u64 {
    let mut rng = SplitMix64::new(base ^ index.wrapping_mul(0xD1B5_4A32_D192_ED03));
    rng.next_u64()
}
