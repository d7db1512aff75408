//! SplitMix64, fixed for bit-exact reproducibility across implementations.

#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform draw in `[0, n)` by rejection of the incomplete top block.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0);
        let zone = u64::MAX - u64::MAX % n;
        loop {
            let z = self.next_u64();
            if z < zone {
                return z % n;
            }
        }
    }

    /// Index `i` with probability `numerators[i] / sum(numerators)`.
    pub fn weighted(&mut self, cumulative: &[u64]) -> usize {
        let total = *cumulative.last().expect("nonempty weights");
        let r = self.below(total);
        cumulative.partition_point(|&c| c <= r)
    }
}
