//! The fixed pseudorandom generator used everywhere randomness is needed.
//!
//! SplitMix64: from state `s`, each draw performs
//!
//! ```text
//! s += 0x9e3779b97f4a7c15
//! z  = s
//! z  = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9
//! z  = (z ^ (z >> 27)) * 0x94d049bb133111eb
//! out = z ^ (z >> 31)
//! ```
//!
//! with all arithmetic mod 2^64. Any implementation of this update formula
//! reproduces identical streams from identical seeds, so generated words,
//! complexes and harness output are portable across languages.

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform draw from `0..bound` by rejection, so there is no modulo
    /// bias and the stream stays reproducible.
    pub fn next_below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "bound must be positive");
        let zone = u64::MAX - (u64::MAX % bound);
        loop {
            let v = self.next_u64();
            if v < zone {
                return v % bound;
            }
        }
    }

    pub fn next_bool(&mut self) -> bool {
        self.next_u64() & 1 == 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_stream() {
        let mut a = SplitMix64::new(42);
        let mut b = SplitMix64::new(42);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn known_first_output_for_seed_zero() {
        // Frozen so cross-language implementations can self-check.
        let mut r = SplitMix64::new(0);
        assert_eq!(r.next_u64(), 0xe220a8397b1dcdaf);
    }

    #[test]
    fn bounded_draws_are_in_range() {
        let mut r = SplitMix64::new(7);
        for _ in 0..1000 {
            assert!(r.next_below(12) < 12);
        }
    }
}
