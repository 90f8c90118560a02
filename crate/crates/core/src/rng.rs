//! The one pseudo-random stream used by every generator.
//!
//! xoshiro256++ seeded from a 64-bit seed through SplitMix64 (the reference
//! `seed_from_u64` expansion). Draws are defined on raw `u64` outputs so any
//! implementation of the same generator reproduces them:
//!
//! * `unit()` is `(next_u64() >> 11) · 2⁻⁵³`, uniform on `[0, 1)`;
//! * `below(n)` is the high 64 bits of `next_u64() · n`.

use rand_xoshiro::rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

pub const GENERATOR_NAME: &str = "xoshiro256++/splitmix64-seeded";

#[derive(Clone, Debug)]
pub struct Stream(Xoshiro256PlusPlus);

impl Stream {
    pub fn new(seed: u64) -> Self {
        Stream(Xoshiro256PlusPlus::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform-ish integer in `0..n` (multiply-shift). `n` must be positive.
    pub fn below(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        ((self.next_u64() as u128 * n as u128) >> 64) as usize
    }

    pub fn coin(&mut self) -> bool {
        self.next_u64() >> 63 == 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stream_is_reproducible() {
        let mut a = Stream::new(42);
        let mut b = Stream::new(42);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
        assert_ne!(Stream::new(1).next_u64(), Stream::new(2).next_u64());
    }

    #[test]
    fn draws_stay_in_range() {
        let mut s = Stream::new(7);
        for n in 1..50 {
            assert!(s.below(n) < n);
            let u = s.unit();
            assert!((0.0..1.0).contains(&u));
        }
    }
}
