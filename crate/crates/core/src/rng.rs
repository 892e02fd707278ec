//! Seeded random streams.
//!
//! Every random decision in the crate flows through a [`SeededRng`] that the
//! caller passes in explicitly. The generator is xoshiro256++ (period
//! 2^256 - 1). Independent child streams are derived by hashing a base seed
//! with a list of integers, so results do not depend on the order in which
//! parallel workers happen to run.

use rand::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

/// Deterministic pseudo-random stream that remembers the seed it came from.
#[derive(Clone, Debug)]
pub struct SeededRng {
    seed: u64,
    inner: Xoshiro256PlusPlus,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            inner: Xoshiro256PlusPlus::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// A new stream keyed by this stream's seed and `index`. Does not advance
    /// `self`.
    pub fn child(&self, index: u64) -> SeededRng {
        SeededRng::new(mix_seed(self.seed, &[index]))
    }
}

impl RngCore for SeededRng {
    #[inline]
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    #[inline]
    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Hash a base seed together with `parts` into a new 64-bit seed.
pub fn mix_seed(base: u64, parts: &[u64]) -> u64 {
    parts
        .iter()
        .fold(splitmix64(base), |acc, &p| splitmix64(acc ^ splitmix64(p)))
}

/// Stable 64-bit hash of a string (FNV-1a), used to key seeds by experiment name.
pub fn hash_str(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
    })
}
