//! Portable seeded randomness.
//!
//! The generator is PCG XSL-RR 128/64 (`rand_pcg::Pcg64`), seeded from a
//! 64-bit value through `rand_core`'s PCG32-based `seed_from_u64`
//! expansion. Integer ranges use rejection sampling on `next_u64`: with
//! `span = hi - lo + 1`, draws below `2^64 mod span` are discarded and the
//! result is `lo + x mod span`. Derived seeds are `seed XOR splitmix64(k)`.

use rand_core::{Rng, SeedableRng};
use rand_pcg::Pcg64;

pub struct SeededRng {
    inner: Pcg64,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        SeededRng {
            inner: Pcg64::seed_from_u64(seed),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform integer in `[lo, hi]`.
    pub fn uniform_i64(&mut self, lo: i64, hi: i64) -> i64 {
        assert!(lo <= hi, "empty range [{lo}, {hi}]");
        let span = (hi as i128 - lo as i128 + 1) as u128;
        if span > u64::MAX as u128 {
            return self.next_u64() as i64;
        }
        let span = span as u64;
        let reject_below = span.wrapping_neg() % span;
        loop {
            let x = self.next_u64();
            if x >= reject_below {
                return lo + (x % span) as i64;
            }
        }
    }

    /// Uniform index in `[0, len)`.
    pub fn index(&mut self, len: usize) -> usize {
        assert!(len > 0);
        self.uniform_i64(0, len as i64 - 1) as usize
    }
}

pub fn splitmix64(k: u64) -> u64 {
    let mut z = k.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn derive_seed(seed: u64, k: u64) -> u64 {
    seed ^ splitmix64(k)
}
