//! Portable deterministic primitives used for sampling and the mock scorer.
//!
//! Both generators are fixed by constant so that selections recorded here can
//! be reproduced bit-for-bit by implementations in other languages:
//!
//! * `SplitMix64` — Steele/Lea/Vigna's 64-bit mixer with increment
//!   `0x9E3779B97F4A7C15` and finalizer constants `0xBF58476D1CE4E5B9`,
//!   `0x94D049BB133111EB`.
//! * `fnv1a64` — FNV-1a with offset basis `0xcbf29ce484222325` and prime
//!   `0x100000001b3`.

/// SplitMix64 pseudo-random generator.
#[derive(Debug, Clone)]
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

    /// Uniform draw in `[0, bound)` by modulo reduction.
    ///
    /// The modulo bias is below `bound / 2^64`, negligible for corpus-sized
    /// bounds, and the reduction is trivial to reproduce elsewhere.
    pub fn below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        self.next_u64() % bound
    }
}

/// FNV-1a over an iterator of byte slices, hashed as one concatenated stream.
pub fn fnv1a64<'a>(parts: impl IntoIterator<Item = &'a [u8]>) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for part in parts {
        for &byte in part {
            hash ^= u64::from(byte);
            hash = hash.wrapping_mul(0x0000_0100_0000_01B3);
        }
    }
    hash
}

/// Map a 64-bit hash onto `[0, 1)` using its top 53 bits, exactly.
pub fn unit_f64(hash: u64) -> f64 {
    (hash >> 11) as f64 / (1u64 << 53) as f64
}
