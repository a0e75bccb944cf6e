//! Deterministic random streams.
//!
//! Every random quantity in the crate is drawn from a stream identified by
//! `(root_seed, level, index)`. Streams never depend on scheduling, so a
//! bootstrap run reproduces bit-for-bit regardless of how many worker
//! threads execute it.

use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::{Deserialize, Serialize};

/// Generator handed out for every stream.
pub type StreamRng = Xoshiro256PlusPlus;

/// Well-known stream levels.
pub mod level {
    pub const OBSERVED: u32 = 0;
    pub const FIT: u32 = 1;
    pub const FIRST: u32 = 2;
    pub const REFIT: u32 = 3;
    pub const INNER: u32 = 4;
    pub const MU: u32 = 5;
    pub const THETA: u32 = 6;
    pub const TRUTH: u32 = 7;
    pub const KMEANS: u32 = 8;
    pub const LANCZOS: u32 = 9;
    pub const REPETITION: u32 = 10;
    pub const STATISTIC: u32 = 11;
}

const LEVEL_KEY: u64 = 0x6a09_e667_f3bc_c908;
const INDEX_KEY: u64 = 0xbb67_ae85_84ca_a73b;

/// SplitMix64 step. A bijection on `u64`.
#[inline]
pub(crate) fn mix64(z: u64) -> u64 {
    let mut z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Root of a family of independent, reproducible random streams.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeedSpec {
    pub root_seed: u64,
}

impl SeedSpec {
    pub fn new(root_seed: u64) -> Self {
        Self { root_seed }
    }

    fn words(&self, level: u32, index: u64) -> (u64, u64) {
        // Both words are bijective in their argument for a fixed root, so
        // distinct (level, index) pairs give distinct generator states.
        let w0 = mix64(self.root_seed ^ mix64(level as u64 ^ LEVEL_KEY));
        let w1 = mix64(index ^ mix64(self.root_seed ^ INDEX_KEY));
        (w0, w1)
    }

    /// The generator for `(level, index)`.
    pub fn stream(&self, level: u32, index: u64) -> StreamRng {
        let (w0, w1) = self.words(level, index);
        let w2 = mix64(w0 ^ w1.rotate_left(17));
        let w3 = mix64(w1.wrapping_add(w0.rotate_left(41)));
        let mut seed = [0u8; 32];
        for (chunk, word) in seed.chunks_exact_mut(8).zip([w0, w1, w2, w3]) {
            chunk.copy_from_slice(&word.to_le_bytes());
        }
        if seed.iter().all(|&b| b == 0) {
            seed[0] = 1;
        }
        Xoshiro256PlusPlus::from_seed(seed)
    }

    /// A derived root for a nested family of streams.
    pub fn child(&self, level: u32, index: u64) -> SeedSpec {
        let (w0, w1) = self.words(level, index);
        SeedSpec::new(mix64(w0 ^ mix64(w1 ^ 0x3c6e_f372_fe94_f82b)))
    }
}

impl From<u64> for SeedSpec {
    fn from(root_seed: u64) -> Self {
        Self::new(root_seed)
    }
}
