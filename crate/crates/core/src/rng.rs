//! Keyed random streams.
//!
//! Every stream is a ChaCha8 generator whose 256-bit key is derived from
//! `(seed root, path id, atom id, purpose)` with SplitMix64 finalizers, so a
//! path's randomness never depends on which worker ran it or in what order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Purpose tags separating independent streams of the same (path, atom).
pub mod purpose {
    pub const ARRIVALS: u64 = 1;
    pub const THINNING: u64 = 2;
    pub const CERTIFY: u64 = 3;
    pub const OPTIMIZER: u64 = 4;
    pub const CONTROLS: u64 = 5;
}

#[inline]
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Identifies one random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StreamKey {
    pub seed: u64,
    pub path: u64,
    pub atom: u64,
    pub purpose: u64,
}

impl StreamKey {
    pub fn new(seed: u64, path: u64, atom: u64, purpose: u64) -> Self {
        Self {
            seed,
            path,
            atom,
            purpose,
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut state = splitmix64(self.seed);
        let mut key = [0u8; 32];
        for (chunk, word) in key
            .chunks_exact_mut(8)
            .zip([self.path, self.atom, self.purpose, 0x6C6F_6768_6561_7400])
        {
            state = splitmix64(state ^ word);
            chunk.copy_from_slice(&state.to_le_bytes());
        }
        ChaCha8Rng::from_seed(key)
    }
}

/// Seed for path `path` of an ensemble rooted at `seed`.
pub fn derive_seed(seed: u64, path: u64) -> u64 {
    splitmix64(splitmix64(seed) ^ path.wrapping_mul(0xD1B5_4A32_D192_ED03))
}
