//! Deterministic seed derivation.
//!
//! Every randomized operation in the crate is driven by a [`Seed`]. Parallel
//! work derives one independent subseed per task up front, so results do not
//! depend on thread count or scheduling order.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Master seed for a randomized operation.
///
/// The same seed yields bit-identical results for every seeded operation,
/// independent of the number of worker threads.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Seed(pub u64);

// SplitMix64 finalizer; stable across platforms and rustc versions.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl Seed {
    pub fn new(master: u64) -> Self {
        Seed(master)
    }

    /// Derive the subseed for an independent named stream.
    ///
    /// Pure function; distinct `(label, index)` pairs map to distinct streams.
    pub fn derive(self, label: &str, index: u64) -> Seed {
        let mut h = mix(self.0 ^ 0x5bd1_e995_9d1b_54a5);
        for &b in label.as_bytes() {
            h = mix(h ^ u64::from(b));
        }
        // Separator between label and index so ("ab", 0) != ("a", b-ish) collisions
        // cannot come from byte concatenation.
        h = mix(h ^ 0xff51_afd7_ed55_8ccd);
        Seed(mix(h ^ index))
    }

    /// RNG for this seed's stream.
    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }
}

/// Free-function form of [`Seed::derive`].
pub fn derive_subseed(seed: Seed, stream_label: &str, index: u64) -> Seed {
    seed.derive(stream_label, index)
}
