//! Seeding conventions.
//!
//! All randomness flows from a single 64-bit master seed. The generator is
//! ChaCha8 (`rand_chacha`), seeded with `seed_from_u64`. Independent streams
//! for parallel trials are derived statelessly:
//!
//! ```text
//! mix_seed(master, index) = splitmix64(master ^ splitmix64(index + 0x9E3779B97F4A7C15))
//! ```
//!
//! so the stream used by trial `i` depends only on `(master, i)` and never on
//! how trials are scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator used everywhere in the crate.
pub type LabRng = ChaCha8Rng;

/// The splitmix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives the sub-seed for stream `index` of `master`.
pub fn mix_seed(master: u64, index: u64) -> u64 {
    splitmix64(master ^ splitmix64(index.wrapping_add(0x9E37_79B9_7F4A_7C15)))
}

pub fn rng_from_seed(seed: u64) -> LabRng {
    LabRng::seed_from_u64(seed)
}

/// Generator for stream `index` of `master`.
pub fn sub_rng(master: u64, index: u64) -> LabRng {
    rng_from_seed(mix_seed(master, index))
}
