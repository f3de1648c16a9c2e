//! Seed derivation for reproducible, independently seeded trials.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type TrialRng = ChaCha8Rng;

/// Stream ids used inside one trial.
pub mod stream {
    pub const TRUTH: u64 = 0;
    pub const SAMPLES: u64 = 1;
    pub const ALGORITHM: u64 = 2;
}

/// SplitMix64 finalizer.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Per-trial seed from `(master, trial)`.
pub fn derive_seed(master: u64, trial: u64) -> u64 {
    mix64(mix64(master) ^ trial.wrapping_mul(0xd1b5_4a32_d192_ed03))
}

/// Generator for one named stream of a trial seed.
pub fn stream_rng(seed: u64, stream: u64) -> TrialRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
