//! Seeded generator streams.
//!
//! Every sampler in the workspace takes an explicit `&mut TdmRng`. Independent
//! sub-streams are derived with [`split`], so a whole experiment is reproducible
//! from one `u64` seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type TdmRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> TdmRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives an independent child stream, advancing the parent.
pub fn split(rng: &mut TdmRng) -> TdmRng {
    let mut seed = [0u8; 32];
    rng.fill(&mut seed);
    ChaCha8Rng::from_seed(seed)
}
