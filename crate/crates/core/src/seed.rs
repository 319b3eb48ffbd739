//! Deterministic random number generators for sampling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const SEED_VAR: &str = "WEILFORGE_SEED";
pub const DEFAULT_SEED: u64 = 0x5eed_0fa1;

/// Seed from `WEILFORGE_SEED`, or the fixed default.
pub fn base_seed() -> u64 {
    std::env::var(SEED_VAR)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

/// Generator for trial `index` of a batch; independent of evaluation order.
pub fn trial_rng(index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(base_seed());
    rng.set_stream(index);
    rng
}
