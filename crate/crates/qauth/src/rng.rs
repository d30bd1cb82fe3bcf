//! Seedable randomness for protocol runs and Monte Carlo estimation.
//!
//! Every protocol session and every Monte Carlo trial is driven by an
//! explicit 64-bit seed. Trials derive their own seeds from a master seed
//! with a splitmix64 step, so parallel and sequential execution of the
//! same estimate visit identical random streams.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The pseudo-random generator used throughout the crate.
pub type SimRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derive an independent child seed from a master seed and an index.
///
/// splitmix64 finalizer; bijective in the combined input, so distinct
/// (master, index) pairs never collide on the same stream prefix.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master
        .wrapping_add(index.wrapping_mul(0x9e37_79b9_7f4a_7c15))
        .wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
