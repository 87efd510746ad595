//! Deterministic per-node random streams.
//!
//! Every node in the exploration tree draws from its own stream, derived by
//! hashing the master seed together with the node's path. Work scheduled on
//! any number of worker threads therefore produces bit-identical candidates:
//! no node ever observes another node's draws.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finalizer; stable scrambling on all platforms.
fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives the stream seed for the node at `path` (root = empty path).
///
/// The path length is absorbed first so `[0]` and `[0, 0]` land in different
/// streams even though one prefixes the other.
pub fn stream_seed(master_seed: u64, path: &[u32]) -> u64 {
    let mut h = splitmix64(master_seed);
    h = splitmix64(h ^ path.len() as u64);
    for &child in path {
        h = splitmix64(h ^ u64::from(child));
    }
    h
}

/// The random stream for the node at `path`.
pub fn stream(master_seed: u64, path: &[u32]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(stream_seed(master_seed, path))
}
