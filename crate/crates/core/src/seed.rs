//! Deterministic child-seed derivation.
//!
//! Every random choice in the pipeline draws from a ChaCha stream seeded by
//! `child_seed(parent, stage, index)`. The derivation is a fixed FNV-1a fold
//! of the stage name and index into the parent seed, finished with a
//! SplitMix64 mix, so runs reproduce bit-for-bit on any platform and children
//! of different stages or indices are decorrelated.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

fn fnv1a(mut acc: u64, bytes: &[u8]) -> u64 {
    for &b in bytes {
        acc ^= u64::from(b);
        acc = acc.wrapping_mul(FNV_PRIME);
    }
    acc
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derive a child seed from a parent seed, a stage name and an index.
pub fn child_seed(parent: u64, stage: &str, index: u64) -> u64 {
    let mut acc = fnv1a(FNV_OFFSET, &parent.to_le_bytes());
    acc = fnv1a(acc, stage.as_bytes());
    acc = fnv1a(acc, &index.to_le_bytes());
    splitmix64(acc)
}

/// RNG for one derived stream.
pub fn rng_for(parent: u64, stage: &str, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(child_seed(parent, stage, index))
}
