//! Seed derivation.
//!
//! Every random stream is a ChaCha8 generator seeded from a 64-bit value.
//! Child seeds are `derive(parent, tag, indices)`: the tag bytes and each
//! index are folded into the parent with the SplitMix64 finalizer, so any
//! trace can be reproduced in isolation from its printed seeds.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn derive(parent: u64, tag: &str, indices: &[u64]) -> u64 {
    let mut h = mix(parent);
    for b in tag.bytes() {
        h = mix(h ^ u64::from(b));
    }
    for &i in indices {
        h = mix(h ^ i);
    }
    h
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
