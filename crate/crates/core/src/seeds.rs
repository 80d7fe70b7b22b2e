//! Seed derivation for all randomized routines.
//!
//! Every random draw in the library flows from a caller-supplied base seed
//! through [`derive_seed`], which mixes the base with a routine label and an
//! index. The generator everywhere is ChaCha8, whose output stream is fixed by
//! its 256-bit key on every platform, so identical (config, seed) pairs give
//! bit-identical results.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

fn fnv1a(label: &str) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in label.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

/// Derives an independent sub-seed for the routine `label`, stream `index`.
pub fn derive_seed(base: u64, label: &str, index: u64) -> u64 {
    splitmix64(base ^ fnv1a(label) ^ splitmix64(index))
}

/// ChaCha8 generator keyed from a 64-bit seed.
pub fn rng_from(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
