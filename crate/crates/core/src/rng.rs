//! Counter-style keyed randomness: every draw is a pure function of a
//! domain tag and a list of integer/byte keys.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

pub(crate) fn keyed_seed(tag: &str, keys: &[u64], bytes: &[u8]) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update((tag.len() as u64).to_le_bytes());
    h.update(tag.as_bytes());
    for k in keys {
        h.update(k.to_le_bytes());
    }
    h.update((bytes.len() as u64).to_le_bytes());
    h.update(bytes);
    h.finalize().into()
}

pub(crate) fn keyed_rng(tag: &str, keys: &[u64], bytes: &[u8]) -> ChaCha8Rng {
    ChaCha8Rng::from_seed(keyed_seed(tag, keys, bytes))
}

/// A 64-bit seed derived from a parent seed and a counter.
pub fn derive_seed(seed: u64, counter: u64) -> u64 {
    let s = keyed_seed("derive", &[seed, counter], &[]);
    u64::from_le_bytes(s[..8].try_into().unwrap())
}
