//! Counter-based random streams.
//!
//! Every stochastic draw in a run is taken from a stream keyed by the run seed
//! plus a tuple of integer tags (trial, SNR index, purpose, slot, ...). Streams
//! never share state, so adding trials or reordering episodes cannot perturb
//! the numbers any other episode sees.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream purposes used as the first tag.
pub mod purpose {
    pub const SCENE: u64 = 0x5343_454e;
    pub const RADAR_NOISE: u64 = 0x5241_4441;
    pub const LINK_JITTER: u64 = 0x4a49_5454;
    pub const POLICY: u64 = 0x504f_4c49;
}

#[inline]
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derive a 64-bit key from a seed and a list of tags.
pub fn derive_key(seed: u64, tags: &[u64]) -> u64 {
    let mut state = seed;
    let mut key = splitmix64(&mut state);
    for &tag in tags {
        let mut t = tag;
        let mut s = key ^ splitmix64(&mut t);
        key = splitmix64(&mut s);
    }
    key
}

/// Independent ChaCha8 stream for `(seed, tags...)`.
pub fn stream(seed: u64, tags: &[u64]) -> ChaCha8Rng {
    let mut state = derive_key(seed, tags);
    let mut bytes = [0u8; 32];
    for chunk in bytes.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    ChaCha8Rng::from_seed(bytes)
}
