//! Deterministic derivation of per-purpose RNG seeds from one master seed.
//!
//! Every randomized routine in the crate draws from a stream named after its
//! purpose, so adding or reordering routines never shifts another routine's
//! randomness for a fixed master seed.

/// One step of the splitmix64 generator.
pub fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Seed for the stream `name` under the given master seed.
pub fn derive_seed(master: u64, name: &str) -> u64 {
    // FNV-1a over the stream name, then two mixing rounds.
    let mut h = 0xcbf29ce484222325u64;
    for byte in name.bytes() {
        h ^= byte as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    let mut s = master ^ h;
    let first = splitmix64(&mut s);
    first ^ splitmix64(&mut s).rotate_left(32)
}
