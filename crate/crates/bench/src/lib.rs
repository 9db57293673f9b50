//! Fixtures shared by the benchmarks.

use toepnull::{PrimeField, ToeplitzSpec};

/// Deterministic pseudorandom spec of order `n` (a splitmix64 stream, good
/// enough for benchmark inputs).
pub fn fixture_spec(n: usize, field: PrimeField, seed: u64) -> ToeplitzSpec {
    let mut state = seed;
    let q = u64::from(field.modulus());
    let mut next = move || {
        state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        ((z ^ (z >> 31)) % q) as u32
    };
    let a = (0..=n).map(|_| next()).collect();
    let b = (0..n).map(|_| next()).collect();
    ToeplitzSpec::new(field, a, b).expect("digits reduced mod q")
}
