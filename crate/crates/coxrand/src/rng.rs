//! Counter-based random values.
//!
//! Every random decision in the crate is a pure function of (seed,
//! coordinates): a pair's label depends only on (seed, n, u, v) and a
//! trial's seed only on (seed, n, trial). Nothing is drawn from a
//! stateful stream, so results cannot depend on iteration order or on
//! how work is split across threads.

/// splitmix64 finalizer; full-avalanche 64 -> 64 bit mixer.
#[inline]
pub(crate) fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Domain tags keep the per-pair and per-trial streams disjoint even
/// when their coordinate tuples collide numerically.
const TAG_PAIR: u64 = 0x7061_6972_0000_0001;
const TAG_TRIAL: u64 = 0x7472_6961_0000_0002;

/// Uniform 64-bit value for the unordered pair {u, v} of a graph on n
/// vertices.
#[inline]
pub(crate) fn pair_value(seed: u64, n: usize, u: usize, v: usize) -> u64 {
    debug_assert!(u != v);
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    let mut h = mix(seed ^ TAG_PAIR);
    h = mix(h ^ (n as u64));
    h = mix(h ^ ((a as u64) << 32 | (b as u64)));
    h
}

/// Derived seed for trial `t` of an experiment cell at size `n`.
pub fn trial_seed(seed: u64, n: usize, t: u64) -> u64 {
    let mut h = mix(seed ^ TAG_TRIAL);
    h = mix(h ^ (n as u64));
    h = mix(h ^ t);
    h
}
