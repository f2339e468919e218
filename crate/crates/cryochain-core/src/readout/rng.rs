//! Counter-based randomness for reproducible, shard-independent sampling.
//!
//! Philox 4x64 with 10 rounds: a keyed bijection from a 256-bit counter
//! block to four 64-bit words. Sample k is a pure function of (key, k), so
//! any partition of the index range across workers reproduces the
//! single-threaded stream exactly.

use core::f64::consts::PI;
use num_traits::Float;

const MULTIPLIER_0: u64 = 0xD2E7_470E_E14C_6C93;
const MULTIPLIER_1: u64 = 0xCA5A_8263_9512_1157;
const WEYL_0: u64 = 0x9E37_79B9_7F4A_7C15;
const WEYL_1: u64 = 0xBB67_AE85_84CA_A73B;
const ROUNDS: u32 = 10;

#[inline]
fn mulhilo(a: u64, b: u64) -> (u64, u64) {
    let wide = (a as u128) * (b as u128);
    ((wide >> 64) as u64, wide as u64)
}

/// Keyed Philox 4x64-10 block function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Philox4x64 {
    key: [u64; 2],
}

impl Philox4x64 {
    pub fn new(key: [u64; 2]) -> Self {
        Self { key }
    }

    /// Four pseudorandom words for one counter block.
    pub fn block(&self, counter: [u64; 4]) -> [u64; 4] {
        let mut c = counter;
        let mut k = self.key;
        for round in 0..ROUNDS {
            if round > 0 {
                k[0] = k[0].wrapping_add(WEYL_0);
                k[1] = k[1].wrapping_add(WEYL_1);
            }
            let (hi0, lo0) = mulhilo(MULTIPLIER_0, c[0]);
            let (hi1, lo1) = mulhilo(MULTIPLIER_1, c[2]);
            c = [hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0];
        }
        c
    }
}

/// Map a word to a uniform double in the open interval (0, 1).
///
/// The top 52 bits select a lattice point offset by half a step. Every
/// value `(k + 0.5) / 2^52` is exactly representable, so neither endpoint
/// is reachable and `ln(u)` stays finite.
#[inline]
pub fn u64_to_open_unit(x: u64) -> f64 {
    ((x >> 12) as f64 + 0.5) * (1.0 / 4503599627370496.0)
}

/// Two independent standard-normal draws from two words (Box-Muller).
pub fn normal_pair(w0: u64, w1: u64) -> (f64, f64) {
    let u1 = u64_to_open_unit(w0);
    let u2 = u64_to_open_unit(w1);
    let radius = Float::sqrt(-2.0 * Float::ln(u1));
    let theta = 2.0 * PI * u2;
    (radius * Float::cos(theta), radius * Float::sin(theta))
}
