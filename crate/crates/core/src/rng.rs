//! Counter-based random streams.
//!
//! Every random draw in the crate comes from a Philox4x32-10 block cipher
//! evaluated at an explicit `(key, counter)` pair. A stream is identified by a
//! 64-bit key plus three 32-bit identifier words; the fourth counter word
//! enumerates blocks within the stream. Two streams with different identifiers
//! never share a block, so work can be split across threads in any order and
//! still reproduce the same numbers.

use std::f64::consts::TAU;

use crate::vec2::Vec2;

const PHILOX_M0: u32 = 0xD251_1F53;
const PHILOX_M1: u32 = 0xCD9E_8D57;
const PHILOX_W0: u32 = 0x9E37_79B9;
const PHILOX_W1: u32 = 0xBB67_AE85;

/// One Philox4x32-10 block.
pub fn philox4x32(counter: [u32; 4], key: [u32; 2]) -> [u32; 4] {
    let mut c = counter;
    let mut k = key;
    for round in 0..10 {
        if round > 0 {
            k[0] = k[0].wrapping_add(PHILOX_W0);
            k[1] = k[1].wrapping_add(PHILOX_W1);
        }
        let p0 = u64::from(PHILOX_M0) * u64::from(c[0]);
        let p1 = u64::from(PHILOX_M1) * u64::from(c[2]);
        c = [
            ((p1 >> 32) as u32) ^ c[1] ^ k[0],
            p1 as u32,
            ((p0 >> 32) as u32) ^ c[3] ^ k[1],
            p0 as u32,
        ];
    }
    c
}

/// SplitMix64 finalizer, used to fold identifiers into keys.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Folds a sequence of words into one 64-bit key.
pub fn fold_key(words: &[u64]) -> u64 {
    words
        .iter()
        .fold(0x6A09_E667_F3BC_C909, |acc, &w| mix64(acc ^ mix64(w)))
}

/// FNV-1a over UTF-8 bytes; stable across platforms and releases.
pub fn hash_str(s: &str) -> u64 {
    let mut h: u64 = 0xCBF2_9CE4_8422_2325;
    for b in s.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01B3);
    }
    h
}

/// Stream purposes; keeps substreams for different jobs disjoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u32)]
pub enum StreamTag {
    Walk = 1,
    Generate = 2,
    Filter = 3,
    Probe = 4,
    Test = 5,
}

/// A counter-based random stream.
#[derive(Clone, Debug)]
pub struct RngStream {
    key: [u32; 2],
    ids: [u32; 3],
    block: u32,
    buf: [u32; 4],
    used: usize,
}

impl RngStream {
    pub fn new(key: u64, ids: [u32; 3]) -> Self {
        Self {
            key: [key as u32, (key >> 32) as u32],
            ids,
            block: 0,
            buf: [0; 4],
            used: 4,
        }
    }

    /// Stream for one random walk of one pixel of one case.
    #[inline]
    pub fn for_walk(case_key: u64, pixel: u32, walk: u32) -> Self {
        Self::new(case_key, [pixel, walk, StreamTag::Walk as u32])
    }

    /// Stream for an arbitrary tagged job, indexed by two words.
    pub fn tagged(key: u64, tag: StreamTag, a: u32, b: u32) -> Self {
        Self::new(key, [a, b, tag as u32])
    }

    /// Convenience stream from a plain seed, for tests and sampling utilities.
    pub fn from_seed(seed: u64) -> Self {
        Self::tagged(fold_key(&[seed]), StreamTag::Test, 0, 0)
    }

    /// Independent child stream; `label` selects which one.
    pub fn split(&self, label: u64) -> Self {
        let parent = u64::from(self.key[0]) | (u64::from(self.key[1]) << 32);
        let ids = self.ids.map(u64::from);
        let key = fold_key(&[parent, ids[0], ids[1], ids[2], label]);
        Self::new(key, self.ids)
    }

    #[inline]
    fn refill(&mut self) {
        let ctr = [self.block, self.ids[0], self.ids[1], self.ids[2]];
        self.buf = philox4x32(ctr, self.key);
        self.block = self.block.wrapping_add(1);
        self.used = 0;
    }

    #[inline]
    pub fn next_u32(&mut self) -> u32 {
        if self.used == 4 {
            self.refill();
        }
        let v = self.buf[self.used];
        self.used += 1;
        v
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        let lo = u64::from(self.next_u32());
        let hi = u64::from(self.next_u32());
        lo | (hi << 32)
    }

    /// Uniform on [0, 1) with 53 random bits.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / 9_007_199_254_740_992.0)
    }

    /// Uniform on (0, 1]; safe to pass to `ln`.
    #[inline]
    pub fn uniform_open0(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / 9_007_199_254_740_992.0)
    }

    #[inline]
    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Uniform integer in `lo..=hi`.
    pub fn int_inclusive(&mut self, lo: u32, hi: u32) -> u32 {
        debug_assert!(lo <= hi);
        let span = u64::from(hi - lo) + 1;
        lo + ((u64::from(self.next_u32()) * span) >> 32) as u32
    }

    /// Uniform index in `0..n`.
    pub fn index(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        ((self.uniform() * n as f64) as usize).min(n - 1)
    }

    #[inline]
    pub fn coin(&mut self) -> bool {
        self.next_u32() & 1 == 1
    }

    #[inline]
    pub fn angle(&mut self) -> f64 {
        TAU * self.uniform()
    }

    #[inline]
    pub fn unit_vector(&mut self) -> Vec2 {
        Vec2::from_polar(1.0, self.angle())
    }

    /// Standard normal by Box-Muller; consumes two uniforms.
    pub fn normal(&mut self) -> f64 {
        let r = (-2.0 * self.uniform_open0().ln()).sqrt();
        r * self.angle().cos()
    }

    /// Draws an index with probability proportional to `weights`.
    pub fn weighted_index(&mut self, weights: &[f64]) -> usize {
        let total: f64 = weights.iter().sum();
        let mut t = self.uniform() * total;
        for (i, &w) in weights.iter().enumerate() {
            if t < w {
                return i;
            }
            t -= w;
        }
        weights.len() - 1
    }
}
