//! Packed bit vectors over GF(2) and the stream interleaving primitives.
//!
//! Bits are addressed by ascending index; bit `i` lives in word `i / 64` at
//! position `i % 64`. Byte serialization packs eight bits per byte with the
//! lowest index in the least-significant bit, which is the canonical layout
//! for every file format in this crate.

use std::fmt;

use crate::error::{Error, Result};

/// A fixed-length vector of bits with word-packed storage.
///
/// Unused high bits of the last word are always kept zero, so equality,
/// hashing, and weight can operate on whole words.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(64)
}

impl BitVec {
    /// The empty vector.
    pub fn new() -> Self {
        Self::default()
    }

    /// All-zero vector of the given length.
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range (len {})", self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range (len {})", self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    /// Appends one bit.
    pub fn push(&mut self, value: bool) {
        if self.len.is_multiple_of(64) {
            self.words.push(0);
        }
        self.len += 1;
        if value {
            let i = self.len - 1;
            self.words[i / 64] |= 1 << (i % 64);
        }
    }

    /// Truncates or zero-extends to `new_len`.
    pub fn resize(&mut self, new_len: usize) {
        self.words.resize(words_for(new_len), 0);
        self.len = new_len;
        self.mask_tail();
    }

    fn mask_tail(&mut self) {
        let used = self.len % 64;
        if used != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << used) - 1;
            }
        }
    }

    /// Number of set bits.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Hamming distance to another vector of the same length.
    pub fn hamming(&self, other: &BitVec) -> usize {
        assert_eq!(self.len, other.len, "hamming distance needs equal lengths");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    /// In-place XOR with a vector of the same length.
    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "xor needs equal lengths");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// XOR `other`, shifted up by `shift` bit positions, into this vector.
    ///
    /// Requires `other.len() + shift <= self.len()`.
    pub fn xor_shifted(&mut self, other: &BitVec, shift: usize) {
        assert!(
            other.len + shift <= self.len,
            "shifted xor overruns target ({} + {shift} > {})",
            other.len,
            self.len
        );
        let (wsh, bsh) = (shift / 64, shift % 64);
        for (i, &w) in other.words.iter().enumerate() {
            if w == 0 {
                continue;
            }
            self.words[i + wsh] ^= w << bsh;
            if bsh > 0 {
                let hi = w >> (64 - bsh);
                if hi != 0 {
                    self.words[i + wsh + 1] ^= hi;
                }
            }
        }
    }

    /// Flips every bit.
    pub fn complement(&mut self) {
        for w in &mut self.words {
            *w = !*w;
        }
        self.mask_tail();
    }

    /// Copies bits `start..end` into a new vector.
    pub fn slice(&self, start: usize, end: usize) -> BitVec {
        assert!(start <= end && end <= self.len, "slice out of range");
        let mut out = BitVec::zeros(end - start);
        for i in start..end {
            if self.get(i) {
                out.set(i - start, true);
            }
        }
        out
    }

    /// Iterates all bits in order.
    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Iterates the indices of set bits in ascending order.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let tz = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(wi * 64 + tz)
                }
            })
        })
    }

    /// Parses a string of `0`/`1` characters (index 0 first).
    ///
    /// Intended for fixtures and display round-trips; panics on other input.
    pub fn from_bit_str(s: &str) -> BitVec {
        let mut out = BitVec::zeros(s.len());
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => out.set(i, true),
                _ => panic!("bit string may only contain 0 and 1, found {ch:?}"),
            }
        }
        out
    }

    pub fn to_bit_string(&self) -> String {
        self.iter().map(|b| if b { '1' } else { '0' }).collect()
    }

    /// Packs into bytes, eight bits per byte, lowest index in the LSB.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = vec![0u8; self.len.div_ceil(8)];
        for (bi, byte) in out.iter_mut().enumerate() {
            *byte = ((self.words[bi / 8] >> (8 * (bi % 8))) & 0xFF) as u8;
        }
        out
    }

    /// Reconstructs a vector of `len` bits from its packed byte form.
    ///
    /// Bytes beyond `len` bits are ignored; padding bits are masked off.
    pub fn from_bytes(bytes: &[u8], len: usize) -> BitVec {
        let mut out = BitVec::zeros(len);
        for (bi, &byte) in bytes.iter().enumerate().take(len.div_ceil(8)) {
            out.words[bi / 8] |= (byte as u64) << (8 * (bi % 8));
        }
        out.mask_tail();
        out
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    pub(crate) fn words_mut(&mut self) -> &mut [u64] {
        &mut self.words
    }

    pub(crate) fn from_words(words: Vec<u64>, len: usize) -> BitVec {
        debug_assert_eq!(words.len(), words_for(len));
        let mut v = BitVec { len, words };
        v.mask_tail();
        v
    }
}

impl FromIterator<bool> for BitVec {
    fn from_iter<T: IntoIterator<Item = bool>>(iter: T) -> Self {
        let mut out = BitVec::new();
        for b in iter {
            out.push(b);
        }
        out
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bit_string())
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec({})", self.to_bit_string())
    }
}

/// Merges `n` equal-length streams by alternating their elements.
///
/// Position `t*n + j` of the output holds element `t` of stream `j`.
pub fn interleave(streams: &[BitVec]) -> Result<BitVec> {
    let n = streams.len();
    if n == 0 {
        return Err(Error::InvalidParams(
            "interleave needs at least one stream".into(),
        ));
    }
    let len = streams[0].len();
    if streams.iter().any(|s| s.len() != len) {
        return Err(Error::DimensionMismatch(
            "interleave needs equal-length streams".into(),
        ));
    }
    let mut out = BitVec::zeros(n * len);
    for (j, s) in streams.iter().enumerate() {
        for t in s.iter_ones() {
            out.set(t * n + j, true);
        }
    }
    Ok(out)
}

/// Extracts stream `i` (elements at positions `i, n+i, 2n+i, …`) from an
/// interleaved vector of `n` streams.
pub fn deinterleave(v: &BitVec, n: usize, i: usize) -> Result<BitVec> {
    if n == 0 || i >= n {
        return Err(Error::InvalidParams(format!(
            "stream index {i} out of range for {n} streams"
        )));
    }
    if !v.len().is_multiple_of(n) {
        return Err(Error::DimensionMismatch(format!(
            "length {} is not divisible by {n}",
            v.len()
        )));
    }
    let len = v.len() / n;
    let mut out = BitVec::zeros(len);
    for t in 0..len {
        if v.get(t * n + i) {
            out.set(t, true);
        }
    }
    Ok(out)
}
