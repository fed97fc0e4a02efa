//! Bit-exact storage and scanning of bit sequences.
//!
//! [`BitString`] is the currency every codec in this crate trades in. Bits
//! are packed MSB-first: stream bit 0 lives in bit 7 of byte 0, so the byte
//! view of `"110"` is `0xC0` with five padding zeros. Padding bits of the
//! final partial byte are always zero; anything that must not decode padding
//! records the exact payload bit length alongside the bytes.
//!
//! ```
//! use mdcode::bits::BitString;
//!
//! let s: BitString = "1100 0110".parse().unwrap(); // spaces are ignored
//! assert_eq!(s.len(), 8);
//! assert_eq!(s.as_bytes(), &[0xC6]);
//! assert_eq!(s.to_string(), "11000110");
//! ```

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BitsError {
    #[error("invalid character {0:?} in bit string (expected '0', '1' or ' ')")]
    InvalidCharacter(char),
    #[error("bit length {len} does not fit in {bytes} bytes")]
    LengthMismatch { len: usize, bytes: usize },
    #[error("padding bits after the payload must be zero")]
    DirtyPadding,
}

/// A finite sequence of bits, packed MSB-first into bytes.
///
/// Unused low-order bits of the final byte are kept at zero, so equality and
/// hashing can work on the packed representation directly.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitString {
    bytes: Vec<u8>,
    len: usize,
}

impl BitString {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(bits: usize) -> Self {
        Self {
            bytes: Vec::with_capacity(bits.div_ceil(8)),
            len: 0,
        }
    }

    /// Number of bits stored.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// The bit at `index`; panics when out of range.
    #[inline]
    pub fn bit(&self, index: usize) -> bool {
        assert!(
            index < self.len,
            "bit index {index} out of range {}",
            self.len
        );
        self.bytes[index / 8] & (0x80 >> (index % 8)) != 0
    }

    #[inline]
    pub fn get(&self, index: usize) -> Option<bool> {
        (index < self.len).then(|| self.bit(index))
    }

    #[inline]
    pub fn push(&mut self, bit: bool) {
        if self.len.is_multiple_of(8) {
            self.bytes.push(0);
        }
        if bit {
            *self.bytes.last_mut().unwrap() |= 0x80 >> (self.len % 8);
        }
        self.len += 1;
    }

    /// Appends `count` copies of `bit`.
    pub fn push_run(&mut self, bit: bool, count: usize) {
        for _ in 0..count {
            self.push(bit);
        }
    }

    /// Appends all bits of `other`, preserving order.
    pub fn extend_from(&mut self, other: &BitString) {
        if self.len.is_multiple_of(8) {
            // Byte-aligned fast path: splice the packed representation.
            self.bytes.extend_from_slice(&other.bytes);
            self.len += other.len;
        } else {
            for bit in other.iter() {
                self.push(bit);
            }
        }
    }

    /// The packed MSB-first byte view; the final partial byte is zero-padded.
    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.bytes
    }

    /// Interprets every bit of `bytes` as payload (`len = 8 * bytes.len()`).
    pub fn from_bytes(bytes: &[u8]) -> Self {
        Self {
            bytes: bytes.to_vec(),
            len: bytes.len() * 8,
        }
    }

    /// Reconstructs a bit string from packed bytes plus its exact bit length.
    pub fn from_bytes_with_len(bytes: Vec<u8>, len: usize) -> Result<Self, BitsError> {
        if bytes.len() != len.div_ceil(8) {
            return Err(BitsError::LengthMismatch {
                len,
                bytes: bytes.len(),
            });
        }
        if !len.is_multiple_of(8) {
            let mask = 0xFFu8 >> (len % 8);
            if bytes.last().copied().unwrap_or(0) & mask != 0 {
                return Err(BitsError::DirtyPadding);
            }
        }
        Ok(Self { bytes, len })
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(|i| self.bit(i))
    }

    /// Shortens to `len` bits, zeroing the freed padding.
    pub fn truncate(&mut self, len: usize) {
        if len >= self.len {
            return;
        }
        self.bytes.truncate(len.div_ceil(8));
        if !len.is_multiple_of(8) {
            *self.bytes.last_mut().unwrap() &= 0xFF << (8 - len % 8);
        }
        self.len = len;
    }

    /// The sub-range `[start, end)` as a new bit string.
    pub fn slice(&self, start: usize, end: usize) -> BitString {
        assert!(start <= end && end <= self.len);
        let mut out = BitString::with_capacity(end - start);
        for i in start..end {
            out.push(self.bit(i));
        }
        out
    }

    /// Maximal runs of equal bits, in order: `(bit, start, length)`.
    pub fn runs(&self) -> Vec<(bool, usize, usize)> {
        let mut out = Vec::new();
        let mut cursor = BitCursor::new(self);
        let mut start = 0;
        while let Some((bit, len)) = cursor.read_run() {
            out.push((bit, start, len));
            start += len;
        }
        out
    }

    /// Maximal runs of ones: every such run is isolated in the sense that it
    /// is bounded by zeros or by the word boundaries.
    pub fn isolated_one_runs(&self) -> Vec<Run> {
        self.runs()
            .into_iter()
            .filter(|&(bit, _, _)| bit)
            .map(|(_, start, len)| Run { start, len })
            .collect()
    }
}

/// A run of ones: `start` is the index of its first bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Run {
    pub start: usize,
    pub len: usize,
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for bit in self.iter() {
            f.write_str(if bit { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

impl FromStr for BitString {
    type Err = BitsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut out = BitString::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => out.push(false),
                '1' => out.push(true),
                ' ' => {}
                other => return Err(BitsError::InvalidCharacter(other)),
            }
        }
        Ok(out)
    }
}

impl FromIterator<bool> for BitString {
    fn from_iter<T: IntoIterator<Item = bool>>(iter: T) -> Self {
        let mut out = BitString::new();
        for bit in iter {
            out.push(bit);
        }
        out
    }
}

/// A read position over a [`BitString`]. Reads past the end signal `None`
/// rather than yielding phantom zeros.
#[derive(Clone)]
pub struct BitCursor<'a> {
    bits: &'a BitString,
    pos: usize,
}

impl<'a> BitCursor<'a> {
    pub fn new(bits: &'a BitString) -> Self {
        Self { bits, pos: 0 }
    }

    pub fn position(&self) -> usize {
        self.pos
    }

    pub fn remaining(&self) -> usize {
        self.bits.len() - self.pos
    }

    pub fn at_end(&self) -> bool {
        self.pos == self.bits.len()
    }

    pub fn read_bit(&mut self) -> Option<bool> {
        let bit = self.bits.get(self.pos)?;
        self.pos += 1;
        Some(bit)
    }

    /// Reads the next maximal run: `(bit value, run length)`.
    pub fn read_run(&mut self) -> Option<(bool, usize)> {
        let bit = self.bits.get(self.pos)?;
        let mut len = 1;
        while self.bits.get(self.pos + len) == Some(bit) {
            len += 1;
        }
        self.pos += len;
        Some((bit, len))
    }
}
