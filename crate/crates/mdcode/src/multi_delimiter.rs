//! Multi-delimiter codes.
//!
//! A code `D_{m1,…,mt}` is parameterized by an ascending set of run lengths
//! `M = {m1 < … < mt}`. Its codewords are the short words `1^mi 0` plus every
//! word that does not start with any `1^mi 0`, ends with `0 1^mi 0` for some
//! `mi`, and contains no `0 1^mi 0` anywhere else. Concatenated codewords are
//! therefore self-delimiting: a word ends exactly where a run of `mi` ones
//! terminated by a zero ends.
//!
//! Integers map to codewords bijectively: drop the leading 1 of the binary
//! form, then swap every isolated run of `i` ones for a run of `φ(i)` ones,
//! where `φ` enumerates the positive integers outside `M`. That keeps
//! delimiters out of codeword interiors; a delimiter is appended when the
//! word does not already end in one.
//!
//! ```
//! use mdcode::multi_delimiter::{CodeSpec, encode_int, decode_int};
//!
//! let d2: CodeSpec = "D2".parse().unwrap();
//! let word = encode_int(&d2, 7);
//! assert_eq!(word.to_string(), "1110110");
//! assert_eq!(decode_int(&d2, &word).unwrap(), 7);
//! ```

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::automaton::{BitDfa, WaysTable};
use crate::bits::{BitCursor, BitString};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CodeError {
    #[error("delimiter set must be non-empty, positive and strictly ascending")]
    InvalidSpec,
    #[error("cannot parse {0:?} as a code spec (expected \"D2\" or \"D2,3,5\")")]
    UnparsableSpec(String),
    #[error("argument of the run-length bijection must be >= 1")]
    PhiOutOfRange,
    #[error("run length {0} is a delimiter length; the inverse bijection is undefined there")]
    PhiNotInDomain(u64),
    #[error("not a codeword of this code")]
    NotACodeword,
    #[error("decoded value does not fit in 64 bits")]
    ValueTooWide,
    #[error("group width parameter must satisfy 0 <= d < m1")]
    InvalidGroupWidth,
    #[error("cannot split into whole delta/run groups at bit {0}")]
    GroupParse(usize),
    #[error("{undecoded_bits} trailing bits after {} decoded values form no complete codeword", decoded.len())]
    Truncated {
        decoded: Vec<u64>,
        undecoded_bits: usize,
    },
}

/// The delimiter-parameter set `M = {m1 < … < mt}` of a code `D_{m1,…,mt}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CodeSpec {
    delims: Vec<u32>,
}

impl CodeSpec {
    /// Requires a non-empty, strictly ascending list of positive lengths.
    pub fn new(delims: Vec<u32>) -> Result<Self, CodeError> {
        if delims.is_empty() || delims[0] == 0 || delims.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CodeError::InvalidSpec);
        }
        Ok(Self { delims })
    }

    pub fn delimiters(&self) -> &[u32] {
        &self.delims
    }

    /// `m1`, the shortest delimiter run.
    pub fn min_run(&self) -> u32 {
        self.delims[0]
    }

    /// `mt`, the longest delimiter run.
    pub fn max_run(&self) -> u32 {
        *self.delims.last().unwrap()
    }

    /// `t`, the number of delimiters.
    pub fn delimiter_count(&self) -> usize {
        self.delims.len()
    }

    /// Is `len` one of the delimiter run lengths?
    pub fn is_delimiter_run(&self, len: usize) -> bool {
        len <= self.max_run() as usize && self.delims.binary_search(&(len as u32)).is_ok()
    }

    /// Is `len` a delimiter run other than `m1`? Such runs end informative
    /// delimiters that carry value bits through decoding.
    pub fn is_informative_run(&self, len: usize) -> bool {
        self.is_delimiter_run(len) && len != self.min_run() as usize
    }

    pub fn phi_map(&self) -> PhiMap<'_> {
        PhiMap { spec: self }
    }

    pub(crate) fn dfa(&self) -> MdDfa {
        MdDfa::new(self)
    }
}

impl fmt::Display for CodeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D")?;
        for (i, m) in self.delims.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CodeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CodeSpec({self})")
    }
}

impl FromStr for CodeSpec {
    type Err = CodeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let body = s
            .strip_prefix('D')
            .ok_or_else(|| CodeError::UnparsableSpec(s.to_string()))?;
        let delims = body
            .split(',')
            .map(|part| part.trim().parse::<u32>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| CodeError::UnparsableSpec(s.to_string()))?;
        Self::new(delims).map_err(|_| CodeError::UnparsableSpec(s.to_string()))
    }
}

/// The order-preserving bijection between the positive integers and the
/// positive integers outside `M`.
///
/// Interior runs of a codeword always have lengths in the image, so applying
/// the inverse during decoding is always defined.
#[derive(Clone, Copy)]
pub struct PhiMap<'a> {
    spec: &'a CodeSpec,
}

impl PhiMap<'_> {
    /// The `i`-th positive integer not in `M`.
    pub fn forward(&self, i: u64) -> Result<u64, CodeError> {
        if i < 1 {
            return Err(CodeError::PhiOutOfRange);
        }
        let mut j = i;
        for &m in &self.spec.delims {
            if u64::from(m) <= j {
                j += 1;
            }
        }
        Ok(j)
    }

    /// Inverse of [`PhiMap::forward`]; rejects arguments inside `M`.
    pub fn inverse(&self, j: u64) -> Result<u64, CodeError> {
        if j < 1 {
            return Err(CodeError::PhiOutOfRange);
        }
        if self.spec.is_delimiter_run(j as usize) {
            return Err(CodeError::PhiNotInDomain(j));
        }
        let skipped = self
            .spec
            .delims
            .iter()
            .take_while(|&&m| u64::from(m) < j)
            .count() as u64;
        Ok(j - skipped)
    }
}

/// Codeword membership by the literal three-clause definition.
pub fn is_codeword(spec: &CodeSpec, word: &BitString) -> bool {
    let runs = word.runs();
    let Some(&(last_bit, _, _)) = runs.last() else {
        return false;
    };
    if last_bit {
        return false; // every codeword ends with 0
    }
    let one_runs: Vec<(usize, usize)> = runs
        .iter()
        .filter(|&&(bit, _, _)| bit)
        .map(|&(_, start, len)| (start, len))
        .collect();
    let Some(&(final_start, final_len)) = one_runs.last() else {
        return false; // all-zero words carry no delimiter
    };
    if !spec.is_delimiter_run(final_len) || final_start + final_len + 1 != word.len() {
        // The final run must be a delimiter run ending right before the last zero.
        return false;
    }
    if final_start == 0 {
        // The short words 1^mi 0.
        return word.len() == final_len + 1;
    }
    // No other run may have a delimiter length: a leading one would violate
    // clause (i), an interior one would embed a delimiter (clause iii).
    one_runs[..one_runs.len() - 1]
        .iter()
        .all(|&(_, len)| !spec.is_delimiter_run(len))
}

/// Encodes a positive integer as a codeword.
pub fn encode_int(spec: &CodeSpec, value: u64) -> BitString {
    assert!(value >= 1, "integers to encode start at 1");
    let phi = spec.phi_map();
    let m1 = spec.min_run() as usize;

    // The bits of `value` below its leading 1.
    let top = 63 - value.leading_zeros() as usize;
    let mut residual = BitString::with_capacity(top + m1 + 2);
    for i in (0..top).rev() {
        residual.push(value & (1 << i) != 0);
    }

    let runs = residual.isolated_one_runs();
    if runs.is_empty() {
        // Power of two: the residual is all zeros; close with 1^m1 0.
        residual.push_run(true, m1);
        residual.push(false);
        return residual;
    }
    // Residual of the exact shape 0^r 1^mi 0 (i > 1) is already a codeword.
    if runs.len() == 1 {
        let run = runs[0];
        if spec.is_informative_run(run.len) && run.start + run.len + 1 == residual.len() {
            return residual;
        }
    }
    // Otherwise substitute every isolated run through the bijection, keeping
    // a suffix of the shape 0 1^mi 0 (i > 1) as an informative delimiter.
    let last = *runs.last().unwrap();
    let keep_suffix = spec.is_informative_run(last.len)
        && last.start >= 1
        && last.start + last.len + 1 == residual.len();

    let mut out = BitString::with_capacity(residual.len() + m1 + 2);
    let mut pos = 0;
    for run in &runs {
        out.push_run(false, run.start - pos);
        if keep_suffix && run.start == last.start {
            out.push_run(true, run.len);
        } else {
            out.push_run(true, phi.forward(run.len as u64).unwrap() as usize);
        }
        pos = run.start + run.len;
    }
    out.push_run(false, residual.len() - pos);

    if !keep_suffix {
        out.push(false);
        out.push_run(true, m1);
        out.push(false);
    }
    out
}

/// Decodes a codeword back to its integer. Inverse of [`encode_int`].
pub fn decode_int(spec: &CodeSpec, word: &BitString) -> Result<u64, CodeError> {
    if !is_codeword(spec, word) {
        return Err(CodeError::NotACodeword);
    }
    decode_word_range(spec, word, 0, word.len())
}

/// Decoding core over `word[start..end)`, which must already be a codeword.
fn decode_word_range(
    spec: &CodeSpec,
    word: &BitString,
    start: usize,
    end: usize,
) -> Result<u64, CodeError> {
    let phi = spec.phi_map();
    let m1 = spec.min_run() as usize;

    // Maximal one-runs of the range as (start, len).
    let mut runs: Vec<(usize, usize)> = Vec::new();
    let mut pos = start;
    while pos < end {
        if word.bit(pos) {
            let run_start = pos;
            while pos < end && word.bit(pos) {
                pos += 1;
            }
            runs.push((run_start, pos - run_start));
        } else {
            pos += 1;
        }
    }
    let &(last_start, last_len) = runs.last().expect("codewords contain a delimiter run");

    let mut value: u64 = 1;
    let push_bits = |bit: bool, count: usize, value: &mut u64| -> Result<(), CodeError> {
        for _ in 0..count {
            if *value & (1 << 63) != 0 {
                return Err(CodeError::ValueTooWide);
            }
            *value = (*value << 1) | bit as u64;
        }
        Ok(())
    };

    if runs.len() == 1 && last_start + last_len + 1 == end {
        // 0^p 1^mi 0: for m1 the delimiter is pure padding around the zeros;
        // for an informative run the whole word is the residual.
        if last_len == m1 {
            push_bits(false, last_start - start, &mut value)?;
        } else {
            for i in start..end {
                push_bits(word.bit(i), 1, &mut value)?;
            }
        }
        return Ok(value);
    }

    let (core_end, keep_final) = if last_len == m1 {
        // Externally appended delimiter 0 1^m1 0: strip it entirely.
        (end - (m1 + 2), false)
    } else {
        // Informative delimiter: keep the word, shield its final run.
        (end, true)
    };

    let mut pos = start;
    for &(run_start, run_len) in &runs {
        if run_start >= core_end {
            break;
        }
        push_bits(false, run_start - pos, &mut value)?;
        if keep_final && run_start == last_start {
            push_bits(true, run_len, &mut value)?;
        } else {
            let original = phi.inverse(run_len as u64)? as usize;
            push_bits(true, original, &mut value)?;
        }
        pos = run_start + run_len;
    }
    debug_assert!(pos <= core_end);
    push_bits(false, core_end - pos, &mut value)?;
    Ok(value)
}

/// Upper bound on `|encode_int(spec, i)|`: `ceil((1 + t/2)·log2 i + m1 + 2)`.
pub fn length_bound(spec: &CodeSpec, i: u64) -> u64 {
    assert!(i >= 1);
    let t = spec.delimiter_count() as f64;
    ((1.0 + t / 2.0) * (i as f64).log2() + f64::from(spec.min_run()) + 2.0).ceil() as u64
}

/// Concatenation of per-integer codewords.
pub fn encode_stream(spec: &CodeSpec, values: &[u64]) -> BitString {
    let mut out = BitString::new();
    for &v in values {
        out.extend_from(&encode_int(spec, v));
    }
    out
}

/// Splits a concatenated stream at delimiter boundaries and decodes each
/// codeword. Trailing bits that form no complete codeword yield
/// [`CodeError::Truncated`] carrying the successfully decoded prefix.
pub fn decode_stream(spec: &CodeSpec, bits: &BitString) -> Result<Vec<u64>, CodeError> {
    let mut out = Vec::new();
    let mut word_start = 0;
    let mut cursor = BitCursor::new(bits);
    loop {
        // A codeword ends at the zero that terminates a delimiter-length run.
        let mut boundary = None;
        while let Some((bit, len)) = cursor.read_run() {
            if !bit {
                continue;
            }
            if spec.is_delimiter_run(len) {
                match cursor.read_bit() {
                    Some(false) => {
                        boundary = Some(cursor.position());
                        break;
                    }
                    Some(true) => unreachable!("read_run yields maximal runs"),
                    None => break,
                }
            }
        }
        match boundary {
            Some(end) => {
                // The boundary scan guarantees the segment is a codeword:
                // its final run closes a delimiter and any earlier
                // delimiter-length run would have ended the word sooner.
                debug_assert!(is_codeword(spec, &bits.slice(word_start, end)));
                out.push(decode_word_range(spec, bits, word_start, end)?);
                word_start = end;
            }
            None => {
                if word_start == bits.len() {
                    return Ok(out);
                }
                return Err(CodeError::Truncated {
                    undecoded_bits: bits.len() - word_start,
                    decoded: out,
                });
            }
        }
    }
}

/// One delta/run group of the splittable-code view: the group encodes as
/// `φ1(Δ) 1^(k-1) 0`, where `φ1(0) = "0"` and the remaining `2^d` values map
/// to the binary words of length `d+1` that start with 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DeltaKGroup {
    pub delta: u32,
    pub k: u64,
}

impl DeltaKGroup {
    /// The group's bit encoding under width parameter `d`.
    pub fn to_bits(self, d: u32) -> BitString {
        let mut out = BitString::new();
        if self.delta == 0 {
            out.push(false);
        } else {
            out.push(true);
            for i in (0..d).rev() {
                out.push((self.delta - 1) & (1 << i) != 0);
            }
        }
        out.push_run(true, self.k as usize - 1);
        out.push(false);
        out
    }
}

/// Greedy left-to-right partition of a codeword into whole delta/run groups.
///
/// Works for every codeword and every `0 <= d < m1`; the default width used
/// throughout the crate is `d = 0`.
pub fn parse_groups(
    spec: &CodeSpec,
    word: &BitString,
    d: u32,
) -> Result<Vec<DeltaKGroup>, CodeError> {
    if d >= spec.min_run() {
        return Err(CodeError::InvalidGroupWidth);
    }
    if !is_codeword(spec, word) {
        return Err(CodeError::NotACodeword);
    }
    let mut groups = Vec::new();
    let mut pos = 0;
    while pos < word.len() {
        let delta = if !word.bit(pos) {
            pos += 1;
            0
        } else {
            if pos + d as usize + 1 > word.len() {
                return Err(CodeError::GroupParse(pos));
            }
            let mut v = 0u32;
            for i in 1..=d as usize {
                v = v << 1 | word.bit(pos + i) as u32;
            }
            pos += d as usize + 1;
            v + 1
        };
        let mut ones = 0;
        while pos + ones < word.len() && word.bit(pos + ones) {
            ones += 1;
        }
        if pos + ones == word.len() {
            return Err(CodeError::GroupParse(pos));
        }
        pos += ones + 1;
        groups.push(DeltaKGroup {
            delta,
            k: ones as u64 + 1,
        });
    }
    Ok(groups)
}

/// All codewords of length at most `max_len`, shortest first and
/// lexicographic within a length (0 before 1).
pub fn enumerate(spec: &CodeSpec, max_len: usize) -> Vec<BitString> {
    WaysTable::new(&spec.dfa()).enumerate(max_len)
}

/// The `rank`-th codeword (1-based) of the canonical enumeration.
pub fn rank_to_codeword(spec: &CodeSpec, rank: u64) -> BitString {
    WaysTable::new(&spec.dfa()).unrank(rank as u128)
}

/// Inverse of [`rank_to_codeword`]; rejects non-codewords.
pub fn codeword_to_rank(spec: &CodeSpec, word: &BitString) -> Result<u64, CodeError> {
    WaysTable::new(&spec.dfa())
        .rank(word)
        .map(|r| r as u64)
        .ok_or(CodeError::NotACodeword)
}

/// Membership DFA: tracks whether we are still inside the leading run (to
/// reject `1^mi 0` prefixes) and otherwise the length of the current run
/// since the last zero. Delimiter-length runs closed by a zero jump to the
/// accepting sink, which has no outgoing edges: a codeword must end there.
pub(crate) struct MdDfa {
    delims: Vec<u32>,
    cap: usize, // runs longer than max_run collapse into one state
}

// State layout: 0 = start; 1..=cap = leading run of j ones; cap+1 = leading
// run longer than cap; cap+2+j (j=0..=cap) = j ones since the last zero;
// 2cap+3 = interior run longer than cap; 2cap+4 = accepting sink.
impl MdDfa {
    fn new(spec: &CodeSpec) -> Self {
        Self {
            delims: spec.delims.clone(),
            cap: spec.max_run() as usize,
        }
    }

    fn in_m(&self, len: usize) -> bool {
        self.delims.binary_search(&(len as u32)).is_ok()
    }
}

impl BitDfa for MdDfa {
    fn state_count(&self) -> usize {
        2 * self.cap + 5
    }

    fn start(&self) -> usize {
        0
    }

    fn sink(&self) -> usize {
        2 * self.cap + 4
    }

    fn step(&self, state: usize, bit: bool) -> Option<usize> {
        let cap = self.cap;
        let zero_base = cap + 2;
        if state == self.sink() {
            return None;
        }
        if state == 0 {
            return Some(if bit { 1 } else { zero_base });
        }
        if state <= cap + 1 {
            // Leading run of `state` ones (cap+1 = longer than cap).
            let j = state;
            return if bit {
                Some((j + 1).min(cap + 1))
            } else if j <= cap && self.in_m(j) {
                Some(self.sink())
            } else {
                Some(zero_base)
            };
        }
        // Interior: j ones since the last zero (2cap+3 = longer than cap).
        let j = state - zero_base;
        if bit {
            Some(zero_base + (j + 1).min(cap + 1))
        } else if j <= cap && self.in_m(j) {
            Some(self.sink())
        } else {
            Some(zero_base)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    fn spec(s: &str) -> CodeSpec {
        s.parse().unwrap()
    }

    #[test]
    fn spec_parsing_and_validation() {
        assert_eq!(spec("D2").delimiters(), &[2]);
        assert_eq!(spec("D2,3,5").delimiters(), &[2, 3, 5]);
        assert_eq!(spec("D2,3,5").to_string(), "D2,3,5");
        assert!("D".parse::<CodeSpec>().is_err());
        assert!("D3,2".parse::<CodeSpec>().is_err());
        assert!("D0".parse::<CodeSpec>().is_err());
        assert!("Fib3".parse::<CodeSpec>().is_err());
        assert_eq!(CodeSpec::new(vec![2, 2]), Err(CodeError::InvalidSpec));
    }

    #[test]
    fn phi_enumerates_integers_outside_m() {
        let s = spec("D2,5");
        let phi = s.phi_map();
        assert_eq!(phi.forward(1).unwrap(), 1);
        assert_eq!(phi.forward(2).unwrap(), 3);
        let first: Vec<u64> = (1..=6).map(|i| phi.forward(i).unwrap()).collect();
        assert_eq!(first, vec![1, 3, 4, 6, 7, 8]);
        assert_eq!(phi.inverse(1).unwrap(), 1);
        assert_eq!(phi.inverse(7).unwrap(), 5);
        assert_eq!(phi.inverse(2), Err(CodeError::PhiNotInDomain(2)));

        let s = spec("D2");
        assert_eq!(s.phi_map().forward(2).unwrap(), 3);
        assert_eq!(s.phi_map().inverse(3).unwrap(), 2);
    }

    #[test]
    fn membership_examples() {
        let d2 = spec("D2");
        assert!(is_codeword(&d2, &bs("110")));
        assert!(!is_codeword(&d2, &bs("01100")));
        assert!(!is_codeword(&d2, &bs("110110")));
        assert!(!is_codeword(&d2, &bs("0110110")));
        assert!(!is_codeword(&d2, &bs("")));
        assert!(!is_codeword(&d2, &bs("000")));
        assert!(!is_codeword(&d2, &bs("11")));
        assert!(is_codeword(&spec("D2,3"), &bs("001110")));
        assert!(is_codeword(&d2, &bs("10000110")));
    }

    #[test]
    fn encode_examples() {
        let d2 = spec("D2");
        assert_eq!(encode_int(&d2, 1), bs("110"));
        assert_eq!(encode_int(&d2, 2), bs("0110"));
        assert_eq!(encode_int(&d2, 7), bs("1110110"));
        assert_eq!(encode_int(&spec("D2,3"), 30), bs("1110"));
        assert_eq!(encode_int(&spec("D1"), 3), bs("11010"));
    }

    #[test]
    fn decode_examples() {
        let d2 = spec("D2");
        assert_eq!(decode_int(&d2, &bs("0110")).unwrap(), 2);
        assert_eq!(decode_int(&d2, &bs("1110110")).unwrap(), 7);
        assert_eq!(decode_int(&spec("D2,3"), &bs("001110")).unwrap(), 78);
        assert_eq!(decode_int(&d2, &bs("11")), Err(CodeError::NotACodeword));
    }

    #[test]
    fn roundtrip_small_dense() {
        for s in ["D1", "D1,2", "D2", "D2,3", "D2,3,5", "D3"] {
            let spec = spec(s);
            for x in 1..=3000u64 {
                let w = encode_int(&spec, x);
                assert!(
                    is_codeword(&spec, &w),
                    "{s}: encode({x}) = {w} not a codeword"
                );
                assert_eq!(decode_int(&spec, &w).unwrap(), x, "{s}: x={x} w={w}");
            }
        }
    }

    #[test]
    fn length_bound_examples() {
        let d2 = spec("D2");
        assert_eq!(length_bound(&d2, 1), 4);
        assert_eq!(length_bound(&d2, 7), 9);
        assert_eq!(length_bound(&spec("D2,3,5"), 1024), 29);
        for x in 1..=4096 {
            assert!(encode_int(&d2, x).len() as u64 <= length_bound(&d2, x));
        }
    }

    #[test]
    fn enumerate_matches_table_prefixes() {
        let words: Vec<String> = enumerate(&spec("D2"), 5)
            .iter()
            .map(|w| w.to_string())
            .collect();
        assert_eq!(words, vec!["110", "0110", "00110", "10110"]);

        let words: Vec<String> = enumerate(&spec("D2,3"), 4)
            .iter()
            .map(|w| w.to_string())
            .collect();
        assert_eq!(words, vec!["110", "0110", "1110"]);

        let words: Vec<String> = enumerate(&spec("D1"), 4)
            .iter()
            .map(|w| w.to_string())
            .collect();
        assert_eq!(words, vec!["10", "010", "0010"]);
    }

    #[test]
    fn enumeration_is_consistent_with_membership() {
        for s in ["D1", "D1,2", "D2", "D2,3", "D2,3,4"] {
            let spec = spec(s);
            let words = enumerate(&spec, 12);
            for w in &words {
                assert!(is_codeword(&spec, w), "{s}: {w}");
            }
            // Exhaustive cross-check against the brute-force filter.
            let mut count = 0usize;
            for len in 1..=12usize {
                for pattern in 0..(1u32 << len) {
                    let w: BitString = (0..len)
                        .map(|i| pattern & (1 << (len - 1 - i)) != 0)
                        .collect();
                    if is_codeword(&spec, &w) {
                        count += 1;
                    }
                }
            }
            assert_eq!(count, words.len(), "{s}");
        }
    }

    #[test]
    fn ranks_match_table_rows() {
        assert_eq!(rank_to_codeword(&spec("D2"), 5), bs("000110"));
        assert_eq!(rank_to_codeword(&spec("D2,3,4"), 7), bs("11110"));
        assert_eq!(rank_to_codeword(&spec("D2"), 13), bs("1110110"));
        assert_eq!(codeword_to_rank(&spec("D2"), &bs("1110110")).unwrap(), 13);
        assert_eq!(
            codeword_to_rank(&spec("D2"), &bs("111")),
            Err(CodeError::NotACodeword)
        );
    }

    #[test]
    fn rank_maps_are_mutually_inverse() {
        for s in ["D2", "D2,3,5"] {
            let spec = spec(s);
            let mut ways = WaysTable::new(&spec.dfa());
            for rank in 1..=2000u128 {
                let w = ways.unrank(rank);
                assert_eq!(ways.rank(&w), Some(rank), "{s} rank {rank}");
            }
        }
    }

    #[test]
    fn group_parse_examples() {
        let d2 = spec("D2");
        let groups = parse_groups(&d2, &bs("110"), 0).unwrap();
        assert_eq!(groups, vec![DeltaKGroup { delta: 1, k: 2 }]);
        let groups = parse_groups(&d2, &bs("0110"), 0).unwrap();
        assert_eq!(groups, vec![DeltaKGroup { delta: 0, k: 3 }]);
        // Greedy left-to-right: "10" then "0110".
        let groups = parse_groups(&d2, &bs("100110"), 0).unwrap();
        assert_eq!(
            groups,
            vec![
                DeltaKGroup { delta: 1, k: 1 },
                DeltaKGroup { delta: 0, k: 3 },
            ]
        );
        assert_eq!(
            parse_groups(&d2, &bs("110"), 2),
            Err(CodeError::InvalidGroupWidth)
        );
    }

    #[test]
    fn group_parse_reconcatenates_exhaustively() {
        for s in ["D2", "D2,3", "D3"] {
            let spec = spec(s);
            for w in enumerate(&spec, 16) {
                for d in 0..spec.min_run() {
                    let groups = parse_groups(&spec, &w, d).unwrap();
                    let mut rebuilt = BitString::new();
                    for g in &groups {
                        rebuilt.extend_from(&g.to_bits(d));
                    }
                    assert_eq!(rebuilt, w, "{s} d={d}");
                }
            }
        }
    }

    #[test]
    fn streams_roundtrip_and_report_truncation() {
        let d2 = spec("D2");
        assert_eq!(encode_stream(&d2, &[1, 1]), bs("110110"));
        assert_eq!(decode_stream(&d2, &bs("110110")).unwrap(), vec![1, 1]);
        assert_eq!(encode_stream(&d2, &[]), bs(""));
        assert_eq!(decode_stream(&d2, &bs("")).unwrap(), Vec::<u64>::new());
        assert_eq!(encode_stream(&d2, &[1, 19]), bs("110 001110110"));

        let mut bits = encode_stream(&d2, &[5, 9, 2]);
        bits.push(true); // half a codeword
        bits.push(false);
        match decode_stream(&d2, &bits) {
            Err(CodeError::Truncated {
                decoded,
                undecoded_bits,
            }) => {
                assert_eq!(decoded, vec![5, 9, 2]);
                assert_eq!(undecoded_bits, 2);
            }
            other => panic!("expected truncation, got {other:?}"),
        }
    }

    #[test]
    fn prefix_free_up_to_16() {
        for s in ["D2", "D2,3"] {
            let spec = spec(s);
            let words = enumerate(&spec, 16);
            use std::collections::HashSet;
            let set: HashSet<String> = words.iter().map(|w| w.to_string()).collect();
            for w in &words {
                let text = w.to_string();
                for cut in 1..text.len() {
                    assert!(
                        !set.contains(&text[..cut]),
                        "{s}: {} is a prefix of {text}",
                        &text[..cut]
                    );
                }
            }
        }
    }

    #[test]
    fn shifted_streams_never_masquerade() {
        // Starting a decode mid-codeword must never silently reproduce the
        // original values: it either fails or resynchronizes differently.
        let spec = spec("D2,3");
        for seed in 0..50u64 {
            let values: Vec<u64> = (0..10).map(|i| (seed * 31 + i * 7) % 500 + 2).collect();
            let bits = encode_stream(&spec, &values);
            let shifted = bits.slice(1, bits.len());
            if let Ok(decoded) = decode_stream(&spec, &shifted) {
                assert_ne!(decoded, values, "seed {seed}")
            }
        }
    }

    proptest! {
        #[test]
        fn bijection_on_random_values(x in 1u64..=1_000_000_000_000) {
            for s in ["D2", "D2,3", "D2,4,5"] {
                let spec: CodeSpec = s.parse().unwrap();
                let w = encode_int(&spec, x);
                prop_assert!(is_codeword(&spec, &w));
                prop_assert_eq!(decode_int(&spec, &w).unwrap(), x);
            }
        }

        #[test]
        fn stream_roundtrip(values in proptest::collection::vec(1u64..100_000, 0..40)) {
            let spec: CodeSpec = "D2,3".parse().unwrap();
            let bits = encode_stream(&spec, &values);
            prop_assert_eq!(decode_stream(&spec, &bits).unwrap(), values);
        }
    }
}
