//! A common handle over the two code families and their rank order.
//!
//! Compression assigns the i-th most frequent symbol the i-th codeword in
//! length-then-lexicographic order. [`Codebook`] caches the enumeration
//! machinery so repeated rank lookups stay cheap.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::automaton::WaysTable;
use crate::bits::{BitCursor, BitString};
use crate::fibonacci::FibSpec;
use crate::multi_delimiter::CodeSpec;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CodeParseError {
    #[error("cannot parse {0:?} as a code (expected e.g. \"D2\", \"D2,3,5\" or \"Fib3\")")]
    Unparsable(String),
    #[error("empty code list")]
    EmptyList,
}

/// Either a multi-delimiter code or a Fibonacci code.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Code {
    MultiDelimiter(CodeSpec),
    Fibonacci(FibSpec),
}

impl Code {
    pub fn codebook(&self) -> Codebook {
        let ways = match self {
            Code::MultiDelimiter(spec) => WaysTable::new(&spec.dfa()),
            Code::Fibonacci(spec) => WaysTable::new(&spec.dfa()),
        };
        Codebook {
            code: self.clone(),
            ways,
        }
    }

    /// Length of the shortest codeword.
    pub fn shortest_codeword_len(&self) -> usize {
        match self {
            Code::MultiDelimiter(spec) => spec.min_run() as usize + 1,
            Code::Fibonacci(spec) => spec.order() as usize,
        }
    }

    /// Splits a concatenation of codewords into `(start, end)` word ranges.
    ///
    /// Returns the ranges plus the index where undecodable trailing bits
    /// begin (equal to `bits.len()` when the stream ends on a boundary).
    pub fn split_stream(&self, bits: &BitString) -> (Vec<(usize, usize)>, usize) {
        let mut words = Vec::new();
        let mut cursor = BitCursor::new(bits);
        let mut word_start = 0;
        match self {
            // A word ends at the zero closing a delimiter-length run of ones.
            Code::MultiDelimiter(spec) => {
                while let Some((bit, len)) = cursor.read_run() {
                    if bit && spec.is_delimiter_run(len) && cursor.read_bit() == Some(false) {
                        words.push((word_start, cursor.position()));
                        word_start = cursor.position();
                    }
                }
            }
            // A word ends with its first run of `order` ones. Raw runs can
            // cross word boundaries (a word may start with 1), so count
            // consecutive ones bit by bit and reset at each boundary.
            Code::Fibonacci(spec) => {
                let m = spec.order() as usize;
                let mut run = 0usize;
                for (i, bit) in bits.iter().enumerate() {
                    run = if bit { run + 1 } else { 0 };
                    if run == m {
                        words.push((word_start, i + 1));
                        word_start = i + 1;
                        run = 0;
                    }
                }
            }
        }
        (words, word_start)
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Code::MultiDelimiter(spec) => spec.fmt(f),
            Code::Fibonacci(spec) => spec.fmt(f),
        }
    }
}

impl fmt::Debug for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Code({self})")
    }
}

impl FromStr for Code {
    type Err = CodeParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Ok(spec) = s.parse::<FibSpec>() {
            return Ok(Code::Fibonacci(spec));
        }
        s.parse::<CodeSpec>()
            .map(Code::MultiDelimiter)
            .map_err(|_| CodeParseError::Unparsable(s.to_string()))
    }
}

/// Parses a comma-separated list of codes where multi-delimiter names carry
/// commas themselves: `"Fib3,D2,D2,3,D2,3,5"` is Fib3, D2, D2,3 and D2,3,5.
/// A bare number extends the preceding multi-delimiter code.
pub fn parse_code_list(s: &str) -> Result<Vec<Code>, CodeParseError> {
    let mut names: Vec<String> = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        if part.chars().all(|c| c.is_ascii_digit()) && !part.is_empty() {
            match names.last_mut() {
                Some(last) if last.starts_with('D') => {
                    last.push(',');
                    last.push_str(part);
                    continue;
                }
                _ => return Err(CodeParseError::Unparsable(part.to_string())),
            }
        }
        names.push(part.to_string());
    }
    if names.is_empty() {
        return Err(CodeParseError::EmptyList);
    }
    names.iter().map(|name| name.parse()).collect()
}

/// Cached rank-order bookkeeping for one code.
pub struct Codebook {
    code: Code,
    ways: WaysTable,
}

impl Codebook {
    pub fn code(&self) -> &Code {
        &self.code
    }

    /// Number of codewords of exactly `len` bits.
    pub fn count(&mut self, len: usize) -> u128 {
        self.ways.count(len)
    }

    /// Number of codewords of at most `len` bits.
    pub fn cumulative(&mut self, len: usize) -> u128 {
        self.ways.cumulative(len)
    }

    /// The `rank`-th codeword (1-based), shortest first, lexicographic
    /// within a length.
    pub fn codeword(&mut self, rank: u64) -> BitString {
        self.ways.unrank(rank as u128)
    }

    /// 1-based rank of `word`, or `None` when it is not a codeword.
    pub fn rank(&mut self, word: &BitString) -> Option<u64> {
        self.ways.rank(word).map(|r| r as u64)
    }

    /// All codewords of length at most `max_len`, in canonical order.
    pub fn enumerate(&mut self, max_len: usize) -> Vec<BitString> {
        self.ways.enumerate(max_len)
    }
}
