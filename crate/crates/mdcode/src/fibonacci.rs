//! Fibonacci codes of higher orders.
//!
//! Fib-m consists of the word `1^m` together with every binary word that
//! contains `1^m` exactly once, as its suffix. The code of order m has
//! exactly `F(m, n)` codewords of length `n + m`, where `F(m, ·)` is the
//! order-m Fibonacci sequence.
//!
//! These codes serve as the ranked comparison baseline for the
//! multi-delimiter family; there is no integer-value encoder here, only the
//! canonical rank order.
//!
//! ```
//! use mdcode::fibonacci::{FibSpec, fib_number, is_codeword};
//!
//! let fib3: FibSpec = "Fib3".parse().unwrap();
//! assert!(is_codeword(&fib3, &"110111".parse().unwrap()));
//! assert_eq!(fib_number(3, 5), 7u32.into());
//! ```

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use thiserror::Error;

use crate::automaton::{BitDfa, WaysTable};
use crate::bits::BitString;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FibError {
    #[error("Fibonacci code order must be at least 2")]
    InvalidOrder,
    #[error("cannot parse {0:?} as a Fibonacci spec (expected \"Fib3\")")]
    UnparsableSpec(String),
    #[error("not a codeword of this code")]
    NotACodeword,
    #[error("cannot split into whole run/delta groups at bit {0}")]
    GroupParse(usize),
}

/// The order parameter of a Fibonacci code Fib-m.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FibSpec {
    order: u32,
}

impl FibSpec {
    pub fn new(order: u32) -> Result<Self, FibError> {
        if order < 2 {
            return Err(FibError::InvalidOrder);
        }
        Ok(Self { order })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub(crate) fn dfa(&self) -> FibDfa {
        FibDfa {
            m: self.order as usize,
        }
    }
}

impl fmt::Display for FibSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fib{}", self.order)
    }
}

impl fmt::Debug for FibSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FibSpec({self})")
    }
}

impl FromStr for FibSpec {
    type Err = FibError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let order = s
            .strip_prefix("Fib")
            .and_then(|body| body.parse::<u32>().ok())
            .ok_or_else(|| FibError::UnparsableSpec(s.to_string()))?;
        Self::new(order).map_err(|_| FibError::UnparsableSpec(s.to_string()))
    }
}

/// The order-m Fibonacci number `F(m, n)`: each term is the sum of the `m`
/// preceding ones, seeded by `F(m, 1) = 1` and zeros for `n <= 0`.
pub fn fib_number(order: u32, n: u64) -> BigUint {
    let m = order as usize;
    assert!(m >= 2, "Fibonacci order must be at least 2");
    if n == 0 {
        return BigUint::ZERO;
    }
    // Sliding window over the last m terms, F(1-m)..F(0) = 0.
    let mut window: Vec<BigUint> = vec![BigUint::ZERO; m];
    let mut current = BigUint::from(1u32);
    for _ in 1..n {
        window.rotate_left(1);
        std::mem::swap(&mut window[m - 1], &mut current);
        current = window.iter().sum();
    }
    current
}

/// True iff `word` is `1^m` or contains `1^m` exactly once, as its suffix.
pub fn is_codeword(spec: &FibSpec, word: &BitString) -> bool {
    let m = spec.order as usize;
    let runs = word.runs();
    let Some(&(bit, _, len)) = runs.last() else {
        return false;
    };
    if !bit || len != m {
        return false; // must end in a run of exactly m ones
    }
    // Any other run of >= m ones would embed another occurrence.
    runs[..runs.len() - 1]
        .iter()
        .all(|&(bit, _, len)| !bit || len < m)
}

/// All codewords of length at most `max_len`, shortest first and
/// lexicographic within a length.
pub fn enumerate(spec: &FibSpec, max_len: usize) -> Vec<BitString> {
    WaysTable::new(&spec.dfa()).enumerate(max_len)
}

/// The `rank`-th codeword (1-based) of the canonical enumeration.
pub fn rank_to_codeword(spec: &FibSpec, rank: u64) -> BitString {
    WaysTable::new(&spec.dfa()).unrank(rank as u128)
}

/// Inverse of [`rank_to_codeword`]; rejects non-codewords.
pub fn codeword_to_rank(spec: &FibSpec, word: &BitString) -> Result<u64, FibError> {
    WaysTable::new(&spec.dfa())
        .rank(word)
        .map(|r| r as u64)
        .ok_or(FibError::NotACodeword)
}

/// One run/delta group: `k` encodes as `0^(k-1) 1` and `delta` as `1^delta 0`
/// for `delta <= m-2`, or as `1^(m-1)` for the terminal value `m-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KDeltaGroup {
    pub k: u64,
    pub delta: u32,
}

impl KDeltaGroup {
    pub fn to_bits(self, order: u32) -> BitString {
        let mut out = BitString::new();
        out.push_run(false, self.k as usize - 1);
        out.push(true);
        if self.delta == order - 1 {
            out.push_run(true, self.delta as usize);
        } else {
            out.push_run(true, self.delta as usize);
            out.push(false);
        }
        out
    }
}

/// Greedy left-to-right partition of a codeword into whole run/delta groups.
pub fn parse_kdelta_groups(spec: &FibSpec, word: &BitString) -> Result<Vec<KDeltaGroup>, FibError> {
    if !is_codeword(spec, word) {
        return Err(FibError::NotACodeword);
    }
    let m = spec.order as usize;
    let mut groups = Vec::new();
    let mut pos = 0;
    while pos < word.len() {
        let mut zeros = 0;
        while pos + zeros < word.len() && !word.bit(pos + zeros) {
            zeros += 1;
        }
        if pos + zeros == word.len() {
            return Err(FibError::GroupParse(pos));
        }
        pos += zeros + 1; // consume the terminating 1 of 0^(k-1) 1
        let mut ones = 0;
        while ones < m - 1 && pos + ones < word.len() && word.bit(pos + ones) {
            ones += 1;
        }
        let delta = if ones == m - 1 {
            pos += ones;
            ones as u32
        } else {
            if pos + ones >= word.len() {
                return Err(FibError::GroupParse(pos));
            }
            pos += ones + 1; // the closing 0 of 1^delta 0
            ones as u32
        };
        groups.push(KDeltaGroup {
            k: zeros as u64 + 1,
            delta,
        });
    }
    Ok(groups)
}

/// Membership DFA: state j = length of the trailing run of ones, capped at
/// m, which is the accepting sink (no continuation after `1^m`).
pub(crate) struct FibDfa {
    m: usize,
}

impl BitDfa for FibDfa {
    fn state_count(&self) -> usize {
        self.m + 1
    }

    fn start(&self) -> usize {
        0
    }

    fn sink(&self) -> usize {
        self.m
    }

    fn step(&self, state: usize, bit: bool) -> Option<usize> {
        if state == self.m {
            return None;
        }
        Some(if bit { state + 1 } else { 0 })
    }
}
