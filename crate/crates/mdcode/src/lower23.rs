//! The lower (2,3)-representation of integers and its prefix code.
//!
//! Every integer coprime with 6 factorizes uniquely as a chain
//! `x_i = 2^{n_i} + 3^{k_i} · x_{i+1}` where `n_i` is one or two below
//! `floor(log2 x_i)` and the chain ends at 1 or 2. Keeping only
//! `delta_i = floor(log2(3^{k_i} x_{i+1})) - n_i` (always 0, 1 or 2) and
//! `k_i` reconstructs `x`. Encoding the pairs in reverse order with a small
//! prefix code for delta and a unary code for k yields a prefix code whose
//! words all end in one of the separating groups `110`, `0110`, `10110`.
//!
//! The n-th positive integer coprime with 6 is `3n - (n mod 2) - 1`, which
//! extends the code to all positive integers.

use thiserror::Error;

use crate::bits::{BitCursor, BitString};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Lower23Error {
    #[error("argument must be coprime with 2 and 3")]
    NotCoprime,
    #[error("arguments start at 1")]
    OutOfRange,
    #[error("word is not in the lower (2,3) code")]
    NotACodeword,
    #[error("arithmetic overflow while folding the factorization")]
    Overflow,
}

/// One step of the factorization: `(delta, k)` with `delta` in `{0,1,2}`.
pub type DeltaK = (u8, u32);

/// The full factorization of an integer coprime with 6: pairs are stored in
/// extraction order (pair 0 belongs to `x` itself), the terminal is 1 or 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub pairs: Vec<DeltaK>,
    pub terminal: u8,
}

/// The n-th element of the ascending sequence 1, 5, 7, 11, 13, … of
/// integers coprime with 6.
pub fn nat_to_coprime(n: u64) -> u64 {
    assert!(n >= 1, "arguments start at 1");
    3 * n - (n % 2) - 1
}

fn coprime_to_nat(x: u64) -> Option<u64> {
    let n = match x % 6 {
        5 => (x + 1) / 3,   // even positions
        1 => x.div_ceil(3), // odd positions
        _ => return None,
    };
    (nat_to_coprime(n) == x).then_some(n)
}

fn floor_log2(x: u64) -> u32 {
    63 - x.leading_zeros()
}

/// Decomposes `x` (coprime with 6) into its chain of `(delta, k)` pairs.
pub fn factorize(x: u64) -> Result<Factorization, Lower23Error> {
    if x == 0 {
        return Err(Lower23Error::OutOfRange);
    }
    if x.is_multiple_of(2) || x.is_multiple_of(3) {
        return Err(Lower23Error::NotCoprime);
    }
    let mut pairs = Vec::new();
    let mut current = x;
    while current > 2 {
        let n = floor_log2(current);
        // Of the two candidate exponents exactly one leaves a multiple of 3.
        let exponent = [n - 1, n.saturating_sub(2)]
            .into_iter()
            .find(|&e| (current - (1 << e)).is_multiple_of(3))
            .expect("2^(n-1) and 2^(n-2) differ modulo 3");
        let mut rest = current - (1u64 << exponent);
        let mut k = 0u32;
        while rest.is_multiple_of(3) {
            rest /= 3;
            k += 1;
        }
        debug_assert!(k >= 1);
        let delta = floor_log2(current - (1u64 << exponent)) - exponent;
        debug_assert!(delta <= 2, "delta out of range for x = {current}");
        pairs.push((delta as u8, k));
        current = rest;
    }
    Ok(Factorization {
        pairs,
        terminal: current as u8,
    })
}

/// Re-folds a factorization into the integer it came from.
pub fn refold(f: &Factorization) -> Result<u64, Lower23Error> {
    let mut x = u64::from(f.terminal);
    for &(delta, k) in f.pairs.iter().rev() {
        x = fold_step(x, delta, k)?.0;
    }
    Ok(x)
}

/// `2^n + 3^k · inner` with `n = floor(log2(3^k · inner)) - delta`;
/// returns the folded value together with the exponent used.
fn fold_step(inner: u64, delta: u8, k: u32) -> Result<(u64, u32), Lower23Error> {
    let mut scaled = inner;
    for _ in 0..k {
        scaled = scaled.checked_mul(3).ok_or(Lower23Error::Overflow)?;
    }
    let n = floor_log2(scaled)
        .checked_sub(u32::from(delta))
        .ok_or(Lower23Error::NotACodeword)?;
    if n >= 63 {
        return Err(Lower23Error::Overflow);
    }
    (1u64 << n)
        .checked_add(scaled)
        .map(|folded| (folded, n))
        .ok_or(Lower23Error::Overflow)
}

// Group encodings: delta 2 -> "0", delta 1 -> "11", delta 0 -> "10"; k is
// unary 1^(k-1) 0, inflated to 1^k 0 when the delimiter would be forged:
// delta = 1 in any group but the first written, or delta != 1 with k >= 3
// in any group but the last written.
fn push_group(out: &mut BitString, delta: u8, k: u32, first_written: bool, last_written: bool) {
    match delta {
        2 => out.push(false),
        1 => out.push_run(true, 2),
        0 => {
            out.push(true);
            out.push(false);
        }
        _ => unreachable!("delta is 0, 1 or 2"),
    }
    let inflate = (delta == 1 && !first_written) || (delta != 1 && k >= 3 && !last_written);
    let ones = if inflate { k } else { k - 1 };
    out.push_run(true, ones as usize);
    out.push(false);
}

/// Encodes the n-th positive integer (via its coprime-with-6 counterpart).
pub fn encode(n: u64) -> BitString {
    let x = nat_to_coprime(n);
    let f = factorize(x).expect("nat_to_coprime yields coprime integers");
    let mut out = BitString::new();
    let t = f.pairs.len();
    // Groups are written in reverse extraction order: pair t-1 first.
    for (written, &(delta, k)) in f.pairs.iter().rev().enumerate() {
        push_group(&mut out, delta, k, written == 0, written == t - 1);
    }
    // The last written group already ends in a delimiter exactly when it is
    // 0110 or 10110, i.e. k0 = 3 with delta0 != 1.
    let self_delimited = f
        .pairs
        .first()
        .is_some_and(|&(delta, k)| k == 3 && delta != 1);
    if !self_delimited {
        out.push_run(true, 2);
        out.push(false);
    }
    out
}

/// Raw parsed group: delta plus the count of ones in its unary part.
struct RawGroup {
    delta: u8,
    ones: u32,
}

fn parse_raw_groups(word: &BitString) -> Result<Vec<RawGroup>, Lower23Error> {
    let mut cursor = BitCursor::new(word);
    let mut groups = Vec::new();
    while !cursor.at_end() {
        let delta = if !cursor.read_bit().unwrap() {
            2
        } else {
            match cursor.read_bit() {
                Some(true) => 1,
                Some(false) => 0,
                None => return Err(Lower23Error::NotACodeword),
            }
        };
        let mut ones = 0u32;
        loop {
            match cursor.read_bit() {
                Some(true) => ones += 1,
                Some(false) => break,
                None => return Err(Lower23Error::NotACodeword),
            }
        }
        groups.push(RawGroup { delta, ones });
    }
    Ok(groups)
}

/// Decodes a codeword of the lower (2,3) code. Inverse of [`encode`].
///
/// Decoding validates the factorization it rebuilds: every exponent must be
/// one or two below `floor(log2 x_i)`. Words of the surrounding code D2 that
/// are not in the image (such as `10000110`) are rejected.
pub fn decode(word: &BitString) -> Result<u64, Lower23Error> {
    let mut groups = parse_raw_groups(word)?;
    // A trailing group "110" (delta 1, empty unary part) is the externally
    // appended delimiter; "0110" and "10110" are groups in their own right.
    match groups.last() {
        Some(g) if g.delta == 1 && g.ones == 0 => {
            groups.pop();
        }
        Some(g) if g.delta != 1 && g.ones == 2 => {}
        _ => return Err(Lower23Error::NotACodeword),
    }
    let t = groups.len();
    // Undo the unary inflation; group `written` position 0 is pair t-1.
    let mut pairs = Vec::with_capacity(t);
    for (written, g) in groups.iter().enumerate() {
        let first_written = written == 0;
        let last_written = written == t - 1;
        let k = if g.delta == 1 {
            if first_written {
                g.ones + 1
            } else if g.ones >= 1 {
                g.ones
            } else {
                return Err(Lower23Error::NotACodeword);
            }
        } else if last_written {
            g.ones + 1
        } else {
            match g.ones {
                0 | 1 => g.ones + 1,
                2 => return Err(Lower23Error::NotACodeword), // would have been inflated
                inflated => inflated,
            }
        };
        pairs.push((g.delta, k));
    }
    pairs.reverse(); // back to extraction order

    let terminal: u8 = if pairs.last() == Some(&(2, 1)) { 2 } else { 1 };
    let mut x = u64::from(terminal);
    for &(delta, k) in pairs.iter().rev() {
        let (folded, exponent) = fold_step(x, delta, k)?;
        // The chain is canonical only when each exponent sits one or two
        // below floor(log2) of the folded value.
        let top = floor_log2(folded);
        if exponent + 1 != top && exponent + 2 != top {
            return Err(Lower23Error::NotACodeword);
        }
        x = folded;
    }
    let n = coprime_to_nat(x).ok_or(Lower23Error::NotACodeword)?;
    // Exact image membership: anything the encoder would not emit is out.
    if &encode(n) != word {
        return Err(Lower23Error::NotACodeword);
    }
    Ok(n)
}
