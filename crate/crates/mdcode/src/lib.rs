//! Variable-length codes with multiple delimiters.
//!
//! A multi-delimiter code `D_{m1,…,mt}` marks codeword ends with the bit
//! patterns `0 1^mi 0`. The family is complete and universal, carries a
//! simple bijection with the positive integers, decodes byte-at-a-time from
//! a small table, and compresses ranked natural-language vocabularies more
//! tightly than the Fibonacci codes it competes with.
//!
//! The crate provides:
//!
//! * [`bits`] — MSB-first bit strings, cursors and run scanning.
//! * [`multi_delimiter`] — code membership, the integer bijection,
//!   enumeration and ranking, splittable-group parsing, streams.
//! * [`fibonacci`] — Fib-m codes as the ranked comparison family.
//! * [`lower23`] — the lower (2,3)-representation code, a subset of D2.
//! * [`analysis`] — exact codeword counts, Kraft sums, growth rates,
//!   average codeword length under a distribution.
//! * [`fastdecode`] — the table-driven byte decoder for D2.
//! * [`textcodec`] — a lossless word-based text compressor and container.
//!
//! The `mdcode` binary exposes compression, enumeration, density reports
//! and the decode-table dump on the command line.
//!
//! ```
//! use mdcode::code::Code;
//! use mdcode::multi_delimiter::{encode_stream, decode_stream};
//!
//! let code: Code = "D2,3".parse().unwrap();
//! let Code::MultiDelimiter(spec) = &code else { unreachable!() };
//! let bits = encode_stream(spec, &[4, 1, 30]);
//! assert_eq!(decode_stream(spec, &bits).unwrap(), vec![4, 1, 30]);
//! ```

pub mod analysis;
mod automaton;
pub mod bits;
pub mod code;
pub mod fastdecode;
pub mod fibonacci;
pub mod lower23;
pub mod multi_delimiter;
pub mod textcodec;

#[cfg(doctest)]
mod book;
