//! Table-driven byte-aligned decoding for the code D2.
//!
//! The bitwise decoder is replaced by one table lookup per input byte. A row
//! keyed by (remainder state, byte value) packs into a single 32-bit word
//! everything the byte contributes: up to three decoded fragments with their
//! bit lengths, completion flags, and the next remainder state.
//!
//! # Remainder states
//!
//! The undecodable suffix of a processed byte never contains `00`, `10` or a
//! run of three ones, which leaves the strings ε, `0`, `1`, `01`, `11`,
//! `011`. The string `1` however stands for two different situations that
//! continue differently, so it is split:
//!
//! * [`RemainderState::RunOne`] — inside a run of ones; `run − 1` ones have
//!   already been emitted, so a following `10` emits one more content 1,
//! * [`RemainderState::StartOne`] — a codeword's very first bit; a following
//!   `10` closes the word `110` (value 1, no content at all).
//!
//! Seven states total; the table is 7 × 256 rows of 4 bytes.
//!
//! # Row layout
//!
//! Flags `f1 f2 f3` sit in the three most significant bits; `fi = 1` means
//! fragment `i` completes a codeword, `fi = 0` that it is the byte's last
//! fragment and continues into the remainder. Fields grow from the least
//! significant bit (1-indexed positions):
//!
//! * `000`: bits 1–10 `w1`, 11–14 `|w1|`, 15–17 next state.
//! * `100`: bits 1–6 `w1`, 7–9 `|w1|`, 10–16 `w2`, 17–19 `|w2|`, 20–22 next.
//! * `11x`: bits 1–6 `w1`, 7–9 `|w1|`, 10–13 `w2`, 14–16 `|w2|`, 17–20 `w3`,
//!   21–23 `|w3|`, 24–26 next, bit 27 the leading-zero marker: after three
//!   closed words the byte's final bit may be a content zero of the fourth
//!   (byte shape `0 110 110 0`), which no fragment field can hold.

use std::fmt;

use thiserror::Error;

use crate::bits::BitString;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ByteDecodeError {
    #[error("decoded value exceeds the 64-bit accumulator at input byte {0}")]
    ValueTooWide(usize),
}

/// Byte-boundary state of the incremental decoder: the undecoded suffix,
/// with the two roles of a lone `1` kept apart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum RemainderState {
    /// `""` — at a codeword boundary or after emitted leading zeros.
    Empty = 0,
    /// `"0"` — a zero that may open a delimiter or turn out to be content.
    PendingZero = 1,
    /// `"1"` — inside a run of ones, `run − 1` ones already emitted.
    RunOne = 2,
    /// `"01"` — pending zero plus one run bit.
    PendingZeroOne = 3,
    /// `"11"` — a codeword's first two bits.
    StartOnes = 4,
    /// `"011"` — pending zero plus two run bits; a zero closes the word.
    PendingZeroOnes = 5,
    /// `"1"` — a codeword's first bit.
    StartOne = 6,
}

pub const STATE_COUNT: usize = 7;

pub const ALL_STATES: [RemainderState; STATE_COUNT] = [
    RemainderState::Empty,
    RemainderState::PendingZero,
    RemainderState::RunOne,
    RemainderState::PendingZeroOne,
    RemainderState::StartOnes,
    RemainderState::PendingZeroOnes,
    RemainderState::StartOne,
];

impl RemainderState {
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> Option<Self> {
        ALL_STATES.get(index).copied()
    }

    /// The pending bits as text; both one-states print `1`.
    pub fn label(self) -> &'static str {
        match self {
            RemainderState::Empty => "",
            RemainderState::PendingZero => "0",
            RemainderState::RunOne => "1",
            RemainderState::PendingZeroOne => "01",
            RemainderState::StartOnes => "11",
            RemainderState::PendingZeroOnes => "011",
            RemainderState::StartOne => "1",
        }
    }
}

impl fmt::Display for RemainderState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// One transition of the bit-level machine: bits emitted into the current
/// fragment, whether a codeword closed, and the successor state.
#[derive(Debug, Clone, Copy)]
struct Step {
    emit: u8,
    emit_len: u8,
    close: bool,
    next: RemainderState,
}

fn step(state: RemainderState, bit: bool) -> Step {
    use RemainderState::*;
    let (emit, emit_len, close, next) = match (state, bit) {
        // Leading zeros are content in every continuation.
        (Empty, false) => (0b0, 1, false, Empty),
        (Empty, true) => (0, 0, false, StartOne),
        // A first run of length 1 is content; of length 2 it is the word 110.
        (StartOne, false) => (0b1, 1, false, PendingZero),
        (StartOne, true) => (0, 0, false, StartOnes),
        (StartOnes, false) => (0, 0, true, Empty),
        (StartOnes, true) => (0b11, 2, false, RunOne),
        // Inside a run: emission stays normalized at run − 1 ones.
        (RunOne, true) => (0b1, 1, false, RunOne),
        (RunOne, false) => (0, 0, false, PendingZero),
        // A zero after content: delimiter opener until proven otherwise.
        (PendingZero, false) => (0b0, 1, false, PendingZero),
        (PendingZero, true) => (0, 0, false, PendingZeroOne),
        (PendingZeroOne, false) => (0b01, 2, false, PendingZero),
        (PendingZeroOne, true) => (0, 0, false, PendingZeroOnes),
        (PendingZeroOnes, false) => (0, 0, true, Empty),
        (PendingZeroOnes, true) => (0b011, 3, false, RunOne),
    };
    Step {
        emit,
        emit_len,
        close,
        next,
    }
}

/// A decoded fragment: the content bits contributed by one scan, and whether
/// they complete a codeword.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fragment {
    pub bits: BitString,
    pub closed: bool,
}

/// Result of feeding `bits` to the reference bit-at-a-time decoder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scan {
    /// Closed fragments in order, then one final open fragment (possibly
    /// empty) for whatever continues past the scanned bits.
    pub fragments: Vec<Fragment>,
    pub next: RemainderState,
}

/// Reference single-bit decoder used to generate and to cross-check the
/// table: scans `bits` starting in `state`, emitting decided content bits as
/// they become unambiguous.
pub fn scan_bits(state: RemainderState, bits: &BitString) -> Scan {
    let mut fragments = Vec::new();
    let mut current = BitString::new();
    let mut state = state;
    for bit in bits.iter() {
        let step = step(state, bit);
        for i in (0..step.emit_len).rev() {
            current.push(step.emit & (1 << i) != 0);
        }
        if step.close {
            fragments.push(Fragment {
                bits: std::mem::take(&mut current),
                closed: true,
            });
        }
        state = step.next;
    }
    fragments.push(Fragment {
        bits: current,
        closed: false,
    });
    Scan {
        fragments,
        next: state,
    }
}

const F1: u32 = 1 << 31;
const F2: u32 = 1 << 30;
const F3: u32 = 1 << 29;
const ZERO_CARRY: u32 = 1 << 26;

/// One packed table row. Field accessors follow the layout selected by the
/// flag bits; unused fields read as zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PackedRow(pub u32);

impl PackedRow {
    pub fn f1(self) -> bool {
        self.0 & F1 != 0
    }

    pub fn f2(self) -> bool {
        self.0 & F2 != 0
    }

    pub fn f3(self) -> bool {
        self.0 & F3 != 0
    }

    /// The trailing-content-zero marker of layout `11x`.
    pub fn carries_zero(self) -> bool {
        self.0 & ZERO_CARRY != 0
    }

    /// `(w1, |w1|)` under the active layout.
    pub fn w1(self) -> (u32, u32) {
        if self.f1() {
            (self.0 & 0x3F, (self.0 >> 6) & 0x7)
        } else {
            (self.0 & 0x3FF, (self.0 >> 10) & 0xF)
        }
    }

    pub fn w2(self) -> (u32, u32) {
        if self.f2() {
            ((self.0 >> 9) & 0xF, (self.0 >> 13) & 0x7)
        } else {
            ((self.0 >> 9) & 0x7F, (self.0 >> 16) & 0x7)
        }
    }

    pub fn w3(self) -> (u32, u32) {
        ((self.0 >> 16) & 0xF, (self.0 >> 20) & 0x7)
    }

    pub fn next_state(self) -> RemainderState {
        let raw = if !self.f1() {
            (self.0 >> 14) & 0x7
        } else if !self.f2() {
            (self.0 >> 19) & 0x7
        } else {
            (self.0 >> 23) & 0x7
        };
        RemainderState::from_index(raw as usize).expect("state field out of range")
    }
}

/// The full 7 × 256 decoding table.
pub struct DecodeTable {
    rows: Vec<u32>,
}

impl DecodeTable {
    /// Generates every row by simulating the reference decoder on
    /// (state, byte), packing the resulting fragments. Panics if any
    /// fragment exceeds its layout field or an unexpected shape appears;
    /// the construction doubles as an exhaustive proof of the field widths.
    pub fn build() -> Self {
        let mut rows = vec![0u32; STATE_COUNT * 256];
        for state in ALL_STATES {
            for byte in 0..=255u8 {
                let scan = scan_bits(state, &BitString::from_bytes(&[byte]));
                rows[state.index() * 256 + byte as usize] = pack_row(state, byte, &scan);
            }
        }
        let table = Self { rows };
        table.assert_closure();
        table
    }

    pub fn row(&self, state: RemainderState, byte: u8) -> PackedRow {
        PackedRow(self.rows[state.index() * 256 + byte as usize])
    }

    /// Row payload, state-major then byte value, little-endian 32-bit words.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.rows.iter().flat_map(|r| r.to_le_bytes()).collect()
    }

    pub fn byte_len(&self) -> usize {
        self.rows.len() * 4
    }

    /// Every state reachable from the initial one must be in the state set
    /// (it is, by construction) and all seven must be reachable.
    fn assert_closure(&self) {
        let mut seen = [false; STATE_COUNT];
        let mut queue = vec![RemainderState::Empty];
        seen[RemainderState::Empty.index()] = true;
        while let Some(state) = queue.pop() {
            for byte in 0..=255u8 {
                let next = self.row(state, byte).next_state();
                if !seen[next.index()] {
                    seen[next.index()] = true;
                    queue.push(next);
                }
            }
        }
        assert!(
            seen.iter().all(|&s| s),
            "remainder states unreachable from the initial state: {seen:?}"
        );
    }
}

fn fragment_value(bits: &BitString) -> u32 {
    bits.iter().fold(0u32, |acc, bit| acc << 1 | bit as u32)
}

fn pack_row(state: RemainderState, byte: u8, scan: &Scan) -> u32 {
    let closed: Vec<&Fragment> = scan.fragments.iter().filter(|f| f.closed).collect();
    let open = scan.fragments.last().expect("scan always yields a tail");
    assert!(!open.closed);
    let next = (scan.next.index() as u32) & 0x7;
    let fit = |bits: &BitString, width: u32, what: &str| -> u32 {
        assert!(
            bits.len() as u32 <= width,
            "fragment {what} of ({state:?}, {byte:#04x}) needs {} bits, field holds {width}",
            bits.len()
        );
        fragment_value(bits)
    };
    match closed.len() {
        0 => {
            let w1 = fit(&open.bits, 10, "w1");
            w1 | (open.bits.len() as u32) << 10 | next << 14
        }
        1 => {
            let w1 = fit(&closed[0].bits, 6, "w1");
            let w2 = fit(&open.bits, 7, "w2");
            F1 | w1
                | (closed[0].bits.len() as u32) << 6
                | w2 << 9
                | (open.bits.len() as u32) << 16
                | next << 19
        }
        2 => {
            let w1 = fit(&closed[0].bits, 6, "w1");
            let w2 = fit(&closed[1].bits, 4, "w2");
            let w3 = fit(&open.bits, 4, "w3");
            F1 | F2
                | w1
                | (closed[0].bits.len() as u32) << 6
                | w2 << 9
                | (closed[1].bits.len() as u32) << 13
                | w3 << 16
                | (open.bits.len() as u32) << 20
                | next << 23
        }
        3 => {
            // Byte shape 0 110 110 x: the open tail is empty or one zero.
            let w1 = fit(&closed[0].bits, 6, "w1");
            let w2 = fit(&closed[1].bits, 4, "w2");
            let w3 = fit(&closed[2].bits, 4, "w3");
            let carry = match (open.bits.len(), fragment_value(&open.bits)) {
                (0, _) => 0,
                (1, 0) => ZERO_CARRY,
                _ => panic!("unexpected tail after three closes in ({state:?}, {byte:#04x})"),
            };
            F1 | F2
                | F3
                | carry
                | w1
                | (closed[0].bits.len() as u32) << 6
                | w2 << 9
                | (closed[1].bits.len() as u32) << 13
                | w3 << 16
                | (closed[2].bits.len() as u32) << 20
                | next << 23
        }
        n => panic!("{n} codewords closed inside one byte"),
    }
}

/// Mid-stream decoder state: the value accumulator (content bits behind an
/// implicit leading 1) and the remainder.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecoderState {
    pub value: u64,
    pub remainder: RemainderState,
}

impl Default for DecoderState {
    fn default() -> Self {
        Self {
            value: 1,
            remainder: RemainderState::Empty,
        }
    }
}

#[inline]
fn accumulate(value: u64, bits: u32, len: u32, at: usize) -> Result<u64, ByteDecodeError> {
    if 64 - value.leading_zeros() + len > 64 {
        return Err(ByteDecodeError::ValueTooWide(at));
    }
    Ok(value << len | u64::from(bits))
}

/// Decodes `bytes` as a continuation of `state`, one table lookup per byte.
///
/// Returns the completed values and the trailing state for further chunks.
/// Emits exactly what the bitwise decoder yields on the consumed complete
/// codewords; the accumulator holds at most 63 content bits, wider values
/// are a stream-constraint error.
pub fn decode_bytes(
    table: &DecodeTable,
    bytes: &[u8],
    state: DecoderState,
) -> Result<(Vec<u64>, DecoderState), ByteDecodeError> {
    let mut out = Vec::new();
    let mut state = state;
    decode_bytes_into(table, bytes, &mut state, &mut out)?;
    Ok((out, state))
}

/// Appending variant of [`decode_bytes`] for chunked streams and benchmarks.
pub fn decode_bytes_into(
    table: &DecodeTable,
    bytes: &[u8],
    state: &mut DecoderState,
    out: &mut Vec<u64>,
) -> Result<(), ByteDecodeError> {
    let mut value = state.value;
    let mut remainder = state.remainder;
    for (at, &byte) in bytes.iter().enumerate() {
        let t = table.rows[remainder.index() * 256 + byte as usize];
        if t & F1 != 0 {
            let len = (t >> 6) & 0x7;
            out.push(accumulate(value, t & 0x3F, len, at)?);
            if t & F2 != 0 {
                let len2 = (t >> 13) & 0x7;
                out.push(u64::from((1u32 << len2) | ((t >> 9) & 0xF)));
                let len3 = (t >> 20) & 0x7;
                let w3 = (t >> 16) & 0xF;
                if t & F3 != 0 {
                    out.push(u64::from((1u32 << len3) | w3));
                    value = if t & ZERO_CARRY != 0 { 0b10 } else { 1 };
                } else {
                    value = u64::from((1u32 << len3) | w3);
                }
                remainder = RemainderState::from_index(((t >> 23) & 0x7) as usize).unwrap();
            } else {
                let len2 = (t >> 16) & 0x7;
                value = u64::from((1u32 << len2) | ((t >> 9) & 0x7F));
                remainder = RemainderState::from_index(((t >> 19) & 0x7) as usize).unwrap();
            }
        } else {
            let len = (t >> 10) & 0xF;
            value = accumulate(value, t & 0x3FF, len, at)?;
            remainder = RemainderState::from_index(((t >> 14) & 0x7) as usize).unwrap();
        }
    }
    state.value = value;
    state.remainder = remainder;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multi_delimiter::{decode_stream, encode_stream, CodeSpec};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    fn d2() -> CodeSpec {
        "D2".parse().unwrap()
    }

    #[test]
    fn machine_steps_match_published_observations() {
        // "110" from a fresh word closes with no content.
        let scan = scan_bits(RemainderState::Empty, &bs("110"));
        assert_eq!(scan.fragments.len(), 2);
        assert!(scan.fragments[0].closed);
        assert!(scan.fragments[0].bits.is_empty());
        // "00111" leaves a normalized run marker.
        let scan = scan_bits(RemainderState::Empty, &bs("00111"));
        assert_eq!(scan.fragments.len(), 1);
        assert_eq!(scan.fragments[0].bits, bs("0011"));
        assert_eq!(scan.next, RemainderState::RunOne);
        // A pending "011" plus zero completes a delimiter.
        let scan = scan_bits(RemainderState::PendingZeroOnes, &bs("0"));
        assert!(scan.fragments[0].closed);
        assert!(scan.fragments[0].bits.is_empty());
        assert_eq!(scan.next, RemainderState::Empty);
    }

    /// The five published decoding-table rows, field for field.
    #[test]
    fn published_rows_match() {
        let table = DecodeTable::build();

        let row = table.row(RemainderState::Empty, 0b11000111);
        assert!(row.f1() && !row.f2());
        assert_eq!(row.w1(), (0, 0));
        assert_eq!(row.w2(), (0b0011, 4));
        assert_eq!(row.next_state().label(), "1");
        assert_eq!(row.next_state(), RemainderState::RunOne);

        let row = table.row(RemainderState::RunOne, 0b01101011);
        assert!(row.f1() && !row.f2());
        assert_eq!(row.w1(), (0, 0));
        assert_eq!(row.w2(), (0b1, 1));
        assert_eq!(row.next_state().label(), "011");

        let row = table.row(RemainderState::PendingZeroOnes, 0b11001011);
        assert!(!row.f1());
        assert_eq!(row.w1(), (0b0111001, 7));
        assert_eq!(row.next_state().label(), "011");

        let row = table.row(RemainderState::PendingZeroOnes, 0b11101101);
        assert!(row.f1() && !row.f2());
        assert_eq!(row.w1(), (0b01111, 5));
        assert_eq!(row.w2(), (0, 0)); // don't-care fields stay zero
        assert_eq!(row.next_state().label(), "1");
        assert_eq!(row.next_state(), RemainderState::StartOne);

        let row = table.row(RemainderState::StartOne, 0b10011000);
        assert!(row.f1() && row.f2() && !row.f3());
        assert_eq!(row.w1(), (0, 0));
        assert_eq!(row.w2(), (0b0, 1));
        assert_eq!(row.w3(), (0b00, 2));
        assert_eq!(row.next_state().label(), "");
    }

    #[test]
    fn worked_stream_decodes() {
        let table = DecodeTable::build();
        let bytes = [0xC7, 0x6B, 0xCB, 0xED, 0x98];
        let (values, state) = decode_bytes(&table, &bytes, DecoderState::default()).unwrap();
        assert_eq!(values, vec![1, 19, 14127, 1, 2]);
        assert_eq!(state.value, 0b100);
        assert_eq!(state.remainder, RemainderState::Empty);
    }

    #[test]
    fn single_byte_and_empty_inputs() {
        let table = DecodeTable::build();
        // "110" plus five zeros of padding: one value, pending zeros.
        let (values, state) = decode_bytes(&table, &[0xC0], DecoderState::default()).unwrap();
        assert_eq!(values, vec![1]);
        assert_eq!(state.value, 0b100000); // five padding zeros accumulated
        let (values, state) = decode_bytes(&table, &[], DecoderState::default()).unwrap();
        assert!(values.is_empty());
        assert_eq!(state, DecoderState::default());
    }

    #[test]
    fn table_size_and_field_widths() {
        let table = DecodeTable::build(); // width asserts live in the builder
        assert_eq!(table.byte_len(), 7 * 256 * 4);
        assert_eq!(table.to_bytes().len(), 7168);
    }

    #[test]
    fn zero_carry_rows_are_exactly_the_two_corner_cases() {
        let table = DecodeTable::build();
        let mut carriers = Vec::new();
        for state in ALL_STATES {
            for byte in 0..=255u8 {
                let row = table.row(state, byte);
                if row.f3() && row.carries_zero() {
                    carriers.push((state, byte));
                }
            }
        }
        assert_eq!(
            carriers,
            vec![
                (RemainderState::StartOnes, 0b01101100),
                (RemainderState::PendingZeroOnes, 0b01101100),
            ]
        );
    }

    #[test]
    fn run_one_and_start_one_rows_differ() {
        // The split state pair: same label, different continuations.
        let table = DecodeTable::build();
        let byte = 0b10011000;
        assert_ne!(
            table.row(RemainderState::RunOne, byte),
            table.row(RemainderState::StartOne, byte)
        );
    }

    #[test]
    fn differential_against_bitwise_decoder() {
        let table = DecodeTable::build();
        let spec = d2();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for round in 0..200 {
            let count = rng.gen_range(0..60);
            let values: Vec<u64> = (0..count)
                .map(|_| {
                    if rng.gen_bool(0.3) {
                        rng.gen_range(1..8)
                    } else {
                        rng.gen_range(1..1_000_000_000)
                    }
                })
                .collect();
            let bits = encode_stream(&spec, &values);
            assert_eq!(decode_stream(&spec, &bits).ok().as_ref(), Some(&values));

            // Whole-buffer decode.
            let bytes = bits.as_bytes();
            let (decoded, _) = decode_bytes(&table, bytes, DecoderState::default()).unwrap();
            assert_eq!(&decoded[..values.len()], &values[..], "round {round}");
            assert_eq!(decoded.len(), values.len(), "padding must not close words");

            // Chunked decode with random split points chains states.
            let mut state = DecoderState::default();
            let mut chunked = Vec::new();
            let mut offset = 0;
            while offset < bytes.len() {
                let take = rng.gen_range(1..=bytes.len() - offset);
                decode_bytes_into(
                    &table,
                    &bytes[offset..offset + take],
                    &mut state,
                    &mut chunked,
                )
                .unwrap();
                offset += take;
            }
            assert_eq!(chunked.len(), values.len());
            assert_eq!(chunked, values, "round {round} (chunked)");
        }
    }

    #[test]
    fn accumulator_overflow_is_reported() {
        let table = DecodeTable::build();
        // 70 content zeros overflow the 64-bit accumulator.
        let bits: BitString = std::iter::repeat_n(false, 70).collect();
        let err = decode_bytes(&table, bits.as_bytes(), DecoderState::default()).unwrap_err();
        assert!(matches!(err, ByteDecodeError::ValueTooWide(_)));
    }
}
