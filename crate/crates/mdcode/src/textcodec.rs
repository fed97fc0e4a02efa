//! Lossless word-based text compression.
//!
//! Text splits into alternating runs of word bytes (ASCII letters and
//! digits) and separator bytes; both kinds are ordinary tokens of a single
//! vocabulary, so concatenating the tokens reproduces the input byte for
//! byte. Tokens are ranked by descending frequency and replaced by the
//! rank-ordered codewords of the chosen code. The container is
//! self-describing: magic, code name, token count, the vocabulary in rank
//! order, and the payload with its exact bit length (padding bits are never
//! decoded).
//!
//! ```
//! use mdcode::textcodec::{compress, decompress};
//!
//! let code = "D2,3,5".parse().unwrap();
//! let container = compress(b"to be or not to be", &code);
//! assert_eq!(decompress(&container).unwrap(), b"to be or not to be");
//! ```

use std::collections::HashMap;

use thiserror::Error;

use crate::analysis;
use crate::bits::BitString;
use crate::code::Code;

pub const MAGIC: &[u8; 4] = b"MDC1";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ContainerError {
    #[error("bad magic bytes (expected \"MDC1\")")]
    BadMagic,
    #[error("container truncated while reading {0}")]
    Truncated(&'static str),
    #[error("container field {0} is malformed")]
    Malformed(&'static str),
    #[error("payload does not decode to {expected} tokens (got {got})")]
    TokenCountMismatch { expected: u64, got: u64 },
    #[error("payload refers to rank {0} outside the vocabulary")]
    RankOutOfRange(u64),
    #[error("trailing bits after the last codeword")]
    TrailingBits,
}

/// Splits bytes into alternating maximal runs of word bytes
/// (ASCII alphanumeric) and separator bytes. Concatenation of the tokens is
/// the identity.
pub fn tokenize(text: &[u8]) -> Vec<&[u8]> {
    let mut tokens = Vec::new();
    let mut start = 0;
    while start < text.len() {
        let wordish = text[start].is_ascii_alphanumeric();
        let mut end = start + 1;
        while end < text.len() && text[end].is_ascii_alphanumeric() == wordish {
            end += 1;
        }
        tokens.push(&text[start..end]);
        start = end;
    }
    tokens
}

/// Frequency-ranked token list: rank 1 is the most frequent token, ties
/// break by ascending token bytes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    tokens: Vec<Vec<u8>>,
    ranks: HashMap<Vec<u8>, u64>,
}

impl Vocabulary {
    /// Ranks the distinct tokens of a token stream by descending frequency.
    pub fn rank_by_frequency(stream: &[&[u8]]) -> Self {
        let mut freq: HashMap<&[u8], u64> = HashMap::new();
        for &token in stream {
            *freq.entry(token).or_insert(0) += 1;
        }
        let mut entries: Vec<(&[u8], u64)> = freq.into_iter().collect();
        entries.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        Self::from_ranked(entries.into_iter().map(|(t, _)| t.to_vec()).collect())
    }

    /// Builds from an already rank-ordered token list.
    pub fn from_ranked(tokens: Vec<Vec<u8>>) -> Self {
        let ranks = tokens
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i as u64 + 1))
            .collect();
        Self { tokens, ranks }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn rank_of(&self, token: &[u8]) -> Option<u64> {
        self.ranks.get(token).copied()
    }

    pub fn token(&self, rank: u64) -> Option<&[u8]> {
        self.tokens.get(rank as usize - 1).map(|t| t.as_slice())
    }

    pub fn tokens(&self) -> &[Vec<u8>] {
        &self.tokens
    }

    /// The empirical distribution in rank order, normalized to sum 1.
    pub fn probabilities(&self, stream: &[&[u8]]) -> Vec<f64> {
        let mut counts = vec![0u64; self.tokens.len()];
        for &token in stream {
            if let Some(rank) = self.rank_of(token) {
                counts[rank as usize - 1] += 1;
            }
        }
        let total: u64 = counts.iter().sum();
        counts
            .iter()
            .map(|&c| c as f64 / total.max(1) as f64)
            .collect()
    }
}

/// A compressed document: everything needed to restore the original bytes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Container {
    pub code: Code,
    pub vocabulary: Vocabulary,
    pub token_count: u64,
    pub payload: BitString,
}

impl Container {
    /// Mean bits per token of the payload.
    pub fn average_codeword_length(&self) -> f64 {
        if self.token_count == 0 {
            return 0.0;
        }
        self.payload.len() as f64 / self.token_count as f64
    }

    /// Serializes to the on-disk format.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(MAGIC);
        let name = self.code.to_string().into_bytes();
        out.push(name.len() as u8);
        out.extend_from_slice(&name);
        out.extend_from_slice(&(self.vocabulary.len() as u64).to_le_bytes());
        for token in self.vocabulary.tokens() {
            out.extend_from_slice(&(token.len() as u32).to_le_bytes());
            out.extend_from_slice(token);
        }
        out.extend_from_slice(&self.token_count.to_le_bytes());
        out.extend_from_slice(&(self.payload.len() as u64).to_le_bytes());
        out.extend_from_slice(self.payload.as_bytes());
        out
    }

    /// Parses the on-disk format, validating structure but not the payload.
    pub fn from_bytes(data: &[u8]) -> Result<Self, ContainerError> {
        let mut pos = 0usize;
        let take =
            |pos: &mut usize, n: usize, what: &'static str| -> Result<&[u8], ContainerError> {
                let end = pos.checked_add(n).ok_or(ContainerError::Truncated(what))?;
                if end > data.len() {
                    return Err(ContainerError::Truncated(what));
                }
                let slice = &data[*pos..end];
                *pos = end;
                Ok(slice)
            };
        if take(&mut pos, 4, "magic")? != MAGIC {
            return Err(ContainerError::BadMagic);
        }
        let name_len = take(&mut pos, 1, "code name length")?[0] as usize;
        let name = std::str::from_utf8(take(&mut pos, name_len, "code name")?)
            .map_err(|_| ContainerError::Malformed("code name"))?;
        let code: Code = name
            .parse()
            .map_err(|_| ContainerError::Malformed("code name"))?;
        let vocab_len =
            u64::from_le_bytes(take(&mut pos, 8, "vocabulary size")?.try_into().unwrap());
        let mut tokens = Vec::new();
        for _ in 0..vocab_len {
            let token_len =
                u32::from_le_bytes(take(&mut pos, 4, "token length")?.try_into().unwrap());
            tokens.push(take(&mut pos, token_len as usize, "token bytes")?.to_vec());
        }
        let token_count = u64::from_le_bytes(take(&mut pos, 8, "token count")?.try_into().unwrap());
        let bit_len =
            u64::from_le_bytes(take(&mut pos, 8, "payload bit length")?.try_into().unwrap())
                as usize;
        let payload_bytes = take(&mut pos, bit_len.div_ceil(8), "payload")?.to_vec();
        if pos != data.len() {
            return Err(ContainerError::Malformed("trailing bytes"));
        }
        let payload = BitString::from_bytes_with_len(payload_bytes, bit_len)
            .map_err(|_| ContainerError::Malformed("payload padding"))?;
        Ok(Self {
            code,
            vocabulary: Vocabulary::from_ranked(tokens),
            token_count,
            payload,
        })
    }
}

/// Compresses `text` under `code`: tokenize, rank by frequency, emit the
/// rank-ordered codeword of every token.
pub fn compress(text: &[u8], code: &Code) -> Container {
    let stream = tokenize(text);
    let vocabulary = Vocabulary::rank_by_frequency(&stream);
    let mut book = code.codebook();
    // Unrank each distinct codeword once; tokens repeat.
    let codewords: Vec<BitString> = (1..=vocabulary.len() as u64)
        .map(|rank| book.codeword(rank))
        .collect();
    let mut payload = BitString::new();
    for token in &stream {
        let rank = vocabulary
            .rank_of(token)
            .expect("token is in the vocabulary");
        payload.extend_from(&codewords[rank as usize - 1]);
    }
    Container {
        code: code.clone(),
        vocabulary,
        token_count: stream.len() as u64,
        payload,
    }
}

/// Restores the exact original bytes from a container.
pub fn decompress(container: &Container) -> Result<Vec<u8>, ContainerError> {
    let (words, tail) = container.code.split_stream(&container.payload);
    if tail != container.payload.len() {
        return Err(ContainerError::TrailingBits);
    }
    if words.len() as u64 != container.token_count {
        return Err(ContainerError::TokenCountMismatch {
            expected: container.token_count,
            got: words.len() as u64,
        });
    }
    let mut book = container.code.codebook();
    let mut ranks: HashMap<BitString, u64> = HashMap::new();
    let mut out = Vec::new();
    for (start, end) in words {
        let word = container.payload.slice(start, end);
        let rank = match ranks.get(&word) {
            Some(&r) => r,
            None => {
                let r = book
                    .rank(&word)
                    .ok_or(ContainerError::Malformed("payload codeword"))?;
                ranks.insert(word.clone(), r);
                r
            }
        };
        let token = container
            .vocabulary
            .token(rank)
            .ok_or(ContainerError::RankOutOfRange(rank))?;
        out.extend_from_slice(token);
    }
    Ok(out)
}

/// One line of the corpus report.
#[derive(Debug, Clone)]
pub struct CodeReport {
    pub code: Code,
    pub vocabulary_size: usize,
    pub average_codeword_length: f64,
    /// Percent difference of the average length against the first code.
    pub delta_vs_first_pct: f64,
    /// Zero-order entropy of the token distribution, bits per token.
    pub entropy_bits: f64,
}

/// Per-code compression statistics for one corpus, computed exactly from
/// the empirical distribution and the codes' count sequences.
pub fn corpus_stats(text: &[u8], codes: &[Code]) -> Vec<CodeReport> {
    let stream = tokenize(text);
    let vocabulary = Vocabulary::rank_by_frequency(&stream);
    let probabilities = vocabulary.probabilities(&stream);
    let entropy_bits = probabilities
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum();
    let mut reports: Vec<CodeReport> = Vec::new();
    for code in codes {
        let average = if stream.is_empty() {
            0.0
        } else {
            analysis::avg_codeword_length(code, &probabilities)
        };
        let baseline = reports
            .first()
            .map_or(average, |r| r.average_codeword_length);
        reports.push(CodeReport {
            code: code.clone(),
            vocabulary_size: vocabulary.len(),
            average_codeword_length: average,
            delta_vs_first_pct: if baseline == 0.0 {
                0.0
            } else {
                (average - baseline) / baseline * 100.0
            },
            entropy_bits,
        });
    }
    reports
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn code(s: &str) -> Code {
        s.parse().unwrap()
    }

    #[test]
    fn tokenizer_alternates_and_reassembles() {
        let tokens = tokenize(b"to be");
        assert_eq!(tokens, vec![&b"to"[..], b" ", b"be"]);
        assert_eq!(tokenize(b""), Vec::<&[u8]>::new());
        assert_eq!(tokenize(b"a,a"), vec![&b"a"[..], b",", b"a"]);
        assert_eq!(tokenize(b"  x9  "), vec![&b"  "[..], b"x9", b"  "]);
    }

    #[test]
    fn vocabulary_ranks_by_frequency_then_bytes() {
        let text = b"b a b a c b";
        let stream = tokenize(text);
        let vocab = Vocabulary::rank_by_frequency(&stream);
        // " " appears 5 times, "b" 3, "a" 2, "c" 1.
        assert_eq!(vocab.token(1), Some(&b" "[..]));
        assert_eq!(vocab.token(2), Some(&b"b"[..]));
        assert_eq!(vocab.token(3), Some(&b"a"[..]));
        assert_eq!(vocab.token(4), Some(&b"c"[..]));
        assert_eq!(vocab.rank_of(b"c"), Some(4));
        // Ties break by ascending token bytes.
        let stream = tokenize(b"z y");
        let vocab = Vocabulary::rank_by_frequency(&stream);
        assert_eq!(vocab.token(2), Some(&b"y"[..]));
        assert_eq!(vocab.token(3), Some(&b"z"[..]));
    }

    #[test]
    fn single_token_payload() {
        let container = compress(b"hello", &code("D2"));
        assert_eq!(container.payload.to_string(), "110");
        assert!((container.average_codeword_length() - 3.0).abs() < 1e-12);
        assert_eq!(decompress(&container).unwrap(), b"hello");
    }

    #[test]
    fn two_equal_tokens_average() {
        // Two distinct, equally frequent tokens: ranks 1 and 2, lengths 3+4.
        let container = compress(b"a ", &code("D2"));
        assert_eq!(container.token_count, 2);
        assert_eq!(container.payload.len(), 7);
        assert!((container.average_codeword_length() - 3.5).abs() < 1e-12);
        assert_eq!(decompress(&container).unwrap(), b"a ");
    }

    #[test]
    fn roundtrip_through_bytes_for_both_families() {
        let text: &[u8] = b"it was the best of times, it was the worst of times";
        for name in ["D2", "D2,3", "Fib3"] {
            let container = compress(text, &code(name));
            let bytes = container.to_bytes();
            let parsed = Container::from_bytes(&bytes).unwrap();
            assert_eq!(parsed, container, "{name}");
            assert_eq!(decompress(&parsed).unwrap(), text, "{name}");
        }
    }

    #[test]
    fn empty_input_roundtrips() {
        let container = compress(b"", &code("D2"));
        assert_eq!(container.token_count, 0);
        assert_eq!(container.average_codeword_length(), 0.0);
        let parsed = Container::from_bytes(&container.to_bytes()).unwrap();
        assert_eq!(decompress(&parsed).unwrap(), b"");
    }

    #[test]
    fn container_error_paths() {
        assert_eq!(
            Container::from_bytes(b"XXXX"),
            Err(ContainerError::BadMagic)
        );
        let good = compress(b"a b", &code("D2")).to_bytes();
        assert!(matches!(
            Container::from_bytes(&good[..good.len() - 1]),
            Err(ContainerError::Truncated(_))
        ));
        let mut extra = good.clone();
        extra.push(0);
        assert!(matches!(
            Container::from_bytes(&extra),
            Err(ContainerError::Malformed("trailing bytes"))
        ));
        // Corrupt the payload bit length so codewords are cut mid-way.
        let container = compress(b"one two three", &code("D2"));
        let mut chopped = container.clone();
        chopped.payload.truncate(container.payload.len() - 2);
        chopped.token_count = container.token_count;
        assert!(decompress(&chopped).is_err());
    }

    #[test]
    fn payload_average_matches_analysis_route() {
        let text = b"the quick brown fox jumps over the lazy dog the fox";
        for name in ["D2", "D2,3,5", "Fib3"] {
            let code = code(name);
            let container = compress(text, &code);
            let stream = tokenize(text);
            let vocab = Vocabulary::rank_by_frequency(&stream);
            let probs = vocab.probabilities(&stream);
            let expected = analysis::avg_codeword_length(&code, &probs);
            assert!(
                (container.average_codeword_length() - expected).abs() < 1e-9,
                "{name}: payload {} vs analysis {expected}",
                container.average_codeword_length()
            );
        }
    }

    #[test]
    fn monotone_assignment() {
        // More frequent tokens never get longer codewords.
        let text = b"aaa aaa aaa bb bb c";
        let container = compress(text, &code("D2,3"));
        let stream = tokenize(text);
        let vocab = Vocabulary::rank_by_frequency(&stream);
        let mut book = container.code.codebook();
        let mut last_len = 0;
        for rank in 1..=vocab.len() as u64 {
            let len = book.codeword(rank).len();
            assert!(len >= last_len);
            last_len = len;
        }
    }

    #[test]
    fn stats_report_shape() {
        let text = b"a a a b b c";
        let codes: Vec<Code> = ["Fib3", "D2", "D2,3,5"].iter().map(|s| code(s)).collect();
        let reports = corpus_stats(text, &codes);
        assert_eq!(reports.len(), 3);
        assert_eq!(reports[0].delta_vs_first_pct, 0.0);
        assert!(reports.iter().all(|r| r.vocabulary_size == 4));
        assert!(reports[0].entropy_bits > 0.0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn fuzz_roundtrip(text in proptest::collection::vec(any::<u8>(), 0..300)) {
            for name in ["D2", "Fib3"] {
                let code: Code = name.parse().unwrap();
                let container = compress(&text, &code);
                let bytes = container.to_bytes();
                let parsed = Container::from_bytes(&bytes).unwrap();
                prop_assert_eq!(decompress(&parsed).unwrap(), text.clone());
            }
        }
    }
}
