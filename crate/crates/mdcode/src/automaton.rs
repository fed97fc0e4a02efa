//! Finite-automaton machinery behind codeword enumeration and ranking.
//!
//! Each code family supplies a DFA whose accepting sink is reached exactly
//! when a complete codeword has been read. Counting paths of a given length
//! into the sink yields per-length codeword counts; walking the DFA while
//! comparing path counts unranks codewords in length-then-lexicographic
//! order (with 0 before 1).

use crate::bits::BitString;

/// A DFA over the binary alphabet with a single accepting sink.
///
/// `step` returns `None` for dead transitions. The sink has no outgoing
/// transitions: a word is accepted iff the machine sits in the sink after
/// its final bit.
pub(crate) trait BitDfa {
    fn state_count(&self) -> usize;
    fn start(&self) -> usize;
    fn sink(&self) -> usize;
    fn step(&self, state: usize, bit: bool) -> Option<usize>;
}

/// Path-count table: `ways[len][state]` = number of words of exactly `len`
/// bits leading from `state` into the sink.
///
/// Counts are kept in `u128`; the dominant root of every code here is below
/// 2, so lengths up to ~120 bits are safe and checked arithmetic guards the
/// rest.
pub(crate) struct WaysTable {
    transitions: Vec<[Option<usize>; 2]>,
    start: usize,
    sink: usize,
    ways: Vec<Vec<u128>>,
}

impl WaysTable {
    pub(crate) fn new(dfa: &dyn BitDfa) -> Self {
        let n = dfa.state_count();
        let transitions = (0..n)
            .map(|s| [dfa.step(s, false), dfa.step(s, true)])
            .collect();
        let mut row0 = vec![0u128; n];
        row0[dfa.sink()] = 1;
        Self {
            transitions,
            start: dfa.start(),
            sink: dfa.sink(),
            ways: vec![row0],
        }
    }

    pub(crate) fn ensure_len(&mut self, len: usize) {
        while self.ways.len() <= len {
            let prev = self.ways.last().unwrap();
            let mut row = vec![0u128; self.transitions.len()];
            for (state, targets) in self.transitions.iter().enumerate() {
                if state == self.sink {
                    continue;
                }
                let mut total = 0u128;
                for target in targets.iter().flatten() {
                    total = total
                        .checked_add(prev[*target])
                        .expect("path count overflow");
                }
                row[state] = total;
            }
            self.ways.push(row);
        }
    }

    /// Number of codewords of exactly `len` bits.
    pub(crate) fn count(&mut self, len: usize) -> u128 {
        self.ensure_len(len);
        self.ways[len][self.start]
    }

    /// Number of codewords of at most `len` bits.
    pub(crate) fn cumulative(&mut self, len: usize) -> u128 {
        (1..=len).map(|n| self.count(n)).sum()
    }

    /// The `rank`-th codeword (1-based) in length-then-lex order.
    pub(crate) fn unrank(&mut self, rank: u128) -> BitString {
        assert!(rank >= 1, "ranks are 1-based");
        let mut len = 1;
        let mut before = 0u128; // codewords strictly shorter than `len`
        loop {
            let here = self.count(len);
            if before + here >= rank {
                break;
            }
            before += here;
            len += 1;
        }
        let mut remaining = rank - before;
        let mut state = self.start;
        let mut word = BitString::with_capacity(len);
        for depth in (0..len).rev() {
            let zero_ways = self.transitions[state][0]
                .map(|t| self.ways[depth][t])
                .unwrap_or(0);
            if remaining <= zero_ways {
                word.push(false);
                state = self.transitions[state][0].unwrap();
            } else {
                remaining -= zero_ways;
                word.push(true);
                state = self.transitions[state][1].expect("rank exceeds codeword count");
            }
        }
        debug_assert_eq!(state, self.sink);
        word
    }

    /// The 1-based rank of `word`, or `None` when it is not a codeword.
    pub(crate) fn rank(&mut self, word: &BitString) -> Option<u128> {
        if word.is_empty() {
            return None;
        }
        self.ensure_len(word.len());
        let mut rank = self.cumulative(word.len() - 1) + 1;
        let mut state = self.start;
        for (i, bit) in word.iter().enumerate() {
            let depth = word.len() - 1 - i;
            if bit {
                if let Some(t) = self.transitions[state][0] {
                    rank += self.ways[depth][t];
                }
            }
            state = self.transitions[state][bit as usize]?;
        }
        (state == self.sink).then_some(rank)
    }

    /// All codewords of length at most `max_len`, in canonical order.
    pub(crate) fn enumerate(&mut self, max_len: usize) -> Vec<BitString> {
        self.ensure_len(max_len);
        let mut out = Vec::new();
        for len in 1..=max_len {
            let mut word = BitString::with_capacity(len);
            self.enumerate_into(self.start, len, &mut word, &mut out);
        }
        out
    }

    fn enumerate_into(
        &self,
        state: usize,
        depth: usize,
        word: &mut BitString,
        out: &mut Vec<BitString>,
    ) {
        if depth == 0 {
            if state == self.sink {
                out.push(word.clone());
            }
            return;
        }
        for bit in [false, true] {
            if let Some(t) = self.transitions[state][bit as usize] {
                if self.ways[depth - 1][t] > 0 {
                    let mark = word.len();
                    word.push(bit);
                    self.enumerate_into(t, depth - 1, word, out);
                    word.truncate(mark);
                }
            }
        }
    }
}
