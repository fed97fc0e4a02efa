//! Code-density mathematics: per-length codeword counts, Kraft sums,
//! growth-rate estimation, and average codeword length under a ranked
//! distribution.
//!
//! For a multi-delimiter code the number of codewords of length n obeys
//!
//! ```text
//! f(n) = T(n) + sum_{k=0}^{n-2} (2 - T(n-k)) · f(k)
//! ```
//!
//! where `T(n)` counts the terminal groups of length n (the multiplicity of
//! n among `m_i + 1` and `m_i + 2`). Counts are exact big integers; Kraft
//! partial sums are exact dyadic rationals, so the completeness limit of 1
//! is never blurred by floating point.
//!
//! ```
//! use mdcode::analysis::{cumulative_count, kraft_partial_sum};
//! use mdcode::code::Code;
//!
//! let d2: Code = "D2".parse().unwrap();
//! assert_eq!(cumulative_count(&d2, 15), 1906u32.into());
//! let kraft = kraft_partial_sum(&d2, 15);
//! assert_eq!(kraft.to_string(), "20369/32768");
//! ```

use std::fmt;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::code::Code;
use crate::fibonacci::fib_number;
use crate::multi_delimiter::CodeSpec;

/// Per-length counts of terminal groups: `T(n)` is the multiplicity of `n`
/// in the multiset `{m_1+1, m_1+2, …, m_t+1, m_t+2}` and is 0, 1 or 2.
#[derive(Debug, Clone)]
pub struct TerminalCensus {
    lengths: Vec<u32>,
}

impl TerminalCensus {
    pub fn new(spec: &CodeSpec) -> Self {
        let mut lengths: Vec<u32> = spec
            .delimiters()
            .iter()
            .flat_map(|&m| [m + 1, m + 2])
            .collect();
        lengths.sort_unstable();
        Self { lengths }
    }

    pub fn count(&self, n: usize) -> u32 {
        self.lengths.iter().filter(|&&l| l as usize == n).count() as u32
    }
}

/// Exact per-length and cumulative codeword counts of one code.
pub struct DensityProfile {
    code: Code,
    census: Option<TerminalCensus>,
    f: Vec<BigUint>,
    s: Vec<BigUint>,
    prefix: Vec<BigUint>, // prefix[n] = sum of f[0..=n], used by the recurrence
}

impl DensityProfile {
    pub fn new(code: Code) -> Self {
        let census = match &code {
            Code::MultiDelimiter(spec) => Some(TerminalCensus::new(spec)),
            Code::Fibonacci(_) => None,
        };
        Self {
            code,
            census,
            f: vec![BigUint::zero()],
            s: vec![BigUint::zero()],
            prefix: vec![BigUint::zero()],
        }
    }

    pub fn code(&self) -> &Code {
        &self.code
    }

    fn extend_to(&mut self, n: usize) {
        while self.f.len() <= n {
            let len = self.f.len();
            let value = match &self.code {
                Code::MultiDelimiter(_) => {
                    let census = self.census.as_ref().unwrap();
                    // f(len) = T(len) + sum_{k<=len-2} (2 - T(len-k)) f(k),
                    // evaluated with prefix sums: the factor is 2 except at
                    // the 2t terminal lengths.
                    let mut value = BigUint::from(census.count(len));
                    if len >= 2 {
                        value += &self.prefix[len - 2] << 1;
                        for &t_len in &census.lengths {
                            let t_len = t_len as usize;
                            if t_len <= len {
                                value -= &self.f[len - t_len];
                            }
                        }
                    }
                    value
                }
                Code::Fibonacci(spec) => {
                    let m = spec.order() as usize;
                    if len < m {
                        BigUint::zero()
                    } else {
                        fib_number(spec.order(), (len - m + 1) as u64)
                    }
                }
            };
            self.s.push(&self.s[len - 1] + &value);
            self.prefix.push(&self.prefix[len - 1] + &value);
            self.f.push(value);
        }
    }

    /// `f(n)`: codewords of exactly `n` bits.
    pub fn count(&mut self, n: usize) -> BigUint {
        self.extend_to(n);
        self.f[n].clone()
    }

    /// `s(n)`: codewords of at most `n` bits.
    pub fn cumulative(&mut self, n: usize) -> BigUint {
        self.extend_to(n);
        self.s[n].clone()
    }

    /// Iterator over `(length, f(length))` for lengths `1..=max`.
    pub fn counts_up_to(&mut self, max: usize) -> Vec<BigUint> {
        self.extend_to(max);
        self.f[1..=max].to_vec()
    }
}

/// `f(n)` for one code; convenience over [`DensityProfile`].
pub fn count_codewords(code: &Code, n: usize) -> BigUint {
    DensityProfile::new(code.clone()).count(n)
}

/// `s(n)` for one code.
pub fn cumulative_count(code: &Code, n: usize) -> BigUint {
    DensityProfile::new(code.clone()).cumulative(n)
}

/// Verifies the specialized D2 recurrences against the general counts:
/// `f(n) = f(n-1) + f(n-2) + f(n-3) + f(n-6)` for `7 <= n <= n_max` and the
/// same shape for the cumulative counts from `n = 6` on.
pub fn d2_recurrence_check(n_max: usize) -> bool {
    assert!(n_max >= 7, "the recurrence check needs n_max >= 7");
    let d2: Code = Code::MultiDelimiter("D2".parse().unwrap());
    let mut profile = DensityProfile::new(d2);
    profile.extend_to(n_max);
    let term = |v: &[BigUint], n: usize, back: usize| {
        if n >= back {
            v[n - back].clone()
        } else {
            BigUint::zero()
        }
    };
    for n in 7..=n_max {
        let expect = term(&profile.f, n, 1)
            + term(&profile.f, n, 2)
            + term(&profile.f, n, 3)
            + term(&profile.f, n, 6);
        if profile.f[n] != expect {
            return false;
        }
    }
    for n in 6..=n_max {
        let expect = term(&profile.s, n, 1)
            + term(&profile.s, n, 2)
            + term(&profile.s, n, 3)
            + term(&profile.s, n, 6);
        if profile.s[n] != expect {
            return false;
        }
    }
    true
}

/// An exact dyadic rational `numerator / 2^log2_denominator`.
#[derive(Clone, PartialEq, Eq)]
pub struct KraftSum {
    numerator: BigUint,
    log2_denominator: usize,
}

impl KraftSum {
    pub fn numerator(&self) -> &BigUint {
        &self.numerator
    }

    pub fn log2_denominator(&self) -> usize {
        self.log2_denominator
    }

    pub fn is_at_most_one(&self) -> bool {
        self.numerator <= self.denominator()
    }

    pub fn is_one(&self) -> bool {
        self.numerator == self.denominator()
    }

    fn denominator(&self) -> BigUint {
        BigUint::from(1u32) << self.log2_denominator
    }

    /// Is `1 - self <= bound_num / bound_den`? Exact integer comparison.
    pub fn gap_to_one_at_most(&self, bound_num: &BigUint, bound_den: &BigUint) -> bool {
        let den = self.denominator();
        if self.numerator >= den {
            return true;
        }
        (&den - &self.numerator) * bound_den <= bound_num * den
    }

    pub fn to_f64(&self) -> f64 {
        // Scale to 64 fractional bits so huge denominators stay finite.
        let scaled: BigUint = (&self.numerator << 64usize) >> self.log2_denominator;
        scaled.to_f64().unwrap_or(f64::INFINITY) / 2f64.powi(64)
    }
}

impl fmt::Display for KraftSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Reduced form: cancel shared powers of two.
        let trailing = self
            .numerator
            .trailing_zeros()
            .map(|z| z as usize)
            .unwrap_or(self.log2_denominator)
            .min(self.log2_denominator);
        write!(
            f,
            "{}/{}",
            &self.numerator >> trailing,
            BigUint::from(1u32) << (self.log2_denominator - trailing)
        )
    }
}

impl fmt::Debug for KraftSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KraftSum({self})")
    }
}

/// The exact partial Kraft–McMillan sum `sum_{n<=n_max} f(n) · 2^(-n)`.
///
/// Monotone nondecreasing in `n_max` and bounded by 1; for complete codes it
/// converges to 1.
pub fn kraft_partial_sum(code: &Code, n_max: usize) -> KraftSum {
    let mut profile = DensityProfile::new(code.clone());
    profile.extend_to(n_max);
    let mut numerator = BigUint::zero();
    for n in 1..=n_max {
        numerator += &profile.f[n] << (n_max - n);
    }
    KraftSum {
        numerator,
        log2_denominator: n_max,
    }
}

/// Estimates the growth base of the counts as the ratio `f(n+1)/f(n)`,
/// which converges to the dominant root of the count recurrence.
pub fn growth_rate(code: &Code, n_probe: usize) -> f64 {
    let mut profile = DensityProfile::new(code.clone());
    profile.extend_to(n_probe + 1);
    let below = &profile.f[n_probe];
    let above = &profile.f[n_probe + 1];
    assert!(!below.is_zero(), "no codewords of length {n_probe}");
    // Both counts stay far below f64 range for any practical probe.
    above.to_f64().unwrap() / below.to_f64().unwrap()
}

/// Average codeword length of the rank-ordered code under a descending
/// probability distribution, streamed from per-length counts.
///
/// Probabilities must be nonnegative, sorted descending, and sum to at most
/// 1 + 1e-9.
pub fn avg_codeword_length(code: &Code, probabilities: &[f64]) -> f64 {
    let mut total = 0.0f64;
    for (i, &p) in probabilities.iter().enumerate() {
        assert!(p >= 0.0, "probabilities must be nonnegative");
        if i > 0 {
            assert!(
                probabilities[i - 1] >= p,
                "probabilities must be sorted descending"
            );
        }
        total += p;
    }
    assert!(total <= 1.0 + 1e-9, "probabilities sum to {total} > 1");

    let mut profile = DensityProfile::new(code.clone());
    let mut avg = 0.0f64;
    let mut compensation = 0.0f64; // Neumaier correction for long tails
    let mut next_rank = 0usize; // ranks consumed so far
    let mut len = 0usize;
    while next_rank < probabilities.len() {
        len += 1;
        let here = profile.count(len);
        if here.is_zero() {
            continue;
        }
        let take = here
            .to_usize()
            .unwrap_or(usize::MAX)
            .min(probabilities.len() - next_rank);
        let mut mass = 0.0f64;
        for &p in &probabilities[next_rank..next_rank + take] {
            mass += p;
        }
        let term = mass * len as f64;
        let sum = avg + term;
        compensation += if avg.abs() >= term.abs() {
            (avg - sum) + term
        } else {
            (term - sum) + avg
        };
        avg = sum;
        next_rank += take;
    }
    avg + compensation
}

/// The exact Zipf(s = 1) distribution over ranks `1..=n`.
pub fn zipf_probabilities(n: usize) -> Vec<f64> {
    let harmonic: f64 = (1..=n).map(|i| 1.0 / i as f64).sum();
    (1..=n).map(|i| 1.0 / (i as f64 * harmonic)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(s: &str) -> Code {
        s.parse().unwrap()
    }

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn terminal_census_counts_multiplicities() {
        let spec: CodeSpec = "D2,3".parse().unwrap();
        let census = TerminalCensus::new(&spec);
        // Lengths {3, 4} and {4, 5}: T(4) = 2.
        assert_eq!(census.count(2), 0);
        assert_eq!(census.count(3), 1);
        assert_eq!(census.count(4), 2);
        assert_eq!(census.count(5), 1);
        assert_eq!(census.count(6), 0);
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_codewords(&code("D2"), 3), big(1));
        assert_eq!(count_codewords(&code("D2"), 7), big(6));
        assert_eq!(count_codewords(&code("D2,3"), 5), big(3));
        assert_eq!(count_codewords(&code("Fib3"), 7), big(7));
    }

    #[test]
    fn cumulative_examples() {
        assert_eq!(cumulative_count(&code("D2"), 15), big(1906));
        assert_eq!(cumulative_count(&code("D2,3,5"), 8), big(37));
        assert_eq!(cumulative_count(&code("D3"), 8), big(15));
        assert_eq!(cumulative_count(&code("Fib3"), 15), big(2031));
    }

    #[test]
    fn prefix_sum_evaluation_matches_literal_eq2() {
        // The production evaluation regroups the quadratic sum through
        // prefix sums; check it against the literal formula.
        for name in ["D1", "D2", "D2,3", "D2,4,5"] {
            let spec: CodeSpec = name.parse().unwrap();
            let census = TerminalCensus::new(&spec);
            let mut profile = DensityProfile::new(code(name));
            let mut f: Vec<BigUint> = vec![BigUint::zero()];
            for n in 1..=200usize {
                let mut value = BigUint::from(census.count(n));
                for (k, f_k) in f.iter().enumerate().take(n.saturating_sub(2) + 1) {
                    value += big(u64::from(2 - census.count(n - k))) * f_k;
                }
                f.push(value.clone());
                assert_eq!(profile.count(n), value, "{name} n={n}");
            }
        }
    }

    #[test]
    fn counts_match_enumeration() {
        use crate::multi_delimiter::{enumerate, CodeSpec};
        for name in ["D1", "D1,2", "D2", "D2,3", "D2,3,5"] {
            let spec: CodeSpec = name.parse().unwrap();
            let words = enumerate(&spec, 12);
            let mut profile = DensityProfile::new(code(name));
            for len in 1..=12usize {
                let expected = words.iter().filter(|w| w.len() == len).count();
                assert_eq!(profile.count(len), big(expected as u64), "{name} len={len}");
            }
        }
    }

    #[test]
    fn d2_recurrences_hold() {
        assert!(d2_recurrence_check(7));
        assert!(d2_recurrence_check(15));
        assert_eq!(count_codewords(&code("D2"), 15), big(885));
    }

    #[test]
    #[should_panic(expected = "n_max >= 7")]
    fn d2_recurrence_check_rejects_small_ranges() {
        d2_recurrence_check(6);
    }

    #[test]
    fn kraft_sums_are_exact() {
        let d2 = code("D2");
        let k3 = kraft_partial_sum(&d2, 3);
        assert_eq!(k3.to_string(), "1/8");
        let k15 = kraft_partial_sum(&d2, 15);
        assert_eq!(k15.numerator(), &big(20369));
        assert_eq!(k15.to_string(), "20369/32768");
        assert!((k15.to_f64() - 0.6216).abs() < 1e-3);
        assert!(k15.is_at_most_one());
        assert!(!k15.is_one());

        // Monotone and bounded.
        let mut last = BigUint::zero();
        for n in 1..=40 {
            let k = kraft_partial_sum(&d2, n);
            assert!(k.is_at_most_one());
            let scaled = k.numerator() << (40 - n);
            assert!(scaled >= last);
            last = scaled;
        }
    }

    #[test]
    fn kraft_gap_comparison() {
        // The gap decays like (growth/2)^n ~ 0.933^n: about 1e-6 at n = 200.
        let k = kraft_partial_sum(&code("D2"), 200);
        assert!(k.gap_to_one_at_most(&big(1), &big(100_000)));
        assert!(!k.gap_to_one_at_most(&big(1), &big(10_000_000)));
        assert!(!k.gap_to_one_at_most(&big(1), &(big(1) << 200)));
    }

    #[test]
    fn kraft_gap_decays_at_the_growth_rate() {
        // 1 - sum shrinks like (growth/2)^n; check the decay over 20
        // lengths against that prediction within an order of magnitude.
        for name in ["D2", "D2,3", "Fib3"] {
            let c = code(name);
            let base = growth_rate(&c, 256) / 2.0;
            let gap = |n: usize| 1.0 - kraft_partial_sum(&c, n).to_f64();
            let measured = gap(120) / gap(100);
            let predicted = base.powi(20);
            assert!(
                measured / predicted < 10.0 && predicted / measured < 10.0,
                "{name}: measured {measured:.3e}, predicted {predicted:.3e}"
            );
        }
    }

    #[test]
    fn growth_rates_match_published_bases() {
        assert!((growth_rate(&code("D2"), 256) - 1.867).abs() < 1e-3);
        assert!((growth_rate(&code("Fib3"), 256) - 1.839).abs() < 1e-3);
        assert!((growth_rate(&code("D2,3,5"), 256) - 1.755).abs() < 2e-3);
    }

    #[test]
    fn average_length_examples() {
        let d2 = code("D2");
        // Uniform over the first four codewords: lengths 3, 4, 5, 5.
        let avg = avg_codeword_length(&d2, &[0.25; 4]);
        assert!((avg - 4.25).abs() < 1e-12);
        // Point mass on rank 1.
        let avg = avg_codeword_length(&d2, &[1.0]);
        assert!((avg - 3.0).abs() < 1e-12);
        // Zipf at vocabulary scale: the three-delimiter code wins.
        let zipf = zipf_probabilities(10_000);
        let d235 = avg_codeword_length(&code("D2,3,5"), &zipf);
        let fib3 = avg_codeword_length(&code("Fib3"), &zipf);
        assert!(d235 < fib3, "{d235} vs {fib3}");
    }

    #[test]
    #[should_panic(expected = "sorted descending")]
    fn average_length_rejects_unsorted() {
        avg_codeword_length(&code("D2"), &[0.2, 0.5]);
    }

    #[test]
    fn zipf_is_a_distribution() {
        let z = zipf_probabilities(1000);
        let total: f64 = z.iter().sum();
        assert!((total - 1.0).abs() < 1e-9);
        assert!(z.windows(2).all(|w| w[0] >= w[1]));
    }
}
