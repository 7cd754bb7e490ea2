//! Falsifiers for prefix independence and sub-mixing of payoffs on infinite words.
//!
//! Both properties quantify over all infinite words and all partitions of ℕ,
//! so the testers only search for counterexamples. Words are either lassos or
//! [`BlockWord`]s, for which the relevant payoffs have exact closed forms.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::lasso::Lasso;
use crate::random::{random_lasso, rng_from_seed, LassoShape};
use crate::rational::{format_rational, Rational};

/// `x^1 y^c x^(c²) y^(c³) …`: two letters alternating in blocks of geometrically
/// growing length. Running averages over such a word keep oscillating.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockWord {
    pub first: Rational,
    pub second: Rational,
    pub ratio: u32,
}

impl BlockWord {
    pub fn new(first: Rational, second: Rational, ratio: u32) -> Self {
        assert!(ratio >= 2, "block ratio must be at least 2");
        BlockWord { first, second, ratio }
    }

    /// Limit of the running average at the ends of the blocks of `x`.
    fn block_end_average(&self, x: &Rational, y: &Rational) -> Rational {
        let c = Rational::from_integer(self.ratio.into());
        (&c * x + y) / (c + Rational::one())
    }

    pub fn liminf_average(&self) -> Rational {
        let a = self.block_end_average(&self.first, &self.second);
        let b = self.block_end_average(&self.second, &self.first);
        a.min(b)
    }

    pub fn limsup_average(&self) -> Rational {
        let a = self.block_end_average(&self.first, &self.second);
        let b = self.block_end_average(&self.second, &self.first);
        a.max(b)
    }

    /// The first `blocks` blocks, spelled out.
    pub fn blocks(&self, blocks: u32) -> Vec<Rational> {
        let mut out = Vec::new();
        let mut len = 1usize;
        for k in 0..blocks {
            let letter = if k % 2 == 0 { &self.first } else { &self.second };
            out.extend(std::iter::repeat(letter.clone()).take(len));
            len *= self.ratio as usize;
        }
        out
    }
}

impl fmt::Display for BlockWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (x, y) = (format_rational(&self.first), format_rational(&self.second));
        let c = self.ratio;
        write!(f, "({x})^1 ({y})^{c} ({x})^{} ({y})^{} … (block ratio {c})", c * c, c * c * c)
    }
}

/// An infinite word the testers can evaluate exactly.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Word {
    Lasso(Lasso),
    Blocks(BlockWord),
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Word::Lasso(l) => write!(f, "{l}"),
            Word::Blocks(b) => write!(f, "{b}"),
        }
    }
}

/// Payoffs on infinite words of rational letters.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum WordPayoff {
    /// `limsup` of running averages.
    LimsupMean,
    /// `liminf` of running averages.
    LiminfMean,
    /// 1 if the largest letter occurring infinitely often is an even integer, else 0.
    Parity,
    /// The first letter. Depends on the prefix by design.
    FirstLetter,
    Negated(Box<WordPayoff>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown word payoff '{0}' (expected mean, liminf-mean, parity, first-letter, optionally prefixed by 'neg-')")]
pub struct UnknownWordPayoff(pub String);

fn even_indicator(q: &Rational) -> Rational {
    if q.is_integer() && q.to_integer().is_even() {
        Rational::one()
    } else {
        Rational::zero()
    }
}

impl WordPayoff {
    pub fn negated(self) -> WordPayoff {
        match self {
            WordPayoff::Negated(inner) => *inner,
            p => WordPayoff::Negated(Box::new(p)),
        }
    }

    pub fn on_lasso(&self, w: &Lasso) -> Rational {
        match self {
            WordPayoff::LimsupMean | WordPayoff::LiminfMean => w.cycle_average(),
            WordPayoff::Parity => even_indicator(w.cycle_max()),
            WordPayoff::FirstLetter => w.letter(0).clone(),
            WordPayoff::Negated(p) => -p.on_lasso(w),
        }
    }

    pub fn on_blocks(&self, w: &BlockWord) -> Rational {
        match self {
            WordPayoff::LimsupMean => w.limsup_average(),
            WordPayoff::LiminfMean => w.liminf_average(),
            WordPayoff::Parity => even_indicator(std::cmp::max(&w.first, &w.second)),
            WordPayoff::FirstLetter => w.first.clone(),
            WordPayoff::Negated(p) => -p.on_blocks(w),
        }
    }

    pub fn on_word(&self, w: &Word) -> Rational {
        match w {
            Word::Lasso(l) => self.on_lasso(l),
            Word::Blocks(b) => self.on_blocks(b),
        }
    }
}

impl fmt::Display for WordPayoff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WordPayoff::LimsupMean => f.write_str("mean"),
            WordPayoff::LiminfMean => f.write_str("liminf-mean"),
            WordPayoff::Parity => f.write_str("parity"),
            WordPayoff::FirstLetter => f.write_str("first-letter"),
            WordPayoff::Negated(p) => write!(f, "neg-{p}"),
        }
    }
}

impl FromStr for WordPayoff {
    type Err = UnknownWordPayoff;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("neg-") {
            return Ok(rest.parse::<WordPayoff>()?.negated());
        }
        match s {
            "mean" | "limsup-mean" => Ok(WordPayoff::LimsupMean),
            "liminf-mean" => Ok(WordPayoff::LiminfMean),
            "parity" => Ok(WordPayoff::Parity),
            "first-letter" | "first-reward" => Ok(WordPayoff::FirstLetter),
            _ => Err(UnknownWordPayoff(s.to_string())),
        }
    }
}

/// A word whose value changes when its first letters are dropped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixWitness {
    pub word: Lasso,
    pub dropped: usize,
    pub value: Rational,
    pub dropped_value: Rational,
}

impl fmt::Display for PrefixWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "f({}) = {} but dropping {} letter(s) gives f({}) = {}",
            self.word,
            format_rational(&self.value),
            self.dropped,
            self.word.drop_prefix(self.dropped),
            format_rational(&self.dropped_value)
        )
    }
}

/// A shuffle whose value exceeds the values of both of its parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixingWitness {
    pub shuffle: Word,
    pub first: Word,
    pub second: Word,
    /// How positions are assigned to the two parts.
    pub partition: String,
    pub value: Rational,
    pub first_value: Rational,
    pub second_value: Rational,
}

impl fmt::Display for MixingWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "f({}) = {} exceeds max(f({}) = {}, f({}) = {}) for the partition {}",
            self.shuffle,
            format_rational(&self.value),
            self.first,
            format_rational(&self.first_value),
            self.second,
            format_rational(&self.second_value),
            self.partition
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict<W> {
    Pass { checked: usize },
    Witness(W),
}

impl<W> Verdict<W> {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass { .. })
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Verdict::Witness(w) => Some(w),
            Verdict::Pass { .. } => None,
        }
    }
}

/// Checks `f(w) = f(w without its first k letters)` for every sample and every `k ≤ drop`.
pub fn prefix_independent(f: &WordPayoff, samples: &[Lasso], drop: usize) -> Verdict<PrefixWitness> {
    let mut checked = 0;
    for w in samples {
        let value = f.on_lasso(w);
        for k in 1..=drop {
            let dropped_value = f.on_lasso(&w.drop_prefix(k));
            checked += 1;
            if dropped_value != value {
                return Verdict::Witness(PrefixWitness {
                    word: w.clone(),
                    dropped: k,
                    value,
                    dropped_value,
                });
            }
        }
    }
    Verdict::Pass { checked }
}

/// Every periodic 0/1 pattern of length `2..=max_period` using both parts, by
/// length and then lexicographically. `true` sends a position to the first part.
pub fn periodic_patterns(max_period: usize) -> Vec<Vec<bool>> {
    let mut out = Vec::new();
    for len in 2..=max_period {
        for bits in 0u64..(1u64 << len) {
            let p: Vec<bool> = (0..len).rev().map(|i| bits >> i & 1 == 1).collect();
            if p.iter().any(|&b| b) && p.iter().any(|&b| !b) {
                out.push(p);
            }
        }
    }
    out
}

fn pattern_label(p: &[bool]) -> String {
    let s: String = p.iter().map(|&b| if b { '1' } else { '0' }).collect();
    format!("({s})^ω")
}

/// The word reading `u` at positions where the periodic pattern is `true` and
/// `v` elsewhere. Both parts are consumed infinitely often, so the result is
/// again ultimately periodic.
pub fn interleave(u: &Lasso, v: &Lasso, pattern: &[bool]) -> Lasso {
    let nu = pattern.iter().filter(|&&b| b).count();
    let nv = pattern.len() - nu;
    assert!(nu > 0 && nv > 0, "pattern must use both words");
    let warmup = (u.prefix().len().div_ceil(nu)).max(v.prefix().len().div_ceil(nv));
    let (cu, cv) = (u.cycle().len(), v.cycle().len());
    let periods = (cu / cu.gcd(&nu)).lcm(&(cv / cv.gcd(&nv)));
    let (mut iu, mut iv) = (0, 0);
    let mut letters = Vec::with_capacity((warmup + periods) * pattern.len());
    for _ in 0..warmup + periods {
        for &b in pattern {
            if b {
                letters.push(u.letter(iu).clone());
                iu += 1;
            } else {
                letters.push(v.letter(iv).clone());
                iv += 1;
            }
        }
    }
    let cycle = letters.split_off(warmup * pattern.len());
    Lasso::new(letters, cycle).expect("cycle is non-empty")
}

fn mixing_check(f: &WordPayoff, shuffle: Word, first: Word, second: Word, partition: String) -> Option<MixingWitness> {
    let value = f.on_word(&shuffle);
    let first_value = f.on_word(&first);
    let second_value = f.on_word(&second);
    if value > first_value.clone().max(second_value.clone()) {
        Some(MixingWitness {
            shuffle,
            first,
            second,
            partition,
            value,
            first_value,
            second_value,
        })
    } else {
        None
    }
}

/// Searches for a violation of `f(shuffle) ≤ max(f(part₁), f(part₂))`.
///
/// Two families of partitions are tried for each sample pair `(u, v)`:
/// periodic interleavings of `u` and `v` with period up to `max_period`, and
/// for each pair of distinct letters `x` of `u` and `y` of `v`, the partition
/// of `(x y)^ω` into the block words `x^1 y^c x^(c²) …` and `y^1 x^c y^(c²) …`
/// for every block ratio `c` in `ratios`.
pub fn sub_mixing(f: &WordPayoff, samples: &[(Lasso, Lasso)], max_period: usize, ratios: &[u32]) -> Verdict<MixingWitness> {
    let patterns = periodic_patterns(max_period);
    let mut checked = 0;
    for (u, v) in samples {
        for p in &patterns {
            checked += 1;
            let w = interleave(u, v, p);
            if let Some(wit) = mixing_check(f, Word::Lasso(w), Word::Lasso(u.clone()), Word::Lasso(v.clone()), pattern_label(p)) {
                return Verdict::Witness(wit);
            }
        }
        let mut xs: Vec<&Rational> = u.prefix().iter().chain(u.cycle()).collect();
        let mut ys: Vec<&Rational> = v.prefix().iter().chain(v.cycle()).collect();
        xs.sort();
        xs.dedup();
        ys.sort();
        ys.dedup();
        for x in &xs {
            for y in ys.iter().filter(|y| *y != x) {
                for &c in ratios {
                    checked += 1;
                    let shuffle = Lasso::new(Vec::new(), vec![(*x).clone(), (*y).clone()]).expect("cycle is non-empty");
                    let first = BlockWord::new((*x).clone(), (*y).clone(), c);
                    let second = BlockWord::new((*y).clone(), (*x).clone(), c);
                    let partition = format!("first part takes x and y alternately in blocks of 1, {c}, {}, … occurrences", c * c);
                    if let Some(wit) = mixing_check(f, Word::Lasso(shuffle), Word::Blocks(first), Word::Blocks(second), partition) {
                        return Verdict::Witness(wit);
                    }
                }
            }
        }
    }
    Verdict::Pass { checked }
}

/// Both testers on one seeded batch of samples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub payoff: WordPayoff,
    pub samples: usize,
    pub seed: u64,
    pub prefix: Verdict<PrefixWitness>,
    pub mixing: Verdict<MixingWitness>,
}

/// Letters dropped by the prefix tester.
pub const SUITE_DROP: usize = 3;
/// Longest interleaving period tried by the sub-mixing tester.
pub const SUITE_PERIOD: usize = 3;
/// Block ratios tried by the sub-mixing tester.
pub const SUITE_RATIOS: [u32; 2] = [2, 3];

pub fn run_suite(f: &WordPayoff, samples: usize, seed: u64) -> SuiteReport {
    let mut rng = rng_from_seed(seed);
    let shape = LassoShape::default();
    let words: Vec<Lasso> = (0..samples).map(|_| random_lasso(&mut rng, &shape)).collect();
    let pairs: Vec<(Lasso, Lasso)> = (0..samples)
        .map(|_| (random_lasso(&mut rng, &shape), random_lasso(&mut rng, &shape)))
        .collect();
    SuiteReport {
        payoff: f.clone(),
        samples,
        seed,
        prefix: prefix_independent(f, &words, SUITE_DROP),
        mixing: sub_mixing(f, &pairs, SUITE_PERIOD, &SUITE_RATIOS),
    }
}

fn verdict_line<W: fmt::Display>(name: &str, v: &Verdict<W>) -> String {
    match v {
        Verdict::Pass { checked } => format!("{name}: pass ({checked} checks)"),
        Verdict::Witness(w) => format!("{name}: witness: {w}"),
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "payoff: {}", self.payoff)?;
        writeln!(f, "samples: {} (seed {})", self.samples, self.seed)?;
        writeln!(f, "{}", verdict_line("prefix-independent", &self.prefix))?;
        writeln!(f, "{}", verdict_line("sub-mixing", &self.mixing))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;
    use crate::rational::{int, ratio};

    fn l(p: &[i64], c: &[i64]) -> Lasso {
        Lasso::from_ints(p, c).unwrap()
    }

    #[test]
    fn interleave_examples() {
        let u = l(&[], &[0]);
        let v = l(&[], &[1]);
        assert_eq!(interleave(&u, &v, &[true, false]), l(&[], &[0, 1]));
        assert_eq!(interleave(&l(&[5], &[0]), &v, &[true, false, false]), l(&[5, 1, 1], &[0, 1, 1]));
        let w = interleave(&l(&[2], &[0, 1]), &l(&[], &[3, 4, 5]), &[true, false]);
        for i in 0..40 {
            let from_u = if i % 2 == 0 { l(&[2], &[0, 1]).letter(i / 2).clone() } else { l(&[], &[3, 4, 5]).letter(i / 2).clone() };
            assert_eq!(w.letter(i), &from_u, "position {i}");
        }
    }

    #[test]
    fn block_word_limits_match_running_averages() {
        let b = BlockWord::new(int(0), int(1), 2);
        assert_eq!(b.liminf_average(), ratio(1, 3));
        assert_eq!(b.limsup_average(), ratio(2, 3));
        let letters = b.blocks(16);
        let mut sum = Rational::zero();
        let mut ends = Vec::new();
        let (mut pos, mut len) = (0usize, 1usize);
        for k in 0..16 {
            for q in &letters[pos..pos + len] {
                sum += q;
            }
            pos += len;
            len *= 2;
            ends.push((k, sum.clone() / Rational::from_integer(pos.into())));
        }
        for (k, avg) in ends.into_iter().skip(10) {
            let limit = if k % 2 == 0 { ratio(1, 3) } else { ratio(2, 3) };
            assert!((avg - limit).abs() < ratio(1, 1 << k));
        }
    }

    #[test]
    fn prefix_independence() {
        let samples = vec![l(&[3, 1], &[0, 2]), l(&[], &[1])];
        assert!(prefix_independent(&WordPayoff::LimsupMean, &samples, 3).passed());
        assert!(prefix_independent(&WordPayoff::Parity, &samples, 3).passed());
        let w = prefix_independent(&WordPayoff::FirstLetter, &samples, 3);
        let w = w.witness().unwrap();
        assert_eq!((w.value.clone(), w.dropped_value.clone()), (int(3), int(1)));
    }

    #[test]
    fn liminf_mean_is_not_sub_mixing() {
        let samples = vec![(l(&[], &[0]), l(&[], &[1]))];
        for f in [WordPayoff::LimsupMean, WordPayoff::Parity, WordPayoff::Parity.negated()] {
            assert!(sub_mixing(&f, &samples, 3, &[2, 3]).passed(), "{f}");
        }
        for f in [WordPayoff::LiminfMean, WordPayoff::LimsupMean.negated()] {
            let v = sub_mixing(&f, &samples, 3, &[2]);
            let w = v.witness().unwrap_or_else(|| panic!("{f} should fail"));
            assert!(matches!(w.first, Word::Blocks(_)));
            assert!(w.value > w.first_value);
        }
        let v = sub_mixing(&WordPayoff::LiminfMean, &samples, 3, &[2]);
        let w = v.witness().unwrap();
        assert_eq!((w.value.clone(), w.first_value.clone(), w.second_value.clone()), (ratio(1, 2), ratio(1, 3), ratio(1, 3)));
    }

    #[test]
    fn periodic_interleavings_alone_cannot_refute_liminf_mean() {
        let samples = vec![(l(&[], &[0]), l(&[], &[1])), (l(&[2], &[0, 3]), l(&[], &[1, 1, 0]))];
        assert!(sub_mixing(&WordPayoff::LiminfMean, &samples, 4, &[]).passed());
    }

    #[test]
    fn suite_is_deterministic() {
        let a = run_suite(&WordPayoff::Parity, 50, 9).to_string();
        assert_eq!(a, run_suite(&WordPayoff::Parity, 50, 9).to_string());
        assert!(a.contains("prefix-independent: pass (150 checks)"), "{a}");
        assert!(run_suite(&WordPayoff::LiminfMean, 50, 9).mixing.witness().is_some());
    }

    #[test]
    fn payoff_names() {
        for name in ["mean", "liminf-mean", "parity", "first-letter", "neg-mean", "neg-parity"] {
            assert_eq!(name.parse::<WordPayoff>().unwrap().to_string(), name);
        }
        assert_eq!("neg-neg-mean".parse::<WordPayoff>().unwrap(), WordPayoff::LimsupMean);
        assert!("median".parse::<WordPayoff>().is_err());
    }
}
