//! Alphabets, words, Hamming geometry and binomial-entropy estimates.
//!
//! Symbols are small integers `0..size`. Words render with one character per
//! symbol (`0-9` then `a-z`), so binary words read as bit strings.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite alphabet `{0, 1, ..., size - 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Alphabet(usize);

impl Alphabet {
    pub const BINARY: Alphabet = Alphabet(2);

    pub fn new(size: usize) -> Result<Self> {
        if size == 0 || size > 36 {
            return Err(Error::invalid(format!("alphabet size must be in 1..=36, got {size}")));
        }
        Ok(Alphabet(size))
    }

    pub fn size(self) -> usize {
        self.0
    }

    pub fn symbols(self) -> impl Iterator<Item = u8> {
        0..self.0 as u8
    }

    pub fn contains(self, w: &Word) -> bool {
        w.iter().all(|&s| (s as usize) < self.0)
    }

    pub fn check(self, w: &Word) -> Result<()> {
        match w.iter().find(|&&s| (s as usize) >= self.0) {
            Some(&symbol) => Err(Error::SymbolOutOfRange { symbol, size: self.0 }),
            None => Ok(()),
        }
    }

    /// All `size^n` words of length `n` in lexicographic order.
    pub fn all_words(self, n: usize) -> AllWords {
        AllWords { size: self.0 as u8, next: Some(vec![0; n]) }
    }
}

/// Lexicographic odometer over `A^n`.
pub struct AllWords {
    size: u8,
    next: Option<Vec<u8>>,
}

impl Iterator for AllWords {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        let mut i = succ.len();
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            if succ[i] + 1 < self.size {
                succ[i] += 1;
                self.next = Some(succ);
                break;
            }
            succ[i] = 0;
        }
        Some(Word(cur))
    }
}

/// A finite word. The empty word is allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn new(symbols: Vec<u8>) -> Self {
        Word(symbols)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn repeat(symbol: u8, n: usize) -> Self {
        Word(vec![symbol; n])
    }

    /// `0^a 1^b`.
    pub fn zeros_ones(a: usize, b: usize) -> Self {
        let mut v = vec![0; a];
        v.resize(a + b, 1);
        Word(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[u8] {
        &self.0
    }

    pub fn into_symbols(self) -> Vec<u8> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, u8> {
        self.0.iter()
    }

    pub fn push(&mut self, s: u8) {
        self.0.push(s);
    }

    pub fn pop(&mut self) -> Option<u8> {
        self.0.pop()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn extend_from(&mut self, other: &Word) {
        self.0.extend_from_slice(&other.0);
    }

    /// Half-open subword `w[start..end]` (0-indexed).
    pub fn slice(&self, start: usize, end: usize) -> Word {
        Word(self.0[start..end].to_vec())
    }

    /// The action of the shift on words: drop the first symbol.
    pub fn shift(&self) -> Word {
        if self.0.is_empty() {
            Word::empty()
        } else {
            Word(self.0[1..].to_vec())
        }
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn is_suffix_of(&self, other: &Word) -> bool {
        other.0.ends_with(&self.0)
    }

    pub fn contains_subword(&self, pattern: &Word) -> bool {
        if pattern.is_empty() {
            return true;
        }
        self.0.windows(pattern.len()).any(|win| win == pattern.0.as_slice())
    }

    pub fn count(&self, symbol: u8) -> usize {
        self.0.iter().filter(|&&s| s == symbol).count()
    }

    /// Maximal runs `(symbol, length)`.
    pub fn runs(&self) -> Vec<(u8, usize)> {
        let mut out: Vec<(u8, usize)> = Vec::new();
        for &s in &self.0 {
            match out.last_mut() {
                Some((sym, len)) if *sym == s => *len += 1,
                _ => out.push((s, 1)),
            }
        }
        out
    }

    pub fn power(&self, k: usize) -> Word {
        Word(self.0.repeat(k))
    }
}

impl std::ops::Index<usize> for Word {
    type Output = u8;
    fn index(&self, i: usize) -> &u8 {
        &self.0[i]
    }
}

impl From<Vec<u8>> for Word {
    fn from(v: Vec<u8>) -> Self {
        Word(v)
    }
}

fn symbol_char(s: u8) -> char {
    std::char::from_digit(s as u32, 36).unwrap_or('?')
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.0 {
            write!(f, "{}", symbol_char(s))?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| {
                c.to_digit(36)
                    .map(|d| d as u8)
                    .ok_or_else(|| Error::invalid(format!("bad symbol `{c}` in word `{s}`")))
            })
            .collect::<Result<Vec<u8>>>()
            .map(Word)
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Test helper and CLI convenience: parse a word, panicking on bad input.
pub fn w(s: &str) -> Word {
    s.parse().expect("valid word literal")
}

/// Number of positions where `v` and `w` differ.
pub fn hamming(v: &Word, w: &Word) -> Result<usize> {
    if v.len() != w.len() {
        return Err(Error::LengthMismatch { left: v.len(), right: w.len() });
    }
    Ok(hamming_slices(v.symbols(), w.symbols()))
}

#[inline]
pub(crate) fn hamming_slices(v: &[u8], w: &[u8]) -> usize {
    v.iter().zip(w).filter(|(a, b)| a != b).count()
}

/// Bipartite entropy `h(t) = -t log t - (1-t) log(1-t)` in nats, with `h(0) = h(1) = 0`.
pub fn binary_entropy(t: f64) -> f64 {
    if t <= 0.0 || t >= 1.0 {
        return 0.0;
    }
    -t * t.ln() - (1.0 - t) * (1.0 - t).ln()
}

/// `log C(m, k)` by summing logarithms of the product formula.
pub fn log_binomial(m: u64, k: u64) -> Result<f64> {
    if k > m {
        return Err(Error::invalid(format!("binomial C({m}, {k}) needs k <= m")));
    }
    let k = k.min(m - k);
    let mut acc = 0.0;
    for i in 1..=k {
        acc += ((m - k + i) as f64).ln() - (i as f64).ln();
    }
    Ok(acc)
}

/// The Stirling-type estimate `m h(k/m)` of `log C(m, k)`.
pub fn log_binomial_estimate(m: u64, k: u64) -> f64 {
    if m == 0 {
        return 0.0;
    }
    m as f64 * binary_entropy(k as f64 / m as f64)
}

/// Exact `C(m, k)` when it fits in a `u128`.
pub fn binomial(m: u64, k: u64) -> Option<u128> {
    if k > m {
        return Some(0);
    }
    let k = k.min(m - k);
    let mut acc: u128 = 1;
    for i in 1..=k as u128 {
        // acc * (m - k + i) is divisible by i at every step
        acc = acc.checked_mul(m as u128 - k as u128 + i)? / i;
    }
    Some(acc)
}

/// Result of a Hamming-ball count around a word over the full alphabet.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HammingBall {
    /// Exact number of words at distance `<= k`, or `None` when the enumeration cap was hit.
    pub count: Option<u64>,
    /// `sum_{j <= k} C(m, j) (#A - 1)^j`.
    pub exact_bound: f64,
    /// The coarser `C(m, k) (#A)^k`.
    pub coarse_bound: f64,
    pub capped: bool,
}

/// Counts the words within Hamming distance `k` of `w`, enumerating them when
/// `C(|w|, k) (#A)^k <= cap`.
pub fn hamming_ball(w: &Word, k: usize, alphabet: Alphabet, cap: u64) -> Result<HammingBall> {
    let m = w.len();
    if k > m {
        return Err(Error::invalid(format!("radius {k} exceeds word length {m}")));
    }
    alphabet.check(w)?;
    let a = alphabet.size() as f64;
    let coarse_bound = (log_binomial(m as u64, k as u64)? + k as f64 * a.ln()).exp();
    let mut exact_bound = 0.0;
    for j in 0..=k {
        exact_bound += (log_binomial(m as u64, j as u64)? + j as f64 * (a - 1.0).ln()).exp();
        if alphabet.size() == 1 {
            break;
        }
    }
    if alphabet.size() == 1 {
        exact_bound = 1.0;
    }
    if coarse_bound > cap as f64 {
        return Ok(HammingBall { count: None, exact_bound, coarse_bound, capped: true });
    }
    let count = count_ball(w.symbols(), k, alphabet.size() as u8);
    Ok(HammingBall { count: Some(count), exact_bound, coarse_bound, capped: false })
}

/// Depth-first enumeration of the ball; each word is produced exactly once.
fn count_ball(w: &[u8], k: usize, size: u8) -> u64 {
    fn go(w: &[u8], pos: usize, budget: usize, size: u8, buf: &mut Vec<u8>) -> u64 {
        if pos == w.len() {
            return 1;
        }
        let mut total = 0;
        for s in 0..size {
            let cost = usize::from(s != w[pos]);
            if cost > budget {
                continue;
            }
            buf.push(s);
            total += go(w, pos + 1, budget - cost, size, buf);
            buf.pop();
        }
        total
    }
    go(w, 0, k, size, &mut Vec::with_capacity(w.len()))
}

/// Fits the constant `c` in `|log C(m,k) - m h(k/m)| <= c log m` over
/// `2 <= m <= m_max`, `0 <= k <= m`. Returns `(c, argmax m, argmax k)`.
pub fn fit_binomial_constant(m_max: u64) -> (f64, u64, u64) {
    let mut best = (0.0, 2, 0);
    for m in 2..=m_max {
        let lm = (m as f64).ln();
        let mut logc = 0.0;
        // symmetric in k, so half the row suffices
        for k in 0..=m / 2 {
            if k > 0 {
                logc += ((m - k + 1) as f64).ln() - (k as f64).ln();
            }
            let gap = (logc - log_binomial_estimate(m, k)).abs() / lm;
            if gap > best.0 {
                best = (gap, m, k);
            }
        }
    }
    best
}
