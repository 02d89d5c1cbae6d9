//! `g`-Hamming approachability: nearest words in a class, the block repair
//! of staircase words into `G*`, and words far from a list of targets.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::seq::IntSeq;
use crate::shift::staircase::{blocks, Staircase};
use crate::shift::{ClassSelector, LanguageSlice, ShiftModel};
use crate::words::{binary_entropy, hamming_ball, hamming_slices, Alphabet, Word};

/// Packs a binary word of length <= 64 into bits.
fn pack(w: &[u8]) -> Option<u64> {
    (w.len() <= 64 && w.iter().all(|&s| s <= 1)).then(|| w.iter().fold(0u64, |acc, &s| (acc << 1) | s as u64))
}

/// Closest word of `class` to `w` in Hamming distance; ties go to the
/// lexicographically smallest word.
pub fn nearest_in_class(w: &Word, class: &LanguageSlice) -> Result<(Word, usize)> {
    if class.words.is_empty() {
        return Err(Error::invalid("nearest word in an empty class"));
    }
    if class.n != w.len() {
        return Err(Error::LengthMismatch { left: w.len(), right: class.n });
    }
    let mut best: Option<(usize, &Word)> = None;
    let better = |d: usize, v: &Word, best: &Option<(usize, &Word)>| match best {
        None => true,
        Some((bd, bv)) => d < *bd || (d == *bd && v < *bv),
    };
    if let Some(x) = pack(w.symbols()) {
        for v in &class.words {
            let d = match pack(v.symbols()) {
                Some(y) => (x ^ y).count_ones() as usize,
                None => hamming_slices(w.symbols(), v.symbols()),
            };
            if better(d, v, &best) {
                best = Some((d, v));
            }
        }
    } else {
        for v in &class.words {
            let d = hamming_slices(w.symbols(), v.symbols());
            if better(d, v, &best) {
                best = Some((d, v));
            }
        }
    }
    let (d, v) = best.expect("class is nonempty");
    Ok((v.clone(), d))
}

/// Which part of the word a single-block repair was applied to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Piece {
    Whole,
    Prefix,
    Suffix,
}

/// The three ways to turn `u 0^a 1^b v` (`|u|, |v| <= n1`) into a generator
/// of length `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RepairCase {
    /// `n1 + a < f(n)`: `0^{f(n)} 1^{n - f(n)}`.
    FewZeros,
    /// `n1 + a > n - f(n)`: `0^{n - f(n)} 1^{f(n)}`.
    ManyZeros,
    /// Otherwise `0^{n1 + a} 1^{n - n1 - a}`.
    Middle,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RepairStep {
    pub piece: Piece,
    pub case: RepairCase,
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RepairResult {
    pub input: Word,
    pub repaired: Word,
    pub distance: usize,
    /// `g(|w|) = 2 n1 + 2 max(f(|w|), n1)`.
    pub budget: usize,
    pub within_budget: bool,
    pub steps: Vec<RepairStep>,
}

/// `g(n) = 2 n1 + 2 max(f(n), n1)`.
pub fn repair_budget(f: &IntSeq, n1: u64, n: usize) -> usize {
    (2 * n1 + 2 * f.eval(n as u64).max(n1)) as usize
}

/// Replaces `u 0^a 1^b v` of length `n` by a generator.
fn repair_block(s: &Staircase, n1: usize, a: usize, n: usize) -> (Word, RepairCase) {
    let fv = s.fv(n);
    if n1 + a < fv {
        (Word::zeros_ones(fv, n - fv), RepairCase::FewZeros)
    } else if n1 + a > n - fv {
        (Word::zeros_ones(n - fv, fv), RepairCase::ManyZeros)
    } else {
        (Word::zeros_ones(n1 + a, n - n1 - a), RepairCase::Middle)
    }
}

/// Repairs a word of the staircase language into `G*`.
///
/// With maximal blocks `w_(ℓ_{i-1}, ℓ_i] = 0^{a_i} 1^{b_i}`, pick `j`, `k`
/// with `n1 ∈ (ℓ_{j-1}, ℓ_j]` and `n - n1 ∈ (ℓ_{k-1}, ℓ_k]`. If `j = k` the
/// whole word is replaced by one generator. Otherwise the prefix
/// `w_(0, ℓ_j]` and the suffix `w_(ℓ_{k-1}, n]` are replaced and the
/// internal blocks in between are kept.
pub fn staircase_repair(w: &Word, f: &IntSeq, n1: u64) -> Result<RepairResult> {
    repair_in(&Staircase::new(f.clone(), Some(n1))?, w)
}

/// [`staircase_repair`] with the shift's own `f` and `n1`.
pub fn repair_in(s: &Staircase, w: &Word) -> Result<RepairResult> {
    let (f, n1) = (s.f(), s.n1());
    let n = w.len();
    let n1u = n1 as usize;
    if n < 2 * n1u || n == 0 {
        return Err(Error::invalid(format!("repair needs |w| >= 2 n1 = {}, got {n}", 2 * n1u)));
    }
    Alphabet::BINARY.check(w)?;
    if !s.contains(w) {
        return Err(Error::NotInLanguage(w.to_string()));
    }
    let budget = repair_budget(f, n1, n);
    if s.in_gstar(w) {
        return Ok(RepairResult { input: w.clone(), repaired: w.clone(), distance: 0, budget, within_budget: true, steps: vec![] });
    }
    let bl = blocks(w.symbols());
    let mut ell = vec![0usize];
    for &(a, b) in &bl {
        ell.push(ell.last().unwrap() + a + b);
    }
    // block index i (1-based) with pos ∈ (ℓ_{i-1}, ℓ_i]
    let find = |pos: usize| (1..ell.len()).find(|&i| ell[i - 1] < pos && pos <= ell[i]).expect("position inside the word");
    let j = find(n1u.max(1));
    let k = find((n - n1u).max(1));
    let mut steps = Vec::new();
    let repaired = if j == k {
        let (g, case) = repair_block(s, n1u, bl[j - 1].0, n);
        steps.push(RepairStep { piece: Piece::Whole, case, start: 0, end: n });
        g
    } else {
        let (lp, ls) = (ell[j], ell[k - 1]);
        let (gp, cp) = repair_block(s, n1u, bl[j - 1].0, lp);
        let (gs, cs) = repair_block(s, n1u, bl[k - 1].0, n - ls);
        steps.push(RepairStep { piece: Piece::Prefix, case: cp, start: 0, end: lp });
        steps.push(RepairStep { piece: Piece::Suffix, case: cs, start: ls, end: n });
        let mut out = gp;
        out.extend_from(&w.slice(lp, ls));
        out.extend_from(&gs);
        out
    };
    let distance = hamming_slices(w.symbols(), repaired.symbols());
    debug_assert!(s.in_gstar(&repaired));
    Ok(RepairResult { input: w.clone(), repaired, distance, budget, within_budget: distance <= budget, steps })
}

/// Outcome of a far-word search together with the counting certificate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FarWord {
    pub word: Option<Word>,
    /// `⌊β m⌋`; a found word is at distance greater than this from every target.
    pub radius: usize,
    pub class_size: usize,
    /// `N · Σ_{j <= r} C(m, j) (#A - 1)^j`, at least `class_size` whenever
    /// nothing was found.
    pub ball_union_bound: f64,
    /// `N · e^{m h(β)} · #A^{β m}`.
    pub entropy_bound: f64,
}

/// First word of `class` (in lexicographic order) at distance `> β m` from
/// every target.
pub fn far_word(class: &LanguageSlice, targets: &[Word], beta: f64, alphabet: Alphabet) -> Result<FarWord> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::invalid(format!("β = {beta} must lie in (0, 1)")));
    }
    let m = class.n;
    for t in targets {
        if t.len() != m {
            return Err(Error::LengthMismatch { left: t.len(), right: m });
        }
        alphabet.check(t)?;
    }
    let radius = (beta * m as f64).floor() as usize;
    let mut sorted: Vec<&Word> = class.words.iter().collect();
    sorted.sort();
    let word = sorted
        .into_iter()
        .find(|v| targets.iter().all(|t| hamming_slices(v.symbols(), t.symbols()) > radius))
        .cloned();
    let ball = if m == 0 { 1.0 } else { hamming_ball(&Word::repeat(0, m), radius.min(m), alphabet, 0)?.exact_bound };
    let nt = targets.len() as f64;
    let mf = m as f64;
    Ok(FarWord {
        word,
        radius,
        class_size: class.words.len(),
        ball_union_bound: nt * ball,
        entropy_bound: nt * (mf * binary_entropy(beta) + beta * mf * (alphabet.size() as f64).ln()).exp(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApproachRow {
    pub n: usize,
    /// Worst nearest-class distance over `L_n`; `None` when the class is empty.
    pub worst_distance: Option<usize>,
    pub budget: u64,
    pub pass: bool,
    /// A word attaining the worst distance.
    pub witness: Option<Word>,
    /// `false` for lengths below the minimum length `n0`.
    pub in_scope: bool,
}

/// Worst-case distance from `L_n` to the class, for each `n` in the range.
/// Stops at the first length whose enumeration exceeds `cap`.
pub fn approachability_report(
    model: &ShiftModel,
    class: ClassSelector,
    g: &IntSeq,
    n_range: std::ops::RangeInclusive<usize>,
    n0: usize,
    cap: usize,
) -> Result<Vec<ApproachRow>> {
    let mut rows = Vec::new();
    for n in n_range {
        let lang = match model.enumerate_language(n, cap) {
            Ok(l) if l.complete => l,
            Ok(_) | Err(Error::CapExceeded { .. }) => break,
            Err(e) => return Err(e),
        };
        let target = match model.enumerate_class(class, n, cap) {
            Ok(t) if t.complete => t,
            Ok(_) | Err(Error::CapExceeded { .. }) => break,
            Err(e) => return Err(e),
        };
        let budget = g.eval(n as u64);
        let mut worst: Option<(usize, Word)> = None;
        if !target.words.is_empty() {
            for w in &lang.words {
                let (_, d) = nearest_in_class(w, &target)?;
                if worst.as_ref().is_none_or(|(wd, _)| d > *wd) {
                    worst = Some((d, w.clone()));
                }
            }
        }
        let in_scope = n >= n0;
        let pass = match &worst {
            Some((d, _)) => *d as u64 <= budget,
            None => lang.words.is_empty(),
        };
        rows.push(ApproachRow {
            n,
            worst_distance: worst.as_ref().map(|x| x.0),
            budget,
            pass,
            witness: worst.map(|x| x.1),
            in_scope,
        });
    }
    Ok(rows)
}
