//! Unique decipherability, the `P · G* · S` split of staircase words, free
//! concatenation and the sets `F_k` of words with bounded-gap follow-ups.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::shift::staircase::{blocks, Staircase};
use crate::shift::{ClassSelector, Family, LanguageSlice, ShiftModel};
use crate::words::Word;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecipherVerdict {
    pub unique: bool,
    /// Shortest word with two factorizations.
    pub witness: Option<Word>,
    pub parses: Option<(Vec<Word>, Vec<Word>)>,
}

/// Partial double parse: `ahead` covers the word built so far, `behind`
/// covers it minus the dangling suffix.
#[derive(Clone)]
struct Partial {
    word: Word,
    ahead: Vec<Word>,
    behind: Vec<Word>,
}

/// Sardinas–Patterson test. Runs Dijkstra over dangling suffixes, keyed by
/// the length of the word built so far, so the witness is a shortest one.
pub fn sardinas_patterson(code: &[Word]) -> Result<DecipherVerdict> {
    if code.is_empty() {
        return Err(Error::invalid("empty code"));
    }
    if code.iter().any(Word::is_empty) {
        return Err(Error::invalid("codewords must be nonempty"));
    }
    let mut code = code.to_vec();
    code.sort();
    code.dedup();

    let mut best: BTreeMap<Word, usize> = BTreeMap::new();
    let mut heap = BinaryHeap::new();
    let mut parts: Vec<Partial> = Vec::new();
    let push = |heap: &mut BinaryHeap<_>, parts: &mut Vec<Partial>, dangling: Word, p: Partial| {
        heap.push(Reverse((p.word.len(), p.word.clone(), dangling, parts.len())));
        parts.push(p);
    };
    for c1 in &code {
        for c2 in &code {
            if c1 != c2 && c1.is_prefix_of(c2) {
                let p = Partial { word: c2.clone(), ahead: vec![c2.clone()], behind: vec![c1.clone()] };
                push(&mut heap, &mut parts, c2.slice(c1.len(), c2.len()), p);
            }
        }
    }
    while let Some(Reverse((cost, _, dangling, id))) = heap.pop() {
        if best.get(&dangling).is_some_and(|&c| c <= cost) {
            continue;
        }
        best.insert(dangling.clone(), cost);
        let p = parts[id].clone();
        for c in &code {
            let mut behind = p.behind.clone();
            behind.push(c.clone());
            if *c == dangling {
                return Ok(DecipherVerdict { unique: false, witness: Some(p.word), parses: Some((p.ahead, behind)) });
            }
            if c.is_prefix_of(&dangling) {
                let next = Partial { word: p.word.clone(), ahead: p.ahead.clone(), behind };
                push(&mut heap, &mut parts, dangling.slice(c.len(), dangling.len()), next);
            } else if dangling.is_prefix_of(c) {
                let tail = c.slice(dangling.len(), c.len());
                let next = Partial { word: p.word.concat(&tail), ahead: behind, behind: p.ahead.clone() };
                push(&mut heap, &mut parts, tail, next);
            }
        }
    }
    Ok(DecipherVerdict { unique: true, witness: None, parses: None })
}

/// Every factorization of `w` over `code`.
pub fn factorizations(w: &Word, code: &[Word]) -> Vec<Vec<Word>> {
    fn go(rest: &[u8], code: &[Word], cur: &mut Vec<Word>, out: &mut Vec<Vec<Word>>) {
        if rest.is_empty() {
            out.push(cur.clone());
            return;
        }
        for c in code {
            if rest.starts_with(c.symbols()) {
                cur.push(c.clone());
                go(&rest[c.len()..], code, cur, out);
                cur.pop();
            }
        }
    }
    let mut code = code.to_vec();
    code.sort();
    code.dedup();
    let mut out = Vec::new();
    go(w.symbols(), &code, &mut Vec::new(), &mut out);
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub prefix: Word,
    pub core: Vec<Word>,
    pub suffix: Word,
}

impl Decomposition {
    pub fn reassemble(&self) -> Word {
        let mut out = self.prefix.clone();
        for g in &self.core {
            out.extend_from(g);
        }
        out.extend_from(&self.suffix);
        out
    }
}

/// Factors a word of `G*` into generators by taking the longest initial
/// segment `0^a 1^b` each time; `None` if some piece is not a generator.
pub fn greedy_decode(s: &Staircase, w: &Word) -> Option<Vec<Word>> {
    blocks(w.symbols())
        .into_iter()
        .map(|(a, b)| s.in_g(a, b).then(|| Word::zeros_ones(a, b)))
        .collect()
}

/// `w = u^p v u^s` with `u^p ∈ P`, `v ∈ G*`, `u^s ∈ S`. The first and last
/// maximal blocks go to `P` and `S` unless they are generators; a lone block
/// is tried as `G`, then `P`, then `S`.
pub fn staircase_decompose(s: &Staircase, w: &Word) -> Result<Decomposition> {
    if !s.contains(w) || w.iter().any(|&c| c > 1) {
        return Err(Error::NotInLanguage(w.to_string()));
    }
    let bl = blocks(w.symbols());
    let word = |(a, b): (usize, usize)| Word::zeros_ones(a, b);
    let empty = Decomposition { prefix: Word::empty(), core: vec![], suffix: Word::empty() };
    match bl.len() {
        0 => Ok(empty),
        1 => {
            let (a, b) = bl[0];
            Ok(if s.in_g(a, b) {
                Decomposition { core: vec![word(bl[0])], ..empty }
            } else if s.in_p(a, b) {
                Decomposition { prefix: word(bl[0]), ..empty }
            } else {
                Decomposition { suffix: word(bl[0]), ..empty }
            })
        }
        m => {
            let mut core: Vec<Word> = bl[1..m - 1].iter().map(|&x| word(x)).collect();
            let (a1, b1) = bl[0];
            let prefix = if s.in_g(a1, b1) {
                core.insert(0, word(bl[0]));
                Word::empty()
            } else {
                word(bl[0])
            };
            let (am, bm) = bl[m - 1];
            let suffix = if s.in_g(am, bm) {
                core.push(word(bl[m - 1]));
                Word::empty()
            } else {
                word(bl[m - 1])
            };
            Ok(Decomposition { prefix, core, suffix })
        }
    }
}

/// All split points `(i, j)` with `w[..i] ∈ P`, `w[i..j] ∈ G*`, `w[j..] ∈ S`.
pub fn decompositions(s: &Staircase, w: &Word) -> Vec<(usize, usize)> {
    let sym = w.symbols();
    let single = |x: &[u8], test: &dyn Fn(usize, usize) -> bool| -> bool {
        if x.is_empty() {
            return true;
        }
        let bl = blocks(x);
        bl.len() == 1 && test(bl[0].0, bl[0].1)
    };
    let n = sym.len();
    let mut out = Vec::new();
    for i in 0..=n {
        if !single(&sym[..i], &|a, b| s.in_p(a, b)) {
            continue;
        }
        for j in i..=n {
            if single(&sym[j..], &|a, b| s.in_s(a, b)) && s.in_gstar(&Word::new(sym[i..j].to_vec())) {
                out.push((i, j));
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FreeConcatVerdict {
    pub pass: bool,
    pub counterexample: Option<(Word, Word)>,
    pub pairs_checked: usize,
}

/// Checks `vw` lies in the class for all `v`, `w` drawn from the given slices.
pub fn free_concat_check(model: &ShiftModel, class: ClassSelector, slices: &[LanguageSlice]) -> Result<FreeConcatVerdict> {
    let mut pairs_checked = 0;
    for sv in slices {
        for sw in slices {
            for v in &sv.words {
                for w in &sw.words {
                    pairs_checked += 1;
                    if !model.class_contains(class, &v.concat(w))? {
                        return Ok(FreeConcatVerdict {
                            pass: false,
                            counterexample: Some((v.clone(), w.clone())),
                            pairs_checked,
                        });
                    }
                }
            }
        }
    }
    Ok(FreeConcatVerdict { pass: true, counterexample: None, pairs_checked })
}

/// `F_k ∩ L_n`: words `w` such that every `v ∈ L` follows `w` after some
/// bridge `u` with `|u| <= k`. For an SFT with memory `M` it is enough to
/// take `v ∈ L_M`.
pub fn local_spec_sets(model: &ShiftModel, k: usize, n: usize, cap: usize) -> Result<Vec<Word>> {
    let memory = match model.family() {
        Family::Full => 0,
        Family::Sft(s) => s.memory(),
        _ => return Err(Error::Unsupported(format!("F_k needs a shift of finite type, got the {}", model.describe()))),
    };
    let lang = model.enumerate_language(n, cap)?;
    if !lang.complete {
        return Err(Error::CapExceeded { cap, n });
    }
    let followers = model.enumerate_language(memory, cap)?;
    let bridges: Vec<Word> = (0..=k).flat_map(|len| model.alphabet().all_words(len)).collect();
    let mut out = Vec::new();
    for w in &lang.words {
        let mut ok = true;
        for v in &followers.words {
            let mut found = false;
            for u in &bridges {
                if model.membership(&w.concat(u).concat(v))? {
                    found = true;
                    break;
                }
            }
            if !found {
                ok = false;
                break;
            }
        }
        if ok {
            out.push(w.clone());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::IntSeq;
    use crate::shift::DEFAULT_CAP;
    use crate::words::w;

    fn code(ws: &[&str]) -> Vec<Word> {
        ws.iter().map(|s| w(s)).collect()
    }

    #[test]
    fn sardinas_patterson_examples() {
        let v = sardinas_patterson(&code(&["0", "01", "10"])).unwrap();
        assert!(!v.unique);
        assert_eq!(v.witness, Some(w("010")));
        let (a, b) = v.parses.unwrap();
        assert_ne!(a, b);
        assert!(sardinas_patterson(&code(&["0", "01", "11"])).unwrap().unique);
        let st = Staircase::new(IntSeq::Const(1), None).unwrap();
        let gens: Vec<Word> = (2..=6).flat_map(|n| st.generators(n)).collect();
        assert!(sardinas_patterson(&gens).unwrap().unique);
    }

    #[test]
    fn decompose_examples() {
        let st = Staircase::new(IntSeq::Const(1), None).unwrap();
        let d = staircase_decompose(&st, &w("1100")).unwrap();
        assert_eq!((d.prefix, d.core, d.suffix), (w("11"), vec![], w("00")));
        let d = staircase_decompose(&st, &w("0011")).unwrap();
        assert_eq!((d.prefix, d.core, d.suffix), (Word::empty(), vec![w("0011")], Word::empty()));
        let d = staircase_decompose(&st, &w("10")).unwrap();
        assert_eq!((d.prefix, d.core, d.suffix), (w("1"), vec![], w("0")));
    }

    #[test]
    fn free_concatenation() {
        let gm = ShiftModel::golden_mean();
        let slices: Vec<LanguageSlice> = (2..=3).map(|n| (*gm.enumerate_language(n, DEFAULT_CAP).unwrap()).clone()).collect();
        let v = free_concat_check(&gm, ClassSelector::Language, &slices).unwrap();
        assert_eq!(v.counterexample, Some((w("01"), w("10"))));
    }

    #[test]
    fn local_spec_examples() {
        let gm = ShiftModel::golden_mean();
        assert_eq!(local_spec_sets(&gm, 0, 3, DEFAULT_CAP).unwrap(), code(&["000", "010", "100"]));
        assert_eq!(local_spec_sets(&gm, 1, 3, DEFAULT_CAP).unwrap().len(), 5);
        let full = ShiftModel::full(2).unwrap();
        assert_eq!(local_spec_sets(&full, 0, 4, DEFAULT_CAP).unwrap().len(), 16);
        assert!(local_spec_sets(&ShiftModel::staircase(IntSeq::Const(1), None).unwrap(), 0, 3, DEFAULT_CAP).is_err());
    }
}
