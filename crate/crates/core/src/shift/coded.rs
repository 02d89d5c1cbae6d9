//! Coded shifts generated by an explicit finite list of generators.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::words::{Alphabet, Word};

#[derive(Debug, Clone, PartialEq)]
pub struct CodedShift {
    generators: Vec<Word>,
}

impl CodedShift {
    pub fn new(alphabet: Alphabet, generators: Vec<Word>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::invalid("a coded shift needs at least one generator"));
        }
        for g in &generators {
            alphabet.check(g)?;
            if g.is_empty() {
                return Err(Error::invalid("generators must be nonempty"));
            }
        }
        let mut generators = generators;
        generators.sort();
        generators.dedup();
        Ok(CodedShift { generators })
    }

    pub fn generators(&self) -> &[Word] {
        &self.generators
    }

    fn all_positions(&self) -> BTreeSet<(usize, usize)> {
        self.generators.iter().enumerate().flat_map(|(i, g)| (0..g.len()).map(move |j| (i, j))).collect()
    }

    /// Positions reachable after reading `w` from `states`.
    fn run(&self, mut states: BTreeSet<(usize, usize)>, w: &Word) -> BTreeSet<(usize, usize)> {
        for &s in w.iter() {
            let mut next = BTreeSet::new();
            let mut wrapped = false;
            for &(i, j) in &states {
                let g = self.generators[i].symbols();
                if g[j] == s {
                    if j + 1 == g.len() {
                        wrapped = true;
                    } else {
                        next.insert((i, j + 1));
                    }
                }
            }
            if wrapped {
                next.extend((0..self.generators.len()).map(|i| (i, 0)));
            }
            if next.is_empty() {
                return next;
            }
            states = next;
        }
        states
    }

    /// Subword of some finite concatenation of generators. Runs the
    /// automaton whose states are positions inside generators.
    pub fn contains(&self, w: &Word) -> bool {
        !self.run(self.all_positions(), w).is_empty()
    }

    /// Whether `w^k` is in the language for every `k`. The reachable sets
    /// after each copy of `w` are eventually periodic.
    pub fn periodic_ok(&self, w: &Word) -> bool {
        let mut seen = std::collections::HashSet::new();
        let mut states = self.all_positions();
        while seen.insert(states.clone()) {
            states = self.run(states, w);
            if states.is_empty() {
                return false;
            }
        }
        true
    }

    pub fn in_g(&self, w: &Word) -> bool {
        self.generators.binary_search(w).is_ok()
    }

    /// Parses `w` as a concatenation of generators.
    pub fn in_gstar(&self, w: &Word) -> bool {
        let s = w.symbols();
        let mut reach = vec![false; s.len() + 1];
        reach[0] = true;
        for i in 0..s.len() {
            if reach[i] {
                for g in &self.generators {
                    if s[i..].starts_with(g.symbols()) {
                        reach[i + g.len()] = true;
                    }
                }
            }
        }
        reach[s.len()]
    }

    pub fn in_d(&self, w: &Word) -> bool {
        self.generators.iter().any(|g| g.contains_subword(w))
    }

    pub fn generators_of_len(&self, n: usize) -> Vec<Word> {
        self.generators.iter().filter(|g| g.len() == n).cloned().collect()
    }

    /// Distinct concatenations of length `n`, sorted.
    pub fn gstar(&self, n: usize) -> Vec<Word> {
        let mut table: Vec<BTreeSet<Word>> = vec![BTreeSet::from([Word::empty()])];
        for len in 1..=n {
            let mut here = BTreeSet::new();
            for g in self.generators.iter().filter(|g| g.len() <= len) {
                for rest in &table[len - g.len()] {
                    here.insert(g.concat(rest));
                }
            }
            table.push(here);
        }
        table.swap_remove(n).into_iter().collect()
    }

    /// Distinct subwords of generators of length `n`, sorted.
    pub fn d_words(&self, n: usize) -> Vec<Word> {
        let set: BTreeSet<Word> = self
            .generators
            .iter()
            .filter(|g| g.len() >= n)
            .flat_map(|g| (0..=g.len() - n).map(move |i| g.slice(i, i + n)))
            .collect();
        set.into_iter().collect()
    }
}
