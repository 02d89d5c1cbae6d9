//! One-sided shifts of finite type given by a list of forbidden words.

use crate::error::{Error, Result};
use crate::words::{Alphabet, Word};

/// Largest number of memory states accepted (`#A^M`).
const MAX_STATES: usize = 1 << 16;

/// An SFT with memory `M = max |forbidden| - 1`. States are the words of
/// length `M`, encoded in base `#A`; a state is alive when an infinite
/// admissible path leaves it.
#[derive(Debug, Clone, PartialEq)]
pub struct Sft {
    alphabet: Alphabet,
    forbidden: Vec<Word>,
    memory: usize,
    alive: Vec<bool>,
}

impl Sft {
    pub fn new(alphabet: Alphabet, forbidden: Vec<Word>) -> Result<Self> {
        for f in &forbidden {
            alphabet.check(f)?;
            if f.is_empty() {
                return Err(Error::invalid("forbidden words must be nonempty"));
            }
        }
        let memory = forbidden.iter().map(Word::len).max().unwrap_or(1) - 1;
        let states = alphabet
            .size()
            .checked_pow(memory as u32)
            .filter(|&s| s <= MAX_STATES)
            .ok_or_else(|| Error::invalid(format!("memory {memory} gives too many states")))?;
        let mut sft = Sft { alphabet, forbidden, memory, alive: vec![true; states] };
        sft.prune();
        if !sft.alive.iter().any(|&a| a) {
            return Err(Error::invalid("the forbidden list leaves an empty shift"));
        }
        Ok(sft)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn memory(&self) -> usize {
        self.memory
    }

    pub fn forbidden(&self) -> &[Word] {
        &self.forbidden
    }

    pub fn num_states(&self) -> usize {
        self.alive.len()
    }

    pub fn is_alive(&self, state: usize) -> bool {
        self.alive[state]
    }

    pub fn decode(&self, mut state: usize) -> Word {
        let a = self.alphabet.size();
        let mut v = vec![0u8; self.memory];
        for slot in v.iter_mut().rev() {
            *slot = (state % a) as u8;
            state /= a;
        }
        Word::new(v)
    }

    pub fn encode(&self, w: &[u8]) -> usize {
        w.iter().fold(0, |acc, &s| acc * self.alphabet.size() + s as usize)
    }

    fn ends_forbidden(&self, w: &[u8]) -> bool {
        self.forbidden.iter().any(|f| w.ends_with(f.symbols()))
    }

    /// `true` iff no forbidden word occurs in `w`.
    pub fn avoids(&self, w: &[u8]) -> bool {
        (1..=w.len()).all(|end| !self.ends_forbidden(&w[..end]))
    }

    /// Successor of `state` under `symbol`, or `None` when the window of length
    /// `M + 1` ends in a forbidden word.
    pub fn step(&self, state: usize, symbol: u8) -> Option<usize> {
        let mut win = self.decode(state).into_symbols();
        win.push(symbol);
        if self.ends_forbidden(&win) {
            return None;
        }
        Some(self.encode(&win[1..]))
    }

    fn prune(&mut self) {
        for s in 0..self.alive.len() {
            let w = self.decode(s);
            self.alive[s] = self.avoids(w.symbols());
        }
        loop {
            let mut changed = false;
            for s in 0..self.alive.len() {
                if self.alive[s] {
                    let ok = self.alphabet.symbols().any(|a| self.step(s, a).is_some_and(|t| self.alive[t]));
                    if !ok {
                        self.alive[s] = false;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
    }

    /// Alive edges `(from, symbol, to)`.
    pub fn edges(&self) -> Vec<(usize, u8, usize)> {
        let mut out = Vec::new();
        for s in (0..self.alive.len()).filter(|&s| self.alive[s]) {
            for a in self.alphabet.symbols() {
                if let Some(t) = self.step(s, a).filter(|&t| self.alive[t]) {
                    out.push((s, a, t));
                }
            }
        }
        out
    }

    /// A word is in the language iff it avoids the forbidden list and extends
    /// to the right forever.
    pub fn contains(&self, w: &Word) -> bool {
        let s = w.symbols();
        if !self.avoids(s) {
            return false;
        }
        if s.len() >= self.memory {
            return self.alive[self.encode(&s[s.len() - self.memory..])];
        }
        (0..self.alive.len()).any(|st| self.alive[st] && self.decode(st).symbols().starts_with(s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::w;

    #[test]
    fn golden_mean() {
        let s = Sft::new(Alphabet::BINARY, vec![w("11")]).unwrap();
        assert_eq!(s.memory(), 1);
        assert!(!s.contains(&w("0110")));
        assert!(s.contains(&w("0101")));
        assert_eq!(s.edges().len(), 3);
    }

    #[test]
    fn dead_ends_are_pruned() {
        // after a 1 every continuation is forbidden
        let s = Sft::new(Alphabet::BINARY, vec![w("10"), w("11")]).unwrap();
        assert!(!s.contains(&w("1")));
        assert!(s.contains(&w("000")));
    }

    #[test]
    fn full_shift_has_one_state() {
        let s = Sft::new(Alphabet::new(3).unwrap(), vec![]).unwrap();
        assert_eq!(s.memory(), 0);
        assert_eq!(s.num_states(), 1);
        assert!(s.contains(&w("0212")));
    }

    #[test]
    fn empty_shift_rejected() {
        assert!(Sft::new(Alphabet::BINARY, vec![w("0"), w("1")]).is_err());
    }
}
