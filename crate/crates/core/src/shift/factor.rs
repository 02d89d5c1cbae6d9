//! Sliding block codes with a forward window and their images.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::seq::IntSeq;
use crate::shift::{LanguageSlice, ShiftModel};
use crate::words::{Alphabet, Word};

/// A map from windows of length `r + 1` to output symbols. Output position
/// `i` reads input positions `i..=i+r`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockCode {
    radius: usize,
    input: Alphabet,
    output: Alphabet,
    table: HashMap<Word, u8>,
}

impl BlockCode {
    /// Builds a code from an explicit table, which must be total on `A^{r+1}`.
    pub fn from_table(radius: usize, input: Alphabet, output: Alphabet, table: HashMap<Word, u8>) -> Result<Self> {
        for win in input.all_words(radius + 1) {
            let out = table.get(&win).ok_or_else(|| Error::invalid(format!("block code has no value for `{win}`")))?;
            if *out as usize >= output.size() {
                return Err(Error::SymbolOutOfRange { symbol: *out, size: output.size() });
            }
        }
        if table.len() != input.size().pow(radius as u32 + 1) {
            return Err(Error::invalid("block code table has windows of the wrong length or alphabet"));
        }
        Ok(BlockCode { radius, input, output, table })
    }

    /// Built from a rule on windows.
    pub fn from_fn(radius: usize, input: Alphabet, output: Alphabet, rule: impl Fn(&[u8]) -> u8) -> Result<Self> {
        let table = input.all_words(radius + 1).map(|w| (w.clone(), rule(w.symbols()))).collect();
        Self::from_table(radius, input, output, table)
    }

    pub fn identity(alphabet: Alphabet) -> Self {
        Self::from_fn(0, alphabet, alphabet, |w| w[0]).expect("identity is total")
    }

    /// Window sum modulo the alphabet size.
    pub fn sum_mod(radius: usize, alphabet: Alphabet) -> Self {
        let k = alphabet.size() as u32;
        Self::from_fn(radius, alphabet, alphabet, |w| (w.iter().map(|&s| s as u32).sum::<u32>() % k) as u8)
            .expect("sum rule is total")
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn output_alphabet(&self) -> Alphabet {
        self.output
    }

    /// Image of a word of length `n + r`, of length `n`.
    pub fn apply(&self, w: &Word) -> Result<Word> {
        self.input.check(w)?;
        let s = w.symbols();
        if s.len() < self.radius {
            return Err(Error::invalid(format!("word shorter than the window radius {}", self.radius)));
        }
        Ok(Word::new((0..s.len() - self.radius).map(|i| self.table[&Word::new(s[i..=i + self.radius].to_vec())]).collect()))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FactorImage {
    pub slice: LanguageSlice,
    /// `g~(n) = (4r+3) g(n+2r) + 4r`.
    pub g_tilde: IntSeq,
}

/// The image language at length `n` and the transferred mistake function.
pub fn apply_factor_code(model: &ShiftModel, code: &BlockCode, g: &IntSeq, n: usize, cap: usize) -> Result<FactorImage> {
    if code.input != model.alphabet() {
        return Err(Error::invalid("block code input alphabet differs from the model alphabet"));
    }
    let src = model.enumerate_language(n + code.radius, cap)?;
    if !src.complete {
        return Err(Error::CapExceeded { cap, n: n + code.radius });
    }
    let image: BTreeSet<Word> = src.words.iter().map(|w| code.apply(w)).collect::<Result<_>>()?;
    Ok(FactorImage {
        slice: LanguageSlice { n, words: image.into_iter().collect(), complete: true },
        g_tilde: IntSeq::factor_transfer(g, code.radius as u64),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shift::DEFAULT_CAP;
    use crate::words::w;

    #[test]
    fn identity_reproduces_language() {
        let m = ShiftModel::golden_mean();
        let img = apply_factor_code(&m, &BlockCode::identity(Alphabet::BINARY), &IntSeq::Const(2), 5, DEFAULT_CAP).unwrap();
        assert_eq!(img.slice.words, m.enumerate_language(5, DEFAULT_CAP).unwrap().words);
        assert_eq!(img.g_tilde.eval(7), 6);
    }

    #[test]
    fn transfer_formula_with_radius_one() {
        let g = IntSeq::factor_transfer(&IntSeq::Const(1), 1);
        assert_eq!(g.eval(3), 11);
    }

    #[test]
    fn xor_code_on_full_shift_is_onto() {
        let m = ShiftModel::full(2).unwrap();
        let code = BlockCode::sum_mod(1, Alphabet::BINARY);
        assert_eq!(code.apply(&w("0110")).unwrap(), w("101"));
        let img = apply_factor_code(&m, &code, &IntSeq::Const(0), 6, DEFAULT_CAP).unwrap();
        assert_eq!(img.slice.len(), 64);
    }

    #[test]
    fn partial_table_rejected() {
        let mut t = HashMap::new();
        t.insert(w("0"), 0);
        assert!(BlockCode::from_table(0, Alphabet::BINARY, Alphabet::BINARY, t).is_err());
    }
}
