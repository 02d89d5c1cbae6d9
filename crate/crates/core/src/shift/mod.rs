//! Shift spaces as membership oracles with exact, cached language enumeration.

pub mod beta;
pub mod coded;
pub mod config;
pub mod factor;
pub mod sft;
pub mod sgap;
pub mod staircase;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seq::IntSeq;
use crate::words::{Alphabet, Word};

pub use beta::{beta_expansion, BetaShift, BetaValue};
pub use coded::CodedShift;
pub use config::ModelConfig;
pub use factor::{apply_factor_code, BlockCode, FactorImage};
pub use sft::Sft;
pub use sgap::GapSet;
pub use staircase::{blocks, Staircase};

/// Default bound on the number of words held by one enumeration.
pub const DEFAULT_CAP: usize = 1 << 22;

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Full,
    Sft(Sft),
    Beta(BetaShift),
    SGap(GapSet),
    Staircase(Staircase),
    Coded(CodedShift),
}

/// A subset of the language selected for partition sums and repairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassSelector {
    /// The whole language `L`.
    Language,
    /// Generators `G`.
    G,
    /// Free concatenations `G*`.
    GStar,
    /// Staircase prefix set `{0^a 1^b : a < f(a+b)}`.
    P,
    /// Staircase suffix set `{0^a 1^b : b < f(a+b)}`.
    S,
    /// Subwords of generators.
    D,
}

impl fmt::Display for ClassSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ClassSelector::Language => "language",
            ClassSelector::G => "g",
            ClassSelector::GStar => "g_star",
            ClassSelector::P => "p",
            ClassSelector::S => "s",
            ClassSelector::D => "d",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for ClassSelector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "language" | "L" => Ok(ClassSelector::Language),
            "g" | "G" => Ok(ClassSelector::G),
            "g_star" | "G*" => Ok(ClassSelector::GStar),
            "p" | "P" => Ok(ClassSelector::P),
            "s" | "S" => Ok(ClassSelector::S),
            "d" | "D" => Ok(ClassSelector::D),
            _ => Err(Error::invalid(format!("unknown class `{s}`"))),
        }
    }
}

/// The words of length `n` in some class, sorted and distinct.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LanguageSlice {
    pub n: usize,
    pub words: Vec<Word>,
    /// `true` when `words` is provably the whole class at length `n`.
    pub complete: bool,
}

impl LanguageSlice {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.words.binary_search(w).is_ok()
    }
}

#[derive(Debug)]
pub struct ShiftModel {
    alphabet: Alphabet,
    family: Family,
    cache: Mutex<HashMap<usize, Arc<LanguageSlice>>>,
}

impl Clone for ShiftModel {
    fn clone(&self) -> Self {
        ShiftModel::new(self.alphabet, self.family.clone())
    }
}

impl PartialEq for ShiftModel {
    fn eq(&self, other: &Self) -> bool {
        self.alphabet == other.alphabet && self.family == other.family
    }
}

impl ShiftModel {
    pub fn new(alphabet: Alphabet, family: Family) -> Self {
        ShiftModel { alphabet, family, cache: Mutex::new(HashMap::new()) }
    }

    pub fn full(size: usize) -> Result<Self> {
        Ok(Self::new(Alphabet::new(size)?, Family::Full))
    }

    pub fn sft(alphabet: Alphabet, forbidden: Vec<Word>) -> Result<Self> {
        Ok(Self::new(alphabet, Family::Sft(Sft::new(alphabet, forbidden)?)))
    }

    /// The SFT forbidding `11`.
    pub fn golden_mean() -> Self {
        Self::sft(Alphabet::BINARY, vec![Word::new(vec![1, 1])]).expect("valid SFT")
    }

    pub fn beta(shift: BetaShift) -> Result<Self> {
        Ok(Self::new(Alphabet::new(shift.alphabet_size())?, Family::Beta(shift)))
    }

    pub fn sgap(set: GapSet) -> Self {
        Self::new(Alphabet::BINARY, Family::SGap(set))
    }

    pub fn staircase(f: IntSeq, n1: Option<u64>) -> Result<Self> {
        Ok(Self::new(Alphabet::BINARY, Family::Staircase(Staircase::new(f, n1)?)))
    }

    pub fn coded(alphabet: Alphabet, generators: Vec<Word>) -> Result<Self> {
        Ok(Self::new(alphabet, Family::Coded(CodedShift::new(alphabet, generators)?)))
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn as_staircase(&self) -> Option<&Staircase> {
        match &self.family {
            Family::Staircase(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_sft(&self) -> Option<&Sft> {
        match &self.family {
            Family::Sft(s) => Some(s),
            _ => None,
        }
    }

    /// Short human-readable description.
    pub fn describe(&self) -> String {
        match &self.family {
            Family::Full => format!("full {}-shift", self.alphabet.size()),
            Family::Sft(s) => {
                let f: Vec<String> = s.forbidden().iter().map(Word::to_string).collect();
                format!("SFT forbidding {{{}}}", f.join(","))
            }
            Family::Beta(b) => format!("beta-shift beta={}", b.spec),
            Family::SGap(s) => format!("S-gap shift S={s}"),
            Family::Staircase(s) => format!("staircase shift f={} n1={}", s.f(), s.n1()),
            Family::Coded(c) => {
                let g: Vec<String> = c.generators().iter().map(Word::to_string).collect();
                format!("coded shift G={{{}}}", g.join(","))
            }
        }
    }

    pub fn membership(&self, w: &Word) -> Result<bool> {
        self.alphabet.check(w)?;
        Ok(match &self.family {
            Family::Full => true,
            Family::Sft(s) => s.contains(w),
            Family::Beta(b) => b.membership_detail(w)?.0,
            Family::SGap(s) => sgap::contains(s, w),
            Family::Staircase(s) => s.contains(w),
            Family::Coded(c) => c.contains(w),
        })
    }

    /// Membership plus a precision flag; only β-shifts given by a decimal
    /// with stated precision can report an imprecise answer.
    pub fn membership_detail(&self, w: &Word) -> Result<(bool, bool)> {
        match &self.family {
            Family::Beta(b) => {
                self.alphabet.check(w)?;
                b.membership_detail(w)
            }
            _ => Ok((self.membership(w)?, true)),
        }
    }

    /// `L_n`, by prefix extension of `L_{n-1}`. Complete slices are cached.
    /// Past `cap` words the slice is truncated and marked incomplete.
    pub fn enumerate_language(&self, n: usize, cap: usize) -> Result<Arc<LanguageSlice>> {
        if let Some(s) = self.cache.lock().expect("cache lock").get(&n) {
            return Ok(s.clone());
        }
        let slice = if n == 0 {
            LanguageSlice { n, words: vec![Word::empty()], complete: true }
        } else {
            let prev = self.enumerate_language(n - 1, cap)?;
            let mut words = Vec::new();
            let mut complete = prev.complete;
            'outer: for p in &prev.words {
                for a in self.alphabet.symbols() {
                    let mut v = p.clone();
                    v.push(a);
                    if self.membership(&v)? {
                        if words.len() == cap {
                            complete = false;
                            break 'outer;
                        }
                        words.push(v);
                    }
                }
            }
            LanguageSlice { n, words, complete }
        };
        let slice = Arc::new(slice);
        if slice.complete {
            self.cache.lock().expect("cache lock").insert(n, slice.clone());
        }
        Ok(slice)
    }

    pub fn supports(&self, class: ClassSelector) -> bool {
        match (&self.family, class) {
            (_, ClassSelector::Language) => true,
            (Family::Full, ClassSelector::GStar) => true,
            (Family::Staircase(_), _) => true,
            (Family::Coded(_), ClassSelector::G | ClassSelector::GStar | ClassSelector::D) => true,
            _ => false,
        }
    }

    fn unsupported(&self, class: ClassSelector) -> Error {
        Error::Unsupported(format!("class `{class}` for the {}", self.describe()))
    }

    /// Membership in a class. The class `GStar` of a full shift is the whole
    /// language.
    pub fn class_contains(&self, class: ClassSelector, w: &Word) -> Result<bool> {
        self.alphabet.check(w)?;
        match (&self.family, class) {
            (_, ClassSelector::Language) | (Family::Full, ClassSelector::GStar) => self.membership(w),
            (Family::Staircase(s), _) => {
                let bl = blocks(w.symbols());
                let single = |p: &dyn Fn(usize, usize) -> bool| match bl.as_slice() {
                    [] => false,
                    [(a, b)] => p(*a, *b),
                    _ => false,
                };
                Ok(match class {
                    ClassSelector::G => single(&|a, b| s.in_g(a, b)),
                    ClassSelector::GStar => s.in_gstar(w),
                    ClassSelector::P => single(&|a, b| s.in_p(a, b)),
                    ClassSelector::S => single(&|a, b| s.in_s(a, b)),
                    ClassSelector::D => s.in_d(w),
                    ClassSelector::Language => unreachable!(),
                })
            }
            (Family::Coded(c), ClassSelector::G) => Ok(c.in_g(w)),
            (Family::Coded(c), ClassSelector::GStar) => Ok(c.in_gstar(w)),
            (Family::Coded(c), ClassSelector::D) => Ok(c.in_d(w)),
            _ => Err(self.unsupported(class)),
        }
    }

    /// The class at length `n`, sorted.
    pub fn enumerate_class(&self, class: ClassSelector, n: usize, cap: usize) -> Result<LanguageSlice> {
        let words = match (&self.family, class) {
            (_, ClassSelector::Language) | (Family::Full, ClassSelector::GStar) => {
                return self.enumerate_language(n, cap).map(|s| (*s).clone())
            }
            (Family::Staircase(s), ClassSelector::G) => s.generators(n),
            (Family::Staircase(s), ClassSelector::GStar) => s.gstar(n),
            (Family::Staircase(s), ClassSelector::P) => s.single_blocks(n, |a, b| n > 0 && s.in_p(a, b)),
            (Family::Staircase(s), ClassSelector::S) => s.single_blocks(n, |a, b| n > 0 && s.in_s(a, b)),
            (Family::Staircase(s), ClassSelector::D) => s.single_blocks(n, |_, _| true),
            (Family::Coded(c), ClassSelector::G) => c.generators_of_len(n),
            (Family::Coded(c), ClassSelector::GStar) => c.gstar(n),
            (Family::Coded(c), ClassSelector::D) => c.d_words(n),
            _ => return Err(self.unsupported(class)),
        };
        if words.len() > cap {
            return Ok(LanguageSlice { n, words: words.into_iter().take(cap).collect(), complete: false });
        }
        Ok(LanguageSlice { n, words, complete: true })
    }
}
