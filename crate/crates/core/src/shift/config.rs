//! JSON descriptions of models and block codes.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seq::IntSeq;
use crate::shift::beta::parse_rational;
use crate::shift::{BetaShift, BetaValue, BlockCode, GapSet, ShiftModel};
use crate::words::{Alphabet, Word};

fn two() -> usize {
    2
}

fn default_depth() -> usize {
    64
}

/// `{"family": "...", parameters...}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelConfig {
    Full {
        #[serde(default = "two")]
        alphabet: usize,
    },
    Sft {
        #[serde(default = "two")]
        alphabet: usize,
        forbidden: Vec<Word>,
    },
    /// The SFT forbidding `11`.
    GoldenMean,
    Beta {
        /// `p/q`, a decimal, `golden`, or `quadratic:a:b:d:c`.
        beta: String,
        /// Half-width of the uncertainty interval of a decimal `beta`.
        #[serde(default)]
        precision: Option<String>,
        #[serde(default = "default_depth")]
        depth: usize,
    },
    Sgap {
        s: GapSet,
    },
    Staircase {
        f: IntSeq,
        #[serde(default)]
        n1: Option<u64>,
    },
    Coded {
        #[serde(default = "two")]
        alphabet: usize,
        generators: Vec<Word>,
    },
}

impl ModelConfig {
    pub fn build(&self) -> Result<ShiftModel> {
        match self {
            ModelConfig::Full { alphabet } => ShiftModel::full(*alphabet),
            ModelConfig::Sft { alphabet, forbidden } => ShiftModel::sft(Alphabet::new(*alphabet)?, forbidden.clone()),
            ModelConfig::GoldenMean => Ok(ShiftModel::golden_mean()),
            ModelConfig::Beta { beta, precision, depth } => {
                let value: BetaValue = beta.parse()?;
                let eps = match precision {
                    Some(p) => Some(parse_rational(p).ok_or_else(|| Error::invalid(format!("bad precision `{p}`")))?),
                    None => None,
                };
                ShiftModel::beta(BetaShift::new(value, beta.clone(), *depth, eps)?)
            }
            ModelConfig::Sgap { s } => Ok(ShiftModel::sgap(s.clone())),
            ModelConfig::Staircase { f, n1 } => ShiftModel::staircase(f.clone(), *n1),
            ModelConfig::Coded { alphabet, generators } => ShiftModel::coded(Alphabet::new(*alphabet)?, generators.clone()),
        }
    }
}

/// `{"radius": r, "rule": "identity" | "sum_mod"}` or `{"radius": r, "table": {"01": 1, ...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeConfig {
    #[serde(default)]
    pub radius: usize,
    #[serde(default)]
    pub rule: Option<String>,
    #[serde(default)]
    pub table: Option<HashMap<String, u8>>,
    /// Output alphabet size; defaults to the input size.
    #[serde(default)]
    pub output_alphabet: Option<usize>,
}

impl CodeConfig {
    pub fn build(&self, input: Alphabet) -> Result<BlockCode> {
        let output = match self.output_alphabet {
            Some(k) => Alphabet::new(k)?,
            None => input,
        };
        match (&self.rule, &self.table) {
            (Some(rule), None) => match rule.as_str() {
                "identity" if self.radius == 0 => Ok(BlockCode::identity(input)),
                "identity" => BlockCode::from_fn(self.radius, input, output, |w| w[0]),
                "sum_mod" => {
                    let k = output.size() as u32;
                    BlockCode::from_fn(self.radius, input, output, |w| (w.iter().map(|&s| s as u32).sum::<u32>() % k) as u8)
                }
                _ => Err(Error::invalid(format!("unknown block rule `{rule}`"))),
            },
            (None, Some(table)) => {
                let t = table.iter().map(|(k, v)| Ok((k.parse::<Word>()?, *v))).collect::<Result<_>>()?;
                BlockCode::from_table(self.radius, input, output, t)
            }
            _ => Err(Error::invalid("block code needs exactly one of `rule` and `table`")),
        }
    }
}
