//! Job files: model, potential, command and per-command parameters.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thermoshift::shift::config::CodeConfig;
use thermoshift::shift::{ModelConfig, DEFAULT_CAP};
use thermoshift::thermo::{Holder, Potential};
use thermoshift::{ClassSelector, IntSeq, Word};

use crate::failure::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandName {
    Enumerate,
    Pressure,
    Hyperbolicity,
    Approach,
    Series,
    BowenRoot,
    Decipher,
    Decompose,
    GapLab,
    Factor,
}

/// Range-1 potentials only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PotentialConfig {
    #[default]
    Zero,
    /// One value per symbol.
    Table { values: Vec<f64> },
    /// `-t 1_[1]` on the binary alphabet.
    MinusIndicator { t: f64 },
}

impl PotentialConfig {
    pub fn build(&self, alphabet_size: usize) -> Result<Potential, Failure> {
        let pot = match self {
            PotentialConfig::Zero => Potential::zero(thermoshift::Alphabet::new(alphabet_size)?),
            PotentialConfig::Table { values } => Potential::range1(values.clone())?,
            PotentialConfig::MinusIndicator { t } => {
                if !t.is_finite() {
                    return Err(Failure::schema("potential t must be finite"));
                }
                Potential::minus_t_indicator(*t)
            }
        };
        if pot.alphabet().size() != alphabet_size {
            return Err(Failure::schema(format!(
                "potential has {} symbols but the model alphabet has {alphabet_size}",
                pot.alphabet().size()
            )));
        }
        Ok(pot)
    }
}

/// The job file as read from disk. `params` is decoded per command.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawJob {
    #[serde(default)]
    pub model: Option<ModelConfig>,
    #[serde(default)]
    pub potential: PotentialConfig,
    pub command: CommandName,
    #[serde(default)]
    pub params: Option<Value>,
    #[serde(default)]
    pub cap: Option<usize>,
}

/// A job with defaults filled in. Serializing it gives a file that re-runs
/// to the same output.
#[derive(Debug, Clone, Serialize)]
pub struct ResolvedJob {
    pub model: Option<ModelConfig>,
    pub potential: PotentialConfig,
    pub command: CommandName,
    pub params: Value,
    pub cap: usize,
}

pub fn decode_params<T: DeserializeOwned + Serialize>(raw: &Option<Value>) -> Result<(T, Value), Failure> {
    let v = raw.clone().unwrap_or_else(|| Value::Object(Default::default()));
    let typed: T = serde_json::from_value(v).map_err(|e| Failure::schema(format!("params: {e}")))?;
    let resolved = serde_json::to_value(&typed).expect("params serialize");
    Ok((typed, resolved))
}

pub fn resolve_cap(file_cap: Option<usize>, flag_cap: Option<usize>) -> Result<usize, Failure> {
    let cap = flag_cap.or(file_cap).unwrap_or(DEFAULT_CAP);
    if cap == 0 {
        return Err(Failure::schema("cap must be positive"));
    }
    Ok(cap)
}

fn one() -> usize {
    1
}

fn default_class() -> ClassSelector {
    ClassSelector::Language
}

fn default_gstar() -> ClassSelector {
    ClassSelector::GStar
}

fn default_tol() -> f64 {
    1e-4
}

fn default_margin() -> f64 {
    0.05
}

fn default_holder() -> Holder {
    Holder { alpha: 1.0, c: 1.0 }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnumerateParams {
    #[serde(default = "one")]
    pub n_min: usize,
    pub n_max: usize,
    #[serde(default = "default_class")]
    pub class: ClassSelector,
    /// Include the word lists in the JSON report.
    #[serde(default)]
    pub words: bool,
}

/// Shared by `pressure` and `hyperbolicity`. Each `t` in `t_grid` scales the
/// configured potential; without a grid the potential is used as given.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridParams {
    #[serde(default = "one")]
    pub n_min: usize,
    pub n_max: usize,
    #[serde(default)]
    pub t_grid: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ApproachParams {
    #[serde(default = "default_gstar")]
    pub class: ClassSelector,
    /// Mistake budget; staircase models default to `2n1 + 2max(f(n), n1)`.
    #[serde(default)]
    pub g: Option<IntSeq>,
    #[serde(default = "one")]
    pub n_min: usize,
    pub n_max: usize,
    /// Lengths below `n0` are reported but not judged.
    #[serde(default)]
    pub n0: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesParams {
    /// Defaults to the staircase model's `f`.
    #[serde(default)]
    pub f: Option<IntSeq>,
    pub t: f64,
    pub x: f64,
    /// Truncation orders `N`.
    pub n_terms: Vec<usize>,
    /// Also bracket `P(-t 1_[1])` through the series root, to this tolerance.
    #[serde(default)]
    pub pressure_tol: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BowenParams {
    #[serde(default)]
    pub f: Option<IntSeq>,
    /// Summability witness: `Σ γ^{f(n)} < ∞`.
    #[serde(default)]
    pub gamma: Option<f64>,
    #[serde(default = "default_tol")]
    pub tol: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecipherParams {
    /// An explicit finite code.
    #[serde(default)]
    pub code: Option<Vec<Word>>,
    /// Staircase generators of length at most this.
    #[serde(default)]
    pub truncate: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecomposeParams {
    #[serde(default)]
    pub words: Option<Vec<Word>>,
    /// Every word of `L_n`.
    #[serde(default)]
    pub n: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GapMode {
    Formula,
    Toy,
}

fn default_trials() -> usize {
    2000
}

fn default_sum_n() -> u64 {
    10_000
}

fn default_count() -> usize {
    20
}

fn default_parts() -> usize {
    4
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GapLabParams {
    pub mode: GapMode,
    /// Mistake function of the approachability hypothesis.
    pub g: IntSeq,
    #[serde(default = "default_holder")]
    pub holder: Holder,
    #[serde(default = "default_margin")]
    pub margin: f64,
    #[serde(default = "default_trials")]
    pub sum_g_trials: usize,
    #[serde(default = "default_sum_n")]
    pub sum_g_n_max: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub toy: Option<ToyParams>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToyParams {
    /// Defaults to the potential's spread.
    #[serde(default)]
    pub v: Option<f64>,
    pub beta: f64,
    pub m: u64,
    pub gamma: f64,
    pub l: f64,
    pub delta_exp: u64,
    #[serde(default = "one_u64")]
    pub corridor: u64,
    pub n: usize,
    #[serde(default = "default_count")]
    pub instances: usize,
    #[serde(default = "default_parts")]
    pub max_parts: usize,
}

fn one_u64() -> u64 {
    1
}

fn default_factor_n() -> usize {
    8
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorParams {
    pub code: CodeConfig,
    pub g: IntSeq,
    #[serde(default = "one")]
    pub n_min: usize,
    #[serde(default = "default_factor_n")]
    pub n_max: usize,
}
