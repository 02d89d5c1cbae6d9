//! Nondecreasing integer sequences `N -> N` used as staircase profiles `f`
//! and as mistake functions `g`.
//!
//! Every variant is a named built-in so that tail sums and sublogarithmic
//! thresholds can be bounded analytically rather than by sampling.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Horizon used when a property is checked by direct scan.
pub const SCAN_HORIZON: u64 = 1 << 12;

#[derive(Debug, Clone, PartialEq)]
pub enum IntSeq {
    /// `n -> c`
    Const(u64),
    /// `n -> ceil(n / k)`
    CeilNOver(u64),
    /// `n -> ceil(log2(n + 1))`
    CeilLog2,
    /// `n -> ceil(ln ln(n + e))`
    CeilLogLog,
    /// Explicit values for `n = 1..=values.len()`, then `tail` (or the last
    /// value held forever when `tail` is `None`).
    Table { values: Vec<u64>, tail: Option<Box<IntSeq>> },
    /// `n -> 2 n1 + 2 max(f(n), n1)`, the staircase approachability budget.
    StaircaseBudget { f: Box<IntSeq>, n1: u64 },
    /// `n -> (4r + 3) g(n + 2r) + 4r`, the mistake function of an `r`-block factor.
    FactorTransfer { g: Box<IntSeq>, r: u64 },
}

/// How a sequence behaves for large `n`.
enum Growth {
    /// Equal to `value` for all `n >= from`.
    Constant { from: u64, value: u64 },
    /// `ceil(ln ln(n + e))` for all `n >= from`.
    LogLog { from: u64 },
    /// Grows at least logarithmically.
    Fast,
}

impl IntSeq {
    pub fn eval(&self, n: u64) -> u64 {
        match self {
            IntSeq::Const(c) => *c,
            IntSeq::CeilNOver(k) => n.div_ceil(*k),
            IntSeq::CeilLog2 => ceil_log2_plus_one(n),
            IntSeq::CeilLogLog => ((n as f64 + std::f64::consts::E).ln().ln()).ceil().max(0.0) as u64,
            IntSeq::Table { values, tail } => {
                if n >= 1 && (n as usize) <= values.len() {
                    values[n as usize - 1]
                } else if n == 0 {
                    values.first().copied().unwrap_or(0)
                } else {
                    match tail {
                        Some(t) => t.eval(n),
                        None => values.last().copied().unwrap_or(0),
                    }
                }
            }
            IntSeq::StaircaseBudget { f, n1 } => 2 * n1 + 2 * f.eval(n).max(*n1),
            IntSeq::FactorTransfer { g, r } => (4 * r + 3) * g.eval(n + 2 * r) + 4 * r,
        }
    }

    fn growth(&self) -> Growth {
        match self {
            IntSeq::Const(c) => Growth::Constant { from: 1, value: *c },
            IntSeq::CeilLogLog => Growth::LogLog { from: 1 },
            IntSeq::CeilNOver(_) | IntSeq::CeilLog2 => Growth::Fast,
            IntSeq::Table { values, tail } => {
                let len = values.len() as u64;
                match tail {
                    None => Growth::Constant { from: len.max(1), value: values.last().copied().unwrap_or(0) },
                    Some(t) => match t.growth() {
                        Growth::Constant { from, value } => Growth::Constant { from: from.max(len + 1), value },
                        Growth::LogLog { from } => Growth::LogLog { from: from.max(len + 1) },
                        Growth::Fast => Growth::Fast,
                    },
                }
            }
            IntSeq::StaircaseBudget { f, n1 } => match f.growth() {
                Growth::Constant { from, value } => Growth::Constant { from, value: 2 * n1 + 2 * value.max(*n1) },
                _ => Growth::Fast,
            },
            IntSeq::FactorTransfer { g, r } => match g.growth() {
                Growth::Constant { from, value } => {
                    Growth::Constant { from: from.saturating_sub(2 * r).max(1), value: (4 * r + 3) * value + 4 * r }
                }
                _ => Growth::Fast,
            },
        }
    }

    /// `Some((from, value))` when the sequence equals `value` for all `n >= from`.
    pub fn eventually_constant(&self) -> Option<(u64, u64)> {
        match self.growth() {
            Growth::Constant { from, value } => Some((from, value)),
            _ => None,
        }
    }

    /// Checks monotonicity and `f >= 1` on `1..=SCAN_HORIZON`.
    pub fn check_profile(&self) -> Result<()> {
        let mut prev = 0;
        for n in 1..=SCAN_HORIZON {
            let v = self.eval(n);
            if v == 0 {
                return Err(Error::invalid(format!("{self}: f({n}) = 0, values must be >= 1")));
            }
            if v < prev {
                return Err(Error::invalid(format!("{self} is not nondecreasing at n = {n}")));
            }
            prev = v;
        }
        Ok(())
    }

    /// Smallest `n1` with `1 <= f(n) <= n/2` for every sampled `n >= n1`.
    pub fn min_n1(&self) -> Option<u64> {
        let mut n1 = None;
        for n in (1..=SCAN_HORIZON).rev() {
            let v = self.eval(n);
            if v >= 1 && 2 * v <= n {
                n1 = Some(n);
            } else {
                break;
            }
        }
        n1
    }

    /// Certified upper bound on `sum_{n > big_n} gamma^{f(n)}` for `0 < gamma < 1`,
    /// or `None` if the series diverges or no analytic bound is available.
    pub fn tail_sum_bound(&self, gamma: f64, big_n: u64) -> Option<f64> {
        if !(gamma > 0.0 && gamma < 1.0) {
            return None;
        }
        match self {
            IntSeq::Const(_) | IntSeq::CeilLogLog | IntSeq::StaircaseBudget { .. } | IntSeq::FactorTransfer { .. } => {
                None
            }
            IntSeq::CeilNOver(k) => {
                // ceil(n/k) >= n/k, so the tail is below a geometric series
                let r = gamma.powf(1.0 / *k as f64);
                Some(r.powf((big_n + 1) as f64) / (1.0 - r))
            }
            IntSeq::CeilLog2 => {
                // gamma^{ceil(log2(n+1))} <= (n+1)^{-p}; integral test on the p-series
                let p = -gamma.log2();
                if p <= 1.0 {
                    None
                } else {
                    Some(((big_n + 1) as f64).powf(1.0 - p) / (p - 1.0))
                }
            }
            IntSeq::Table { values, tail } => {
                let len = values.len() as u64;
                let tail_bound = match tail {
                    Some(t) => t.tail_sum_bound(gamma, big_n.max(len))?,
                    None => return None,
                };
                let head: f64 = (big_n + 1..=len).map(|n| gamma.powf(values[n as usize - 1] as f64)).sum();
                Some(head + tail_bound)
            }
        }
    }

    /// `ln K` for the smallest `K` with `g(n) < gamma ln n` for all `n > K`, or
    /// `None` if `g` is not sublogarithmic.
    pub fn ln_sublog_threshold(&self, gamma: f64) -> Option<f64> {
        if gamma <= 0.0 {
            return None;
        }
        let scan_violation = |upto: u64| -> f64 {
            let mut last = 0u64;
            for n in 1..=upto {
                if (self.eval(n) as f64) >= gamma * (n as f64).ln() {
                    last = n;
                }
            }
            if last == 0 {
                f64::NEG_INFINITY
            } else {
                (last as f64).ln()
            }
        };
        match self.growth() {
            Growth::Fast => None,
            Growth::Constant { from, value } => {
                let head = scan_violation(from.min(SCAN_HORIZON));
                // for n >= from, violations are exactly n <= e^{value / gamma}
                let tail_cut = value as f64 / gamma;
                let tail = if tail_cut >= (from as f64).ln() { tail_cut } else { f64::NEG_INFINITY };
                Some(head.max(tail).max(0.0))
            }
            Growth::LogLog { from } => {
                let head = scan_violation(SCAN_HORIZON.max(from));
                let ln_scan = (SCAN_HORIZON.max(from) as f64).ln();
                let mut best = head;
                // the value v occupies ln(n + e) in (e^{v-1}, e^v]
                let mut v = 1.0f64;
                loop {
                    let start = (v - 1.0).exp();
                    if start > v / gamma && start > ln_scan {
                        break;
                    }
                    let end = v.exp();
                    let lo = start.max(ln_scan);
                    let hi = end.min(v / gamma);
                    if hi > lo {
                        best = best.max(hi);
                    }
                    v += 1.0;
                    if v > 1e4 {
                        break;
                    }
                }
                Some(best.max(0.0))
            }
        }
    }

    /// `g(n)` for `n = e^{ln_n}`, valid even when `n` overflows `u64`.
    pub fn eval_at_ln(&self, ln_n: f64) -> u64 {
        if ln_n < 40.0 {
            return self.eval(ln_n.exp().round().max(1.0) as u64);
        }
        match self.growth() {
            Growth::Constant { value, .. } => value,
            Growth::LogLog { .. } => ln_n.ln().ceil() as u64,
            Growth::Fast => u64::MAX,
        }
    }

    pub fn staircase_budget(f: &IntSeq, n1: u64) -> IntSeq {
        IntSeq::StaircaseBudget { f: Box::new(f.clone()), n1 }
    }

    pub fn factor_transfer(g: &IntSeq, r: u64) -> IntSeq {
        IntSeq::FactorTransfer { g: Box::new(g.clone()), r }
    }
}

fn ceil_log2_plus_one(n: u64) -> u64 {
    // ceil(log2(n+1)) = number of bits of n
    64 - n.leading_zeros() as u64
}

impl fmt::Display for IntSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntSeq::Const(c) => write!(f, "const:{c}"),
            IntSeq::CeilNOver(k) => write!(f, "ceil_n_over:{k}"),
            IntSeq::CeilLog2 => write!(f, "ceil_log2"),
            IntSeq::CeilLogLog => write!(f, "ceil_loglog"),
            IntSeq::Table { values, tail } => {
                write!(f, "table:{values:?}")?;
                match tail {
                    Some(t) => write!(f, "+{t}"),
                    None => write!(f, "+hold"),
                }
            }
            IntSeq::StaircaseBudget { f: inner, n1 } => write!(f, "staircase_budget:{n1}:{inner}"),
            IntSeq::FactorTransfer { g, r } => write!(f, "factor_transfer:{r}:{g}"),
        }
    }
}

impl FromStr for IntSeq {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let num = |x: &str| -> Result<u64> {
            x.parse::<u64>().map_err(|_| Error::invalid(format!("bad integer `{x}` in sequence `{s}`")))
        };
        if let Some(rest) = s.strip_prefix("const:") {
            return Ok(IntSeq::Const(num(rest)?));
        }
        if let Some(rest) = s.strip_prefix("ceil_n_over:") {
            let k = num(rest)?;
            if k == 0 {
                return Err(Error::invalid("ceil_n_over needs k >= 1"));
            }
            return Ok(IntSeq::CeilNOver(k));
        }
        if let Some(rest) = s.strip_prefix("staircase_budget:") {
            let (n1, inner) = rest
                .split_once(':')
                .ok_or_else(|| Error::invalid("staircase_budget:<n1>:<f> expected"))?;
            return Ok(IntSeq::StaircaseBudget { f: Box::new(inner.parse()?), n1: num(n1)? });
        }
        if let Some(rest) = s.strip_prefix("factor_transfer:") {
            let (r, inner) = rest
                .split_once(':')
                .ok_or_else(|| Error::invalid("factor_transfer:<r>:<g> expected"))?;
            return Ok(IntSeq::FactorTransfer { g: Box::new(inner.parse()?), r: num(r)? });
        }
        if let Some(rest) = s.strip_prefix("table:") {
            let (vals, tail) = rest.split_once('+').unwrap_or((rest, "hold"));
            let values: Vec<u64> = vals
                .trim_matches(|c| c == '[' || c == ']')
                .split(',')
                .filter(|x| !x.trim().is_empty())
                .map(|x| num(x.trim()))
                .collect::<Result<_>>()?;
            if values.is_empty() {
                return Err(Error::invalid("table needs at least one value"));
            }
            let tail = if tail == "hold" { None } else { Some(Box::new(tail.parse()?)) };
            return Ok(IntSeq::Table { values, tail });
        }
        match s {
            "ceil_log2" => Ok(IntSeq::CeilLog2),
            "ceil_loglog" => Ok(IntSeq::CeilLogLog),
            _ => Err(Error::invalid(format!("unknown sequence built-in `{s}`"))),
        }
    }
}

/// JSON form: either a built-in name or `{"table": [...], "tail": "hold" | <name>}`.
#[derive(Deserialize)]
#[serde(untagged)]
enum SeqRepr {
    Name(String),
    Table { table: Vec<u64>, #[serde(default)] tail: Option<String> },
}

impl<'de> Deserialize<'de> for IntSeq {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        match SeqRepr::deserialize(de)? {
            SeqRepr::Name(s) => s.parse().map_err(serde::de::Error::custom),
            SeqRepr::Table { table, tail } => {
                if table.is_empty() {
                    return Err(serde::de::Error::custom("table needs at least one value"));
                }
                let tail = match tail.as_deref() {
                    None | Some("hold") => None,
                    Some(name) => Some(Box::new(name.parse().map_err(serde::de::Error::custom)?)),
                };
                Ok(IntSeq::Table { values: table, tail })
            }
        }
    }
}

impl Serialize for IntSeq {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.collect_str(self)
    }
}
