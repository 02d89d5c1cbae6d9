//! Two-sided bounds for `P(φ)` and `sup I(φ)`, and the hyperbolicity verdict.

use serde::Serialize;

use super::dp::{self, Semiring};
use super::{enumerate_sum, max_phi, Potential};
use crate::error::{Error, Result};
use crate::numeric::log_sum_exp;
use crate::series::pressure_from_series;
use crate::shift::{sgap, ClassSelector, Family, ShiftModel, DEFAULT_CAP};
use crate::words::{Alphabet, Word};

/// Absolute tolerance for verdict ties.
pub const TIE_TOL: f64 = 1e-9;

/// Longest cyclic word tried for the periodic-orbit lower bound on `sup I`.
const MAX_CYCLE: usize = 12;

/// Bisection tolerance for the series pressure of staircase shifts.
const SERIES_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PressureRow {
    pub n: usize,
    /// `log Λ_n(L, φ)`.
    pub log_lambda: f64,
    /// `log Λ_n(G*, φ)` when the model has a free concatenation class.
    pub log_lambda_gstar: Option<f64>,
    /// `max_{w ∈ L_n} Φ(w)`.
    pub max_phi: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PressureBracket {
    /// Largest length reached.
    pub n: usize,
    pub lower: f64,
    pub upper: f64,
    pub lower_certified: bool,
    pub upper_certified: bool,
    pub lower_method: String,
    pub upper_method: String,
    pub rows: Vec<PressureRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErgodicBracket {
    pub lower: f64,
    pub upper: f64,
    pub lower_method: String,
    pub upper_method: String,
    /// Cyclic word attaining `lower`, when found by search.
    pub witness: Option<Word>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING-KEBAB-CASE")]
pub enum Verdict {
    Hyperbolic,
    NotHyperbolic,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Hyperbolic => "HYPERBOLIC",
            Verdict::NotHyperbolic => "NOT-HYPERBOLIC",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HyperbolicityReport {
    pub verdict: Verdict,
    pub certified: bool,
    pub pressure: PressureBracket,
    pub sup_i: ErgodicBracket,
    /// `P_lower - supI_upper`; positive certifies hyperbolicity.
    pub margin_hyperbolic: f64,
    /// `supI_lower - P_upper`; nonnegative (up to ties) certifies the opposite.
    pub margin_not_hyperbolic: f64,
}

fn rate(log: f64, n: usize) -> f64 {
    log / n as f64
}

/// Rows of `log Λ_n` for `n = 1..=n_max`, stopping early when enumeration
/// exceeds `cap`.
fn rows(model: &ShiftModel, potential: &Potential, n_max: usize, cap: usize) -> Result<Vec<PressureRow>> {
    let p = potential.range1_values();
    let fast = |class, sr| p.and_then(|p| dp::fast_all(model, p, class, n_max, sr));
    let lang = fast(ClassSelector::Language, Semiring::Log);
    let maxes = fast(ClassSelector::Language, Semiring::Max);
    let gstar_ok = model.supports(ClassSelector::GStar);
    let gstar = if gstar_ok { fast(ClassSelector::GStar, Semiring::Log) } else { None };
    let mut out = Vec::new();
    for n in 1..=n_max {
        let log_lambda = match &lang {
            Some(v) => v[n],
            None => match enumerate_sum(model, potential, ClassSelector::Language, n, cap) {
                Ok(s) => s.log_value,
                Err(Error::CapExceeded { .. }) => break,
                Err(e) => return Err(e),
            },
        };
        let max_phi = match &maxes {
            Some(v) => Some(v[n]),
            None => max_phi(model, potential, ClassSelector::Language, n, cap).ok().map(|m| m.0),
        };
        let log_lambda_gstar = match (&gstar, gstar_ok) {
            (Some(v), _) => Some(v[n]),
            (None, true) => enumerate_sum(model, potential, ClassSelector::GStar, n, cap).ok().map(|s| s.log_value),
            (None, false) => None,
        };
        out.push(PressureRow { n, log_lambda, log_lambda_gstar, max_phi });
    }
    Ok(out)
}

/// Certified bracket on `P(φ)` for range-1 potentials; heuristic otherwise.
///
/// Upper: `min_n (1/n) log Λ_n(L)` (subadditive). Lower: `max_n (1/n) log
/// Λ_n(G*)` on coded models (superadditive), closed walks of the memory
/// graph on SFTs, and the exact rate on full shifts. On staircase shifts
/// with `φ = c - t 1_[1]`, `t > 0`, the bracket is intersected with
/// `c + P(-t 1_[1])` from the generating series.
pub fn pressure_bracket(model: &ShiftModel, potential: &Potential, n_max: usize) -> Result<PressureBracket> {
    pressure_bracket_capped(model, potential, n_max, DEFAULT_CAP)
}

pub fn pressure_bracket_capped(model: &ShiftModel, potential: &Potential, n_max: usize, cap: usize) -> Result<PressureBracket> {
    if n_max == 0 {
        return Err(Error::invalid("n_max must be at least 1"));
    }
    let certified = potential.range() == 1;
    let rows = rows(model, potential, n_max, cap)?;
    let n = rows.last().map_or(0, |r| r.n);
    let (mut upper, mut upper_method) = (f64::INFINITY, String::from("none"));
    for r in &rows {
        let v = rate(r.log_lambda, r.n);
        if v < upper {
            upper = v;
            upper_method = format!("min_n (1/n) log Λ_n(L) at n={}", r.n);
        }
    }
    let (mut lower, mut lower_method) = (f64::NEG_INFINITY, String::from("none"));
    for r in &rows {
        if let Some(g) = r.log_lambda_gstar {
            let v = rate(g, r.n);
            if v > lower {
                lower = v;
                lower_method = format!("max_n (1/n) log Λ_n(G*) at n={}", r.n);
            }
        }
    }
    if let (Family::Sft(s), Some(p)) = (model.family(), potential.range1_values()) {
        let z = dp::sft_closed_walks(s, p, n.max(1), 64);
        for (m, &v) in z.iter().enumerate().skip(1) {
            if v > f64::NEG_INFINITY && rate(v, m) > lower {
                lower = rate(v, m);
                lower_method = format!("closed walks of length {m} on the memory graph");
            }
        }
    }
    let mut exact = false;
    if let (Family::Full, Some(p)) = (model.family(), potential.range1_values()) {
        let v = log_sum_exp(p);
        lower = v;
        upper = v;
        lower_method = "exact rate of the full shift".into();
        upper_method = lower_method.clone();
        exact = true;
    }
    if let (Family::Staircase(s), Some(p)) = (model.family(), potential.range1_values()) {
        let t = p[0] - p[1];
        if t > 0.0 {
            let (lo, hi) = match pressure_from_series(s.f(), t, SERIES_TOL) {
                Ok(sp) => (sp.lo, sp.hi),
                Err(Error::Uncertifiable { lo, hi, .. }) => (lo, hi),
                Err(e) => return Err(e),
            };
            if p[0] + lo > lower {
                lower = p[0] + lo;
                lower_method = "root of the generating series".into();
            }
            if p[0] + hi < upper {
                upper = p[0] + hi;
                upper_method = "root of the generating series".into();
            }
        }
    }
    if !exact && lower > upper && lower - upper < TIE_TOL {
        lower = upper;
    }
    Ok(PressureBracket {
        n,
        lower,
        upper,
        lower_certified: certified && lower > f64::NEG_INFINITY,
        upper_certified: certified && upper < f64::INFINITY,
        lower_method,
        upper_method,
        rows,
    })
}

/// Whether the periodic point `w^∞` lies in the shift. Exact for every
/// family except β-shifts, where `www ∈ L` is used.
pub fn periodic_point_ok(model: &ShiftModel, w: &Word) -> Result<bool> {
    if w.is_empty() {
        return Err(Error::invalid("periodic points need a nonempty word"));
    }
    model.alphabet().check(w)?;
    Ok(match model.family() {
        Family::Full => true,
        Family::Sft(s) => {
            let longest = s.forbidden().iter().map(Word::len).max().unwrap_or(0);
            let reps = longest.div_ceil(w.len()) + 1;
            s.avoids(w.power(reps).symbols())
        }
        Family::SGap(set) if !w.iter().any(|&c| c == 1) => set.max().is_none(),
        Family::SGap(set) => sgap::contains(set, &w.power(3)),
        Family::Staircase(_) | Family::Beta(_) => model.membership(&w.power(3))?,
        Family::Coded(c) => c.periodic_ok(w),
    })
}

/// Bracket on `sup I(φ) = sup_μ ∫ φ dμ`.
///
/// Upper: `min_n max_{w ∈ L_n} Φ(w)/n`. Lower: the maximum cycle mean of the
/// memory graph on SFTs; otherwise the best `Φ(w)/|w|` over cyclic words `w`
/// with `w^∞` in the shift, `|w| <= 12`.
pub fn sup_ergodic_bracket(model: &ShiftModel, potential: &Potential, n_max: usize) -> Result<ErgodicBracket> {
    if n_max == 0 {
        return Err(Error::invalid("n_max must be at least 1"));
    }
    let maxes = potential.range1_values().and_then(|p| dp::fast_all(model, p, ClassSelector::Language, n_max, Semiring::Max));
    let (mut upper, mut upper_method) = (f64::INFINITY, String::from("none"));
    for n in 1..=n_max {
        let m = match &maxes {
            Some(v) => v[n],
            None => match max_phi(model, potential, ClassSelector::Language, n, DEFAULT_CAP) {
                Ok((m, _)) => m,
                Err(Error::CapExceeded { .. }) => break,
                Err(e) => return Err(e),
            },
        };
        if m / (n as f64) < upper {
            upper = m / (n as f64);
            upper_method = format!("max Φ/n over L_n at n={n}");
        }
    }
    if let (Family::Sft(s), Some(p)) = (model.family(), potential.range1_values()) {
        if let Some(v) = dp::max_mean_cycle(s, p) {
            return Ok(ErgodicBracket {
                lower: v,
                upper: upper.max(v),
                lower_method: "maximum cycle mean".into(),
                upper_method,
                witness: None,
            });
        }
    }
    let (lower, witness) = best_cycle(model, potential, model.alphabet(), MAX_CYCLE.min(n_max.max(1)))?;
    let lower_method = match &witness {
        Some(w) => format!("periodic orbit of `{w}`"),
        None => "none".into(),
    };
    Ok(ErgodicBracket { lower, upper: upper.max(lower), lower_method, upper_method, witness })
}

fn best_cycle(model: &ShiftModel, potential: &Potential, alphabet: Alphabet, max_len: usize) -> Result<(f64, Option<Word>)> {
    let mut best: (f64, Option<Word>) = (f64::NEG_INFINITY, None);
    for len in 1..=max_len {
        if alphabet.size().checked_pow(len as u32).is_none_or(|c| c > 1 << 16) {
            break;
        }
        for w in alphabet.all_words(len) {
            if !periodic_point_ok(model, &w)? {
                continue;
            }
            // average of S_n φ along the orbit of w^∞
            let ww = w.power(1 + potential.range().div_ceil(len));
            let avg = potential.inner_sum(&ww.symbols()[..len + potential.range() - 1]) / len as f64;
            if avg > best.0 + 1e-15 {
                best = (avg, Some(w));
            }
        }
    }
    Ok(best)
}

/// Verdict from the two brackets: `HYPERBOLIC` iff `P_lower > supI_upper`,
/// `NOT-HYPERBOLIC` iff `P_upper <= supI_lower` (ties within `1e-9`).
pub fn hyperbolicity_check(model: &ShiftModel, potential: &Potential, n_max: usize) -> Result<HyperbolicityReport> {
    let pressure = pressure_bracket(model, potential, n_max)?;
    let sup_i = sup_ergodic_bracket(model, potential, n_max)?;
    let margin_hyperbolic = pressure.lower - sup_i.upper;
    let margin_not_hyperbolic = sup_i.lower - pressure.upper;
    let verdict = if margin_hyperbolic > TIE_TOL {
        Verdict::Hyperbolic
    } else if margin_not_hyperbolic >= -TIE_TOL {
        Verdict::NotHyperbolic
    } else {
        Verdict::Inconclusive
    };
    let certified = verdict != Verdict::Inconclusive && potential.range() == 1;
    Ok(HyperbolicityReport { verdict, certified, pressure, sup_i, margin_hyperbolic, margin_not_hyperbolic })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::IntSeq;

    #[test]
    fn full_shift_is_exact() {
        let b = pressure_bracket(&ShiftModel::full(2).unwrap(), &Potential::zero(Alphabet::BINARY), 8).unwrap();
        assert_eq!(b.lower, 2f64.ln());
        assert_eq!(b.upper, 2f64.ln());
    }

    #[test]
    fn golden_mean_bracket() {
        let b = pressure_bracket(&ShiftModel::golden_mean(), &Potential::zero(Alphabet::BINARY), 24).unwrap();
        let h = ((1.0 + 5f64.sqrt()) / 2.0).ln();
        assert!(b.lower <= h && h <= b.upper);
        assert!(b.upper - b.lower < 0.1, "{b:?}");
    }

    #[test]
    fn sup_i_examples() {
        let st = ShiftModel::staircase(IntSeq::CeilLog2, None).unwrap();
        let e = sup_ergodic_bracket(&st, &Potential::minus_t_indicator(1.0), 16).unwrap();
        assert_eq!((e.lower, e.upper), (0.0, 0.0));
        assert_eq!(e.witness, Some(crate::words::w("0")));
        let c = Potential::range1(vec![-1.0, -1.0]).unwrap();
        let e = sup_ergodic_bracket(&ShiftModel::full(2).unwrap(), &c, 6).unwrap();
        assert_eq!((e.lower, e.upper), (-1.0, -1.0));
        let e = sup_ergodic_bracket(&ShiftModel::golden_mean(), &Potential::range1(vec![0.0, 1.0]).unwrap(), 10).unwrap();
        assert!((e.lower - 0.5).abs() < 1e-12);
    }

    #[test]
    fn periodic_points() {
        use crate::words::w;
        let st = ShiftModel::staircase(IntSeq::Const(2), None).unwrap();
        assert!(periodic_point_ok(&st, &w("0011")).unwrap());
        assert!(!periodic_point_ok(&st, &w("01")).unwrap());
        let gap = ShiftModel::sgap("list:1,2".parse().unwrap());
        assert!(!periodic_point_ok(&gap, &w("0")).unwrap());
        assert!(periodic_point_ok(&gap, &w("01")).unwrap());
    }

    #[test]
    fn verdicts() {
        let r = hyperbolicity_check(&ShiftModel::full(2).unwrap(), &Potential::zero(Alphabet::BINARY), 6).unwrap();
        assert_eq!(r.verdict, Verdict::Hyperbolic);
        let st = ShiftModel::staircase(IntSeq::Const(1), None).unwrap();
        let r = hyperbolicity_check(&st, &Potential::minus_t_indicator(1.0), 16).unwrap();
        assert_eq!(r.verdict, Verdict::Hyperbolic);
    }
}
