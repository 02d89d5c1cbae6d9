//! Locally constant potentials, `Φ(w) = sup_{x ∈ [w]} S_n φ(x)`, partition
//! sums `Λ_n(D, φ) = Σ_{w ∈ D_n} e^{Φ(w)}`, pressure and hyperbolicity.

mod bracket;
pub(crate) mod dp;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{CompensatedSum, LogSumExp};
use crate::shift::{ClassSelector, ShiftModel};
use crate::words::{Alphabet, Word};

pub use bracket::{
    hyperbolicity_check, periodic_point_ok, pressure_bracket, pressure_bracket_capped, sup_ergodic_bracket, ErgodicBracket, HyperbolicityReport,
    PressureBracket, PressureRow, Verdict, TIE_TOL,
};

/// Hölder data `(α, |φ|_α)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Holder {
    pub alpha: f64,
    pub c: f64,
}

impl Holder {
    /// `V = |φ|_α / (1 - 2^{-α})`.
    pub fn bowen_constant(&self) -> f64 {
        self.c / (1.0 - (-self.alpha).exp2())
    }
}

/// A potential depending on the first `range` symbols.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Potential {
    alphabet: Alphabet,
    range: usize,
    /// Indexed by the window read in base `#A`, first symbol most significant.
    table: Vec<f64>,
    holder: Option<Holder>,
}

impl Potential {
    pub fn new(alphabet: Alphabet, range: usize, table: Vec<f64>) -> Result<Self> {
        if range == 0 {
            return Err(Error::invalid("potential range must be at least 1"));
        }
        let need = alphabet
            .size()
            .checked_pow(range as u32)
            .ok_or_else(|| Error::invalid("potential range too large"))?;
        if table.len() != need {
            return Err(Error::invalid(format!("potential table needs {need} values, got {}", table.len())));
        }
        if table.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("potential values must be finite"));
        }
        Ok(Potential { alphabet, range, table, holder: None })
    }

    pub fn range1(values: Vec<f64>) -> Result<Self> {
        Self::new(Alphabet::new(values.len())?, 1, values)
    }

    pub fn zero(alphabet: Alphabet) -> Self {
        Potential { alphabet, range: 1, table: vec![0.0; alphabet.size()], holder: None }
    }

    /// `t φ` with `φ = -1_[1]` on the binary alphabet.
    pub fn minus_t_indicator(t: f64) -> Self {
        Potential { alphabet: Alphabet::BINARY, range: 1, table: vec![0.0, -t], holder: None }
    }

    /// Table given as `window -> value`.
    pub fn from_windows(alphabet: Alphabet, range: usize, values: &[(Word, f64)]) -> Result<Self> {
        let mut table = vec![f64::NAN; alphabet.size().pow(range as u32)];
        for (w, v) in values {
            alphabet.check(w)?;
            if w.len() != range {
                return Err(Error::invalid(format!("window `{w}` has length {} instead of {range}", w.len())));
            }
            table[index(alphabet, w.symbols())] = *v;
        }
        if table.iter().any(|v| v.is_nan()) {
            return Err(Error::invalid("potential table is not total"));
        }
        Self::new(alphabet, range, table)
    }

    pub fn with_holder(mut self, alpha: f64, c: f64) -> Result<Self> {
        if !(alpha > 0.0) || !(c >= 0.0) || !c.is_finite() {
            return Err(Error::invalid("Hölder data needs alpha > 0 and a finite constant >= 0"));
        }
        self.holder = Some(Holder { alpha, c });
        Ok(self)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn range(&self) -> usize {
        self.range
    }

    pub fn holder(&self) -> Option<Holder> {
        self.holder
    }

    /// Range-1 values, one per symbol.
    pub fn range1_values(&self) -> Option<&[f64]> {
        (self.range == 1).then_some(&self.table[..])
    }

    pub fn value(&self, window: &[u8]) -> f64 {
        self.table[index(self.alphabet, window)]
    }

    /// `max φ - min φ`; the per-symbol cost in `|Φ(v) - Φ(w)| <= V d_Ham(v, w)`
    /// for range-1 tables.
    pub fn spread(&self) -> f64 {
        let max = self.table.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = self.table.iter().copied().fold(f64::INFINITY, f64::min);
        max - min
    }

    pub fn scaled(&self, t: f64) -> Potential {
        Potential {
            alphabet: self.alphabet,
            range: self.range,
            table: self.table.iter().map(|v| t * v).collect(),
            holder: self.holder.map(|h| Holder { alpha: h.alpha, c: h.c * t.abs() }),
        }
    }

    /// `S_n φ` over the windows of `w` that fit entirely.
    fn inner_sum(&self, w: &[u8]) -> f64 {
        if w.len() < self.range {
            return 0.0;
        }
        w.windows(self.range).map(|win| self.value(win)).collect::<CompensatedSum>().value()
    }
}

fn index(alphabet: Alphabet, w: &[u8]) -> usize {
    w.iter().fold(0, |acc, &s| acc * alphabet.size() + s as usize)
}

fn check_alphabets(model: &ShiftModel, potential: &Potential) -> Result<()> {
    if model.alphabet() != potential.alphabet {
        return Err(Error::invalid(format!(
            "potential alphabet {} differs from model alphabet {}",
            potential.alphabet.size(),
            model.alphabet().size()
        )));
    }
    Ok(())
}

/// Exact `Φ(w)`: the full windows of `w` plus the best admissible
/// continuation for the last `range - 1` windows.
pub fn phi_word(potential: &Potential, model: &ShiftModel, w: &Word) -> Result<f64> {
    check_alphabets(model, potential)?;
    if w.is_empty() {
        return Err(Error::invalid("Φ needs a nonempty word"));
    }
    if !model.membership(w)? {
        return Err(Error::NotInLanguage(w.to_string()));
    }
    Ok(phi_unchecked(potential, model, w)?.expect("words of the language extend to the right"))
}

/// `Φ` for a word already known to be in the language.
pub(crate) fn phi_unchecked(potential: &Potential, model: &ShiftModel, w: &Word) -> Result<Option<f64>> {
    let k = potential.range;
    if k == 1 {
        return Ok(Some(w.iter().map(|&s| potential.table[s as usize]).collect::<CompensatedSum>().value()));
    }
    let mut best: Option<f64> = None;
    for ext in potential.alphabet.all_words(k - 1) {
        let we = w.concat(&ext);
        if model.membership(&we)? {
            let v = potential.inner_sum(&we.symbols()[..w.len() + k - 1]);
            best = Some(best.map_or(v, |b: f64| b.max(v)));
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartitionSum {
    pub n: usize,
    pub class: ClassSelector,
    pub value: f64,
    pub log_value: f64,
    /// Number of words summed, when the sum was taken by enumeration.
    pub words: Option<usize>,
    pub method: &'static str,
}

/// `Λ_n(D, φ)`. Range-1 potentials on full shifts, SFTs and staircase shifts
/// use exact recursions; everything else is enumerated.
pub fn partition_sum(model: &ShiftModel, potential: &Potential, class: ClassSelector, n: usize, cap: usize) -> Result<PartitionSum> {
    check_alphabets(model, potential)?;
    if !model.supports(class) {
        return Err(Error::Unsupported(format!("class `{class}` for the {}", model.describe())));
    }
    if let Some(p) = potential.range1_values() {
        if let Some(v) = dp::fast_all(model, p, class, n, dp::Semiring::Log) {
            let log_value = v[n];
            return Ok(PartitionSum { n, class, value: log_value.exp(), log_value, words: None, method: "recursion" });
        }
    }
    enumerate_sum(model, potential, class, n, cap)
}

/// Direct enumeration of `D_n`.
pub fn enumerate_sum(model: &ShiftModel, potential: &Potential, class: ClassSelector, n: usize, cap: usize) -> Result<PartitionSum> {
    check_alphabets(model, potential)?;
    let slice = model.enumerate_class(class, n, cap)?;
    if !slice.complete {
        return Err(Error::CapExceeded { cap, n });
    }
    let mut lse = LogSumExp::new();
    let mut plain = CompensatedSum::new();
    for w in &slice.words {
        let phi = if n == 0 { 0.0 } else { phi_unchecked(potential, model, w)?.ok_or_else(|| Error::NotInLanguage(w.to_string()))? };
        lse.add(phi);
        plain.add(phi.exp());
    }
    let log_value = lse.value();
    let value = if log_value < 700.0 { plain.value() } else { log_value.exp() };
    Ok(PartitionSum { n, class, value, log_value, words: Some(slice.len()), method: "enumeration" })
}

/// `max_{w ∈ D_n} Φ(w)` and a maximizing word when found by enumeration.
pub fn max_phi(model: &ShiftModel, potential: &Potential, class: ClassSelector, n: usize, cap: usize) -> Result<(f64, Option<Word>)> {
    check_alphabets(model, potential)?;
    if let Some(p) = potential.range1_values() {
        if let Some(v) = dp::fast_all(model, p, class, n, dp::Semiring::Max) {
            return Ok((v[n], None));
        }
    }
    let slice = model.enumerate_class(class, n, cap)?;
    if !slice.complete {
        return Err(Error::CapExceeded { cap, n });
    }
    let mut best: (f64, Option<Word>) = (f64::NEG_INFINITY, None);
    for w in &slice.words {
        let phi = if n == 0 { 0.0 } else { phi_unchecked(potential, model, w)?.unwrap_or(f64::NEG_INFINITY) };
        if phi > best.0 {
            best = (phi, Some(w.clone()));
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::IntSeq;
    use crate::shift::DEFAULT_CAP;
    use crate::words::w;

    #[test]
    fn phi_examples() {
        let st = ShiftModel::staircase(IntSeq::Const(1), None).unwrap();
        assert_eq!(phi_word(&Potential::minus_t_indicator(1.0), &st, &w("0110")).unwrap(), -2.0);
        assert_eq!(phi_word(&Potential::zero(Alphabet::BINARY), &st, &w("0110")).unwrap(), 0.0);
        let gm = ShiftModel::golden_mean();
        let pot = Potential::from_windows(
            Alphabet::BINARY,
            2,
            &[(w("00"), 0.0), (w("01"), 1.0), (w("10"), 2.0), (w("11"), 0.0)],
        )
        .unwrap();
        assert_eq!(phi_word(&pot, &gm, &w("010")).unwrap(), 4.0);
        assert!(matches!(phi_word(&pot, &gm, &w("11")), Err(Error::NotInLanguage(_))));
    }

    #[test]
    fn partition_sum_examples() {
        let full = ShiftModel::full(2).unwrap();
        let s = partition_sum(&full, &Potential::minus_t_indicator(1.0), ClassSelector::Language, 2, DEFAULT_CAP).unwrap();
        assert!((s.value - (1.0 + (-1.0f64).exp()).powi(2)).abs() < 1e-12);
        let st = ShiftModel::staircase(IntSeq::Const(1), None).unwrap();
        let g = partition_sum(&st, &Potential::minus_t_indicator(1.0), ClassSelector::G, 4, DEFAULT_CAP).unwrap();
        let direct = (-1.0f64).exp() + (-2.0f64).exp() + (-3.0f64).exp();
        assert!((g.value - direct).abs() < 1e-12);
        let gm = ShiftModel::golden_mean();
        let c = enumerate_sum(&gm, &Potential::zero(Alphabet::BINARY), ClassSelector::Language, 5, DEFAULT_CAP).unwrap();
        assert!((c.value - 13.0).abs() < 1e-12);
    }

    #[test]
    fn recursion_agrees_with_enumeration_for_range_one() {
        let pot = Potential::range1(vec![0.3, -1.1]).unwrap();
        for m in [ShiftModel::golden_mean(), ShiftModel::staircase(IntSeq::CeilNOver(4), None).unwrap()] {
            for class in [ClassSelector::Language, ClassSelector::GStar] {
                if !m.supports(class) || m.as_sft().is_some() && class != ClassSelector::Language {
                    continue;
                }
                for n in 1..=11 {
                    let a = partition_sum(&m, &pot, class, n, DEFAULT_CAP).unwrap();
                    let b = enumerate_sum(&m, &pot, class, n, DEFAULT_CAP).unwrap();
                    if b.words == Some(0) {
                        assert_eq!(a.log_value, f64::NEG_INFINITY);
                    } else {
                        assert!((a.log_value - b.log_value).abs() < 1e-12, "{} {class} n={n}", m.describe());
                    }
                    let (ma, _) = max_phi(&m, &pot, class, n, DEFAULT_CAP).unwrap();
                    let (mb, _) = {
                        let slice = m.enumerate_class(class, n, DEFAULT_CAP).unwrap();
                        let best = slice.words.iter().map(|w| phi_word(&pot, &m, w).unwrap()).fold(f64::NEG_INFINITY, f64::max);
                        (best, ())
                    };
                    assert!((ma - mb).abs() < 1e-12 || (ma == mb));
                }
            }
        }
    }

    #[test]
    fn holder_constant() {
        let p = Potential::zero(Alphabet::BINARY).with_holder(1.0, 1.0).unwrap();
        assert_eq!(p.holder().unwrap().bowen_constant(), 2.0);
    }
}
