//! Audit of the entropy-gap argument for sublogarithmic Hamming
//! approachability: parameter choice, the `Σ g(n_i)` estimate, the ψ-words
//! built from a reference word, and the final bound chain.
//!
//! `δ` is far below `f64` range at honest parameters, so it is carried as
//! `|log δ|` and every bound is evaluated after dividing by `δ`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::approach::{far_word, nearest_in_class};
use crate::error::{Error, Result};
use crate::seq::IntSeq;
use crate::shift::{ClassSelector, Family, ShiftModel, DEFAULT_CAP};
use crate::thermo::{dp, partition_sum, phi_word, pressure_bracket, Holder, Potential};
use crate::words::{binary_entropy, hamming_ball, hamming_slices, Alphabet, Word};

/// Largest `m` tried by the far-word probe.
const M_LIMIT: u64 = 1024;

/// What the parameter derivation needs to know about the shift.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapInputs {
    pub alphabet_size: usize,
    /// Certified lower bound on `h(F)`.
    pub h_f: f64,
    /// `gcd{|v| : v ∈ F}`.
    pub d: u64,
    /// Corridor width `N`.
    pub corridor: u64,
    /// Minimum length from which `L` is approachable.
    pub n0: u64,
    pub holder: Holder,
    pub g: IntSeq,
    /// Required slack in `h(β) + β log #A <= h(F) - margin`.
    pub margin: f64,
    /// `log #F_m` for `m = 0..=M_LIMIT`.
    #[serde(skip)]
    pub ln_f_counts: Vec<f64>,
    /// The class playing the role of `F`.
    pub f_class: ClassSelector,
}

impl GapInputs {
    /// Full shifts use `F = L`; staircase shifts use `F = G*`, with
    /// `n0 = 2 n1`. Both have `d = 1` and `N = 1`.
    pub fn for_model(model: &ShiftModel, g: IntSeq, holder: Holder, margin: f64) -> Result<Self> {
        let a = model.alphabet().size();
        let zero = vec![0.0; a];
        let (h_f, n0, f_class, ln_f_counts) = match model.family() {
            Family::Full => {
                let h = (a as f64).ln();
                (h, 1, ClassSelector::Language, (0..=M_LIMIT).map(|m| m as f64 * h).collect())
            }
            Family::Staircase(s) => {
                let h = pressure_bracket(model, &Potential::zero(model.alphabet()), 64)?.lower;
                let counts = dp::fast_all(model, &zero, ClassSelector::GStar, M_LIMIT as usize, dp::Semiring::Log)
                    .expect("staircase recursion");
                (h, 2 * s.n1(), ClassSelector::GStar, counts)
            }
            _ => return Err(Error::Unsupported(format!("no free class F is known for the {}", model.describe()))),
        };
        Ok(GapInputs { alphabet_size: a, h_f, d: 1, corridor: 1, n0, holder, g, margin, ln_f_counts, f_class })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapParams {
    pub v: f64,
    pub beta: f64,
    pub m: u64,
    pub gamma: f64,
    /// `ln K`, with `g(n) < γ ln n` for all `n > K`.
    pub ln_k: f64,
    pub l: f64,
    /// `δ = 2^{-delta_exp}`.
    pub delta_exp: u64,
    pub d: u64,
    pub corridor: u64,
    pub alphabet_size: usize,
    pub h_f: f64,
    /// `h(F) - h(β) - β log #A`.
    pub entropy_slack: f64,
    /// `log(N · #ball(⌊βm⌋))` and `log #F_m` from the far-word probe.
    pub probe: Option<(f64, f64)>,
}

impl GapParams {
    /// Explicit parameters for small instances.
    #[allow(clippy::too_many_arguments)]
    pub fn toy(v: f64, beta: f64, m: u64, gamma: f64, l: f64, delta_exp: u64, corridor: u64, alphabet_size: usize) -> Self {
        GapParams {
            v,
            beta,
            m,
            gamma,
            ln_k: f64::NAN,
            l,
            delta_exp,
            d: 1,
            corridor,
            alphabet_size,
            h_f: f64::NAN,
            entropy_slack: f64::NAN,
            probe: None,
        }
    }

    pub fn abs_log_delta(&self) -> f64 {
        self.delta_exp as f64 * std::f64::consts::LN_2
    }

    pub fn with_delta_exp(&self, delta_exp: u64) -> Self {
        GapParams { delta_exp, ..self.clone() }
    }

    fn log_ratio(&self, x: f64) -> f64 {
        ((2.0 * self.l + self.gamma * x) / (self.beta * self.m as f64)).ln()
    }

    /// `|log δ|/(8m²) - 2 log((2L + γ|log δ|)/(βm)) - 4VL` at `|log δ| = x`.
    fn delta_margin(&self, x: f64) -> f64 {
        let m2 = (self.m * self.m) as f64;
        x / (8.0 * m2) - 2.0 * self.log_ratio(x) - 4.0 * self.v * self.l
    }

    /// Whether `δ` satisfies the choice condition.
    pub fn delta_ok(&self) -> bool {
        self.delta_margin(self.abs_log_delta()) > 0.0
    }
}

/// Runs the parameter choices in order: `V`, `β`, `m`, `γ`, `K` and `L`, `δ`.
pub fn derive_params(inputs: &GapInputs) -> Result<GapParams> {
    if !(inputs.h_f > 0.0) {
        return Err(Error::invalid(format!("h(F) = {} must be positive", inputs.h_f)));
    }
    let v = inputs.holder.bowen_constant();
    if !(v > 0.0 && v.is_finite()) {
        return Err(Error::invalid("the Bowen constant V must be positive and finite"));
    }
    let ln_a = (inputs.alphabet_size as f64).ln();
    let cost = |b: f64| binary_entropy(b) + b * ln_a;
    let beta = (1..=60)
        .map(|j| (-(j as f64)).exp2())
        .find(|&b| cost(b) <= inputs.h_f - inputs.margin)
        .ok_or_else(|| Error::invalid(format!("no dyadic β fits below h(F) - margin = {}", inputs.h_f - inputs.margin)))?;

    let step = 2 * inputs.d;
    let start = (3 * inputs.corridor).max(inputs.n0).max(1).div_ceil(step) * step;
    let alphabet = Alphabet::new(inputs.alphabet_size)?;
    let mut found = None;
    let mut m = start;
    while m <= M_LIMIT {
        let r = (beta * m as f64).floor() as usize;
        let ball = hamming_ball(&Word::repeat(0, m as usize), r, alphabet, 0)?.exact_bound;
        let lhs = (inputs.corridor as f64).ln() + ball.ln();
        let rhs = inputs.ln_f_counts[m as usize];
        if lhs < rhs {
            found = Some((m, lhs, rhs));
            break;
        }
        m += step;
    }
    let (m, lhs, rhs) = found.ok_or(Error::FarWordNotFound { m: M_LIMIT as usize })?;

    let gamma = 1.0 / (32.0 * (m * m) as f64 * v);
    let ln_k = inputs
        .g
        .ln_sublog_threshold(gamma)
        .ok_or_else(|| Error::invalid(format!("g = {} is not sublogarithmic", inputs.g)))?;
    let l = ((2 * m) as f64).max(inputs.g.eval_at_ln(ln_k) as f64);
    let mut params = GapParams {
        v,
        beta,
        m,
        gamma,
        ln_k,
        l,
        delta_exp: 0,
        d: inputs.d,
        corridor: inputs.corridor,
        alphabet_size: inputs.alphabet_size,
        h_f: inputs.h_f,
        entropy_slack: inputs.h_f - cost(beta),
        probe: Some((lhs, rhs)),
    };
    params.delta_exp = smallest_delta_exp(&params);
    Ok(params)
}

/// Smallest `j` with `δ = 2^{-j}` satisfying the choice condition. The
/// margin is increasing in `|log δ|` because `γ < 1/(16 m² V)`.
fn smallest_delta_exp(p: &GapParams) -> u64 {
    let ok = |j: u64| p.delta_margin(j as f64 * std::f64::consts::LN_2) > 0.0;
    let mut hi = 1u64;
    while !ok(hi) {
        hi *= 2;
    }
    let mut lo = hi / 2;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub abs_log_delta: f64,
    /// `h_J / δ >= |log δ| / (4 m²)`.
    pub h_j_lower: f64,
    /// `Δ_Φ / δ <= 2V(2L + γ|log δ|)`.
    pub delta_phi_upper: f64,
    /// `h_ψ / δ <= 2 log((2L + γ|log δ|)/(βm))`.
    pub h_psi_upper: f64,
    /// `(h_J - Δ_Φ - h_ψ)/δ` lower bound from the three estimates.
    pub chain: f64,
    /// `|log δ|/(8m²) - 4VL - 2 log((2L + γ|log δ|)/(βm))`.
    pub gap: f64,
    pub delta_condition: bool,
    pub gap_positive: bool,
    /// `h_J > Δ_Φ + h_ψ` follows from the bounds.
    pub strict_inequality: bool,
    /// `log10` of the certified lower bound on `P(φ) - sup I`, when positive.
    pub log10_pressure_gap: Option<f64>,
}

pub fn bound_report(p: &GapParams) -> BoundReport {
    let x = p.abs_log_delta();
    let m2 = (p.m * p.m) as f64;
    let h_j_lower = x / (4.0 * m2);
    let delta_phi_upper = 2.0 * p.v * (2.0 * p.l + p.gamma * x);
    let h_psi_upper = 2.0 * p.log_ratio(x);
    let chain = h_j_lower - delta_phi_upper - h_psi_upper;
    let gap = p.delta_margin(x);
    BoundReport {
        abs_log_delta: x,
        h_j_lower,
        delta_phi_upper,
        h_psi_upper,
        chain,
        gap,
        delta_condition: p.delta_ok(),
        gap_positive: gap > 0.0,
        strict_inequality: chain > 0.0,
        log10_pressure_gap: (chain > 0.0).then(|| (chain.ln() - x) / std::f64::consts::LN_10),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SumGCheck {
    pub pass: bool,
    pub trials: usize,
    /// Largest `Σ g(n_i) / (ℓ (L + γ log(n/ℓ)))`.
    pub worst_ratio: f64,
    pub worst_parts: Vec<u64>,
}

/// Samples compositions `(n_1, ..., n_ℓ)` of `n <= n_max` and checks
/// `Σ g(n_i) <= ℓ (L + γ log(Σ n_i / ℓ))`. All-ones and equal-part
/// compositions are always included.
pub fn sum_g_check(g: &IntSeq, gamma: f64, l: f64, trials: usize, n_max: u64, seed: u64) -> SumGCheck {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = (f64::NEG_INFINITY, Vec::new());
    let mut check = |parts: Vec<u64>| {
        let ell = parts.len() as f64;
        let n: u64 = parts.iter().sum();
        let lhs: f64 = parts.iter().map(|&x| g.eval(x) as f64).sum();
        let rhs = ell * (l + gamma * (n as f64 / ell).ln());
        let ratio = lhs / rhs;
        if ratio > worst.0 {
            worst = (ratio, parts);
        }
    };
    let mut count = 0;
    for n in [1, 2, 10, n_max.max(1)] {
        check(vec![1; n as usize]);
        check(vec![n]);
        count += 2;
    }
    for _ in 0..trials {
        let n = rng.gen_range(1..=n_max.max(1));
        let ell = rng.gen_range(1..=n);
        // ℓ - 1 distinct cut points in 1..n
        let mut cuts: Vec<u64> = rand::seq::index::sample(&mut rng, (n - 1) as usize, (ell - 1) as usize)
            .into_iter()
            .map(|c| c as u64 + 1)
            .collect();
        cuts.sort_unstable();
        let mut parts = Vec::with_capacity(ell as usize);
        let mut prev = 0;
        for c in cuts.into_iter().chain(std::iter::once(n)) {
            parts.push(c - prev);
            prev = c;
        }
        check(parts);
        count += 1;
    }
    SumGCheck { pass: worst.0 <= 1.0, trials: count, worst_ratio: worst.0, worst_parts: worst.1 }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PsiBlock {
    /// `N_i`.
    pub start: usize,
    pub len: usize,
    pub v: Word,
    /// Corridor shift `a_i`.
    pub shift: usize,
    /// `d_Ham(v^i, w_[N_i - a_i, N_{i+1} - m - a_i))`.
    pub v_distance: usize,
    /// `g(n_i) + m`.
    pub v_bound: u64,
    pub separator: Word,
    /// Smallest distance from `s^i` to the shifted reference windows.
    pub separator_distance: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PsiChecks {
    pub in_language: bool,
    pub v_close: bool,
    pub phi_bound: bool,
    pub ru_bound: bool,
    pub markers_recovered: bool,
}

impl PsiChecks {
    pub fn all(&self) -> bool {
        self.in_language && self.v_close && self.phi_bound && self.ru_bound && self.markers_recovered
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PsiRecord {
    pub w: Word,
    pub parts: Vec<usize>,
    pub psi: Word,
    pub blocks: Vec<PsiBlock>,
    pub phi_w: f64,
    pub phi_psi: f64,
    /// `k_n (2L + γ log(n/k_n)) V`.
    pub phi_bound: f64,
    /// Start positions of the separators `s^i`.
    pub markers: Vec<usize>,
    /// Positions `p`, `m | p`, where `u = ψ` is `βm`-far from every shifted
    /// reference window.
    pub r_u: Vec<usize>,
    /// `β m #R_u`.
    pub ru_lhs: f64,
    /// `Σ_j min_a d_Ham(u_[jm, jm+m), w_[jm-a, jm+m-a))`.
    pub ru_mid: usize,
    /// `Σ_i (g(n_i) + 2m)`.
    pub ru_rhs: u64,
    pub checks: PsiChecks,
}

fn shifted_windows(w: &[u8], p: usize, m: usize, corridor: usize) -> impl Iterator<Item = &[u8]> {
    (0..corridor).filter(move |&a| p >= a).map(move |a| &w[p - a..p - a + m])
}

/// Builds `ψ(n) = v^1 s^1 ... v^k s^k` for the reference word `w`.
///
/// Each `v^i` is a nearest word of `F` to a corridor-shifted segment of `w`;
/// each `s^i ∈ F_m` is the first word of `F_m` at distance `> βm` from the
/// reference windows at the separator position.
pub fn build_psi(
    w: &Word,
    parts: &[usize],
    params: &GapParams,
    model: &ShiftModel,
    f_class: ClassSelector,
    potential: &Potential,
    g: &IntSeq,
) -> Result<PsiRecord> {
    let n = w.len();
    let m = params.m as usize;
    let corridor = params.corridor.max(1) as usize;
    if parts.is_empty() || parts.iter().sum::<usize>() != n {
        return Err(Error::invalid(format!("parts {parts:?} must sum to |w| = {n}")));
    }
    if let Some(bad) = parts.iter().find(|&&p| p < 2 * m || p % (2 * m) != 0) {
        return Err(Error::invalid(format!("part {bad} is not a positive multiple of 2m = {}", 2 * m)));
    }
    if !model.membership(w)? {
        return Err(Error::NotInLanguage(w.to_string()));
    }
    let sym = w.symbols();
    let separators = model.enumerate_class(f_class, m, DEFAULT_CAP)?;
    let mut psi = Word::empty();
    let mut blocks = Vec::new();
    let mut markers = Vec::new();
    let mut start = 0;
    for &ni in parts {
        let vlen = ni - m;
        let mut class = None;
        let mut best: Option<(usize, usize, Word)> = None;
        for a in (0..corridor).filter(|&a| start >= a) {
            let seg = Word::new(sym[start - a..start - a + vlen].to_vec());
            let (v, d) = if model.class_contains(f_class, &seg)? {
                (seg, 0)
            } else {
                if class.is_none() {
                    let size = partition_sum(model, &Potential::zero(model.alphabet()), f_class, vlen, DEFAULT_CAP)?;
                    if size.value > DEFAULT_CAP as f64 {
                        return Err(Error::CapExceeded { cap: DEFAULT_CAP, n: vlen });
                    }
                    let slice = model.enumerate_class(f_class, vlen, DEFAULT_CAP)?;
                    if !slice.complete {
                        return Err(Error::CapExceeded { cap: DEFAULT_CAP, n: vlen });
                    }
                    class = Some(slice);
                }
                nearest_in_class(&seg, class.as_ref().expect("filled above"))?
            };
            if best.as_ref().is_none_or(|b| d < b.0) {
                best = Some((d, a, v));
            }
            if d == 0 {
                break;
            }
        }
        let (v_distance, shift, v) = best.expect("shift 0 is always available");
        let p = start + vlen;
        let targets: Vec<Word> = shifted_windows(sym, p, m, corridor).map(|x| Word::new(x.to_vec())).collect();
        let far = far_word(&separators, &targets, params.beta, model.alphabet())?;
        let s = far.word.ok_or(Error::FarWordNotFound { m })?;
        let separator_distance = targets.iter().map(|t| hamming_slices(t.symbols(), s.symbols())).min().unwrap_or(m);
        psi.extend_from(&v);
        psi.extend_from(&s);
        markers.push(p);
        blocks.push(PsiBlock {
            start,
            len: ni,
            v,
            shift,
            v_distance,
            v_bound: g.eval(ni as u64) + m as u64,
            separator: s,
            separator_distance,
        });
        start += ni;
    }
    let u = psi.symbols();
    let beta_m = params.beta * m as f64;
    let mut r_u = Vec::new();
    let mut ru_mid = 0;
    for j in 0..n / m {
        let p = j * m;
        let dists: Vec<usize> = shifted_windows(sym, p, m, corridor).map(|x| hamming_slices(&u[p..p + m], x)).collect();
        let min = dists.iter().copied().min().unwrap_or(0);
        ru_mid += min;
        if dists.iter().all(|&d| d as f64 >= beta_m) {
            r_u.push(p);
        }
    }
    let ru_lhs = beta_m * r_u.len() as f64;
    let ru_rhs: u64 = parts.iter().map(|&ni| g.eval(ni as u64) + 2 * m as u64).sum();
    let k = parts.len() as f64;
    let phi_bound = k * (2.0 * params.l + params.gamma * (n as f64 / k).ln()) * params.v;
    let in_language = model.membership(&psi)?;
    let phi_w = phi_word(potential, model, w)?;
    let phi_psi = if in_language { phi_word(potential, model, &psi)? } else { f64::NAN };
    let checks = PsiChecks {
        in_language,
        v_close: blocks.iter().all(|b| b.v_distance as u64 <= b.v_bound),
        phi_bound: (phi_psi - phi_w).abs() <= phi_bound + 1e-9,
        ru_bound: ru_lhs <= ru_mid as f64 + 1e-9 && ru_mid as u64 <= ru_rhs,
        markers_recovered: markers.iter().all(|p| r_u.contains(p)),
    };
    Ok(PsiRecord {
        w: w.clone(),
        parts: parts.to_vec(),
        psi,
        blocks,
        phi_w,
        phi_psi,
        phi_bound,
        markers,
        r_u,
        ru_lhs,
        ru_mid,
        ru_rhs,
        checks,
    })
}

/// Random compositions of `n` into `k` parts, each a positive multiple of `2m`.
pub fn random_partition(n: usize, k: usize, m: usize, rng: &mut impl Rng) -> Option<Vec<usize>> {
    let unit = 2 * m;
    if n % unit != 0 || k == 0 || k > n / unit {
        return None;
    }
    let units = n / unit;
    let mut cuts: Vec<usize> = rand::seq::index::sample(rng, units - 1, k - 1).into_iter().map(|c| c + 1).collect();
    cuts.sort_unstable();
    let mut out = Vec::with_capacity(k);
    let mut prev = 0;
    for c in cuts.into_iter().chain(std::iter::once(units)) {
        out.push((c - prev) * unit);
        prev = c;
    }
    Some(out)
}

/// A word of `L_n` grown symbol by symbol, each step uniform over the
/// admissible continuations.
pub fn random_word(model: &ShiftModel, n: usize, rng: &mut impl Rng) -> Result<Word> {
    let mut v = Word::empty();
    while v.len() < n {
        let mut next = Vec::new();
        for a in model.alphabet().symbols() {
            v.push(a);
            if model.membership(&v)? {
                next.push(a);
            }
            v.pop();
        }
        if next.is_empty() {
            return Err(Error::invalid(format!("`{v}` has no right extension in the {}", model.describe())));
        }
        v.push(next[rng.gen_range(0..next.len())]);
    }
    Ok(v)
}

/// `count` ψ-records on reference words and partitions drawn from `seed`.
#[allow(clippy::too_many_arguments)]
pub fn toy_instances(
    model: &ShiftModel,
    f_class: ClassSelector,
    params: &GapParams,
    potential: &Potential,
    g: &IntSeq,
    n: usize,
    count: usize,
    max_parts: usize,
    seed: u64,
) -> Result<Vec<PsiRecord>> {
    let m = params.m as usize;
    let units = n / (2 * m).max(1);
    if m == 0 || n % (2 * m) != 0 || units == 0 {
        return Err(Error::invalid(format!("n = {n} must be a positive multiple of 2m = {}", 2 * m)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k_max = max_parts.clamp(1, units);
    (0..count)
        .map(|_| {
            let w = random_word(model, n, &mut rng)?;
            let k = rng.gen_range(1..=k_max);
            let parts = random_partition(n, k, m, &mut rng).expect("k <= n/2m");
            build_psi(&w, &parts, params, model, f_class, potential, g)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::w;

    #[test]
    fn bowen_constant_example() {
        assert_eq!(Holder { alpha: 1.0, c: 1.0 }.bowen_constant(), 2.0);
    }

    #[test]
    fn full_shift_parameters() {
        let full = ShiftModel::full(2).unwrap();
        let inputs = GapInputs::for_model(&full, IntSeq::Const(1), Holder { alpha: 1.0, c: 1.0 }, 0.1).unwrap();
        let p = derive_params(&inputs).unwrap();
        assert!(binary_entropy(0.05) + 0.05 * 2f64.ln() < 2f64.ln());
        assert_eq!(p.v, 2.0);
        assert!(p.beta <= 0.125);
        assert_eq!(p.m % 2, 0);
        assert!(p.gamma < 1.0 / (16.0 * (p.m * p.m) as f64 * p.v));
        assert!(p.l >= 2.0 * p.m as f64);
        assert!((p.ln_k - 1.0 / p.gamma).abs() < 1e-9);
        let r = bound_report(&p);
        assert!(r.gap_positive && r.strict_inequality);
        let worse = bound_report(&p.with_delta_exp(p.delta_exp - 1));
        assert!(!worse.gap_positive && !worse.delta_condition);
    }

    #[test]
    fn sum_g_examples() {
        assert!(sum_g_check(&IntSeq::Const(3), 0.1, 3.0, 200, 500, 1).pass);
        let g = IntSeq::CeilLogLog;
        let ln_k = g.ln_sublog_threshold(1.0).unwrap();
        let l = g.eval_at_ln(ln_k) as f64;
        assert!(sum_g_check(&g, 1.0, l, 10_000, 5000, 7).pass);
    }

    #[test]
    fn toy_full_shift_psi() {
        let full = ShiftModel::full(2).unwrap();
        let p = GapParams::toy(1.0, 0.5, 2, 0.01, 4.0, 10, 1, 2);
        let pot = Potential::minus_t_indicator(1.0);
        let r = build_psi(&w("00000000"), &[4, 4], &p, &full, ClassSelector::Language, &pot, &IntSeq::Const(0)).unwrap();
        assert!(r.blocks.iter().all(|b| b.v_distance == 0 && b.separator == w("11")));
        assert_eq!(r.psi, w("00110011"));
        assert!(r.checks.all(), "{r:?}");
        let one = build_psi(&w("00000000"), &[8], &p, &full, ClassSelector::Language, &pot, &IntSeq::Const(0)).unwrap();
        assert_eq!(one.psi.len(), 8);
    }
}
