//! Generating series of the staircase shift for the potential `t φ`, with
//! `φ = -1_[1]`, and the root of Bowen's equation.
//!
//! `F(x) = Σ Λ_n(G) x^n`, `H(x) = 1 + Σ Λ_n(G*) x^n`, and `C^P`, `C^S` for the
//! boundary sets. Pressure is zero iff `F(1) <= 1`; otherwise it is `-log x*`
//! with `F(x*) = 1`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;
use crate::seq::IntSeq;

/// Largest truncation used by the certificates.
pub const MAX_TERMS: usize = 1 << 20;

/// `Σ_{k=lo}^{lo+cnt-1} e^{-tk}` without cancellation near `t = 0`.
fn geometric_block(t: f64, lo: u64, cnt: u64) -> f64 {
    if cnt == 0 {
        return 0.0;
    }
    if t == 0.0 {
        return cnt as f64;
    }
    (-t * lo as f64).exp() * (-t * cnt as f64).exp_m1() / (-t).exp_m1()
}

/// `Λ_n(G, tφ) = Σ_{k=f(n)}^{n-f(n)} e^{-tk}` when `f(n) <= n/2`, else 0.
pub fn lambda_g_closed(f: &IntSeq, n: u64, t: f64) -> f64 {
    let fv = f.eval(n);
    if fv == 0 || 2 * fv > n {
        return 0.0;
    }
    geometric_block(t, fv, n - 2 * fv + 1)
}

/// `Λ_n(P, tφ) = Σ_{k=0}^{f(n)-1} e^{-t(n-k)}` (capped at the `n+1` words).
pub fn lambda_p_closed(f: &IntSeq, n: u64, t: f64) -> f64 {
    let c = f.eval(n).min(n + 1);
    geometric_block(t, n + 1 - c, c)
}

/// `Λ_n(S, tφ) = Σ_{k=0}^{f(n)-1} e^{-tk}` (capped at the `n+1` words).
pub fn lambda_s_closed(f: &IntSeq, n: u64, t: f64) -> f64 {
    let c = f.eval(n).min(n + 1);
    geometric_block(t, 0, c)
}

/// `Λ_n(G*, tφ)` for `n = 0..=big_n` by the renewal convolution.
pub fn lambda_gstar(f: &IntSeq, t: f64, big_n: usize) -> Vec<f64> {
    let g: Vec<f64> = (0..=big_n as u64).map(|n| if n == 0 { 0.0 } else { lambda_g_closed(f, n, t) }).collect();
    let mut h = vec![0.0; big_n + 1];
    h[0] = 1.0;
    for n in 1..=big_n {
        h[n] = (1..=n).map(|k| g[k] * h[n - k]).collect::<CompensatedSum>().value();
    }
    h
}

#[derive(Debug, Clone, Serialize)]
pub struct SeriesState {
    pub t: f64,
    pub x: f64,
    pub n: usize,
    pub f_n: f64,
    pub h_n: f64,
    pub cp_n: f64,
    pub cs_n: f64,
    /// Certified bound on `Σ_{n>N} Λ_n(G) x^n`, infinite when none is available.
    pub tail_f: f64,
    /// `|H_N - 1/(1-F_N)|` when `F_N < 1`.
    pub residual: Option<f64>,
}

/// Partial sums to `N` terms.
pub fn series_eval(f: &IntSeq, t: f64, x: f64, big_n: usize) -> Result<SeriesState> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::invalid(format!("x = {x} is outside [0, 1]")));
    }
    if t <= 0.0 || !t.is_finite() {
        return Err(Error::invalid(format!("t = {t} must be positive")));
    }
    let h = lambda_gstar(f, t, big_n);
    let (mut fs, mut hs, mut cp, mut cs) =
        (CompensatedSum::new(), CompensatedSum::new(), CompensatedSum::new(), CompensatedSum::new());
    hs.add(1.0);
    cp.add(1.0);
    cs.add(1.0);
    let mut xn = 1.0;
    for n in 1..=big_n {
        xn *= x;
        let nu = n as u64;
        fs.add(lambda_g_closed(f, nu, t) * xn);
        hs.add(h[n] * xn);
        cp.add(lambda_p_closed(f, nu, t) * xn);
        cs.add(lambda_s_closed(f, nu, t) * xn);
    }
    let f_n = fs.value();
    let h_n = hs.value();
    let residual = (f_n < 1.0).then(|| (h_n - 1.0 / (1.0 - f_n)).abs());
    Ok(SeriesState {
        t,
        x,
        n: big_n,
        f_n,
        h_n,
        cp_n: cp.value(),
        cs_n: cs.value(),
        tail_f: tail_bound(f, t, x, big_n),
        residual,
    })
}

/// Certified bound on `Σ_{n>N} Λ_n(G, tφ) x^n`.
pub fn tail_bound(f: &IntSeq, t: f64, x: f64, big_n: usize) -> f64 {
    let mut best = f64::INFINITY;
    if x < 1.0 {
        let xn1 = x.powf(big_n as f64 + 1.0);
        // Λ_n <= 1/(e^t - 1) and Λ_n <= n
        best = best.min(xn1 / ((1.0 - x) * t.exp_m1()));
        let nn = big_n as f64;
        best = best.min(xn1 * ((nn + 1.0) - nn * x) / ((1.0 - x) * (1.0 - x)));
    }
    if let Some(b) = f.tail_sum_bound((-t).exp(), big_n as u64) {
        // Λ_n <= e^{-t(f(n)-1)} / (e^t - 1) and x <= 1
        best = best.min(b * t.exp() / t.exp_m1());
    }
    best
}

/// Running partial sums of `F(x; t)`, extended on demand.
struct PartialF<'a> {
    f: &'a IntSeq,
    t: f64,
    x: f64,
    n: usize,
    xn: f64,
    sum: CompensatedSum,
}

impl<'a> PartialF<'a> {
    fn new(f: &'a IntSeq, t: f64, x: f64) -> Self {
        PartialF { f, t, x, n: 0, xn: 1.0, sum: CompensatedSum::new() }
    }

    fn extend_to(&mut self, big_n: usize) -> f64 {
        while self.n < big_n {
            self.n += 1;
            self.xn *= self.x;
            if self.xn == 0.0 {
                self.n = big_n;
                break;
            }
            self.sum.add(lambda_g_closed(self.f, self.n as u64, self.t) * self.xn);
        }
        self.sum.value()
    }
}

/// Outcome of comparing `F(x; t)` with 1.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Side {
    /// `F_N > 1` for some certified `N`.
    Above { n: usize, partial: f64 },
    /// `F_N + tail <= 1`.
    Below { n: usize, bound: f64 },
    Undecided { n: usize, partial: f64, bound: f64 },
}

fn compare_with_one(f: &IntSeq, t: f64, x: f64, strict_below: bool) -> Side {
    let mut pf = PartialF::new(f, t, x);
    let mut n = 64;
    let (mut partial, mut bound) = (0.0, f64::INFINITY);
    while n <= MAX_TERMS {
        partial = pf.extend_to(n);
        if partial > 1.0 {
            return Side::Above { n, partial };
        }
        bound = partial + tail_bound(f, t, x, n);
        if bound < 1.0 || (!strict_below && bound <= 1.0) {
            return Side::Below { n, bound };
        }
        n *= 2;
    }
    Side::Undecided { n: n / 2, partial, bound }
}

#[derive(Debug, Clone, Serialize)]
pub struct SeriesPressure {
    /// Midpoint of `[lo, hi]`.
    pub value: f64,
    pub lo: f64,
    pub hi: f64,
    /// `true` when `F(1; t) <= 1` was certified, so `P = 0`.
    pub zero_certified: bool,
    /// Certified bracket on the root `x*` of `F(x*) = 1`, when `P > 0`.
    pub root: Option<(f64, f64)>,
    /// Certified `F_N(1) + tail` (when zero) or the largest truncation used.
    pub evidence: f64,
    pub n_terms: usize,
}

/// Pressure of `t φ` on the staircase shift through the root of `F(x) = 1`.
pub fn pressure_from_series(f: &IntSeq, t: f64, tol: f64) -> Result<SeriesPressure> {
    if t <= 0.0 || !t.is_finite() {
        return Err(Error::invalid(format!("t = {t} must be positive")));
    }
    if tol <= 0.0 {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let at_one = if f.eventually_constant().is_some() {
        // Σ e^{-t(f(n)-1)} diverges, so F(1) = ∞
        Side::Above { n: 0, partial: f64::INFINITY }
    } else {
        compare_with_one(f, t, 1.0, false)
    };
    if let Side::Below { n, bound } = at_one {
        return Ok(SeriesPressure {
            value: 0.0,
            lo: 0.0,
            hi: 0.0,
            zero_certified: true,
            root: None,
            evidence: bound,
            n_terms: n,
        });
    }
    // F(1) > 1, or undecided: look for a crossing below 1
    // x* <= 1 always, so P >= -log x_hi holds from the start
    let (mut x_lo, mut x_hi) = (0.0f64, 1.0f64);
    let mut n_terms = 0;
    let mut stalled = false;
    for _ in 0..200 {
        if x_lo > 0.0 && (x_hi / x_lo).ln() <= tol {
            break;
        }
        let mid = if x_lo == 0.0 { 0.5 * x_hi } else { 0.5 * (x_lo + x_hi) };
        match compare_with_one(f, t, mid, true) {
            Side::Above { n, .. } => {
                x_hi = mid;
                n_terms = n_terms.max(n);
            }
            Side::Below { n, .. } => {
                x_lo = mid;
                n_terms = n_terms.max(n);
            }
            Side::Undecided { n, .. } => {
                n_terms = n;
                stalled = true;
                break;
            }
        }
    }
    let p_hi = if x_lo > 0.0 { -x_lo.ln() } else { f64::INFINITY };
    let p_lo = -x_hi.ln();
    if stalled || p_hi - p_lo > tol {
        return Err(Error::Uncertifiable {
            reason: format!("series truncation up to {n_terms} terms cannot resolve F(x) = 1 at t = {t}"),
            lo: p_lo,
            hi: p_hi,
        });
    }
    Ok(SeriesPressure {
        value: 0.5 * (p_lo + p_hi),
        lo: p_lo,
        hi: p_hi,
        zero_certified: false,
        root: Some((x_lo, x_hi)),
        evidence: n_terms as f64,
        n_terms,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RootKind {
    Finite { t_lo: f64, t_hi: f64 },
    Infinite,
    Unknown,
}

#[derive(Debug, Clone, Serialize)]
pub struct RootBracket {
    pub kind: RootKind,
    /// Partial sum `F_N(1; t_lo) > 1`.
    pub lo_partial_sum: Option<f64>,
    /// Certified `F_N(1; t_hi) + tail <= 1`.
    pub hi_certified_sum: Option<f64>,
    pub n_terms: usize,
    /// `false` when bisection stalled before reaching the tolerance.
    pub tol_met: bool,
    pub note: String,
}

/// Bracket on `t0 = sup{t : F(1; t) > 1}`.
///
/// Constant-tail `f` gives `Infinite`. Otherwise a summability witness
/// `γ` with certified `Σ γ^{f(n)} < ∞` is required; bisection runs on
/// `[1e-3, 64]`.
pub fn bowen_root(f: &IntSeq, gamma: Option<f64>, tol: f64) -> RootBracket {
    let unknown = |note: String| RootBracket {
        kind: RootKind::Unknown,
        lo_partial_sum: None,
        hi_certified_sum: None,
        n_terms: 0,
        tol_met: false,
        note,
    };
    if let Some((from, value)) = f.eventually_constant() {
        return RootBracket {
            kind: RootKind::Infinite,
            lo_partial_sum: None,
            hi_certified_sum: None,
            n_terms: 0,
            tol_met: true,
            note: format!("f = {value} for n >= {from}, so Σ γ^f(n) diverges for every γ > 0"),
        };
    }
    let Some(gamma) = gamma else {
        return unknown("no summability witness γ given".into());
    };
    if !(gamma > 0.0 && gamma < 1.0) {
        return unknown(format!("γ = {gamma} is not in (0, 1)"));
    }
    if f.tail_sum_bound(gamma, 0).is_none() {
        return unknown(format!("no certified bound on Σ {gamma}^f(n) for f = {f}"));
    }
    let (t_min, t_max) = (1e-3, 64.0);
    let (mut lo, mut hi) = (t_min, t_max);
    let (mut lo_sum, mut hi_sum, mut n_terms);
    match compare_with_one(f, lo, 1.0, false) {
        Side::Above { n, partial } => {
            lo_sum = partial;
            n_terms = n;
        }
        _ => return unknown(format!("F(1; {t_min}) > 1 could not be certified")),
    }
    match compare_with_one(f, hi, 1.0, false) {
        Side::Below { n, bound } => {
            hi_sum = bound;
            n_terms = n_terms.max(n);
        }
        _ => return unknown(format!("F(1; {t_max}) <= 1 could not be certified")),
    }
    let mut tol_met = true;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        match compare_with_one(f, mid, 1.0, false) {
            Side::Above { n, partial } => {
                lo = mid;
                lo_sum = partial;
                n_terms = n_terms.max(n);
            }
            Side::Below { n, bound } => {
                hi = mid;
                hi_sum = bound;
                n_terms = n_terms.max(n);
            }
            Side::Undecided { .. } => {
                tol_met = false;
                break;
            }
        }
    }
    RootBracket {
        kind: RootKind::Finite { t_lo: lo, t_hi: hi },
        lo_partial_sum: Some(lo_sum),
        hi_certified_sum: Some(hi_sum),
        n_terms,
        tol_met,
        note: format!("tail certified through Σ γ^f(n) with γ = {gamma} or γ = e^-t"),
    }
}

/// Partial sum `Σ_{n<=N} γ^{f(n)}` and the certified tail beyond `N`.
pub fn summability(f: &IntSeq, gamma: f64, big_n: u64) -> (f64, Option<f64>) {
    let partial: CompensatedSum = (1..=big_n).map(|n| gamma.powf(f.eval(n) as f64)).collect();
    (partial.value(), f.tail_sum_bound(gamma, big_n))
}
