//! Exact partition sums and maxima of `Φ` for range-1 potentials without
//! enumerating words: transfer recursions on the SFT memory graph and block
//! recursions for the staircase shift.

use crate::shift::{ClassSelector, Family, ShiftModel, Sft, Staircase};

/// `Log` accumulates `log Σ e^x`; `Max` accumulates `max x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Semiring {
    Log,
    Max,
}

impl Semiring {
    pub(crate) fn add(self, a: f64, b: f64) -> f64 {
        match self {
            Semiring::Max => a.max(b),
            Semiring::Log => {
                let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
                if lo == f64::NEG_INFINITY {
                    hi
                } else {
                    hi + (lo - hi).exp().ln_1p()
                }
            }
        }
    }

    fn sum(self, it: impl IntoIterator<Item = f64>) -> f64 {
        it.into_iter().fold(f64::NEG_INFINITY, |acc, x| self.add(acc, x))
    }
}

const ZERO: f64 = f64::NEG_INFINITY;

/// Values for `n = 0..=n_max`, or `None` when no recursion applies.
pub(crate) fn fast_all(model: &ShiftModel, p: &[f64], class: ClassSelector, n_max: usize, sr: Semiring) -> Option<Vec<f64>> {
    match (model.family(), class) {
        (Family::Full, ClassSelector::Language | ClassSelector::GStar) => {
            let step = sr.sum(p.iter().copied());
            Some((0..=n_max).map(|n| n as f64 * step).collect())
        }
        (Family::Sft(s), ClassSelector::Language) => Some(sft_language(s, p, n_max, sr)),
        (Family::Staircase(s), _) => Some(staircase(s, p, class, n_max, sr)),
        _ => None,
    }
}

fn sft_language(s: &Sft, p: &[f64], n_max: usize, sr: Semiring) -> Vec<f64> {
    let m = s.memory();
    let mut out = vec![ZERO; n_max + 1];
    for (n, slot) in out.iter_mut().enumerate().take(m.min(n_max + 1)) {
        *slot = sr.sum(s.alphabet().all_words(n).filter(|w| s.contains(w)).map(|w| w.iter().map(|&c| p[c as usize]).sum()));
    }
    if n_max < m {
        return out;
    }
    let mut v: Vec<f64> = (0..s.num_states())
        .map(|st| if s.is_alive(st) { s.decode(st).iter().map(|&c| p[c as usize]).sum() } else { ZERO })
        .collect();
    let edges = s.edges();
    out[m] = sr.sum(v.iter().copied());
    for slot in out.iter_mut().skip(m + 1) {
        let mut next = vec![ZERO; v.len()];
        for &(from, sym, to) in &edges {
            if v[from] > ZERO {
                next[to] = sr.add(next[to], v[from] + p[sym as usize]);
            }
        }
        v = next;
        *slot = sr.sum(v.iter().copied());
    }
    out
}

/// `max_s log Z_n(s)` where `Z_n(s)` sums `e^{Φ(u)}` over words `u` of length
/// `n` leading the memory graph from `s` back to `s`.
pub(crate) fn sft_closed_walks(s: &Sft, p: &[f64], n_max: usize, max_states: usize) -> Vec<f64> {
    let edges = s.edges();
    let starts: Vec<usize> = (0..s.num_states()).filter(|&st| s.is_alive(st)).take(max_states).collect();
    let mut best = vec![ZERO; n_max + 1];
    for &start in &starts {
        let mut v = vec![ZERO; s.num_states()];
        v[start] = 0.0;
        for slot in best.iter_mut().skip(1) {
            let mut next = vec![ZERO; v.len()];
            for &(from, sym, to) in &edges {
                if v[from] > ZERO {
                    next[to] = Semiring::Log.add(next[to], v[from] + p[sym as usize]);
                }
            }
            v = next;
            *slot = slot.max(v[start]);
        }
    }
    best
}

/// Maximum cycle mean on the alive memory graph (Karp), with edge weight
/// `p[symbol]`.
pub(crate) fn max_mean_cycle(s: &Sft, p: &[f64]) -> Option<f64> {
    let edges = s.edges();
    let nodes = s.num_states();
    if edges.is_empty() {
        return None;
    }
    // d[k][v]: best weight of a walk with k edges ending at v, from anywhere
    let mut d = vec![vec![ZERO; nodes]; nodes + 1];
    for v in 0..nodes {
        if s.is_alive(v) {
            d[0][v] = 0.0;
        }
    }
    for k in 1..=nodes {
        for &(from, sym, to) in &edges {
            if d[k - 1][from] > ZERO {
                let c = d[k - 1][from] + p[sym as usize];
                if c > d[k][to] {
                    d[k][to] = c;
                }
            }
        }
    }
    let mut best = ZERO;
    for v in 0..nodes {
        if d[nodes][v] == ZERO {
            continue;
        }
        let worst = (0..nodes)
            .filter(|&k| d[k][v] > ZERO)
            .map(|k| (d[nodes][v] - d[k][v]) / (nodes - k) as f64)
            .fold(f64::INFINITY, f64::min);
        best = best.max(worst);
    }
    (best > ZERO).then_some(best)
}

fn staircase(s: &Staircase, p: &[f64], class: ClassSelector, n_max: usize, sr: Semiring) -> Vec<f64> {
    let wt = |a: usize, b: usize| a as f64 * p[0] + b as f64 * p[1];
    let single = |n: usize, keep: &dyn Fn(usize, usize) -> bool| sr.sum((0..=n).filter(|&a| keep(a, n - a)).map(|a| wt(a, n - a)));
    let g: Vec<f64> = (0..=n_max).map(|n| single(n, &|a, b| s.in_g(a, b))).collect();
    match class {
        ClassSelector::G => return g,
        ClassSelector::P => return (0..=n_max).map(|n| if n == 0 { 0.0 } else { single(n, &|a, b| s.in_p(a, b)) }).collect(),
        ClassSelector::S => return (0..=n_max).map(|n| if n == 0 { 0.0 } else { single(n, &|a, b| s.in_s(a, b)) }).collect(),
        ClassSelector::D => return (0..=n_max).map(|n| single(n, &|_, _| true)).collect(),
        _ => {}
    }
    let mut h = vec![ZERO; n_max + 1];
    h[0] = 0.0;
    for n in 1..=n_max {
        h[n] = sr.sum((1..=n).map(|k| g[k] + h[n - k]));
    }
    if class == ClassSelector::GStar {
        return h;
    }
    let lead: Vec<f64> = (0..=n_max).map(|k| single(k, &|a, b| b >= 1 && s.lead_ok(a, b))).collect();
    let trail: Vec<f64> = (0..=n_max).map(|k| single(k, &|a, b| a >= 1 && s.trail_ok(a, b))).collect();
    // lh[m] = ⊕_{i+j=m} lead[i] ⊗ h[j]
    let lh: Vec<f64> = (0..=n_max).map(|m| sr.sum((1..=m).map(|i| lead[i] + h[m - i]))).collect();
    (0..=n_max)
        .map(|n| {
            if n == 0 {
                return 0.0;
            }
            let multi = sr.sum((1..n).map(|k| lh[n - k] + trail[k]));
            sr.add(single(n, &|_, _| true), multi)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::IntSeq;
    use crate::shift::DEFAULT_CAP;

    #[test]
    fn staircase_counts_match_enumeration() {
        for f in ["const:1", "ceil_n_over:4", "ceil_log2"] {
            let m = ShiftModel::staircase(f.parse::<IntSeq>().unwrap(), None).unwrap();
            let counts = fast_all(&m, &[0.0, 0.0], ClassSelector::Language, 12, Semiring::Log).unwrap();
            for n in 0..=12 {
                let e = m.enumerate_language(n, DEFAULT_CAP).unwrap().len() as f64;
                assert!((counts[n].exp() - e).abs() < 1e-9 * e, "{f} n={n}: {} vs {e}", counts[n].exp());
            }
            let gs = fast_all(&m, &[0.0, 0.0], ClassSelector::GStar, 12, Semiring::Log).unwrap();
            for n in 1..=12 {
                let e = m.enumerate_class(ClassSelector::GStar, n, DEFAULT_CAP).unwrap().len() as f64;
                assert!((gs[n].exp() - e).abs() < 1e-9 * e.max(1.0) || (e == 0.0 && gs[n] == ZERO));
            }
        }
    }

    #[test]
    fn golden_mean_counts_are_fibonacci() {
        let m = ShiftModel::golden_mean();
        let v = fast_all(&m, &[0.0, 0.0], ClassSelector::Language, 10, Semiring::Log).unwrap();
        let fib = [1.0, 2.0, 3.0, 5.0, 8.0, 13.0, 21.0, 34.0, 55.0, 89.0, 144.0];
        for n in 0..=10 {
            assert!((v[n].exp() - fib[n]).abs() < 1e-9);
        }
    }

    #[test]
    fn karp_on_golden_mean() {
        let m = ShiftModel::golden_mean();
        let s = m.as_sft().unwrap();
        assert!((max_mean_cycle(s, &[0.0, 1.0]).unwrap() - 0.5).abs() < 1e-12);
        assert!((max_mean_cycle(s, &[1.0, 0.0]).unwrap() - 1.0).abs() < 1e-12);
    }
}
