//! The staircase coded shift generated by `G = {0^a 1^b : a, b >= f(a+b)}`.
//!
//! Membership is decided block by block: a binary word splits uniquely into
//! maximal blocks `0^a 1^b`, internal blocks must be generators, and the two
//! boundary blocks must be a generator suffix and a generator prefix.

use crate::error::{Error, Result};
use crate::seq::{IntSeq, SCAN_HORIZON};
use crate::words::Word;

#[derive(Debug, Clone, PartialEq)]
pub struct Staircase {
    f: IntSeq,
    n1: u64,
}

/// Maximal blocks `0^a 1^b` of a binary word, left to right. Only the first
/// block can have `a = 0` and only the last can have `b = 0`.
pub fn blocks(w: &[u8]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < w.len() {
        let start = i;
        while i < w.len() && w[i] == 0 {
            i += 1;
        }
        let a = i - start;
        let mid = i;
        while i < w.len() && w[i] == 1 {
            i += 1;
        }
        out.push((a, i - mid));
    }
    out
}

impl Staircase {
    /// Validates `f` and fixes `n1`. Without an explicit `n1` the smallest
    /// value consistent with `f(n) <= n/2` on the scan horizon is used.
    pub fn new(f: IntSeq, n1: Option<u64>) -> Result<Self> {
        f.check_profile()?;
        let min = f
            .min_n1()
            .filter(|&m| m < SCAN_HORIZON)
            .ok_or_else(|| Error::invalid(format!("{f} does not satisfy f(n) <= n/2 eventually")))?;
        let n1 = match n1 {
            Some(n1) if n1 < min => {
                let bad = (n1.max(1)..min).rev().find(|&n| 2 * f.eval(n) > n).unwrap_or(min);
                return Err(Error::invalid(format!("n1 = {n1} is too small for {f}: f({bad}) > {bad}/2")));
            }
            Some(n1) => n1,
            None => min,
        };
        Ok(Staircase { f, n1 })
    }

    pub fn f(&self) -> &IntSeq {
        &self.f
    }

    pub fn n1(&self) -> u64 {
        self.n1
    }

    pub fn fv(&self, n: usize) -> usize {
        self.f.eval(n as u64) as usize
    }

    pub fn in_g(&self, a: usize, b: usize) -> bool {
        let fv = self.fv(a + b);
        a >= fv && b >= fv && fv >= 1
    }

    pub fn in_p(&self, a: usize, b: usize) -> bool {
        a < self.fv(a + b)
    }

    pub fn in_s(&self, a: usize, b: usize) -> bool {
        b < self.fv(a + b)
    }

    /// `0^a 1^b` followed by more symbols is admissible iff it is a suffix of
    /// a generator.
    pub fn lead_ok(&self, a: usize, b: usize) -> bool {
        if a == 0 {
            return true;
        }
        let mut a2 = a;
        loop {
            let fv = self.fv(a2 + b);
            if fv > b {
                return false;
            }
            if a2 >= fv {
                return true;
            }
            a2 += 1;
        }
    }

    /// `0^a 1^b` preceded by more symbols is admissible iff it is a prefix of
    /// a generator.
    pub fn trail_ok(&self, a: usize, b: usize) -> bool {
        if b == 0 {
            return a > 0;
        }
        let mut b2 = b;
        loop {
            let fv = self.fv(a + b2);
            if fv > a {
                return false;
            }
            if b2 >= fv {
                return true;
            }
            b2 += 1;
        }
    }

    pub fn contains(&self, w: &Word) -> bool {
        let bl = blocks(w.symbols());
        match bl.len() {
            0 | 1 => true,
            k => {
                let (a0, b0) = bl[0];
                let (ak, bk) = bl[k - 1];
                self.lead_ok(a0, b0) && self.trail_ok(ak, bk) && bl[1..k - 1].iter().all(|&(a, b)| self.in_g(a, b))
            }
        }
    }

    pub fn in_gstar(&self, w: &Word) -> bool {
        blocks(w.symbols()).iter().all(|&(a, b)| self.in_g(a, b))
    }

    /// Subwords of generators: exactly the single-block words.
    pub fn in_d(&self, w: &Word) -> bool {
        blocks(w.symbols()).len() <= 1
    }

    /// `G_n` in lexicographic order (more leading zeros sorts first).
    pub fn generators(&self, n: usize) -> Vec<Word> {
        (1..n).rev().filter(|&a| self.in_g(a, n - a)).map(|a| Word::zeros_ones(a, n - a)).collect()
    }

    /// Single-block words `0^a 1^{n-a}` selected by `keep(a, b)`, sorted.
    pub(crate) fn single_blocks(&self, n: usize, keep: impl Fn(usize, usize) -> bool) -> Vec<Word> {
        let mut out: Vec<Word> = (0..=n).filter(|&a| keep(a, n - a)).map(|a| Word::zeros_ones(a, n - a)).collect();
        out.sort();
        out
    }

    /// `G*_n`, sorted.
    pub fn gstar(&self, n: usize) -> Vec<Word> {
        let mut table: Vec<Vec<Word>> = vec![vec![Word::empty()]];
        for len in 1..=n {
            let mut here = Vec::new();
            for k in 2..=len {
                for g in self.generators(k) {
                    for rest in &table[len - k] {
                        here.push(g.concat(rest));
                    }
                }
            }
            here.sort();
            table.push(here);
        }
        table.swap_remove(n)
    }
}
