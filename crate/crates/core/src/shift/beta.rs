//! Exact β-expansions of 1 and the lexicographic envelope of the β-shift.
//!
//! β is held exactly, either as a rational `p/q` or as a quadratic irrational
//! `(a + b√d)/c`, so digit extraction never depends on rounding. A decimal
//! input is read as the exact rational it spells, and an optional stated
//! precision `ε` brackets it by `β ± ε`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::words::Word;

/// An element `u + v√d` of `Q(√d)`; for rationals `v = 0`.
#[derive(Debug, Clone, PartialEq)]
struct QuadNum {
    u: BigRational,
    v: BigRational,
}

/// A real number `β > 1` given exactly.
#[derive(Debug, Clone, PartialEq)]
pub enum BetaValue {
    Rational(BigRational),
    /// `(a + b√d) / c`, `d > 0` not a perfect square.
    Quadratic { a: i64, b: i64, d: i64, c: i64 },
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl BetaValue {
    pub fn golden() -> Self {
        BetaValue::Quadratic { a: 1, b: 1, d: 5, c: 2 }
    }

    fn radicand(&self) -> BigRational {
        match self {
            BetaValue::Rational(_) => BigRational::one(),
            BetaValue::Quadratic { d, .. } => rat(*d, 1),
        }
    }

    fn as_quad(&self) -> QuadNum {
        match self {
            BetaValue::Rational(r) => QuadNum { u: r.clone(), v: BigRational::zero() },
            BetaValue::Quadratic { a, b, c, .. } => QuadNum { u: rat(*a, *c), v: rat(*b, *c) },
        }
    }

    pub fn to_f64(&self) -> f64 {
        let q = self.as_quad();
        q.u.to_f64().unwrap_or(f64::NAN) + q.v.to_f64().unwrap_or(f64::NAN) * self.radicand().to_f64().unwrap_or(f64::NAN).sqrt()
    }

    /// Number of digits `ceil(β)`.
    pub fn alphabet_size(&self) -> usize {
        let d = self.radicand();
        let x = self.as_quad();
        let fl = floor(&x, &d);
        let exact = cmp_int(&x, &fl, &d) == Ordering::Equal;
        let fl = fl.to_usize().unwrap_or(usize::MAX);
        if exact {
            fl
        } else {
            fl + 1
        }
    }

    fn offset(&self, eps: &BigRational) -> BetaValue {
        match self {
            BetaValue::Rational(r) => BetaValue::Rational(r + eps),
            // decimal inputs are always rational; quadratic values carry no precision
            BetaValue::Quadratic { .. } => self.clone(),
        }
    }
}

fn sign_of(s: &BigRational, v: &BigRational, d: &BigRational) -> Ordering {
    // sign of s + v√d
    let zero = BigRational::zero();
    match (s.cmp(&zero), v.cmp(&zero)) {
        (Ordering::Equal, Ordering::Equal) => Ordering::Equal,
        (a, b) if a != Ordering::Less && b != Ordering::Less => Ordering::Greater,
        (a, b) if a != Ordering::Greater && b != Ordering::Greater => Ordering::Less,
        (Ordering::Greater, _) => (s * s).cmp(&(v * v * d)),
        _ => (v * v * d).cmp(&(s * s)),
    }
}

fn cmp_int(x: &QuadNum, k: &BigInt, d: &BigRational) -> Ordering {
    let s = &x.u - BigRational::from_integer(k.clone());
    sign_of(&s, &x.v, d)
}

fn floor(x: &QuadNum, d: &BigRational) -> BigInt {
    let approx = x.u.to_f64().unwrap_or(0.0) + x.v.to_f64().unwrap_or(0.0) * d.to_f64().unwrap_or(1.0).sqrt();
    let mut k = BigInt::from(approx.floor() as i64);
    while cmp_int(x, &k, d) == Ordering::Less {
        k -= 1;
    }
    while cmp_int(x, &(&k + 1), d) != Ordering::Less {
        k += 1;
    }
    k
}

/// Quasi-greedy expansion of 1 in base β, truncated to `depth` digits.
///
/// The greedy digits are `d_i = floor(β x_{i-1})` with `x_0 = 1`. If the
/// greedy expansion terminates as `d_1 ... d_k`, the quasi-greedy expansion is
/// the periodic `(d_1 ... d_{k-1} (d_k - 1))^∞`.
pub fn beta_expansion(beta: &BetaValue, depth: usize) -> Result<Word> {
    let d = beta.radicand();
    let b = beta.as_quad();
    if sign_of(&(&b.u - BigRational::one()), &b.v, &d) != Ordering::Greater {
        return Err(Error::invalid("beta must exceed 1"));
    }
    let mut x = QuadNum { u: BigRational::one(), v: BigRational::zero() };
    let mut digits: Vec<u8> = Vec::with_capacity(depth);
    while digits.len() < depth {
        // y = β x
        let y = QuadNum { u: &b.u * &x.u + &b.v * &x.v * &d, v: &b.u * &x.v + &b.v * &x.u };
        let k = floor(&y, &d);
        let digit = k.to_u8().ok_or_else(|| Error::invalid("beta too large for u8 digits"))?;
        x = QuadNum { u: y.u - BigRational::from_integer(k), v: y.v };
        digits.push(digit);
        if x.u.is_zero() && x.v.is_zero() {
            let mut period = digits.clone();
            *period.last_mut().expect("nonempty") -= 1;
            let mut out = Vec::with_capacity(depth);
            while out.len() < depth {
                out.extend_from_slice(&period);
            }
            out.truncate(depth);
            return Ok(Word::new(out));
        }
    }
    Ok(Word::new(digits))
}

/// `true` iff every suffix of `w` is lexicographically at most the envelope
/// prefix of the same length.
pub(crate) fn admissible(w: &Word, envelope: &Word) -> bool {
    let s = w.symbols();
    let e = envelope.symbols();
    (0..s.len()).all(|i| s[i..] <= e[..s.len() - i])
}

/// A β-shift: the envelope at β and, for decimal inputs with a stated
/// precision, the envelopes at `β - ε` and `β + ε`.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaShift {
    pub(crate) beta: BetaValue,
    pub(crate) spec: String,
    pub(crate) depth: usize,
    pub(crate) envelope: Word,
    bracket: Option<(Word, Word)>,
}

impl BetaShift {
    pub fn new(beta: BetaValue, spec: String, depth: usize, precision: Option<BigRational>) -> Result<Self> {
        let envelope = beta_expansion(&beta, depth)?;
        let bracket = match precision {
            Some(eps) if eps.is_positive() => {
                let lo = beta.offset(&-eps.clone());
                let hi = beta.offset(&eps);
                let lo_env = beta_expansion(&lo, depth)?;
                Some((lo_env, beta_expansion(&hi, depth)?))
            }
            _ => None,
        };
        Ok(BetaShift { beta, spec, depth, envelope, bracket })
    }

    pub fn envelope(&self) -> &Word {
        &self.envelope
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn alphabet_size(&self) -> usize {
        self.beta.alphabet_size()
    }

    /// `(admissible, precise)`. `precise` is false when the answer changes
    /// somewhere in the stated precision interval.
    pub fn membership_detail(&self, w: &Word) -> Result<(bool, bool)> {
        if w.len() > self.depth {
            return Err(Error::InsufficientDepth { depth: self.depth, len: w.len() });
        }
        let ans = admissible(w, &self.envelope);
        let precise = match &self.bracket {
            Some((lo, hi)) => admissible(w, lo) == admissible(w, hi),
            None => true,
        };
        Ok((ans, precise))
    }
}

impl fmt::Display for BetaValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BetaValue::Rational(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            BetaValue::Quadratic { a, b, d, c } => write!(f, "quadratic:{a}:{b}:{d}:{c}"),
        }
    }
}

/// Parses `p/q`, an exact decimal such as `1.75`, `golden`, or
/// `quadratic:a:b:d:c` for `(a + b√d)/c`.
impl FromStr for BetaValue {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::invalid(format!("cannot parse beta `{s}`"));
        if s == "golden" {
            return Ok(BetaValue::golden());
        }
        if let Some(rest) = s.strip_prefix("quadratic:") {
            let parts: Vec<i64> = rest.split(':').map(|x| x.parse().map_err(|_| bad())).collect::<Result<_>>()?;
            let [a, b, d, c] = parts[..] else { return Err(bad()) };
            if d <= 0 || c == 0 {
                return Err(bad());
            }
            let r = (d as f64).sqrt().round() as i64;
            if r * r == d {
                return Ok(BetaValue::Rational(rat(a + b * r, c)));
            }
            return Ok(BetaValue::Quadratic { a, b, d, c });
        }
        parse_rational(s).map(BetaValue::Rational).ok_or_else(bad)
    }
}

/// Exact rational from `p/q` or a plain decimal (optionally with exponent).
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(BigRational::new(p, q));
    }
    let (mantissa, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = digits.parse().ok()?;
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    Some(if scale >= 0 {
        BigRational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(numer, num_traits::pow(ten, (-scale) as usize))
    })
}
