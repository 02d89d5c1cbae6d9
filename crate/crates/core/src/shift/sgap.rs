//! S-gap shifts: binary sequences whose runs of zeros between consecutive
//! ones have lengths in `S`.

use std::fmt;
use std::str::FromStr;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::words::Word;

/// `S ⊂ N` given exactly on `0..=threshold` and constant beyond it.
#[derive(Debug, Clone, PartialEq)]
pub struct GapSet {
    members: Vec<bool>,
    tail_in: bool,
}

impl GapSet {
    pub fn new(members: Vec<bool>, tail_in: bool) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::invalid("gap set needs a threshold >= 0"));
        }
        if !tail_in && !members.iter().any(|&b| b) {
            return Err(Error::invalid("gap set is empty"));
        }
        Ok(GapSet { members, tail_in })
    }

    pub fn threshold(&self) -> usize {
        self.members.len() - 1
    }

    pub fn contains(&self, n: usize) -> bool {
        self.members.get(n).copied().unwrap_or(self.tail_in)
    }

    /// `sup S`, or `None` when `S` is infinite.
    pub fn max(&self) -> Option<usize> {
        if self.tail_in {
            None
        } else {
            self.members.iter().rposition(|&b| b)
        }
    }

    fn has_at_least(&self, n: usize) -> bool {
        self.max().is_none_or(|m| m >= n)
    }
}

/// Text forms: `ge:k`, `le:k`, `list:1,3,4` (finite) and `cofinite:0,2`
/// (everything except the listed values).
impl FromStr for GapSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let nums = |x: &str| -> Result<Vec<usize>> {
            x.split(',')
                .filter(|p| !p.trim().is_empty())
                .map(|p| p.trim().parse().map_err(|_| Error::invalid(format!("bad gap set `{s}`"))))
                .collect()
        };
        let (kind, rest) = s.split_once(':').ok_or_else(|| Error::invalid(format!("bad gap set `{s}`")))?;
        match kind {
            "ge" => {
                let k: usize = rest.parse().map_err(|_| Error::invalid(format!("bad gap set `{s}`")))?;
                GapSet::new((0..=k).map(|n| n >= k).collect(), true)
            }
            "le" => {
                let k: usize = rest.parse().map_err(|_| Error::invalid(format!("bad gap set `{s}`")))?;
                GapSet::new(vec![true; k + 1], false)
            }
            "list" | "cofinite" => {
                let v = nums(rest)?;
                let t = v.iter().copied().max().unwrap_or(0);
                let listed = |n: usize| v.contains(&n);
                let members = if kind == "list" {
                    (0..=t).map(listed).collect()
                } else {
                    (0..=t).map(|n| !listed(n)).collect()
                };
                GapSet::new(members, kind == "cofinite")
            }
            _ => Err(Error::invalid(format!("unknown gap set form `{s}`"))),
        }
    }
}

impl fmt::Display for GapSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let listed: Vec<String> =
            (0..self.members.len()).filter(|&n| self.members[n] != self.tail_in).map(|n| n.to_string()).collect();
        if self.tail_in {
            write!(f, "cofinite:{}", listed.join(","))
        } else {
            write!(f, "list:{}", listed.join(","))
        }
    }
}

/// JSON form: a text form, or `{"members": [..], "threshold": T, "tail": "in" | "out"}`.
#[derive(Deserialize)]
#[serde(untagged)]
enum GapRepr {
    Text(String),
    Explicit { members: Vec<usize>, threshold: usize, tail: Tail },
}

#[derive(Deserialize, PartialEq)]
#[serde(rename_all = "lowercase")]
enum Tail {
    In,
    Out,
}

impl<'de> Deserialize<'de> for GapSet {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        match GapRepr::deserialize(de)? {
            GapRepr::Text(s) => s.parse().map_err(serde::de::Error::custom),
            GapRepr::Explicit { members, threshold, tail } => {
                if members.iter().any(|&m| m > threshold) {
                    return Err(serde::de::Error::custom("gap set members must not exceed the threshold"));
                }
                let v = (0..=threshold).map(|n| members.contains(&n)).collect();
                GapSet::new(v, tail == Tail::In).map_err(serde::de::Error::custom)
            }
        }
    }
}

impl serde::Serialize for GapSet {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.collect_str(self)
    }
}

/// Binary words whose internal zero runs lie in `S` and whose boundary zero
/// runs fit inside some gap.
pub fn contains(set: &GapSet, w: &Word) -> bool {
    let s = w.symbols();
    let ones: Vec<usize> = (0..s.len()).filter(|&i| s[i] == 1).collect();
    let (Some(&first), Some(&last)) = (ones.first(), ones.last()) else {
        return set.has_at_least(s.len());
    };
    if !set.has_at_least(first) || !set.has_at_least(s.len() - 1 - last) {
        return false;
    }
    ones.windows(2).all(|p| set.contains(p[1] - p[0] - 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::w;

    #[test]
    fn ge_one_is_golden_mean() {
        let s: GapSet = "ge:1".parse().unwrap();
        assert!(contains(&s, &w("0101")));
        assert!(!contains(&s, &w("0110")));
        assert!(contains(&s, &w("0000")));
    }

    #[test]
    fn finite_set_bounds_zero_runs() {
        let s: GapSet = "list:1,2".parse().unwrap();
        assert_eq!(s.max(), Some(2));
        assert!(contains(&s, &w("00100")));
        assert!(!contains(&s, &w("000")));
        assert!(!contains(&s, &w("10001")));
        assert!(!contains(&s, &w("11")));
    }

    #[test]
    fn text_round_trip() {
        for t in ["list:1,2", "cofinite:0,3"] {
            let s: GapSet = t.parse().unwrap();
            assert_eq!(s.to_string(), t);
        }
        let ge: GapSet = "ge:2".parse().unwrap();
        assert_eq!(ge.to_string(), "cofinite:0,1");
    }

    #[test]
    fn json_forms() {
        let s: GapSet = serde_json::from_str(r#"{"members":[0,2],"threshold":3,"tail":"in"}"#).unwrap();
        assert!(s.contains(0) && !s.contains(1) && s.contains(2) && !s.contains(3) && s.contains(9));
        let t: GapSet = serde_json::from_str(r#""le:2""#).unwrap();
        assert_eq!(t.max(), Some(2));
    }
}
