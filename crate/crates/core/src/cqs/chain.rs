use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hirzebruch–Jung chain `[b1,...,bl]` in canonical form: non-empty, every `bi >= 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Chain(Vec<u32>);

impl Chain {
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidChain("empty chain".into()));
        }
        if let Some(b) = entries.iter().find(|&&b| b < 2) {
            return Err(Error::InvalidChain(format!("entry {b} < 2")));
        }
        Ok(Chain(entries))
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn sum(&self) -> u64 {
        self.0.iter().map(|&b| u64::from(b)).sum()
    }

    pub fn reversed(&self) -> Chain {
        Chain(self.0.iter().rev().copied().collect())
    }

    pub(crate) fn from_vec_unchecked(v: Vec<u32>) -> Self {
        debug_assert!(!v.is_empty() && v.iter().all(|&b| b >= 2));
        Chain(v)
    }

    /// Parses `[4,5,3]`, `[4 5 3]`, `4,5,3` or `4 5 3`.
    pub fn parse(s: &str) -> Result<Self> {
        let err = |off: usize, msg: &str| Error::parse("chain", s, off, msg);
        let trimmed_start = s.len() - s.trim_start().len();
        let t = s.trim();
        let (body, base) = match (t.strip_prefix('['), t.ends_with(']')) {
            (Some(rest), true) => (&rest[..rest.len() - 1], trimmed_start + 1),
            (Some(_), false) => return Err(err(s.trim_end().len(), "missing `]`")),
            (None, true) => return Err(err(trimmed_start, "missing `[`")),
            (None, false) => (t, trimmed_start),
        };
        let mut entries = Vec::new();
        let mut i = 0;
        let bytes = body.as_bytes();
        let mut expect_item = true;
        while i < bytes.len() {
            let c = bytes[i];
            if c.is_ascii_whitespace() {
                i += 1;
            } else if c == b',' {
                if expect_item {
                    return Err(err(base + i, "expected an integer before `,`"));
                }
                expect_item = true;
                i += 1;
            } else if c.is_ascii_digit() {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let v: u32 = body[start..i].parse().map_err(|_| err(base + start, "entry out of range"))?;
                if v < 2 {
                    return Err(err(base + start, "entries must be >= 2"));
                }
                entries.push(v);
                expect_item = false;
            } else {
                return Err(err(base + i, "unexpected character"));
            }
        }
        if entries.is_empty() {
            return Err(err(base, "empty chain"));
        }
        if expect_item {
            return Err(err(base + bytes.len(), "trailing `,`"));
        }
        Ok(Chain(entries))
    }
}

impl TryFrom<Vec<u32>> for Chain {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        Chain::new(v)
    }
}

impl From<Chain> for Vec<u32> {
    fn from(c: Chain) -> Self {
        c.0
    }
}

impl FromStr for Chain {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Chain::parse(s)
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, b) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{b}")?;
        }
        f.write_str("]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_common_spellings() {
        for s in ["[4,5,3]", "[4, 5, 3]", " [4 5 3] ", "4,5,3", "4 5 3"] {
            assert_eq!(Chain::parse(s).unwrap().entries(), &[4, 5, 3], "{s}");
        }
    }

    #[test]
    fn rejects_malformed() {
        for s in ["", "[]", "[4,", "[4,1]", "[4,,5]", "4]", "[a]", "[4,5,]", "[99999999999]"] {
            assert!(Chain::parse(s).is_err(), "{s}");
        }
    }

    #[test]
    fn display_round_trips() {
        let c = Chain::new(vec![4, 2, 3, 5, 4, 2, 2]).unwrap();
        assert_eq!(c.to_string(), "[4,2,3,5,4,2,2]");
        assert_eq!(Chain::parse(&c.to_string()).unwrap(), c);
    }

    #[test]
    fn error_position_points_at_offender() {
        match Chain::parse("[4, 1]") {
            Err(Error::Parse { pos, .. }) => assert_eq!((pos.line, pos.col), (1, 5)),
            other => panic!("{other:?}"),
        }
    }
}
