//! Compact construction records, one per line:
//!
//! ```text
//! (2.1) K^2=2 - {C1, C2, B1, A2, A3, D1} - det=-40 - C1∩C2, [2,2,1] × A2∩B1 - (11,3):[4,5,3,2,2], (8,3):[3,5,3,2]
//! ```
//!
//! Optional trailing segments: `- ade=[1,1,5]` (expected A_k chains) and `- partner=(4.3)`.

use std::fmt;

use serde::Serialize;

use crate::cqs::{is_wahl, Chain};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Step {
    /// A node where the two named curves meet.
    Node { a: String, b: String },
    /// Several blow-ups starting at `a ∩ b`, described by an opaque pattern.
    Group { pattern: Vec<u32>, a: String, b: String },
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Node { a, b } => write!(f, "{a}∩{b}"),
            Step::Group { pattern, a, b } => write!(f, "{} × {a}∩{b}", list(pattern)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StatedChain {
    pub n: u64,
    pub a: u64,
    pub chain: Chain,
}

impl StatedChain {
    /// True iff the chain is Wahl with index `n` and parameter `a` in one of its two
    /// orientations (`a` read along the chain, or `n − a` for the reversal).
    pub fn holds(&self) -> bool {
        is_wahl(&self.chain).is_some_and(|w| {
            w.n == self.n.into() && (w.a == self.a.into() || self.a < self.n && w.a == (self.n - self.a).into())
        })
    }

    /// True iff `a` is stated for the reversed orientation.
    pub fn stated_reversed(&self) -> bool {
        is_wahl(&self.chain).is_some_and(|w| w.n == self.n.into() && w.a != self.a.into())
    }
}

impl fmt::Display for StatedChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{}):{}", self.n, self.a, self.chain)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurfaceRecord {
    pub id: String,
    pub k2: i64,
    pub curves: Vec<String>,
    pub det: i64,
    pub steps: Vec<Step>,
    pub chains: Vec<StatedChain>,
    /// Expected A_k chains by `k`, when known.
    pub ade: Option<Vec<usize>>,
    pub partner: Option<String>,
}

impl SurfaceRecord {
    /// Rejects records whose stated chains are not Wahl with the stated parameters.
    pub fn check_chains(&self) -> Result<()> {
        match self.chains.iter().find(|c| !c.holds()) {
            Some(c) => Err(Error::Record(format!("({}) states {c}, which is not that Wahl chain", self.id))),
            None => Ok(()),
        }
    }
}

impl fmt::Display for SurfaceRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) K^2={} - {{{}}} - det={} - ", self.id, self.k2, self.curves.join(", "), self.det)?;
        if self.steps.is_empty() {
            f.write_str("none")?;
        } else {
            let steps: Vec<String> = self.steps.iter().map(ToString::to_string).collect();
            f.write_str(&steps.join(", "))?;
        }
        let chains: Vec<String> = self.chains.iter().map(ToString::to_string).collect();
        write!(f, " - {}", chains.join(", "))?;
        if let Some(ade) = &self.ade {
            write!(f, " - ade={}", list(ade))?;
        }
        if let Some(p) = &self.partner {
            write!(f, " - partner=({p})")?;
        }
        Ok(())
    }
}

fn list<T: fmt::Display>(v: &[T]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(","))
}

/// Parses one record.
pub fn parse_record(text: &str) -> Result<SurfaceRecord> {
    let mut p = Parser { src: text, pos: 0 };
    let r = p.record()?;
    p.ws();
    if p.pos != text.len() {
        return Err(p.err("trailing input"));
    }
    Ok(r)
}

/// Parses a records file: one record per line; blank lines and `#` comments are skipped.
/// Diagnostics carry file line numbers.
pub fn parse_records(text: &str) -> Result<Vec<SurfaceRecord>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let body = line.trim_end_matches(['\n', '\r']);
        let t = body.trim_start();
        if !(t.is_empty() || t.starts_with('#')) {
            let mut p = Parser { src: text, pos: offset };
            let end = offset + body.len();
            let r = p.record()?;
            p.ws_until(end);
            if p.pos != end {
                return Err(p.err("trailing input"));
            }
            out.push(r);
        }
        offset += line.len();
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::parse("record", self.src, self.pos, msg)
    }

    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn ws(&mut self) {
        while let Some(c) = self.rest().chars().next() {
            if c == ' ' || c == '\t' {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn ws_until(&mut self, end: usize) {
        self.ws();
        self.pos = self.pos.min(end);
    }

    fn eat(&mut self, s: &str) -> bool {
        if self.rest().starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<()> {
        self.ws();
        if self.eat(s) {
            Ok(())
        } else {
            Err(self.err(&format!("expected `{s}`")))
        }
    }

    fn sep(&mut self) -> Result<()> {
        self.ws();
        if self.eat("-") {
            Ok(())
        } else {
            Err(self.err("expected ` - ` separator"))
        }
    }

    fn uint(&mut self) -> Result<u64> {
        self.ws();
        let digits = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        if digits == 0 {
            return Err(self.err("expected an integer"));
        }
        let v = self.rest()[..digits].parse().map_err(|_| self.err("integer out of range"))?;
        self.pos += digits;
        Ok(v)
    }

    fn int(&mut self) -> Result<i64> {
        self.ws();
        let neg = self.eat("-");
        let v = i64::try_from(self.uint()?).map_err(|_| self.err("integer out of range"))?;
        Ok(if neg { -v } else { v })
    }

    fn name(&mut self) -> Result<String> {
        self.ws();
        let r = self.rest();
        let mut chars = r.char_indices();
        match chars.next() {
            Some((_, c)) if c.is_ascii_alphabetic() => {}
            _ => return Err(self.err("expected a curve name")),
        }
        let len =
            chars.find(|&(_, c)| !(c.is_ascii_alphanumeric() || c == '_' || c == '\'')).map_or(r.len(), |(i, _)| i);
        let s = r[..len].to_string();
        self.pos += len;
        Ok(s)
    }

    fn uint_list(&mut self) -> Result<Vec<u64>> {
        self.expect("[")?;
        let mut v = vec![self.uint()?];
        loop {
            self.ws();
            if self.eat(",") {
                v.push(self.uint()?);
            } else {
                break;
            }
        }
        self.expect("]")?;
        Ok(v)
    }

    fn id(&mut self) -> Result<String> {
        self.expect("(")?;
        self.ws();
        let len = self.rest().bytes().take_while(|b| b.is_ascii_digit() || *b == b'.').count();
        if len == 0 {
            return Err(self.err("expected a record id like 2.1"));
        }
        let id = self.rest()[..len].to_string();
        self.pos += len;
        self.expect(")")?;
        Ok(id)
    }

    fn meet(&mut self) -> Result<(String, String)> {
        let a = self.name()?;
        self.ws();
        if !(self.eat("∩") || self.eat("&")) {
            return Err(self.err("expected `∩`"));
        }
        let b = self.name()?;
        Ok((a, b))
    }

    fn step(&mut self) -> Result<Step> {
        self.ws();
        if self.rest().starts_with('[') {
            let start = self.pos;
            let pattern = self
                .uint_list()?
                .into_iter()
                .map(u32::try_from)
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| Error::parse("record", self.src, start, "pattern entry out of range"))?;
            self.ws();
            if !(self.eat("×") || self.eat("x") || self.eat("*")) {
                return Err(self.err("expected `×` after a bracket pattern"));
            }
            let (a, b) = self.meet()?;
            Ok(Step::Group { pattern, a, b })
        } else {
            let (a, b) = self.meet()?;
            Ok(Step::Node { a, b })
        }
    }

    fn stated_chain(&mut self) -> Result<StatedChain> {
        self.expect("(")?;
        let n = self.uint()?;
        self.expect(",")?;
        let a = self.uint()?;
        self.expect(")")?;
        self.expect(":")?;
        self.ws();
        let start = self.pos;
        let entries = self.uint_list()?;
        let entries = entries
            .into_iter()
            .map(|b| u32::try_from(b).ok().filter(|&b| b >= 2))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::parse("record", self.src, start, "chain entries must be integers >= 2"))?;
        Ok(StatedChain { n, a, chain: Chain::new(entries)? })
    }

    fn record(&mut self) -> Result<SurfaceRecord> {
        let id = self.id()?;
        self.expect("K^2")?;
        self.expect("=")?;
        let k2 = self.int()?;
        self.sep()?;
        self.expect("{")?;
        let mut curves = vec![self.name()?];
        loop {
            self.ws();
            if self.eat(",") {
                curves.push(self.name()?);
            } else {
                break;
            }
        }
        self.expect("}")?;
        self.sep()?;
        self.expect("det")?;
        self.expect("=")?;
        let det = self.int()?;
        self.sep()?;
        self.ws();
        let mut steps = Vec::new();
        if !self.eat("none") {
            steps.push(self.step()?);
            loop {
                self.ws();
                if self.eat(",") {
                    steps.push(self.step()?);
                } else {
                    break;
                }
            }
        }
        self.sep()?;
        let mut chains = vec![self.stated_chain()?];
        let mut ade = None;
        let mut partner = None;
        loop {
            self.ws();
            let save = self.pos;
            if self.eat(",") {
                chains.push(self.stated_chain()?);
                continue;
            }
            if !self.eat("-") {
                break;
            }
            self.ws();
            if self.rest().starts_with('(') {
                if ade.is_some() || partner.is_some() {
                    return Err(self.err("chains must precede optional segments"));
                }
                chains.push(self.stated_chain()?);
            } else if self.eat("ade=") {
                let v = self.uint_list()?;
                ade = Some(v.into_iter().map(|k| k as usize).collect());
            } else if self.eat("partner=") {
                partner = Some(self.id()?);
            } else {
                self.pos = save;
                return Err(self.err("unexpected segment"));
            }
        }
        Ok(SurfaceRecord { id, k2, curves, det, steps, chains, ade, partner })
    }
}
