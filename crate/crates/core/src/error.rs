use std::fmt;

use thiserror::Error;

/// Location of a parse failure, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid chain: {0}")]
    InvalidChain(String),
    #[error("invalid cyclic quotient 1/{m}(1,{q}): need 0 < q < m and gcd(m,q) = 1")]
    InvalidQuotient { m: String, q: String },
    #[error("chain length {len} exceeds enumeration cap {cap}")]
    EnumerationCap { len: usize, cap: usize },
    #[error("contraction emptied the chain")]
    OverContraction,
    #[error("contraction produced a 0-entry")]
    ZeroEntry,
    #[error("K^2 must be positive, got {0}")]
    NonPositiveK2(i64),
    #[error("unknown curve `{0}`")]
    UnknownCurve(String),
    #[error("unknown node {0}")]
    UnknownNode(u32),
    #[error("duplicate curve name `{0}`")]
    DuplicateCurve(String),
    #[error("invalid marking: {0}")]
    InvalidMarking(String),
    #[error("unsupported ADE graph: {0}")]
    UnsupportedAde(String),
    #[error("{what} parse error at {pos}: {msg}")]
    Parse { what: &'static str, pos: Pos, msg: String },
    #[error("constraints unsatisfiable: {0}")]
    Unsatisfiable(String),
    #[error("record rejected: {0}")]
    Record(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(what: &'static str, src: &str, offset: usize, msg: impl Into<String>) -> Self {
        Error::Parse { what, pos: pos_at(src, offset), msg: msg.into() }
    }
}

/// Line/column of a byte offset (columns count chars).
pub fn pos_at(src: &str, offset: usize) -> Pos {
    let offset = offset.min(src.len());
    let before = &src[..floor_char_boundary(src, offset)];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    Pos { line, col }
}

fn floor_char_boundary(s: &str, mut i: usize) -> usize {
    while !s.is_char_boundary(i) {
        i -= 1;
    }
    i
}
