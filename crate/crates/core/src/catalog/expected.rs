use serde::Deserialize;

use super::record::StatedChain;
use crate::cqs::Chain;
use crate::error::{Error, Pos, Result};

pub const EXPECTED_JSON: &str = include_str!("../../data/expected.json");
pub const RECORDS_TXT: &str = include_str!("../../data/records.txt");

/// Per-construction assertion values.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expected {
    pub main_constructions: Vec<MainConstruction>,
    pub wormholes: Vec<Wormhole>,
    pub t_joins: Vec<TJoin>,
    pub k1_chains: Vec<Vec<u32>>,
    pub bracket_examples: Vec<BracketExample>,
}

/// A printed intersection matrix with its chains and Du Val chains.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MainConstruction {
    pub k2: i64,
    pub curves: Vec<String>,
    pub matrix: Vec<Vec<i64>>,
    pub det: i64,
    pub chains: Vec<ExpectedChain>,
    pub du_val: Vec<Vec<String>>,
}

/// `chain` as printed; `(n, a)` may refer to either orientation.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectedChain {
    pub n: u64,
    pub a: u64,
    pub chain: Vec<u32>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Wormhole {
    pub left: String,
    pub right: String,
    pub order: u64,
    pub twist: u64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TJoin {
    pub record: String,
    pub n: u64,
}

/// Blow-up descriptions given in running text rather than as full records.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketExample {
    pub k2: i64,
    pub text: String,
    pub chains: String,
}

pub fn parse_expected(text: &str) -> Result<Expected> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        what: "expected",
        pos: Pos { line: e.line(), col: e.column() },
        msg: e.to_string(),
    })
}

impl MainConstruction {
    /// The chains as printed; `(n, a)` may refer to either orientation.
    pub fn stated_chains(&self) -> Result<Vec<StatedChain>> {
        self.chains
            .iter()
            .map(|c| {
                let sc = StatedChain { n: c.n, a: c.a, chain: Chain::new(c.chain.clone())? };
                if sc.holds() {
                    Ok(sc)
                } else {
                    Err(Error::Record(format!("K^2={}: {} is not that Wahl chain", self.k2, sc)))
                }
            })
            .collect()
    }
}

impl Expected {
    pub fn shipped() -> Self {
        parse_expected(EXPECTED_JSON).expect("shipped expected.json is valid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_parses() {
        let e = Expected::shipped();
        assert_eq!(e.main_constructions.len(), 8);
        assert_eq!(e.wormholes.len(), 5);
        assert_eq!(e.t_joins.len(), 6);
    }

    #[test]
    fn rejects_unknown_fields() {
        let t = EXPECTED_JSON.replacen("\"wormholes\"", "\"wormholez\"", 1);
        assert!(parse_expected(&t).is_err());
    }
}
