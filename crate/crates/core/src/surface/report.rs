use std::fmt::{self, Write as _};

use serde::Serialize;

use super::marked::MarkedSurface;
use super::nef::{nef_ample_check, NefReport};
use super::pi1::{pi1_verdict, Pi1Verdict};
use crate::config::{family_dim, Configuration};

/// `K_X²` of the contracted surface: `K_S² − blow-ups + Σ chain lengths`.
pub fn k_squared(ms: &MarkedSurface) -> i64 {
    let lengths: usize = ms.wahl_chains().iter().map(Vec::len).sum();
    ms.surface().ambient().k2() - i64::from(ms.blowup_count()) + lengths as i64
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Obstruction {
    pub r: usize,
    pub rank: usize,
    pub dim: i64,
    pub caveat: Option<String>,
}

/// `r − rank(Gram)`, with the rank optionally capped (e.g. by a Picard number).
pub fn obstruction_dim(config: &Configuration, rank_cap: Option<usize>) -> i64 {
    obstruction(config, rank_cap).dim
}

pub fn obstruction(config: &Configuration, rank_cap: Option<usize>) -> Obstruction {
    let gram = config.full_matrix();
    let raw = gram.rank();
    let rank = rank_cap.map_or(raw, |cap| raw.min(cap));
    let r = config.r();
    let caveat = (raw < r).then(|| "Gram matrix is singular; rank is a proxy for the span in Néron–Severi".to_string());
    Obstruction { r, rank, dim: r as i64 - rank as i64, caveat }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SingularityEntry {
    Wahl { n: String, a: String, chain: String, quotient: String },
    A { k: usize, quotient: String },
}

impl fmt::Display for SingularityEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SingularityEntry::Wahl { n, a, chain, quotient } => write!(f, "({n},{a}) {quotient} {chain}"),
            SingularityEntry::A { k, quotient } => write!(f, "A{k} {quotient}"),
        }
    }
}

/// Wahl chains as `(n,a)` in marking orientation, then `A_k` chains as `1/(k+1)(1,k)`.
pub fn singularity_report(ms: &MarkedSurface) -> Vec<SingularityEntry> {
    let mut out: Vec<SingularityEntry> = ms
        .wahl()
        .iter()
        .map(|w| SingularityEntry::Wahl {
            n: w.n.to_string(),
            a: w.a.to_string(),
            chain: w.chain.to_string(),
            quotient: w.quotient().to_string(),
        })
        .collect();
    out.extend(ms.ade_chains().iter().map(|c| {
        let k = c.len();
        SingularityEntry::A { k, quotient: format!("1/{}(1,{k})", k + 1) }
    }));
    out
}

/// Everything certified about one marked surface. Field order is the serialization order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurfaceReport {
    pub k2: i64,
    pub singularities: Vec<SingularityEntry>,
    pub ample: NefReport,
    pub obstruction_dim: i64,
    pub obstruction_caveat: Option<String>,
    pub pi1: Pi1Verdict,
    pub family_dim: i64,
}

impl SurfaceReport {
    /// `base` is the configuration before blow-ups, used for the obstruction rank.
    pub fn assemble(ms: &MarkedSurface, base: &Configuration, rank_cap: Option<usize>) -> Self {
        let k2 = k_squared(ms);
        let ob = obstruction(base, rank_cap);
        SurfaceReport {
            k2,
            singularities: singularity_report(ms),
            ample: nef_ample_check(ms),
            obstruction_dim: ob.dim,
            obstruction_caveat: ob.caveat,
            pi1: pi1_verdict(ms),
            family_dim: family_dim(k2),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "k2: {}", self.k2);
        let _ = writeln!(s, "singularities:");
        for e in &self.singularities {
            let _ = writeln!(s, "  {e}");
        }
        let verdict = serde_json::to_value(self.ample.verdict).expect("enum");
        let _ = writeln!(s, "ample: {}", verdict.as_str().unwrap_or_default());
        for w in &self.ample.witnesses {
            let _ = writeln!(s, "  witness {} ({}): s = {}; {}", w.curve, w.self_int, w.s, w.reason);
        }
        for c in &self.ample.contractions {
            let q = c.quotient.as_deref().unwrap_or("not a chain join");
            match &c.t_type {
                Some(t) => {
                    let _ = writeln!(s, "  contracts via {}: {q} [{t}]", c.curve);
                }
                None => {
                    let _ = writeln!(s, "  contracts via {}: {q}", c.curve);
                }
            }
        }
        for w in &self.ample.warnings {
            let _ = writeln!(s, "  warning: {w}");
        }
        let _ = writeln!(s, "obstruction_dim: {}", self.obstruction_dim);
        if let Some(c) = &self.obstruction_caveat {
            let _ = writeln!(s, "  caveat: {c}");
        }
        let pi1 = serde_json::to_value(self.pi1.kind).expect("enum");
        let _ = writeln!(s, "pi1: {}", pi1.as_str().unwrap_or_default());
        for j in &self.pi1.justification {
            let _ = writeln!(s, "  {j}");
        }
        let _ = writeln!(s, "family_dim: {}", self.family_dim);
        s
    }
}
