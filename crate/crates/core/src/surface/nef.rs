use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::marked::{MarkedSurface, Membership};
use crate::config::{CurveId, Origin};
use crate::cqs::{blow_down_compose, recognize_t, Chain};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Positivity {
    Ample,
    NefOnly,
    NotNef,
}

/// A curve responsible for the verdict, with its discrepancy sum `s(Γ)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub curve: String,
    pub self_int: i64,
    pub s: String,
    pub reason: String,
}

/// Germ obtained by contracting a chain–(−1)–chain configuration with `s(Γ) = −1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Contraction {
    pub curve: String,
    pub quotient: Option<String>,
    pub t_type: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NefReport {
    pub verdict: Positivity,
    pub witnesses: Vec<Witness>,
    pub warnings: Vec<String>,
    pub contractions: Vec<Contraction>,
}

impl NefReport {
    /// Ample, or nef with every `K`-trivial curve a (−1)-curve joining two chains into a
    /// T-singularity, so that the canonical model has ample `K`.
    pub fn ample_on_canonical_model(&self) -> bool {
        match self.verdict {
            Positivity::Ample => true,
            Positivity::NotNef => false,
            Positivity::NefOnly => {
                self.warnings.is_empty()
                    && self.witnesses.iter().all(|w| w.self_int == -1)
                    && self.witnesses.len() == self.contractions.len()
                    && self.contractions.iter().all(|c| c.t_type.is_some())
            }
        }
    }
}

/// `s(Γ)`: discrepancies of the Wahl-chain curves met by `Γ`, counted with multiplicity.
pub fn discrepancy_sum(ms: &MarkedSurface, gamma: CurveId) -> BigRational {
    let mut s = BigRational::zero();
    for n in ms.surface().nodes_on(gamma) {
        if n.is_self_node() {
            continue;
        }
        if let Membership::Wahl { chain, pos } = ms.membership(n.other(gamma)) {
            s += &ms.wahl()[chain].discrepancies[pos];
        }
    }
    s
}

/// Certifies `K_X` nef/ample from the discrepancies of the marked Wahl chains.
pub fn nef_ample_check(ms: &MarkedSurface) -> NefReport {
    let surface = ms.surface();
    let minus_one = -BigRational::one();
    let mut not_nef = Vec::new();
    let mut boundary = Vec::new();
    let mut warnings = Vec::new();
    let mut contractions = Vec::new();
    for &g in ms.free_curves() {
        let curve = surface.curve(g);
        let s = discrepancy_sum(ms, g);
        let witness = |reason: &str| Witness {
            curve: curve.name.clone(),
            self_int: curve.self_int,
            s: s.to_string(),
            reason: reason.to_string(),
        };
        if curve.self_nodes > 0 || !(curve.self_int == -1 || curve.self_int == -2) {
            not_nef.push(witness("free curve is neither a (−1)- nor a (−2)-curve"));
            continue;
        }
        if curve.self_int == -1 {
            if s > minus_one {
                not_nef.push(witness("K·Γ < 0: discrepancy sum exceeds −1"));
            } else if s == minus_one {
                boundary.push(witness("K·Γ = 0: discrepancy sum equals −1"));
                contractions.push(contract_through(ms, g));
            }
        } else if s.is_zero() {
            let touches = surface.nodes_on(g).any(|n| !n.is_self_node());
            let meets_exceptional =
                surface.nodes_on(g).any(|n| matches!(surface.curve(n.other(g)).origin, Origin::Exceptional(_)));
            boundary.push(witness("K·Γ = 0: (−2)-curve meets no Wahl chain"));
            if touches && meets_exceptional {
                warnings.push(format!(
                    "{} is a zero curve meeting exceptional curves only; treated as blocking ampleness",
                    curve.name
                ));
            }
        }
    }
    let k2 = super::k_squared(ms);
    if not_nef.is_empty() && k2 <= 0 {
        warnings.push(format!("K² = {k2} is not positive"));
    }
    let verdict = if !not_nef.is_empty() {
        Positivity::NotNef
    } else if !boundary.is_empty() || k2 <= 0 {
        Positivity::NefOnly
    } else {
        Positivity::Ample
    };
    let mut witnesses = not_nef;
    witnesses.extend(boundary);
    NefReport { verdict, witnesses, warnings, contractions }
}

/// Joins the two chains an `s = −1` curve meets at their ends, if that is its shape.
fn contract_through(ms: &MarkedSurface, g: CurveId) -> Contraction {
    let surface = ms.surface();
    let name = surface.name(g).to_string();
    let hits: Vec<(usize, usize)> = surface
        .nodes_on(g)
        .filter_map(|n| match ms.membership(n.other(g)) {
            Membership::Wahl { chain, pos } => Some((chain, pos)),
            _ => None,
        })
        .collect();
    let oriented = |(chain, pos): (usize, usize), at_end: bool| -> Option<Chain> {
        let c = &ms.wahl()[chain].chain;
        let last = c.len() - 1;
        match (pos == last, pos == 0) {
            (true, _) if at_end => Some(c.clone()),
            (_, true) if at_end => Some(c.reversed()),
            (_, true) => Some(c.clone()),
            (true, _) => Some(c.reversed()),
            _ => None,
        }
    };
    let joined = match hits.as_slice() {
        [x, y] if x.0 != y.0 => oriented(*x, true).zip(oriented(*y, false)),
        _ => None,
    };
    match joined.and_then(|(l, r)| blow_down_compose(&l, &r).ok()) {
        Some(cq) => {
            Contraction { curve: name, t_type: recognize_t(&cq).map(|t| t.to_string()), quotient: Some(cq.to_string()) }
        }
        None => Contraction { curve: name, quotient: None, t_type: None },
    }
}
