use std::collections::{BTreeSet, HashMap};

use crate::config::{Configuration, CurveId};
use crate::cqs::{is_wahl, Chain, WahlSingularity};
use crate::error::{Error, Result};

/// Which marked chain, and which position, a curve belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    Wahl { chain: usize, pos: usize },
    Ade { chain: usize, pos: usize },
    Free,
}

/// A blown-up configuration with its contracted chains marked.
#[derive(Debug, Clone)]
pub struct MarkedSurface {
    surface: Configuration,
    wahl_chains: Vec<Vec<CurveId>>,
    ade_chains: Vec<Vec<CurveId>>,
    free_curves: Vec<CurveId>,
    blowup_count: u32,
    wahl: Vec<WahlSingularity>,
    membership: HashMap<CurveId, Membership>,
}

impl MarkedSurface {
    /// Validates the marking; the blow-up count is taken from the configuration.
    pub fn new(surface: Configuration, wahl_chains: Vec<Vec<CurveId>>, ade_chains: Vec<Vec<CurveId>>) -> Result<Self> {
        let blowups = surface.blowup_count();
        Self::with_blowups(surface, wahl_chains, ade_chains, blowups)
    }

    pub fn with_blowups(
        surface: Configuration,
        wahl_chains: Vec<Vec<CurveId>>,
        ade_chains: Vec<Vec<CurveId>>,
        blowup_count: u32,
    ) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidMarking(m));
        let mut membership = HashMap::new();
        for (kind, chains) in [(0, &wahl_chains), (1, &ade_chains)] {
            for (ci, chain) in chains.iter().enumerate() {
                if chain.is_empty() {
                    return bad("empty chain".into());
                }
                for (pos, &c) in chain.iter().enumerate() {
                    if c.0 as usize >= surface.r() {
                        return Err(Error::UnknownCurve(format!("#{}", c.0)));
                    }
                    let m = if kind == 0 {
                        Membership::Wahl { chain: ci, pos }
                    } else {
                        Membership::Ade { chain: ci, pos }
                    };
                    if membership.insert(c, m).is_some() {
                        return bad(format!("curve {} marked twice", surface.name(c)));
                    }
                }
                check_path(&surface, chain)?;
            }
        }
        for n in surface.nodes() {
            let (a, b) = n.curves();
            let (Some(&ma), Some(&mb)) = (membership.get(&a), membership.get(&b)) else { continue };
            let same = match (ma, mb) {
                (Membership::Wahl { chain: x, .. }, Membership::Wahl { chain: y, .. }) => x == y,
                (Membership::Ade { chain: x, .. }, Membership::Ade { chain: y, .. }) => x == y,
                _ => false,
            };
            if !same {
                return bad(format!("marked chains meet at {} ∩ {}", surface.name(a), surface.name(b)));
            }
        }
        let mut wahl = Vec::new();
        for chain in &wahl_chains {
            let entries = chain_entries(&surface, chain)?;
            match is_wahl(&entries) {
                Some(w) => wahl.push(w),
                None => return bad(format!("{entries} is not a Wahl chain")),
            }
        }
        for chain in &ade_chains {
            if let Some(&c) = chain.iter().find(|&&c| surface.curve(c).self_int != -2) {
                return bad(format!("ADE chain curve {} is not a (−2)-curve", surface.name(c)));
            }
        }
        let free_curves = surface.curve_ids().filter(|c| !membership.contains_key(c)).collect();
        for c in surface.curve_ids() {
            membership.entry(c).or_insert(Membership::Free);
        }
        Ok(MarkedSurface { surface, wahl_chains, ade_chains, free_curves, blowup_count, wahl, membership })
    }

    pub fn surface(&self) -> &Configuration {
        &self.surface
    }

    pub fn wahl_chains(&self) -> &[Vec<CurveId>] {
        &self.wahl_chains
    }

    pub fn ade_chains(&self) -> &[Vec<CurveId>] {
        &self.ade_chains
    }

    pub fn free_curves(&self) -> &[CurveId] {
        &self.free_curves
    }

    pub fn blowup_count(&self) -> u32 {
        self.blowup_count
    }

    /// Recognized singularity of each Wahl chain, in marking order.
    pub fn wahl(&self) -> &[WahlSingularity] {
        &self.wahl
    }

    pub fn membership(&self, c: CurveId) -> Membership {
        self.membership.get(&c).copied().unwrap_or(Membership::Free)
    }
}

/// Self-intersections of a path of curves, negated.
pub fn chain_entries(surface: &Configuration, chain: &[CurveId]) -> Result<Chain> {
    let entries = chain
        .iter()
        .map(|&c| {
            let s = surface.curve(c).self_int;
            u32::try_from(-s)
                .ok()
                .filter(|&b| b >= 2)
                .ok_or_else(|| Error::InvalidMarking(format!("{} has self-intersection {s}", surface.name(c))))
        })
        .collect::<Result<Vec<_>>>()?;
    Chain::new(entries)
}

fn check_path(surface: &Configuration, chain: &[CurveId]) -> Result<()> {
    for (i, &a) in chain.iter().enumerate() {
        if surface.curve(a).self_nodes > 0 {
            return Err(Error::InvalidMarking(format!("{} is nodal", surface.name(a))));
        }
        for (j, &b) in chain.iter().enumerate().skip(i + 1) {
            let expect = i64::from(j == i + 1);
            if surface.intersection(a, b) != expect {
                return Err(Error::InvalidMarking(format!(
                    "{} · {} = {}, expected {expect}",
                    surface.name(a),
                    surface.name(b),
                    surface.intersection(a, b)
                )));
            }
        }
    }
    Ok(())
}

/// Connected components of `candidates` (under nodes among them), each ordered as a path
/// when it is one. Components that are not paths come back as `Err(curves)`.
pub fn path_components(
    surface: &Configuration,
    candidates: &[CurveId],
) -> Vec<std::result::Result<Vec<CurveId>, Vec<CurveId>>> {
    let set: BTreeSet<CurveId> = candidates.iter().copied().collect();
    let mut adj: HashMap<CurveId, Vec<CurveId>> = set.iter().map(|&c| (c, Vec::new())).collect();
    for n in surface.nodes() {
        let (a, b) = n.curves();
        if set.contains(&a) && set.contains(&b) {
            if a == b {
                continue;
            }
            adj.get_mut(&a).unwrap().push(b);
            adj.get_mut(&b).unwrap().push(a);
        }
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for &start in &set {
        if seen.contains(&start) {
            continue;
        }
        let mut comp = vec![start];
        seen.insert(start);
        let mut i = 0;
        while i < comp.len() {
            for &nb in &adj[&comp[i]] {
                if seen.insert(nb) {
                    comp.push(nb);
                }
            }
            i += 1;
        }
        comp.sort();
        let edges: usize = comp.iter().map(|c| adj[c].len()).sum::<usize>() / 2;
        let is_path = edges + 1 == comp.len()
            && comp.iter().all(|c| adj[c].len() <= 2 && surface.curve(*c).self_nodes == 0)
            && comp.iter().all(|c| {
                let mut u = adj[c].clone();
                u.dedup();
                u.len() == adj[c].len()
            });
        if !is_path {
            out.push(Err(comp));
            continue;
        }
        let end = comp.iter().copied().find(|c| adj[c].len() <= 1).expect("a path has an end");
        let mut path = vec![end];
        let mut prev: Option<CurveId> = None;
        let mut cur = end;
        while let Some(&next) = adj[&cur].iter().find(|&&x| Some(x) != prev) {
            path.push(next);
            prev = Some(cur);
            cur = next;
        }
        out.push(Ok(path));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Ambient;

    fn chain_config(entries: &[i64]) -> (Configuration, Vec<CurveId>) {
        let mut c = Configuration::new(Ambient::K3);
        let ids: Vec<_> =
            entries.iter().enumerate().map(|(i, &b)| c.add_curve(&format!("W{i}"), -b).unwrap()).collect();
        for w in ids.windows(2) {
            c.add_node(w[0], w[1]).unwrap();
        }
        (c, ids)
    }

    #[test]
    fn accepts_valid_marking() {
        let (c, ids) = chain_config(&[4, 5, 3, 2, 2]);
        let ms = MarkedSurface::new(c, vec![ids], vec![]).unwrap();
        assert_eq!(ms.wahl()[0].n, 11.into());
    }

    #[test]
    fn rejects_non_wahl_and_broken_paths() {
        let (c, ids) = chain_config(&[4, 4]);
        assert!(MarkedSurface::new(c, vec![ids], vec![]).is_err());
        let (c, ids) = chain_config(&[4, 5, 3, 2, 2]);
        let shuffled = vec![ids[0], ids[2], ids[1], ids[3], ids[4]];
        assert!(MarkedSurface::new(c, vec![shuffled], vec![]).is_err());
    }

    #[test]
    fn rejects_touching_chains() {
        let (c, ids) = chain_config(&[4, 4]);
        assert!(MarkedSurface::new(c, vec![vec![ids[0]], vec![ids[1]]], vec![]).is_err());
    }

    #[test]
    fn components_are_ordered_paths() {
        let (mut c, ids) = chain_config(&[2, 2, 2]);
        let lone = c.add_curve("L", -2).unwrap();
        let comps = path_components(&c, &[ids[1], ids[0], ids[2], lone]);
        assert_eq!(comps.len(), 2);
        let p = comps[0].clone().unwrap();
        assert!(p == ids || p == ids.iter().rev().copied().collect::<Vec<_>>());
        c.add_node(ids[0], ids[2]).unwrap();
        assert!(path_components(&c, &ids)[0].is_err());
    }
}
