use std::collections::BTreeSet;

use crate::catalog::StatedChain;
use crate::config::{Configuration, CurveId, Origin};
use crate::surface::{chain_entries, path_components, MarkedSurface};

/// Marks a blown-up surface against stated chains.
///
/// Wahl candidates are the `base` curves plus every exceptional curve that is not a
/// (−1)-curve; each component must read as one stated chain (either direction) and is
/// oriented as stated. Untouched (−2)-paths disjoint from `base` become A_k chains; other
/// curves stay free. On failure returns a description of what was read.
pub fn mark_against(
    surface: &Configuration,
    base: &[CurveId],
    chains: &[StatedChain],
) -> Result<MarkedSurface, String> {
    let wahl = wahl_components(surface, base)?;
    let mut used = vec![false; wahl.len()];
    let mut marked = Vec::new();
    for sc in chains {
        let target = sc.chain.entries();
        let hit = wahl.iter().enumerate().find_map(|(i, (path, entries))| {
            if used[i] {
                return None;
            }
            if entries == target {
                Some((i, path.clone()))
            } else if entries.iter().rev().eq(target.iter()) {
                Some((i, path.iter().rev().copied().collect()))
            } else {
                None
            }
        });
        match hit {
            Some((i, path)) => {
                used[i] = true;
                marked.push(path);
            }
            None => return Err(format!("no component reads {}; read {}", sc.chain, readings(&wahl))),
        }
    }
    if used.iter().any(|u| !u) {
        return Err(format!("extra components; read {}", readings(&wahl)));
    }
    let ade = ade_chains(surface, base);
    MarkedSurface::new(surface.clone(), marked, ade).map_err(|e| e.to_string())
}

/// A path of curves with their entries `−C²`.
pub type Path = (Vec<CurveId>, Vec<u32>);

/// Components of the Wahl candidates as oriented paths with their entries.
pub fn wahl_components(surface: &Configuration, base: &[CurveId]) -> Result<Vec<Path>, String> {
    let cand: Vec<CurveId> = base
        .iter()
        .copied()
        .chain(
            surface
                .curves()
                .iter()
                .filter(|c| matches!(c.origin, Origin::Exceptional(_)) && c.self_int <= -2)
                .map(|c| c.id),
        )
        .collect();
    let mut out = Vec::new();
    for comp in path_components(surface, &cand) {
        match comp {
            Ok(path) => {
                let entries = chain_entries(surface, &path).map_err(|e| e.to_string())?;
                out.push((path, entries.entries().to_vec()));
            }
            Err(curves) => {
                let names: Vec<&str> = curves.iter().map(|&c| surface.name(c)).collect();
                return Err(format!("component {{{}}} is not a chain", names.join(", ")));
            }
        }
    }
    Ok(out)
}

/// Paths of untouched base (−2)-curves meeting neither `base` nor any exceptional curve.
pub fn ade_chains(surface: &Configuration, base: &[CurveId]) -> Vec<Vec<CurveId>> {
    let in_base: BTreeSet<CurveId> = base.iter().copied().collect();
    let touched = |c: CurveId| {
        surface.nodes_on(c).any(|n| {
            let o = n.other(c);
            in_base.contains(&o) || matches!(surface.curve(o).origin, Origin::Exceptional(_))
        })
    };
    let rest: Vec<CurveId> = surface
        .curves()
        .iter()
        .filter(|c| c.origin == Origin::Base && c.self_int == -2 && !in_base.contains(&c.id) && !touched(c.id))
        .map(|c| c.id)
        .collect();
    path_components(surface, &rest).into_iter().filter_map(Result::ok).collect()
}

fn readings(wahl: &[(Vec<CurveId>, Vec<u32>)]) -> String {
    let r: Vec<String> = wahl
        .iter()
        .map(|(_, e)| format!("[{}]", e.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")))
        .collect();
    r.join(" ")
}
