//! Search for new constructions over a configuration: curve subsets with admissible
//! `(r, t₂)` and invertible Gram matrix, then blow-ups at `P + K²` of their nodes with
//! single-(−1) local patterns, keeping results whose Wahl candidates split into exactly `P`
//! Wahl chains and which certify ample.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use super::blowup::{apply_group, BlowupPlan};
use super::local::{all_sequences, simulate, LocalPattern, Side};
use super::mark::mark_against;
use crate::catalog::{StatedChain, Step, SurfaceRecord};
use crate::config::{det_exact, geography_check, Configuration, CurveId, NodeId};
use crate::cqs::{is_wahl, length_bound, Chain, SurfaceClass};
use crate::surface::{Positivity, SurfaceReport};

#[derive(Debug, Clone, Serialize)]
pub struct SearchParams {
    pub k2_min: i64,
    pub k2_max: i64,
    /// Numbers of chains `P` tried: `1..=max_chains`.
    pub max_chains: usize,
    /// Total blow-ups per candidate.
    pub max_blowups: usize,
    /// Longest chain accepted; `None` means the K3 length bound `4K² + 1`.
    pub max_chain_len: Option<usize>,
    /// Candidate curves by name; `None` means every curve of the configuration.
    pub curves: Option<Vec<String>>,
    /// Curve subsets enumerated (across all `(K², P)`) before stopping.
    pub max_subsets: u64,
    /// Complete blow-up choices examined per subset before stopping.
    pub max_leaves: u64,
    pub parallel: bool,
    /// Degree/acyclicity pruning; disabling it only costs time.
    pub prune: bool,
}

impl Default for SearchParams {
    fn default() -> Self {
        SearchParams {
            k2_min: 1,
            k2_max: 1,
            max_chains: 2,
            max_blowups: 8,
            max_chain_len: None,
            curves: None,
            max_subsets: 2_000_000,
            max_leaves: 2_000_000,
            parallel: true,
            prune: true,
        }
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct SearchOutcome {
    /// Canonically ordered, one per (curve set, singularity multiset).
    pub records: Vec<SurfaceRecord>,
    pub notes: Vec<String>,
    pub subsets: u64,
    pub leaves: u64,
    /// False iff a budget stopped some part of the search.
    pub exhausted: bool,
}

pub fn search_constructions(params: &SearchParams, universe: &Configuration) -> crate::Result<SearchOutcome> {
    let pool: Vec<CurveId> = match &params.curves {
        Some(names) => {
            let mut ids = names.iter().map(|n| universe.id_of(n)).collect::<crate::Result<Vec<_>>>()?;
            ids.sort_unstable();
            ids.dedup();
            ids
        }
        None => universe.curve_ids().collect(),
    };
    let options = local_options(params.max_blowups);
    let mut out = SearchOutcome { exhausted: true, ..SearchOutcome::default() };
    let mut found: Vec<Found> = Vec::new();
    for k2 in params.k2_min..=params.k2_max {
        for p in 1..=params.max_chains as i64 {
            let geo = geography_check(p, k2);
            if !geo.admissible || k2 < 1 {
                out.notes.push(format!("P={p}, K^2={k2}: inadmissible (K^2 ≤ 14 − (3P−2)/5 fails)"));
                continue;
            }
            let groups = geo.nodes_to_blow_up as usize;
            if groups > params.max_blowups {
                out.notes.push(format!("P={p}, K^2={k2}: needs {groups} blow-ups, budget {}", params.max_blowups));
                continue;
            }
            let budget = params.max_subsets.saturating_sub(out.subsets);
            let (subsets, seen, complete) = subsets(universe, &pool, geo.r as usize, geo.t2 as usize, (p, k2), budget);
            out.subsets += seen;
            if !complete {
                out.exhausted = false;
                out.notes.push(format!("P={p}, K^2={k2}: subset budget {} reached", params.max_subsets));
            }
            let bound = length_bound(SurfaceClass::K3, k2).unwrap_or(0) as usize;
            let job = Job {
                universe,
                options: &options,
                p: p as usize,
                k2,
                groups,
                max_blowups: params.max_blowups,
                max_len: params.max_chain_len.map_or(bound, |m| m.min(bound)),
                max_leaves: params.max_leaves,
                prune: params.prune,
            };
            let per: Vec<(Vec<Found>, u64, bool)> = if params.parallel {
                subsets.par_iter().map(|s| job.run(s)).collect()
            } else {
                subsets.iter().map(|s| job.run(s)).collect()
            };
            for (f, leaves, complete) in per {
                out.leaves += leaves;
                if !complete {
                    out.exhausted = false;
                }
                found.extend(f);
            }
            if out.subsets >= params.max_subsets {
                break;
            }
        }
    }
    if out.notes.iter().any(|n| n.contains("leaf")) || !out.exhausted {
        out.notes.push("partial results: some budget was reached".into());
    }
    found.sort_by(|a, b| a.key.cmp(&b.key));
    found.dedup_by(|a, b| a.key == b.key);
    let mut counter = std::collections::BTreeMap::new();
    for mut f in found {
        let i = counter.entry(f.record.k2).or_insert(0);
        *i += 1;
        f.record.id = format!("{}.{}", f.record.k2, 100 + *i);
        out.records.push(f.record);
    }
    Ok(out)
}

/// Single-(−1) local patterns with at most `max` blow-ups, shortest first.
fn local_options(max: usize) -> Vec<(Vec<Side>, LocalPattern)> {
    (1..=max.max(1))
        .flat_map(all_sequences)
        .map(|s| {
            let p = simulate(&s);
            (s, p)
        })
        .collect()
}

/// Subsets of `pool` of size `r` with exactly `t2` nodes, invariants `(P, K²)` and nonzero
/// determinant, in lexicographic order. Returns (subsets, enumerated, complete).
fn subsets(
    universe: &Configuration,
    pool: &[CurveId],
    r: usize,
    t2: usize,
    pk: (i64, i64),
    budget: u64,
) -> (Vec<Vec<CurveId>>, u64, bool) {
    let n = pool.len();
    let mut meet = vec![vec![0usize; n]; n];
    for (i, &a) in pool.iter().enumerate() {
        for (j, &b) in pool.iter().enumerate() {
            meet[i][j] = universe.nodes_between(a, b).len();
        }
    }
    let mut out = Vec::new();
    let mut pick: Vec<usize> = Vec::new();
    let mut seen = 0u64;
    let complete = combos(&meet, n, r, t2, 0, 0, &mut pick, &mut |pick: &[usize]| {
        seen += 1;
        if seen > budget {
            return false;
        }
        let ids: Vec<CurveId> = pick.iter().map(|&i| pool[i]).collect();
        if let Ok(sub) = universe.restrict(&ids) {
            if sub.pk_invariants() == pk && det_exact(&sub.full_matrix()) != 0.into() {
                out.push(ids);
            }
        }
        true
    });
    (out, seen.min(budget), complete)
}

#[allow(clippy::too_many_arguments)]
fn combos(
    meet: &[Vec<usize>],
    n: usize,
    r: usize,
    t2: usize,
    from: usize,
    nodes: usize,
    pick: &mut Vec<usize>,
    f: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    if pick.len() == r {
        return nodes != t2 || f(pick);
    }
    for i in from..n {
        if n - i < r - pick.len() {
            break;
        }
        let add = meet[i][i] + pick.iter().map(|&j| meet[i][j]).sum::<usize>();
        if nodes + add > t2 {
            continue;
        }
        pick.push(i);
        let go = combos(meet, n, r, t2, i + 1, nodes + add, pick, f);
        pick.pop();
        if !go {
            return false;
        }
    }
    true
}

struct Found {
    /// (K², P, curve ids, singularities): canonical order and identity.
    key: (i64, usize, Vec<u32>, Vec<String>),
    record: SurfaceRecord,
}

struct Job<'a> {
    universe: &'a Configuration,
    options: &'a [(Vec<Side>, LocalPattern)],
    p: usize,
    k2: i64,
    groups: usize,
    max_blowups: usize,
    max_len: usize,
    max_leaves: u64,
    prune: bool,
}

#[derive(Clone)]
enum Nb {
    Base(usize),
    /// Exceptional curves hanging off, read outward.
    Tail(Vec<u32>),
}

struct Walk<'a> {
    /// Nodes among the subset: (node, local index of x, local index of y).
    nodes: Vec<(NodeId, usize, usize)>,
    ids: &'a [CurveId],
    entry: Vec<u32>,
    nbrs: Vec<Vec<Nb>>,
    parent: Vec<usize>,
    choice: Vec<Option<usize>>,
    groups: usize,
    blowups: usize,
    leaves: u64,
    found: Vec<Found>,
    seen: BTreeSet<Vec<String>>,
}

impl Walk<'_> {
    fn find(&self, mut c: usize) -> usize {
        while self.parent[c] != c {
            c = self.parent[c];
        }
        c
    }
}

impl Job<'_> {
    /// Returns (records, leaves, complete).
    fn run(&self, ids: &Vec<CurveId>) -> (Vec<Found>, u64, bool) {
        let local = |c: CurveId| ids.iter().position(|&x| x == c).expect("subset curve");
        let mut nodes: Vec<(NodeId, usize, usize)> = self
            .universe
            .nodes()
            .iter()
            .filter(|n| {
                let (a, b) = n.curves();
                ids.contains(&a) && ids.contains(&b)
            })
            .map(|n| {
                let (a, b) = n.curves();
                (n.id, local(a), local(b))
            })
            .collect();
        nodes.sort_by_key(|n| n.0);
        let r = ids.len();
        let mut w = Walk {
            nodes,
            ids,
            entry: ids.iter().map(|&c| (-self.universe.curve(c).self_int) as u32).collect(),
            nbrs: vec![Vec::new(); r],
            parent: (0..r).collect(),
            choice: Vec::new(),
            groups: 0,
            blowups: 0,
            leaves: 0,
            found: Vec::new(),
            seen: BTreeSet::new(),
        };
        let complete = self.dfs(&mut w, 0);
        (w.found, w.leaves, complete)
    }

    fn dfs(&self, w: &mut Walk<'_>, k: usize) -> bool {
        if w.leaves >= self.max_leaves {
            return false;
        }
        if k == w.nodes.len() {
            if w.groups == self.groups {
                w.leaves += 1;
                self.leaf(w);
            }
            return true;
        }
        if w.groups + (w.nodes.len() - k) < self.groups {
            return true;
        }
        let (_, a, b) = w.nodes[k];
        // Keep.
        let (ra, rb) = (w.find(a), w.find(b));
        let acyclic = a != b && ra != rb;
        if !self.prune || (acyclic && w.nbrs[a].len() < 2 && w.nbrs[b].len() < 2) {
            w.nbrs[a].push(Nb::Base(b));
            w.nbrs[b].push(Nb::Base(a));
            let merged = acyclic.then(|| {
                w.parent[ra] = rb;
                ra
            });
            w.choice.push(None);
            let go = self.dfs(w, k + 1);
            w.choice.pop();
            if let Some(ra) = merged {
                w.parent[ra] = ra;
            }
            w.nbrs[a].pop();
            w.nbrs[b].pop();
            if !go {
                return false;
            }
        }
        if w.groups == self.groups {
            return true;
        }
        // Blow up with each local pattern.
        for (o, (_, pat)) in self.options.iter().enumerate() {
            let cost = pat.blowups();
            if w.blowups + cost + (self.groups - w.groups - 1) > self.max_blowups {
                break;
            }
            let xt = pat.x_tail().to_vec();
            let yt = pat.y_tail();
            if a == b && !(xt.is_empty() && yt.is_empty()) {
                continue;
            }
            let (need_a, need_b) = (usize::from(!xt.is_empty()), usize::from(!yt.is_empty()));
            if self.prune && (w.nbrs[a].len() + need_a > 2 || w.nbrs[b].len() + need_b > 2) {
                continue;
            }
            w.entry[a] += pat.dx;
            w.entry[b] += pat.dy;
            if need_a == 1 {
                w.nbrs[a].push(Nb::Tail(xt));
            }
            if need_b == 1 {
                w.nbrs[b].push(Nb::Tail(yt));
            }
            w.groups += 1;
            w.blowups += cost;
            w.choice.push(Some(o));
            let go = self.dfs(w, k + 1);
            w.choice.pop();
            w.groups -= 1;
            w.blowups -= cost;
            if need_b == 1 {
                w.nbrs[b].pop();
            }
            if need_a == 1 {
                w.nbrs[a].pop();
            }
            w.entry[a] -= pat.dx;
            w.entry[b] -= pat.dy;
            if !go {
                return false;
            }
        }
        true
    }

    /// Reads the Wahl graph as chains without replaying; `None` unless it is `P` paths.
    fn chains(&self, w: &Walk<'_>) -> Option<Vec<Vec<u32>>> {
        let r = w.entry.len();
        if w.nbrs.iter().any(|n| n.len() > 2) {
            return None;
        }
        let mut seen = vec![false; r];
        let mut out = Vec::new();
        for s in 0..r {
            if seen[s] {
                continue;
            }
            // Walk to a base end.
            let (mut prev, mut cur) = (usize::MAX, s);
            let mut steps = 0;
            loop {
                let next = w.nbrs[cur].iter().find_map(|nb| match nb {
                    Nb::Base(o) if *o != prev => Some(*o),
                    _ => None,
                });
                match next {
                    Some(o) if o != s => {
                        prev = cur;
                        cur = o;
                        steps += 1;
                        if steps > r {
                            return None;
                        }
                    }
                    Some(_) => return None,
                    None => break,
                }
            }
            let start = cur;
            let mut bases = vec![start];
            let (mut prev, mut cur) = (usize::MAX, start);
            while let Some(o) = w.nbrs[cur].iter().find_map(|nb| match nb {
                Nb::Base(o) if *o != prev => Some(*o),
                _ => None,
            }) {
                prev = cur;
                cur = o;
                if bases.contains(&cur) {
                    return None;
                }
                bases.push(cur);
            }
            let inner: usize =
                bases.iter().map(|&c| w.nbrs[c].iter().filter(|nb| matches!(nb, Nb::Base(_))).count()).sum();
            if inner != 2 * (bases.len() - 1) {
                return None;
            }
            let tails = |c: usize| -> Vec<&Vec<u32>> {
                w.nbrs[c]
                    .iter()
                    .filter_map(|nb| match nb {
                        Nb::Tail(t) => Some(t),
                        Nb::Base(_) => None,
                    })
                    .collect()
            };
            let mut entries: Vec<u32> = Vec::new();
            let first = tails(start);
            let last = if bases.len() > 1 { tails(cur) } else { Vec::new() };
            if let Some(t) = first.first() {
                entries.extend(t.iter().rev());
            }
            entries.extend(bases.iter().map(|&c| w.entry[c]));
            if bases.len() == 1 {
                if let Some(t) = first.get(1) {
                    entries.extend(t.iter());
                }
            } else if let Some(t) = last.first() {
                entries.extend(t.iter());
            }
            for &c in &bases {
                seen[c] = true;
            }
            out.push(entries);
        }
        (out.len() == self.p).then_some(out)
    }

    fn leaf(&self, w: &mut Walk<'_>) {
        let Some(raw) = self.chains(w) else { return };
        if raw.iter().any(|c| c.len() > self.max_len || c.iter().sum::<u32>() as usize != 3 * c.len() + 1) {
            return;
        }
        let mut stated = Vec::new();
        for entries in raw {
            let rev: Vec<u32> = entries.iter().rev().copied().collect();
            let entries = entries.min(rev);
            let Ok(chain) = Chain::new(entries) else { return };
            let Some(ws) = is_wahl(&chain) else { return };
            let (Ok(n), Ok(a)) = (u64::try_from(&ws.n), u64::try_from(&ws.a)) else { return };
            stated.push(StatedChain { n, a, chain });
        }
        stated.sort_by(|x, y| x.chain.entries().cmp(y.chain.entries()));
        let mut cfg = self.universe.clone();
        let mut plan = BlowupPlan::default();
        let mut steps = Vec::new();
        for (k, ch) in w.choice.iter().enumerate() {
            let Some(o) = *ch else { continue };
            let (node, a, b) = w.nodes[k];
            let (x, y) = (w.ids[a], w.ids[b]);
            let (sides, pat) = &self.options[o];
            cfg = match apply_group(cfg, &mut plan, node, x, y, sides) {
                Ok(c) => c,
                Err(_) => return,
            };
            let (an, bn) = (self.universe.name(x).to_string(), self.universe.name(y).to_string());
            steps.push(if sides.is_empty() {
                Step::Node { a: an, b: bn }
            } else {
                Step::Group { pattern: pat.ex.clone(), a: an, b: bn }
            });
        }
        let Ok(ms) = mark_against(&cfg, w.ids, &stated) else { return };
        let Ok(base) = self.universe.restrict(w.ids) else { return };
        let report = SurfaceReport::assemble(&ms, &base, None);
        if report.ample.verdict != Positivity::Ample || report.k2 != self.k2 || report.obstruction_dim != 0 {
            return;
        }
        let sing: Vec<String> = {
            let mut v: Vec<String> = report.singularities.iter().map(ToString::to_string).collect();
            v.sort();
            v
        };
        if !w.seen.insert(sing.clone()) {
            return;
        }
        let det = det_exact(&base.full_matrix());
        let Ok(det) = i64::try_from(&det) else { return };
        let mut ade: Vec<usize> = ms.ade_chains().iter().map(Vec::len).collect();
        ade.sort_unstable();
        let record = SurfaceRecord {
            id: String::new(),
            k2: self.k2,
            curves: w.ids.iter().map(|&c| self.universe.name(c).to_string()).collect(),
            det,
            steps,
            chains: stated,
            ade: Some(ade),
            partner: None,
        };
        w.found.push(Found { key: (self.k2, self.p, w.ids.iter().map(|c| c.0).collect(), sing), record });
    }
}
