//! Recovering concrete blow-up plans from construction records.
//!
//! Bracket groups are read literally first, then reversed, then by exhaustive search over
//! single-(−1) side sequences of the same length whose tails occur inside a stated chain.
//! Records without any blow-up data are handled by [`infer_unbracketed`], a branch-and-bound
//! over which base nodes to blow up and with which local pattern.

use std::collections::{BTreeMap, HashSet};

use serde::Serialize;

use super::blowup::{apply_group, BlowupPlan};
use super::local::{all_sequences, sides_for_pattern, simulate, LocalPattern, Side};
use super::mark::mark_against;
use crate::catalog::{StatedChain, Step, SurfaceRecord};
use crate::config::{geography_check, Configuration, CurveId, NodeId};
use crate::error::{Error, Result};
use crate::surface::{MarkedSurface, SurfaceReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Interpretation {
    /// The pattern read from the first named curve to the second.
    Literal,
    /// The pattern read from the second named curve to the first.
    Reversed,
    /// A side sequence of the right length not matching the pattern either way.
    Searched,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupReading {
    /// Index into the record's steps.
    pub step: usize,
    pub interpretation: Interpretation,
    pub sides: Vec<Side>,
    /// Exceptional string produced, read from the first named curve.
    pub pattern: Vec<u32>,
}

#[derive(Debug, Clone)]
pub struct InferOptions {
    /// Leaves (complete candidate plans) examined before giving up.
    pub max_leaves: u64,
    /// Search-tree nodes visited before giving up (unbracketed search).
    pub max_visits: u64,
    pub near_misses: usize,
    pub rank_cap: Option<usize>,
}

impl Default for InferOptions {
    fn default() -> Self {
        InferOptions { max_leaves: 1_000_000, max_visits: 200_000_000, near_misses: 8, rank_cap: None }
    }
}

#[derive(Debug, Clone)]
pub struct Inferred {
    pub plan: BlowupPlan,
    pub marked: MarkedSurface,
    pub report: SurfaceReport,
    pub readings: Vec<GroupReading>,
    pub leaves: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Ambiguity {
    pub near_misses: Vec<String>,
    pub leaves: u64,
    /// True iff the whole interpretation space was examined.
    pub exhausted: bool,
    pub note: Option<String>,
}

#[derive(Debug, Clone)]
pub enum InferOutcome {
    Found(Box<Inferred>),
    Ambiguous(Ambiguity),
}

impl InferOutcome {
    pub fn found(&self) -> Option<&Inferred> {
        match self {
            InferOutcome::Found(f) => Some(f),
            InferOutcome::Ambiguous(_) => None,
        }
    }
}

/// Blow-up target: what the contracted surface must look like.
#[derive(Debug, Clone)]
pub struct Target<'a> {
    pub curves: &'a [String],
    pub chains: &'a [StatedChain],
    /// Expected `A_k` lengths, compared as a multiset.
    pub ade: Option<Vec<usize>>,
    /// Expected Du Val chains by curve names, compared as sets.
    pub du_val: Option<Vec<Vec<String>>>,
}

impl Target<'_> {
    fn accepts(&self, ms: &MarkedSurface) -> std::result::Result<(), String> {
        let cfg = ms.surface();
        if let Some(want) = &self.ade {
            let mut got: Vec<usize> = ms.ade_chains().iter().map(Vec::len).collect();
            let mut want = want.clone();
            got.sort_unstable();
            want.sort_unstable();
            if got != want {
                return Err(format!("A_k lengths {got:?}, expected {want:?}"));
            }
        }
        if let Some(want) = &self.du_val {
            let norm = |v: Vec<Vec<String>>| {
                let mut v: Vec<Vec<String>> = v
                    .into_iter()
                    .map(|mut c| {
                        c.sort();
                        c
                    })
                    .collect();
                v.sort();
                v
            };
            let got =
                norm(ms.ade_chains().iter().map(|c| c.iter().map(|&id| cfg.name(id).to_string()).collect()).collect());
            if got != norm(want.clone()) {
                return Err(format!("Du Val chains {got:?}"));
            }
        }
        Ok(())
    }
}

struct Collector {
    near: Vec<String>,
    cap: usize,
    leaves: u64,
}

impl Collector {
    fn miss(&mut self, what: impl FnOnce() -> String) {
        if self.near.len() < self.cap {
            self.near.push(what());
        }
    }
}

/// The record curves inside the ambient configuration, and their restriction.
struct Frame {
    base: Configuration,
    base_ids: Vec<CurveId>,
}

impl Frame {
    fn new(universe: &Configuration, curves: &[String]) -> Result<Self> {
        let base_ids = curves.iter().map(|n| universe.id_of(n)).collect::<Result<Vec<_>>>()?;
        Ok(Frame { base: universe.restrict(&base_ids)?, base_ids })
    }
}

fn finish(
    target: &Target<'_>,
    frame: &Frame,
    cfg: &Configuration,
    plan: &BlowupPlan,
    opts: &InferOptions,
    col: &mut Collector,
) -> Option<(MarkedSurface, SurfaceReport)> {
    let ms = match mark_against(cfg, &frame.base_ids, target.chains) {
        Ok(ms) => ms,
        Err(e) => {
            col.miss(|| format!("{plan}: {e}"));
            return None;
        }
    };
    if let Err(e) = target.accepts(&ms) {
        col.miss(|| format!("{plan}: {e}"));
        return None;
    }
    let report = SurfaceReport::assemble(&ms, &frame.base, opts.rank_cap);
    Some((ms, report))
}

/// Per-group candidates: literal, reversed, then searched sequences with feasible tails.
fn group_candidates(pattern: &[u32], pieces: &Pieces) -> Vec<(Interpretation, Vec<Side>)> {
    let mut out: Vec<(Interpretation, Vec<Side>)> = Vec::new();
    if let Some(s) = sides_for_pattern(pattern) {
        out.push((Interpretation::Literal, s));
    }
    let rev: Vec<u32> = pattern.iter().rev().copied().collect();
    if let Some(s) = sides_for_pattern(&rev) {
        let s: Vec<Side> = s.into_iter().map(Side::mirror).collect();
        if !out.iter().any(|(_, o)| *o == s) {
            out.push((Interpretation::Reversed, s));
        }
    }
    if pattern.is_empty() {
        return out;
    }
    for s in all_sequences(pattern.len()) {
        if out.iter().any(|(_, o)| *o == s) {
            continue;
        }
        if pieces.tails_fit(&simulate(&s)) {
            out.push((Interpretation::Searched, s));
        }
    }
    out
}

/// Contiguous pieces of the stated chains, in both directions.
struct Pieces {
    set: HashSet<Vec<u32>>,
    counts: BTreeMap<u32, usize>,
}

impl Pieces {
    fn new(chains: &[StatedChain]) -> Self {
        let mut set = HashSet::new();
        let mut counts = BTreeMap::new();
        for c in chains {
            let e = c.chain.entries();
            for &b in e {
                *counts.entry(b).or_insert(0) += 1;
            }
            for i in 0..e.len() {
                for j in i + 1..=e.len() {
                    set.insert(e[i..j].to_vec());
                    set.insert(e[i..j].iter().rev().copied().collect());
                }
            }
        }
        Pieces { set, counts }
    }

    fn tails_fit(&self, p: &LocalPattern) -> bool {
        let x = p.x_tail();
        let y = p.y_tail();
        let mut need: BTreeMap<u32, usize> = BTreeMap::new();
        for &b in x.iter().chain(y.iter()) {
            *need.entry(b).or_insert(0) += 1;
        }
        need.iter().all(|(b, n)| self.counts.get(b).is_some_and(|have| have >= n))
            && (x.is_empty() || self.set.contains(x))
            && (y.is_empty() || self.set.contains(&y))
    }
}

/// Finds a plan realizing `record` on `universe` (normally the extremal configuration).
///
/// Stated chains that are not Wahl with their `(n, a)` are rejected before any search.
pub fn infer_plan(record: &SurfaceRecord, universe: &Configuration, opts: &InferOptions) -> Result<InferOutcome> {
    record.check_chains()?;
    let frame = Frame::new(universe, &record.curves)?;
    let target = Target { curves: &record.curves, chains: &record.chains, ade: record.ade.clone(), du_val: None };
    let pieces = Pieces::new(&record.chains);
    let cands: Vec<Vec<(Interpretation, Vec<Side>)>> = record
        .steps
        .iter()
        .map(|s| match s {
            Step::Node { .. } => vec![(Interpretation::Literal, Vec::new())],
            Step::Group { pattern, .. } => group_candidates(pattern, &pieces),
        })
        .collect();
    let mut col = Collector { near: Vec::new(), cap: opts.near_misses, leaves: 0 };
    let mut chosen = Vec::new();
    let found = bracket_dfs(
        record,
        &target,
        &frame,
        &cands,
        universe.clone(),
        BlowupPlan::default(),
        &mut chosen,
        opts,
        &mut col,
    );
    Ok(match found {
        Dfs::Found(f) => InferOutcome::Found(f),
        Dfs::Budget => InferOutcome::Ambiguous(Ambiguity {
            near_misses: col.near,
            leaves: col.leaves,
            exhausted: false,
            note: Some(format!("leaf budget {} reached", opts.max_leaves)),
        }),
        Dfs::None => InferOutcome::Ambiguous(Ambiguity {
            near_misses: col.near,
            leaves: col.leaves,
            exhausted: true,
            note: None,
        }),
    })
}

enum Dfs {
    Found(Box<Inferred>),
    Budget,
    None,
}

#[allow(clippy::too_many_arguments)]
fn bracket_dfs(
    record: &SurfaceRecord,
    target: &Target<'_>,
    frame: &Frame,
    cands: &[Vec<(Interpretation, Vec<Side>)>],
    cfg: Configuration,
    plan: BlowupPlan,
    chosen: &mut Vec<GroupReading>,
    opts: &InferOptions,
    col: &mut Collector,
) -> Dfs {
    let i = chosen.len();
    if i == record.steps.len() {
        col.leaves += 1;
        if let Some((marked, report)) = finish(target, frame, &cfg, &plan, opts, col) {
            let readings =
                chosen.iter().filter(|r| matches!(record.steps[r.step], Step::Group { .. })).cloned().collect();
            return Dfs::Found(Box::new(Inferred { plan, marked, report, readings, leaves: col.leaves }));
        }
        return if col.leaves >= opts.max_leaves { Dfs::Budget } else { Dfs::None };
    }
    let (a, b) = match &record.steps[i] {
        Step::Node { a, b } | Step::Group { a, b, .. } => (a, b),
    };
    let (x, y) = match (cfg.id_of(a), cfg.id_of(b)) {
        (Ok(x), Ok(y)) => (x, y),
        _ => {
            col.miss(|| format!("step {}: unknown curve in {a}∩{b}", i + 1));
            return Dfs::None;
        }
    };
    let Some(&start) = cfg.nodes_between(x, y).first() else {
        col.miss(|| format!("{plan}: {a} and {b} do not meet at step {}", i + 1));
        return Dfs::None;
    };
    for (interp, sides) in &cands[i] {
        let mut p = plan.clone();
        let next = match apply_group(cfg.clone(), &mut p, start, x, y, sides) {
            Ok(c) => c,
            Err(e) => {
                col.miss(|| format!("{p}: {e}"));
                continue;
            }
        };
        chosen.push(GroupReading {
            step: i,
            interpretation: *interp,
            sides: sides.clone(),
            pattern: simulate(sides).ex,
        });
        let r = bracket_dfs(record, target, frame, cands, next, p, chosen, opts, col);
        chosen.pop();
        match r {
            Dfs::None => {}
            other => return other,
        }
    }
    Dfs::None
}

/// Finds a plan for a target given only curves and chains: chooses `P + K²` base nodes and
/// a single-(−1) local pattern at each, so that the result marks as the stated chains.
pub fn infer_unbracketed(
    target: &Target<'_>,
    k2: i64,
    universe: &Configuration,
    opts: &InferOptions,
) -> Result<InferOutcome> {
    if let Some(c) = target.chains.iter().find(|c| !c.holds()) {
        return Err(Error::Record(format!("stated chain {c} is not that Wahl chain")));
    }
    let frame = Frame::new(universe, target.curves)?;
    let base = &frame.base;
    let p = target.chains.len() as i64;
    let geo = geography_check(p, k2);
    let note = |note: String| {
        Ok(InferOutcome::Ambiguous(Ambiguity { near_misses: Vec::new(), leaves: 0, exhausted: true, note: Some(note) }))
    };
    if geo.r != base.r() as i64 || geo.t2 != base.t2() as i64 {
        return note(format!(
            "(r, t2) = ({}, {}) but P = {p}, K^2 = {k2} needs ({}, {})",
            base.r(),
            base.t2(),
            geo.r,
            geo.t2
        ));
    }
    let total_len: usize = target.chains.iter().map(|c| c.chain.len()).sum();
    if total_len < base.r() {
        return note("chains are shorter than the curve list".into());
    }
    let space =
        Space::new(universe, &frame.base_ids, target.chains, geo.nodes_to_blow_up as usize, total_len - base.r());
    let mut st = State::new(&space, universe);
    let mut col = Collector { near: Vec::new(), cap: opts.near_misses, leaves: 0 };
    let mut found = None;
    let mut leaf = |choice: &[Option<usize>], col: &mut Collector| -> bool {
        col.leaves += 1;
        let mut cfg = universe.clone();
        let mut plan = BlowupPlan::default();
        for (k, ch) in choice.iter().enumerate() {
            if let Some(o) = *ch {
                let (node, x, y) = space.order[k];
                match apply_group(cfg, &mut plan, node, x, y, &space.options[o].0) {
                    Ok(c) => cfg = c,
                    Err(e) => {
                        col.miss(|| e.to_string());
                        return false;
                    }
                }
            }
        }
        match finish(target, &frame, &cfg, &plan, opts, col) {
            Some((marked, report)) => {
                found = Some(Inferred { plan, marked, report, readings: Vec::new(), leaves: col.leaves });
                true
            }
            None => false,
        }
    };
    let flow = space.dfs(&mut st, 0, &mut leaf, &mut col, opts);
    let exhausted = flow != Flow::Budget;
    Ok(match found {
        Some(f) => InferOutcome::Found(Box::new(f)),
        None => InferOutcome::Ambiguous(Ambiguity {
            near_misses: col.near,
            leaves: col.leaves,
            exhausted,
            note: (!exhausted).then(|| format!("visit budget {} reached after {} visits", opts.max_visits, st.visits)),
        }),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Nb {
    Base(usize),
    Tail(u32),
}

/// Local shapes occurring in the stated chains (both directions).
#[derive(Default)]
struct Shape {
    singles: HashSet<u32>,
    ends: HashSet<u32>,
    inner: HashSet<u32>,
    end_pairs: HashSet<(u32, u32)>,
    pairs: HashSet<(u32, u32)>,
    triples: HashSet<(u32, u32, u32)>,
}

impl Shape {
    fn new(chains: &[StatedChain]) -> Self {
        let mut s = Shape::default();
        for c in chains {
            let fwd = c.chain.entries().to_vec();
            let rev: Vec<u32> = fwd.iter().rev().copied().collect();
            for e in [fwd, rev] {
                if e.len() == 1 {
                    s.singles.insert(e[0]);
                    continue;
                }
                s.ends.insert(e[0]);
                s.end_pairs.insert((e[0], e[1]));
                for w in e.windows(2) {
                    s.pairs.insert((w[0], w[1]));
                }
                for w in e.windows(3) {
                    s.inner.insert(w[1]);
                    s.triples.insert((w[0], w[1], w[2]));
                }
            }
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Flow {
    Continue,
    Stop,
    Budget,
}

/// Static data of the unbracketed search.
struct Space {
    /// Base nodes in decision order, with their two curves.
    order: Vec<(NodeId, CurveId, CurveId)>,
    /// Local patterns; index 0 is a single blow-up.
    options: Vec<(Vec<Side>, LocalPattern)>,
    /// Curves whose last node is decided at each position.
    finalized_at: Vec<Vec<CurveId>>,
    /// Curves with no node at all.
    isolated: Vec<CurveId>,
    /// Position of the previous node joining the same pair, if any.
    parallel_prev: Vec<Option<usize>>,
    pieces: Pieces,
    shape: Shape,
    base: Vec<usize>,
    max_entry: u32,
    groups: usize,
    extra: usize,
    n_curves: usize,
}

struct State {
    entry: Vec<u32>,
    deg: Vec<u8>,
    parent: Vec<usize>,
    size: Vec<usize>,
    avail: BTreeMap<u32, usize>,
    /// Wahl-graph neighbours of each base curve: another base curve, or a tail's first entry.
    nbrs: Vec<Vec<Nb>>,
    done: Vec<bool>,
    choice: Vec<Option<usize>>,
    groups: usize,
    extra_used: usize,
    visits: u64,
}

impl State {
    fn new(space: &Space, base: &Configuration) -> Self {
        let n = space.n_curves;
        State {
            entry: base.curves().iter().map(|c| (-c.self_int) as u32).collect(),
            deg: vec![0; n],
            parent: (0..n).collect(),
            size: vec![1; n],
            avail: space.pieces.counts.clone(),
            nbrs: vec![Vec::new(); n],
            done: vec![false; n],
            choice: Vec::new(),
            groups: 0,
            extra_used: 0,
            visits: 0,
        }
    }

    fn find(&self, mut c: usize) -> usize {
        while self.parent[c] != c {
            c = self.parent[c];
        }
        c
    }

    fn take(&mut self, b: u32) -> bool {
        match self.avail.get_mut(&b) {
            Some(n) if *n > 0 => {
                *n -= 1;
                true
            }
            _ => false,
        }
    }

    fn give(&mut self, b: u32) {
        *self.avail.entry(b).or_insert(0) += 1;
    }
}

impl Space {
    fn new(
        universe: &Configuration,
        base_ids: &[CurveId],
        chains: &[StatedChain],
        groups: usize,
        extra: usize,
    ) -> Self {
        let n = universe.r();
        let pos: Vec<Option<usize>> = (0..n).map(|c| base_ids.iter().position(|&b| b.0 as usize == c)).collect();
        let in_base = |c: CurveId| pos[c.0 as usize].is_some();
        let mut order: Vec<(NodeId, CurveId, CurveId)> = universe
            .nodes()
            .iter()
            .filter(|nd| {
                let (a, b) = nd.curves();
                a != b && in_base(a) && in_base(b)
            })
            .map(|nd| {
                let (a, b) = nd.curves();
                (nd.id, a, b)
            })
            .collect();
        // Greedy elimination order: next curve has most nodes back into the prefix, so
        // curves finish (and get checked) early.
        let mut rank = vec![usize::MAX; n];
        let mut picked = 0;
        while picked < base_ids.len() {
            let best = base_ids
                .iter()
                .copied()
                .filter(|c| rank[c.0 as usize] == usize::MAX)
                .max_by_key(|&c| {
                    let (mut back, mut all) = (0usize, 0usize);
                    for &(_, a, b) in &order {
                        if a == c || b == c {
                            all += 1;
                            let o = if a == c { b } else { a };
                            back += usize::from(rank[o.0 as usize] != usize::MAX);
                        }
                    }
                    (back, std::cmp::Reverse(all), std::cmp::Reverse(pos[c.0 as usize]))
                })
                .expect("unpicked curve remains");
            rank[best.0 as usize] = picked;
            picked += 1;
        }
        let key = |c: CurveId| rank[c.0 as usize];
        order.sort_by_key(|&(id, a, b)| (key(a).max(key(b)), key(a).min(key(b)), id));
        let mut last = vec![None; n];
        for (k, &(_, a, b)) in order.iter().enumerate() {
            last[a.0 as usize] = Some(k);
            last[b.0 as usize] = Some(k);
        }
        let mut finalized_at = vec![Vec::new(); order.len()];
        let mut isolated = Vec::new();
        for &c in base_ids {
            match last[c.0 as usize] {
                Some(k) => finalized_at[k].push(c),
                None => isolated.push(c),
            }
        }
        let parallel_prev = (0..order.len())
            .map(|k| {
                let (_, a, b) = order[k];
                (0..k).rev().find(|&j| {
                    let (_, c, d) = order[j];
                    (c, d) == (a, b) || (c, d) == (b, a)
                })
            })
            .collect();
        let pieces = Pieces::new(chains);
        let options = (1..=extra + 1)
            .flat_map(all_sequences)
            .map(|s| {
                let p = simulate(&s);
                (s, p)
            })
            .filter(|(_, p)| pieces.tails_fit(p))
            .collect();
        let max_entry = pieces.counts.keys().next_back().copied().unwrap_or(0);
        let shape = Shape::new(chains);
        let base = base_ids.iter().map(|c| c.0 as usize).collect();
        Space {
            order,
            options,
            finalized_at,
            isolated,
            parallel_prev,
            pieces,
            shape,
            base,
            max_entry,
            groups,
            extra,
            n_curves: n,
        }
    }

    fn dfs(
        &self,
        st: &mut State,
        k: usize,
        leaf: &mut dyn FnMut(&[Option<usize>], &mut Collector) -> bool,
        col: &mut Collector,
        opts: &InferOptions,
    ) -> Flow {
        st.visits += 1;
        if st.visits > opts.max_visits || col.leaves >= opts.max_leaves {
            return Flow::Budget;
        }
        if k == 0 {
            for &c in &self.isolated {
                let b = st.entry[c.0 as usize];
                if !st.take(b) {
                    return Flow::Continue;
                }
            }
        }
        if k == self.order.len() {
            if st.groups == self.groups && st.extra_used == self.extra && st.avail.values().all(|&n| n == 0) {
                let choice = st.choice.clone();
                if leaf(&choice, col) {
                    return Flow::Stop;
                }
            }
            return Flow::Continue;
        }
        let remaining = self.order.len() - k;
        if st.groups + remaining < self.groups {
            return Flow::Continue;
        }
        let (_, a, b) = self.order[k];
        let (ai, bi) = (a.0 as usize, b.0 as usize);
        // Parallel nodes are interchangeable: choices along them are non-decreasing.
        let floor = self.parallel_prev[k].map_or(0, |j| st.choice[j].map_or(0, |o| o + 1));
        let n_opts = self.options.len() + 1;
        for code in floor..n_opts {
            let flow = if code == 0 {
                self.try_keep(st, k, ai, bi, leaf, col, opts)
            } else {
                self.try_blow(st, k, code - 1, ai, bi, leaf, col, opts)
            };
            if flow != Flow::Continue {
                return flow;
            }
        }
        Flow::Continue
    }

    #[allow(clippy::too_many_arguments)]
    fn try_keep(
        &self,
        st: &mut State,
        k: usize,
        ai: usize,
        bi: usize,
        leaf: &mut dyn FnMut(&[Option<usize>], &mut Collector) -> bool,
        col: &mut Collector,
        opts: &InferOptions,
    ) -> Flow {
        if st.deg[ai] >= 2 || st.deg[bi] >= 2 {
            return Flow::Continue;
        }
        let (ra, rb) = (st.find(ai), st.find(bi));
        if ra == rb {
            return Flow::Continue;
        }
        let (big, small) = if st.size[ra] >= st.size[rb] { (ra, rb) } else { (rb, ra) };
        st.parent[small] = big;
        st.size[big] += st.size[small];
        st.deg[ai] += 1;
        st.deg[bi] += 1;
        st.nbrs[ai].push(Nb::Base(bi));
        st.nbrs[bi].push(Nb::Base(ai));
        st.choice.push(None);
        let flow = self.descend(st, k, leaf, col, opts);
        st.choice.pop();
        st.nbrs[ai].pop();
        st.nbrs[bi].pop();
        st.deg[ai] -= 1;
        st.deg[bi] -= 1;
        st.size[big] -= st.size[small];
        st.parent[small] = small;
        flow
    }

    #[allow(clippy::too_many_arguments)]
    fn try_blow(
        &self,
        st: &mut State,
        k: usize,
        o: usize,
        ai: usize,
        bi: usize,
        leaf: &mut dyn FnMut(&[Option<usize>], &mut Collector) -> bool,
        col: &mut Collector,
        opts: &InferOptions,
    ) -> Flow {
        let p = &self.options[o].1;
        let extra = p.blowups() - 1;
        if st.groups == self.groups || st.extra_used + extra > self.extra {
            return Flow::Continue;
        }
        let (xt, yt) = (p.x_tail(), p.y_tail());
        let dxg = u8::from(!xt.is_empty());
        let dyg = u8::from(!yt.is_empty());
        if st.deg[ai] + dxg > 2 || st.deg[bi] + dyg > 2 {
            return Flow::Continue;
        }
        if st.entry[ai] + p.dx > self.max_entry || st.entry[bi] + p.dy > self.max_entry {
            return Flow::Continue;
        }
        let tails: Vec<u32> = xt.iter().chain(yt.iter()).copied().collect();
        let mut taken = 0;
        for &b in &tails {
            if !st.take(b) {
                break;
            }
            taken += 1;
        }
        let flow = if taken == tails.len() {
            st.entry[ai] += p.dx;
            st.entry[bi] += p.dy;
            st.deg[ai] += dxg;
            st.deg[bi] += dyg;
            st.groups += 1;
            st.extra_used += extra;
            if let Some(&t) = xt.first() {
                st.nbrs[ai].push(Nb::Tail(t));
            }
            if let Some(&t) = yt.first() {
                st.nbrs[bi].push(Nb::Tail(t));
            }
            st.choice.push(Some(o));
            let flow = self.descend(st, k, leaf, col, opts);
            st.choice.pop();
            if !xt.is_empty() {
                st.nbrs[ai].pop();
            }
            if !yt.is_empty() {
                st.nbrs[bi].pop();
            }
            st.groups -= 1;
            st.extra_used -= extra;
            st.deg[ai] -= dxg;
            st.deg[bi] -= dyg;
            st.entry[ai] -= p.dx;
            st.entry[bi] -= p.dy;
            flow
        } else {
            Flow::Continue
        };
        for &b in &tails[..taken] {
            st.give(b);
        }
        flow
    }

    /// Consumes the entries of curves finished at `k`, then recurses.
    fn descend(
        &self,
        st: &mut State,
        k: usize,
        leaf: &mut dyn FnMut(&[Option<usize>], &mut Collector) -> bool,
        col: &mut Collector,
        opts: &InferOptions,
    ) -> Flow {
        let fin = &self.finalized_at[k];
        let mut taken = 0;
        for &c in fin {
            if !st.take(st.entry[c.0 as usize]) {
                break;
            }
            taken += 1;
        }
        let mut flow = Flow::Continue;
        if taken == fin.len() {
            for &c in fin {
                st.done[c.0 as usize] = true;
            }
            if fin.iter().all(|&c| self.locally_fits(st, c.0 as usize)) && self.entries_fit(st) {
                flow = self.dfs(st, k + 1, leaf, col, opts);
            }
            for &c in fin {
                st.done[c.0 as usize] = false;
            }
        }
        for &c in &fin[..taken] {
            st.give(st.entry[c.0 as usize]);
        }
        flow
    }

    /// A finished curve and its finished neighbours must read as a piece of a stated chain;
    /// with fewer than two neighbours it must sit at a chain end.
    fn locally_fits(&self, st: &State, c: usize) -> bool {
        let e = st.entry[c];
        let known: Vec<u32> = st.nbrs[c]
            .iter()
            .filter_map(|nb| match *nb {
                Nb::Base(o) => st.done[o].then(|| st.entry[o]),
                Nb::Tail(t) => Some(t),
            })
            .collect();
        let shape = &self.shape;
        match (st.nbrs[c].len(), known.as_slice()) {
            (0, _) => shape.singles.contains(&e),
            (1, [v]) => shape.end_pairs.contains(&(e, *v)),
            (1, []) => shape.ends.contains(&e),
            (2, [v, w]) => shape.triples.contains(&(*v, e, *w)),
            (2, [v]) => shape.pairs.contains(&(e, *v)) && shape.inner.contains(&e),
            (2, []) => shape.inner.contains(&e),
            _ => false,
        }
    }

    /// Unfinished base curves need distinct remaining entries at least their current ones.
    fn entries_fit(&self, st: &State) -> bool {
        let mut need: Vec<u32> = self.base.iter().filter(|&&c| !st.done[c]).map(|&c| st.entry[c]).collect();
        need.sort_unstable_by(|a, b| b.cmp(a));
        let mut have = st.avail.iter().rev().flat_map(|(&b, &n)| std::iter::repeat_n(b, n));
        need.iter().all(|&x| have.next().is_some_and(|h| h >= x))
    }
}
