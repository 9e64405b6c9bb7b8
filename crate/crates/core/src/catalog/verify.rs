//! The verification ledger: every numeric claim attached to the shipped data, re-derived.

use std::fmt::Write as _;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use super::a0::{reconstruct_a0, A0Constraint, A0Model, ReconstructOptions};
use super::expected::{Expected, MainConstruction};
use super::record::{parse_record, StatedChain, SurfaceRecord};
use crate::config::{det_exact, geography_check, IntMatrix};
use crate::cqs::{
    blow_down_compose, length_bound, meridian_exponents, recognize_t, Chain, CyclicQuotient, SurfaceClass,
};
use crate::plan::{infer_plan, infer_unbracketed, InferOptions, InferOutcome, Inferred, Target};
use crate::surface::Pi1Kind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Not asserted: a search that did not succeed within budget, or a disabled stage.
    Skip,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub subject: String,
    pub check: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Ledger {
    pub checks: Vec<Check>,
}

impl Ledger {
    fn push(&mut self, subject: impl Into<String>, check: &str, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            subject: subject.into(),
            check: check.to_string(),
            status: if pass { Status::Pass } else { Status::Fail },
            detail: detail.into(),
        });
    }

    fn skip(&mut self, subject: impl Into<String>, check: &str, detail: impl Into<String>) {
        self.checks.push(Check {
            subject: subject.into(),
            check: check.to_string(),
            status: Status::Skip,
            detail: detail.into(),
        });
    }

    fn extend(&mut self, other: Ledger) {
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn find(&self, subject: &str, check: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.subject == subject && c.check == check)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skip => "SKIP",
            };
            let _ = writeln!(s, "{tag} {:<8} {:<22} {}", c.subject, c.check, c.detail);
        }
        let _ = writeln!(
            s,
            "{} passed, {} failed, {} skipped",
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Skip)
        );
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("ledger serializes")
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    /// Run plan inference on the compact records.
    pub infer_records: bool,
    /// Run plan inference on the main constructions (no blow-up data).
    pub infer_main: bool,
    /// Re-run the incidence reconstruction and check it is unique and equals the model.
    pub reconstruct: bool,
    pub parallel: bool,
    pub infer: InferOptions,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            infer_records: true,
            infer_main: true,
            reconstruct: true,
            parallel: true,
            infer: InferOptions::default(),
        }
    }
}

fn matrix_of(rows: &[Vec<i64>]) -> Option<IntMatrix> {
    let cols = rows.first().map_or(0, Vec::len);
    (rows.len() == cols && rows.iter().all(|r| r.len() == cols)).then(|| IntMatrix::from_rows(rows))
}

/// Printed matrices entry-for-entry and all stated determinants on the model.
pub fn validate_a0(model: &A0Model, expected: &Expected, records: &[SurfaceRecord]) -> Ledger {
    let mut l = Ledger::default();
    for m in &expected.main_constructions {
        let subject = format!("K2={}", m.k2);
        match model.intersection_matrix_by_names(&m.curves.iter().map(String::as_str).collect::<Vec<_>>()) {
            Ok(got) => {
                let want = matrix_of(&m.matrix);
                let diff = want.as_ref().map(|w| first_difference(&got, w, &m.curves));
                l.push(
                    &subject,
                    "matrix",
                    matches!(diff, Some(None)),
                    match diff {
                        Some(Some(d)) => d,
                        Some(None) => format!("{}×{} entry-for-entry", m.curves.len(), m.curves.len()),
                        None => "printed matrix is not square".into(),
                    },
                );
                let det = det_exact(&got);
                l.push(&subject, "det", det == BigInt::from(m.det), format!("det {det}, stated {}", m.det));
            }
            Err(e) => l.push(&subject, "matrix", false, e.to_string()),
        }
    }
    for r in records {
        let subject = format!("({})", r.id);
        match model.intersection_matrix_by_names(&r.curves.iter().map(String::as_str).collect::<Vec<_>>()) {
            Ok(got) => {
                let det = det_exact(&got);
                l.push(&subject, "det", det == BigInt::from(r.det), format!("det {det}, stated {}", r.det));
            }
            Err(e) => l.push(&subject, "det", false, e.to_string()),
        }
    }
    l
}

fn first_difference(got: &IntMatrix, want: &IntMatrix, names: &[String]) -> Option<String> {
    if got.rows() != want.rows() || got.cols() != want.cols() {
        return Some(format!("shape {}×{} vs printed {}×{}", got.rows(), got.cols(), want.rows(), want.cols()));
    }
    for i in 0..got.rows() {
        for j in 0..got.cols() {
            if got.get(i, j) != want.get(i, j) {
                return Some(format!("{}·{} = {}, printed {}", names[i], names[j], got.get(i, j), want.get(i, j)));
            }
        }
    }
    None
}

/// Constraints from every printed matrix and stated determinant.
pub fn shipped_constraints(expected: &Expected, records: &[SurfaceRecord]) -> Vec<A0Constraint> {
    let mut out = Vec::new();
    for m in &expected.main_constructions {
        if let Some(matrix) = matrix_of(&m.matrix) {
            out.push(A0Constraint::Matrix { curves: m.curves.clone(), matrix });
        }
        out.push(A0Constraint::Det { curves: m.curves.clone(), det: m.det.into() });
    }
    for r in records {
        out.push(A0Constraint::Det { curves: r.curves.clone(), det: r.det.into() });
    }
    out
}

fn chain_checks(l: &mut Ledger, subject: &str, k2: i64, chains: &[StatedChain]) {
    for (i, c) in chains.iter().enumerate() {
        let check = format!("wahl #{}", i + 1);
        let detail =
            if c.stated_reversed() { format!("{c} (a stated for the reversed orientation)") } else { c.to_string() };
        l.push(subject, &check, c.holds(), detail);
    }
    match length_bound(SurfaceClass::K3, k2) {
        Ok(bound) => {
            let longest = chains.iter().map(|c| c.chain.len()).max().unwrap_or(0);
            l.push(subject, "length bound", longest as i64 <= bound, format!("longest {longest} ≤ {bound}"));
        }
        Err(e) => l.push(subject, "length bound", false, e.to_string()),
    }
}

fn geography_checks(l: &mut Ledger, subject: &str, model: &A0Model, curves: &[String], k2: i64, p: usize) {
    let base = match model.restrict_by_names(curves) {
        Ok(b) => b,
        Err(e) => return l.push(subject, "geography", false, e.to_string()),
    };
    let p = p as i64;
    let geo = geography_check(p, k2);
    let (r, t2) = (base.r() as i64, base.t2() as i64);
    let (c1, c2) = base.log_chern();
    let pk = base.pk_invariants();
    let ok = r == geo.r
        && t2 == geo.t2
        && c1 == 2 * k2
        && c2 == 24 - p - k2
        && geo.admissible
        && geo.family_dim == 20 - 2 * k2
        && pk == (p, k2);
    l.push(
        subject,
        "geography",
        ok,
        format!(
            "r={r} (P+2K²={}), t2={t2} (3K²+P={}), c̄1²={c1}, c̄2={c2} (24−P−K²={}), (P,K)={pk:?}, admissible={}, dim={}",
            geo.r,
            geo.t2,
            24 - p - k2,
            geo.admissible,
            geo.family_dim
        ),
    );
    let ob = crate::surface::obstruction(&base, None);
    let det = det_exact(&base.full_matrix());
    l.push(
        subject,
        "obstruction",
        (det != BigInt::from(0)) == (ob.dim == 0),
        format!("dim {} (rank {} of {})", ob.dim, ob.rank, ob.r),
    );
}

fn inferred_checks(l: &mut Ledger, subject: &str, k2: i64, outcome: &InferOutcome) {
    match outcome {
        InferOutcome::Found(f) => {
            let rep = &f.report;
            l.push(subject, "plan", true, format!("{} blow-ups: {}", f.plan.len(), f.plan));
            let ample = rep.ample.ample_on_canonical_model();
            let how = match rep.ample.verdict {
                crate::surface::Positivity::Ample => "ample".to_string(),
                _ => format!(
                    "ample after contracting {}",
                    rep.ample
                        .contractions
                        .iter()
                        .map(|c| format!("{} to {}", c.curve, c.quotient.as_deref().unwrap_or("?")))
                        .collect::<Vec<_>>()
                        .join(", ")
                ),
            };
            l.push(subject, "ample", ample, how);
            l.push(subject, "k2", rep.k2 == k2, format!("k_squared {} (stated {k2})", rep.k2));
            l.push(subject, "obstruction = 0", rep.obstruction_dim == 0, format!("{}", rep.obstruction_dim));
            let sing: Vec<String> = rep.singularities.iter().map(ToString::to_string).collect();
            l.push(subject, "singularities", true, sing.join("; "));
            let kind = match rep.pi1.kind {
                Pi1Kind::Trivial => "trivial",
                Pi1Kind::Inconclusive => "inconclusive",
            };
            l.skip(subject, "pi1 (reported)", format!("{kind}: {}", rep.pi1.justification.join("; ")));
        }
        InferOutcome::Ambiguous(a) => {
            let mut d = format!(
                "no plan found ({} leaves, {})",
                a.leaves,
                if a.exhausted { "space exhausted" } else { "budget reached" }
            );
            if let Some(first) = a.near_misses.first() {
                let _ = write!(d, "; nearest: {first}");
            }
            l.skip(subject, "plan", d);
        }
    }
}

/// Verifies one compact record.
pub fn verify_record(model: &A0Model, r: &SurfaceRecord, opts: &VerifyOptions) -> Ledger {
    let mut l = Ledger::default();
    let subject = format!("({})", r.id);
    chain_checks(&mut l, &subject, r.k2, &r.chains);
    geography_checks(&mut l, &subject, model, &r.curves, r.k2, r.chains.len());
    if opts.infer_records {
        match infer_plan(r, model.config(), &opts.infer) {
            Ok(o) => inferred_checks(&mut l, &subject, r.k2, &o),
            Err(e) => l.push(&subject, "plan", false, e.to_string()),
        }
    }
    l
}

/// Verifies one main construction; returns the inferred surface when a plan was found.
pub fn verify_main(model: &A0Model, m: &MainConstruction, opts: &VerifyOptions) -> (Ledger, Option<Box<Inferred>>) {
    let mut l = Ledger::default();
    let subject = format!("K2={}", m.k2);
    let chains = match m.stated_chains() {
        Ok(c) => c,
        Err(e) => {
            l.push(&subject, "wahl", false, e.to_string());
            return (l, None);
        }
    };
    chain_checks(&mut l, &subject, m.k2, &chains);
    geography_checks(&mut l, &subject, model, &m.curves, m.k2, chains.len());
    let mut found = None;
    if opts.infer_main {
        let target = Target { curves: &m.curves, chains: &chains, ade: None, du_val: Some(m.du_val.clone()) };
        match infer_unbracketed(&target, m.k2, model.config(), &opts.infer) {
            Ok(o) => {
                inferred_checks(&mut l, &subject, m.k2, &o);
                if let InferOutcome::Found(f) = o {
                    found = Some(f);
                }
            }
            Err(e) => l.push(&subject, "plan", false, e.to_string()),
        }
    }
    (l, found)
}

/// Compositions of wormhole pairs and T-joins.
pub fn verify_joins(expected: &Expected, records: &[SurfaceRecord]) -> Ledger {
    let mut l = Ledger::default();
    let by_id = |id: &str| records.iter().find(|r| r.id == id);
    for w in &expected.wormholes {
        let subject = format!("({})/({})", w.left, w.right);
        for id in [&w.left, &w.right] {
            let Some(r) = by_id(id) else {
                l.push(&subject, "wormhole", false, format!("record ({id}) missing"));
                continue;
            };
            let check = format!("wormhole ({id})");
            match r.chains.as_slice() {
                [a, b] => match blow_down_compose(&a.chain, &b.chain) {
                    Ok(q) => {
                        // Stated twists may be read from either end of the chain.
                        let stated = CyclicQuotient::new(w.order, w.twist).map(|s| s.normalize());
                        let ok = stated.as_ref().is_ok_and(|s| *s == q);
                        let note = if ok && q.q != BigInt::from(w.twist) { " (inverse orientation)" } else { "" };
                        l.push(&subject, &check, ok, format!("{q}, stated 1/{}(1,{}){note}", w.order, w.twist))
                    }
                    Err(e) => l.push(&subject, &check, false, e.to_string()),
                },
                _ => l.push(&subject, &check, false, "record does not have two chains"),
            }
        }
    }
    for t in &expected.t_joins {
        let subject = format!("({})", t.record);
        let Some(r) = by_id(&t.record) else {
            l.push(&subject, "t-join", false, "record missing");
            continue;
        };
        match r.chains.as_slice() {
            [a, b] if a.chain == b.chain => match blow_down_compose(&a.chain, &b.chain) {
                Ok(q) => {
                    let n = BigInt::from(t.n);
                    let t_type = recognize_t(&q);
                    let ok = q.m == BigInt::from(2) * &n * &n
                        && t_type.as_ref().is_some_and(|ts| ts.d == BigInt::from(2) && ts.n == n);
                    let shown = t_type.map_or("not T".to_string(), |ts| ts.to_string());
                    l.push(&subject, "t-join", ok, format!("{q} [{shown}], order 2·{}²", t.n));
                }
                Err(e) => l.push(&subject, "t-join", false, e.to_string()),
            },
            _ => l.push(&subject, "t-join", false, "record does not state two equal chains"),
        }
    }
    for (i, c) in expected.k1_chains.iter().enumerate() {
        let ok = Chain::new(c.clone()).ok().and_then(|c| crate::cqs::is_wahl(&c)).is_some();
        l.push(format!("K2=1 #{}", i + 1), "wahl", ok, format!("{c:?}"));
    }
    l
}

/// Meridian exponents at the contacts of free (−2)-curves with marked chain `chain`:
/// `(free curve, chain curve, exponent)`. With `reversed`, the generator is the meridian of
/// the first curve instead of the last.
pub fn contact_exponents(f: &Inferred, chain: usize, reversed: bool) -> Vec<(String, String, BigInt)> {
    let ms = &f.marked;
    let s = ms.surface();
    let mut path = ms.wahl_chains()[chain].clone();
    let mut c = ms.wahl()[chain].chain.clone();
    if reversed {
        path.reverse();
        c = c.reversed();
    }
    let t = meridian_exponents(&c).t;
    let mut out = Vec::new();
    for (i, &cv) in path.iter().enumerate() {
        for n in s.nodes_on(cv) {
            let o = n.other(cv);
            if ms.free_curves().contains(&o) && s.curve(o).self_int == -2 {
                out.push((s.name(o).to_string(), s.name(cv).to_string(), t[i].clone()));
            }
        }
    }
    out
}

/// The whole ledger over the shipped (or supplied) data.
pub fn verify_all(model: &A0Model, records: &[SurfaceRecord], expected: &Expected, opts: &VerifyOptions) -> Ledger {
    let mut l = validate_a0(model, expected, records);
    if opts.reconstruct {
        let cons = shipped_constraints(expected, records);
        let ro = ReconstructOptions { height_axioms: true, max_solutions: 4 };
        match reconstruct_a0(&cons, &ro) {
            Ok(rec) => {
                let unique = rec.solutions.len() == 1 && !rec.truncated;
                let same = rec.solutions.first().is_some_and(|s| s.incidence() == model.incidence());
                l.push(
                    "A0",
                    "reconstruction",
                    unique && same,
                    format!(
                        "{} solution(s){}, {} ambiguous incidences, {} search nodes",
                        rec.solutions.len(),
                        if same { " matching the shipped model" } else { "" },
                        rec.ambiguous.len(),
                        rec.nodes_visited
                    ),
                );
            }
            Err(e) => l.push("A0", "reconstruction", false, e.to_string()),
        }
    }
    let per_record: Vec<Ledger> = if opts.parallel {
        records.par_iter().map(|r| verify_record(model, r, opts)).collect()
    } else {
        records.iter().map(|r| verify_record(model, r, opts)).collect()
    };
    for r in per_record {
        l.extend(r);
    }
    let per_main: Vec<Ledger> = if opts.parallel {
        expected.main_constructions.par_iter().map(|m| verify_main(model, m, opts).0).collect()
    } else {
        expected.main_constructions.iter().map(|m| verify_main(model, m, opts).0).collect()
    };
    for m in per_main {
        l.extend(m);
    }
    l.extend(verify_joins(expected, records));
    if opts.infer_main {
        l.extend(verify_bracket_examples(model, expected, opts));
    }
    l
}

/// Step lists given in running text, read as records over their construction's curves.
/// Reported, not asserted: the text may disagree with the construction it describes.
pub fn verify_bracket_examples(model: &A0Model, expected: &Expected, opts: &VerifyOptions) -> Ledger {
    let mut l = Ledger::default();
    for b in &expected.bracket_examples {
        let subject = format!("K2={} text", b.k2);
        let Some(m) = expected.main_constructions.iter().find(|m| m.k2 == b.k2) else {
            l.push(&subject, "plan", false, "no construction with this K^2");
            continue;
        };
        let text = format!(
            "({}.0) K^2={} - {{{}}} - det={} - {} - {}",
            b.k2,
            b.k2,
            m.curves.join(", "),
            m.det,
            b.text,
            b.chains
        );
        let r = match parse_record(&text) {
            Ok(r) => r,
            Err(e) => {
                l.push(&subject, "plan", false, e.to_string());
                continue;
            }
        };
        match infer_plan(&r, model.config(), &opts.infer) {
            Ok(InferOutcome::Found(f)) => inferred_checks(&mut l, &subject, r.k2, &InferOutcome::Found(f)),
            Ok(InferOutcome::Ambiguous(a)) => {
                let near = a.near_misses.first().map_or(String::new(), |n| format!("; nearest: {n}"));
                l.skip(
                    &subject,
                    "plan",
                    format!("steps as written do not produce the stated chains ({} leaves{})", a.leaves, near),
                );
            }
            Err(e) => l.push(&subject, "plan", false, e.to_string()),
        }
    }
    l
}
