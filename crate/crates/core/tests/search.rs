use std::collections::BTreeSet;

use wahl_core::catalog::{parse_record, parse_records, verify_record, A0Model, Status, VerifyOptions, RECORDS_TXT};
use wahl_core::plan::{search_constructions, SearchParams};

fn pool() -> Vec<String> {
    let recs = parse_records(RECORDS_TXT).unwrap();
    let mut names: BTreeSet<String> = BTreeSet::new();
    for r in recs.iter().filter(|r| r.id == "2.1" || r.id == "2.2") {
        names.extend(r.curves.iter().cloned());
    }
    names.into_iter().collect()
}

fn params() -> SearchParams {
    SearchParams {
        k2_min: 2,
        k2_max: 2,
        max_chains: 2,
        max_blowups: 8,
        curves: Some(pool()),
        ..SearchParams::default()
    }
}

fn chain_set(r: &wahl_core::catalog::SurfaceRecord) -> BTreeSet<(u64, Vec<u32>)> {
    r.chains
        .iter()
        .map(|c| {
            let e = c.chain.entries().to_vec();
            let rev: Vec<u32> = e.iter().rev().copied().collect();
            (c.n, e.min(rev))
        })
        .collect()
}

#[test]
fn rediscovers_a_k2_two_record() {
    let a0 = A0Model::shipped();
    let out = search_constructions(&params(), a0.config()).unwrap();
    assert!(out.exhausted, "{:?}", out.notes);
    let known: Vec<_> =
        parse_records(RECORDS_TXT).unwrap().into_iter().filter(|r| r.id == "2.1" || r.id == "2.2").collect();
    let hit = out.records.iter().any(|r| {
        known.iter().any(|k| {
            let same_curves = r.curves.iter().collect::<BTreeSet<_>>() == k.curves.iter().collect::<BTreeSet<_>>();
            same_curves && chain_set(r) == chain_set(k)
        })
    });
    assert!(hit, "{} records, none matching", out.records.len());
}

#[test]
fn emitted_records_round_trip_and_verify() {
    let a0 = A0Model::shipped();
    let out = search_constructions(&params(), a0.config()).unwrap();
    assert!(!out.records.is_empty());
    let opts = VerifyOptions::default();
    for r in &out.records {
        let again = parse_record(&r.to_string()).unwrap();
        assert_eq!(&again, r);
        let l = verify_record(&a0, &again, &opts);
        assert!(l.passed(), "{r}\n{}", l.to_text());
        let subject = format!("({})", r.id);
        assert_eq!(l.find(&subject, "plan").map(|c| c.status), Some(Status::Pass), "{r}");
        assert!(l.find(&subject, "ample").is_some_and(|c| c.detail == "ample"), "{r}");
    }
}

#[test]
fn output_is_independent_of_scheduling_and_pruning() {
    let a0 = A0Model::shipped();
    let render = |p: &SearchParams| -> Vec<String> {
        search_constructions(p, a0.config()).unwrap().records.iter().map(ToString::to_string).collect()
    };
    let base = render(&params());
    assert_eq!(render(&SearchParams { parallel: false, ..params() }), base);
    assert_eq!(render(&SearchParams { prune: false, parallel: true, ..params() }), base);
}

#[test]
fn inadmissible_request_is_empty() {
    let a0 = A0Model::shipped();
    let p = SearchParams { k2_min: 14, k2_max: 14, max_chains: 2, ..SearchParams::default() };
    let out = search_constructions(&p, a0.config()).unwrap();
    assert!(out.records.is_empty());
    assert!(out.notes.iter().any(|n| n.contains("inadmissible")));
}

#[test]
fn budget_exhaustion_is_reported() {
    let a0 = A0Model::shipped();
    let out = search_constructions(&SearchParams { max_leaves: 10, ..params() }, a0.config()).unwrap();
    assert!(!out.exhausted);
    assert!(out.notes.iter().any(|n| n.contains("partial")));
}
