use wahl_core::catalog::{parse_record, parse_records, verify_record, A0Model, Status, VerifyOptions, RECORDS_TXT};
use wahl_core::config::{Ambient, Configuration};
use wahl_core::plan::{infer_plan, InferOptions, InferOutcome, Interpretation};
use wahl_core::surface::{Pi1Kind, Positivity, SurfaceReport};

fn record(id: &str) -> wahl_core::catalog::SurfaceRecord {
    parse_records(RECORDS_TXT).unwrap().into_iter().find(|r| r.id == id).unwrap()
}

#[test]
fn first_record_infers_literally_and_is_ample() {
    let a0 = A0Model::shipped();
    let out = infer_plan(&record("2.1"), a0.config(), &InferOptions::default()).unwrap();
    let f = out.found().expect("plan for (2.1)");
    assert!(f.readings.iter().all(|r| r.interpretation == Interpretation::Literal));
    assert_eq!(f.report.ample.verdict, Positivity::Ample);
    assert_eq!((f.report.k2, f.report.obstruction_dim), (2, 0));
    let sing: Vec<String> = f.marked.wahl().iter().map(|w| format!("({},{})", w.n, w.a)).collect();
    assert_eq!(sing, ["(11,3)", "(8,3)"]);
    assert_eq!(f.report.pi1.kind, Pi1Kind::Trivial);
}

#[test]
fn t_join_record_is_ample_after_contraction() {
    let a0 = A0Model::shipped();
    let out = infer_plan(&record("2.2"), a0.config(), &InferOptions::default()).unwrap();
    let f = out.found().expect("plan for (2.2)");
    assert_eq!(f.report.ample.verdict, Positivity::NefOnly);
    assert!(f.report.ample.ample_on_canonical_model());
    assert_eq!(f.report.ample.contractions[0].quotient.as_deref(), Some("1/648(1,251)"));
    assert_eq!((f.report.k2, f.report.obstruction_dim), (2, 0));
}

#[test]
fn plans_replay_to_the_same_report() {
    let a0 = A0Model::shipped();
    for id in ["2.1", "2.2", "5.1"] {
        let r = record(id);
        let f = infer_plan(&r, a0.config(), &InferOptions::default()).unwrap();
        let f = f.found().unwrap();
        let again = f.plan.replay(a0.config()).unwrap();
        assert_eq!(&again, f.marked.surface(), "({id})");
        let base = a0.config().restrict_by_names(&r.curves).unwrap();
        let rep = SurfaceReport::assemble(&f.marked, &base, None);
        assert_eq!(rep.to_json(), f.report.to_json(), "({id})");
    }
}

#[test]
fn non_wahl_claim_is_rejected_before_search() {
    let a0 = A0Model::shipped();
    let r = parse_record("(0.1) K^2=1 - {C1} - det=-2 - none - (2,1):[4,4]").unwrap();
    assert!(infer_plan(&r, a0.config(), &InferOptions::default()).is_err());
}

#[test]
fn zero_blowup_record_on_a_minus_four_curve() {
    let mut c = Configuration::new(Ambient::K3);
    c.add_curve("X", -4).unwrap();
    let r = parse_record("(0.1) K^2=1 - {X} - det=-4 - none - (2,1):[4]").unwrap();
    let out = infer_plan(&r, &c, &InferOptions::default()).unwrap();
    assert!(out.found().is_some_and(|f| f.plan.is_empty()));
}

#[test]
fn wrong_chain_gives_an_ambiguity_report() {
    let a0 = A0Model::shipped();
    let text = RECORDS_TXT.lines().next().unwrap().replace("(8,3):[3,5,3,2]", "(7,2):[4,5,2,2]");
    let r = parse_record(&text).unwrap();
    match infer_plan(&r, a0.config(), &InferOptions::default()).unwrap() {
        InferOutcome::Ambiguous(a) => {
            assert!(a.exhausted);
            assert!(!a.near_misses.is_empty());
        }
        InferOutcome::Found(_) => panic!("a wrong chain must not be matched"),
    }
}

#[test]
fn every_record_verifies() {
    let a0 = A0Model::shipped();
    let opts = VerifyOptions::default();
    for r in parse_records(RECORDS_TXT).unwrap() {
        let l = verify_record(&a0, &r, &opts);
        assert!(l.passed(), "{}", l.to_text());
        assert_eq!(l.find(&format!("({})", r.id), "plan").map(|c| c.status), Some(Status::Pass), "({})", r.id);
    }
}
