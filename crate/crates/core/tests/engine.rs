mod common;

use common::cofactor_det;
use num_bigint::BigInt;
use proptest::prelude::*;
use wahl_core::config::{det_exact, Ambient, Configuration, IntMatrix, NodeId};
use wahl_core::surface::{nef_ample_check, MarkedSurface, Positivity};

/// Random nodal configuration: curves with self-intersection in −6..=−1, nodes between
/// distinct curves (parallel nodes allowed), plus the index of one node to blow up.
fn configuration() -> impl Strategy<Value = (Vec<i64>, Vec<(usize, usize)>, usize)> {
    (2usize..10).prop_flat_map(|n| {
        (
            prop::collection::vec(-6i64..=-1, n),
            prop::collection::vec((0..n, 0..n).prop_filter("distinct", |(a, b)| a != b), 1..3 * n),
            any::<usize>(),
        )
    })
}

fn build(selfs: &[i64], nodes: &[(usize, usize)]) -> Configuration {
    let mut c = Configuration::new(Ambient::K3);
    let ids: Vec<_> = selfs.iter().enumerate().map(|(i, &s)| c.add_curve(&format!("C{i}"), s).unwrap()).collect();
    for &(a, b) in nodes {
        c.add_node(ids[a], ids[b]).unwrap();
    }
    c
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1_000))]

    #[test]
    fn blow_up_keeps_pk_and_adds_one_curve_and_node((selfs, nodes, pick) in configuration()) {
        let c = build(&selfs, &nodes);
        let node: NodeId = c.nodes()[pick % c.nodes().len()].id;
        let d = c.blow_up(node).unwrap();
        prop_assert_eq!(d.pk_invariants(), c.pk_invariants());
        prop_assert_eq!((d.r(), d.t2()), (c.r() + 1, c.t2() + 1));
        prop_assert_eq!(d.log_chern(), c.log_chern());
        prop_assert_eq!(d.surface_k2(), c.surface_k2() - 1);
        // Every other node survives with its id.
        for n in c.nodes().iter().filter(|n| n.id != node) {
            prop_assert!(d.node(n.id).is_some());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn det_matches_cofactor_expansion(rows in (0usize..=6).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(-9i64..=9, n), n))) {
        let m = if rows.is_empty() { IntMatrix::zeros(0, 0) } else { IntMatrix::from_rows(&rows) };
        prop_assert_eq!(det_exact(&m), BigInt::from(cofactor_det(&rows)));
    }
}

#[test]
fn four_one_four_is_nef_only_with_t_contraction() {
    let mut c = Configuration::new(Ambient::Abstract { k2: 1, chi_top: 11 });
    let a = c.add_curve("A", -4).unwrap();
    let e = c.add_curve("E", -1).unwrap();
    let b = c.add_curve("B", -4).unwrap();
    c.add_node(a, e).unwrap();
    c.add_node(e, b).unwrap();
    let ms = MarkedSurface::with_blowups(c, vec![vec![a], vec![b]], vec![], 0).unwrap();
    let r = nef_ample_check(&ms);
    assert_eq!(r.verdict, Positivity::NefOnly);
    assert_eq!(r.contractions.len(), 1);
    assert_eq!(r.contractions[0].curve, "E");
    assert_eq!(r.contractions[0].quotient.as_deref(), Some("1/8(1,3)"));
    assert!(r.ample_on_canonical_model());
}
