use wahl_core::catalog::{
    parse_records, reconstruct_a0, shipped_constraints, A0Constraint, A0Model, Expected, ReconstructOptions,
    RECORDS_TXT,
};
use wahl_core::config::IntMatrix;
use wahl_core::Error;

fn k2_two(expected: &Expected) -> Vec<A0Constraint> {
    let m = expected.main_constructions.iter().find(|m| m.k2 == 2).unwrap();
    vec![
        A0Constraint::Matrix { curves: m.curves.clone(), matrix: IntMatrix::from_rows(&m.matrix) },
        A0Constraint::Det { curves: m.curves.clone(), det: m.det.into() },
    ]
}

fn meets(model: &A0Model, a: &str, b: &str) -> bool {
    let c = model.config();
    c.intersection(c.id_of(a).unwrap(), c.id_of(b).unwrap()) == 1
}

#[test]
fn all_shipped_data_determine_the_model_uniquely() {
    let expected = Expected::shipped();
    let records = parse_records(RECORDS_TXT).unwrap();
    let opts = ReconstructOptions { height_axioms: true, max_solutions: 4 };
    let rec = reconstruct_a0(&shipped_constraints(&expected, &records), &opts).unwrap();
    assert_eq!(rec.solutions.len(), 1);
    assert!(!rec.truncated);
    assert_eq!(rec.solutions[0].incidence(), A0Model::shipped().incidence());
}

#[test]
fn first_matrix_alone_forces_its_incidences() {
    let expected = Expected::shipped();
    let opts = ReconstructOptions { height_axioms: true, max_solutions: 1 };
    let rec = reconstruct_a0(&k2_two(&expected), &opts).unwrap();
    assert!(meets(&rec.solutions[0], "C1", "A2"));
    // Forcing: the opposite incidence admits no completion at all.
    for (a, b) in [("C1", "A2"), ("C2", "D1"), ("B1", "A2")] {
        let mut cons = k2_two(&expected);
        cons.push(A0Constraint::Incidence { a: a.into(), b: b.into(), value: 0 });
        let opts = ReconstructOptions { height_axioms: true, max_solutions: 0 };
        assert!(matches!(reconstruct_a0(&cons, &opts), Err(Error::Unsatisfiable(_))), "{a}·{b}");
    }
}

#[test]
fn perturbed_determinant_is_unsatisfiable() {
    let expected = Expected::shipped();
    let mut cons = k2_two(&expected);
    assert!(matches!(&cons[1], A0Constraint::Det { det, .. } if *det == (-28).into()));
    if let A0Constraint::Det { det, .. } = &mut cons[1] {
        *det = (-29).into();
    }
    let opts = ReconstructOptions { height_axioms: true, max_solutions: 0 };
    assert!(matches!(reconstruct_a0(&cons, &opts), Err(Error::Unsatisfiable(_))));
}
