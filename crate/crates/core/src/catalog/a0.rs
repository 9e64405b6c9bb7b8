//! The extremal configuration 𝒜₀: two I₈ and four I₂ fibers plus eight torsion sections.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::Deref;

use num_bigint::BigInt;

use crate::config::{parse_configuration, Ambient, Configuration, IntMatrix};
use crate::error::{Error, Result};

pub const A0_JSON: &str = include_str!("../../data/a0.json");

/// Fibers in cycle order; component `k` of a fiber meets components `k ± 1`.
pub const FIBERS: [&[&str]; 6] = [
    &["F1", "F2", "F3", "F4", "F5", "F6", "F7", "F8"],
    &["F9", "F10", "F11", "F12", "F13", "F14", "F15", "F16"],
    &["B1", "B2"],
    &["B3", "B4"],
    &["C1", "C2"],
    &["C3", "C4"],
];

pub const SECTIONS: [&str; 8] = ["A1", "A2", "A3", "A4", "D1", "D2", "D3", "D4"];

/// Section–fiber incidence: `incidence[s][f]` is the component of fiber `f` met by section `s`.
pub type Incidence = [[u8; 6]; 8];

/// 𝒜₀ as a configuration whose fibration axioms have been checked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct A0Model {
    config: Configuration,
    incidence: Incidence,
}

impl Deref for A0Model {
    type Target = Configuration;
    fn deref(&self) -> &Configuration {
        &self.config
    }
}

impl A0Model {
    /// The frozen model shipped with the crate.
    pub fn shipped() -> Self {
        Self::parse(A0_JSON).expect("shipped a0.json is valid")
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::from_configuration(parse_configuration(text)?)
    }

    /// Checks the fibration axioms and extracts the incidence table.
    pub fn from_configuration(config: Configuration) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidMarking(format!("𝒜₀ axiom: {m}")));
        let expected: BTreeSet<&str> = FIBERS.iter().flat_map(|f| f.iter().copied()).chain(SECTIONS).collect();
        let names: BTreeSet<&str> = config.curves().iter().map(|c| c.name.as_str()).collect();
        if names != expected {
            return bad(format!("curve names differ: {:?}", names.symmetric_difference(&expected).collect::<Vec<_>>()));
        }
        if let Some(c) = config.curves().iter().find(|c| c.self_int != -2 || c.self_nodes != 0) {
            return bad(format!("{} is not a smooth (−2)-curve", c.name));
        }
        let mut incidence = [[u8::MAX; 6]; 8];
        for n in config.nodes() {
            let (a, b) = n.curves();
            let (a, b) = (config.name(a), config.name(b));
            match (locate(a), locate(b)) {
                (Place::Fiber(f, _), Place::Fiber(g, _)) => {
                    if f != g {
                        return bad(format!("{a} and {b} lie in different fibers"));
                    }
                }
                (Place::Section(s), Place::Fiber(f, i)) | (Place::Fiber(f, i), Place::Section(s)) => {
                    if incidence[s][f] != u8::MAX {
                        return bad(format!("{} meets fiber {} twice", SECTIONS[s], f + 1));
                    }
                    incidence[s][f] = i as u8;
                }
                (Place::Section(_), Place::Section(_)) => return bad(format!("sections {a} and {b} meet")),
            }
        }
        for (f, fiber) in FIBERS.iter().enumerate() {
            let len = fiber.len();
            for i in 0..len {
                for j in i + 1..len {
                    let want = fiber_intersection(len, i, j);
                    let got = config.intersection(config.id_of(fiber[i])?, config.id_of(fiber[j])?);
                    if got != want {
                        return bad(format!("{}·{} = {got}, expected {want}", fiber[i], fiber[j]));
                    }
                }
            }
            for (s, row) in incidence.iter().enumerate() {
                if row[f] == u8::MAX {
                    return bad(format!("{} misses fiber {}", SECTIONS[s], f + 1));
                }
            }
        }
        Ok(A0Model { config, incidence })
    }

    pub fn from_incidence(incidence: &Incidence) -> Self {
        let mut c = Configuration::new(Ambient::K3);
        for name in FIBERS.iter().flat_map(|f| f.iter()).chain(SECTIONS.iter()) {
            c.add_curve(name, -2).expect("distinct names");
        }
        let id = |c: &Configuration, n: &str| c.id_of(n).expect("known name");
        for fiber in FIBERS {
            let len = fiber.len();
            for i in 0..len {
                if len == 2 {
                    if i == 0 {
                        let (a, b) = (id(&c, fiber[0]), id(&c, fiber[1]));
                        c.add_node(a, b).unwrap();
                        c.add_node(a, b).unwrap();
                    }
                } else {
                    let (a, b) = (id(&c, fiber[i]), id(&c, fiber[(i + 1) % len]));
                    c.add_node(a, b).unwrap();
                }
            }
        }
        for (s, row) in incidence.iter().enumerate() {
            for (f, &k) in row.iter().enumerate() {
                let (a, b) = (id(&c, SECTIONS[s]), id(&c, FIBERS[f][k as usize]));
                c.add_node(a, b).unwrap();
            }
        }
        A0Model { config: c, incidence: *incidence }
    }

    pub fn config(&self) -> &Configuration {
        &self.config
    }

    pub fn incidence(&self) -> &Incidence {
        &self.incidence
    }

    /// Fiber components met by a section, in fiber order.
    pub fn section_components(&self, s: usize) -> Vec<&'static str> {
        (0..6).map(|f| FIBERS[f][self.incidence[s][f] as usize]).collect()
    }
}

#[derive(Debug, Clone, Copy)]
enum Place {
    Fiber(usize, usize),
    Section(usize),
}

fn locate(name: &str) -> Place {
    for (f, fiber) in FIBERS.iter().enumerate() {
        if let Some(i) = fiber.iter().position(|&x| x == name) {
            return Place::Fiber(f, i);
        }
    }
    Place::Section(SECTIONS.iter().position(|&x| x == name).expect("validated name"))
}

fn fiber_intersection(len: usize, i: usize, j: usize) -> i64 {
    if len == 2 {
        2
    } else {
        i64::from((j - i) % len == 1 || (i + len - j) % len == 1)
    }
}

/// Contribution of a pair of sections at a fiber of type I_len, times 8 to stay integral.
/// Components are measured from the zero section's component.
fn contr8(len: usize, i: usize, j: usize) -> i64 {
    let (i, j) = (i.min(j) as i64, i.max(j) as i64);
    let n = len as i64;
    if i == 0 {
        return 0;
    }
    8 * i * (n - j) / n
}

/// A named sub-configuration with a known matrix or determinant.
#[derive(Debug, Clone)]
pub enum A0Constraint {
    Matrix {
        curves: Vec<String>,
        matrix: IntMatrix,
    },
    Det {
        curves: Vec<String>,
        det: BigInt,
    },
    /// `a · b` must equal `value` (0 or 1 for section–fiber pairs).
    Incidence {
        a: String,
        b: String,
        value: i64,
    },
}

#[derive(Debug, Clone, Default)]
pub struct ReconstructOptions {
    /// Impose the torsion-section height pairing (zero section `A1`).
    pub height_axioms: bool,
    pub max_solutions: usize,
}

#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub solutions: Vec<A0Model>,
    /// `(section, fiber index, components seen across solutions)` wherever solutions disagree.
    pub ambiguous: Vec<(String, usize, Vec<String>)>,
    pub truncated: bool,
    pub nodes_visited: u64,
}

/// Enumerates section–component incidences consistent with the fibration axioms and the
/// constraints. Determinants are checked at the leaves.
pub fn reconstruct_a0(constraints: &[A0Constraint], opts: &ReconstructOptions) -> Result<Reconstruction> {
    let max = if opts.max_solutions == 0 { usize::MAX } else { opts.max_solutions };
    // allowed[s][f]: bitmask of components.
    let mut allowed = [[0u8; 6]; 8];
    for row in allowed.iter_mut() {
        for (f, cell) in row.iter_mut().enumerate() {
            *cell = ((1u16 << FIBERS[f].len()) - 1) as u8;
        }
    }
    let mut dets = Vec::new();
    let mut pin = |a: &str, b: &str, value: i64| -> Result<()> {
        match (locate_checked(a)?, locate_checked(b)?) {
            (Place::Section(s), Place::Fiber(f, i)) | (Place::Fiber(f, i), Place::Section(s)) => {
                match value {
                    1 => allowed[s][f] &= 1 << i,
                    0 => allowed[s][f] &= !(1 << i),
                    v => return Err(Error::Unsatisfiable(format!("{a}·{b} = {v} is impossible"))),
                }
                Ok(())
            }
            (Place::Section(_), Place::Section(_)) => {
                if value == 0 || a == b {
                    Ok(())
                } else {
                    Err(Error::Unsatisfiable(format!("sections {a}, {b} must be disjoint")))
                }
            }
            (Place::Fiber(f, i), Place::Fiber(g, j)) => {
                let want = if f != g {
                    0
                } else if i == j {
                    -2
                } else {
                    fiber_intersection(FIBERS[f].len(), i.min(j), i.max(j))
                };
                if want == value {
                    Ok(())
                } else {
                    Err(Error::Unsatisfiable(format!("{a}·{b} = {value} contradicts the fiber structure")))
                }
            }
        }
    };
    for c in constraints {
        match c {
            A0Constraint::Matrix { curves, matrix } => {
                for (i, a) in curves.iter().enumerate() {
                    for (j, b) in curves.iter().enumerate() {
                        if i == j {
                            if matrix.get(i, i) != -2 {
                                return Err(Error::Unsatisfiable(format!("{a}² = {}", matrix.get(i, i))));
                            }
                        } else {
                            pin(a, b, matrix.get(i, j))?;
                        }
                    }
                }
            }
            A0Constraint::Det { curves, det } => {
                let places = curves.iter().map(|n| locate_checked(n)).collect::<Result<Vec<_>>>()?;
                let ready = places
                    .iter()
                    .filter_map(|p| match p {
                        Place::Section(s) => Some(s + 1),
                        Place::Fiber(..) => None,
                    })
                    .max()
                    .unwrap_or(0);
                dets.push(DetCheck { places, det: det.clone(), ready });
            }
            A0Constraint::Incidence { a, b, value } => pin(a, b, *value)?,
        }
    }
    let mut search = Csp {
        allowed,
        heights: opts.height_axioms,
        dets: &dets,
        assignment: [[0; 6]; 8],
        solutions: Vec::new(),
        max,
        truncated: false,
        visited: 0,
    };
    search.run(0);
    let Csp { solutions, truncated, visited, .. } = search;
    if solutions.is_empty() {
        return Err(Error::Unsatisfiable(format!("no incidence satisfies the constraints ({visited} nodes searched)")));
    }
    let mut ambiguous = Vec::new();
    for s in 0..8 {
        for f in 0..6 {
            let seen: BTreeSet<u8> = solutions.iter().map(|x| x[s][f]).collect();
            if seen.len() > 1 {
                ambiguous.push((
                    SECTIONS[s].to_string(),
                    f,
                    seen.iter().map(|&k| FIBERS[f][k as usize].to_string()).collect(),
                ));
            }
        }
    }
    Ok(Reconstruction {
        solutions: solutions.iter().map(A0Model::from_incidence).collect(),
        ambiguous,
        truncated,
        nodes_visited: visited,
    })
}

fn locate_checked(name: &str) -> Result<Place> {
    if FIBERS.iter().any(|f| f.contains(&name)) || SECTIONS.contains(&name) {
        Ok(locate(name))
    } else {
        Err(Error::UnknownCurve(name.to_string()))
    }
}

struct Csp<'a> {
    allowed: [[u8; 6]; 8],
    heights: bool,
    dets: &'a [DetCheck],
    assignment: Incidence,
    solutions: Vec<Incidence>,
    max: usize,
    truncated: bool,
    visited: u64,
}

impl Csp<'_> {
    fn run(&mut self, s: usize) {
        if self.solutions.len() >= self.max {
            self.truncated = true;
            return;
        }
        self.visited += 1;
        if !self.dets_hold(s) {
            return;
        }
        if s == 8 {
            self.solutions.push(self.assignment);
            return;
        }
        let mut row = [0u8; 6];
        self.rows(s, 0, &mut row);
    }

    fn rows(&mut self, s: usize, f: usize, row: &mut [u8; 6]) {
        if self.solutions.len() >= self.max {
            self.truncated = true;
            return;
        }
        if f == 6 {
            if self.consistent(s, row) {
                self.assignment[s] = *row;
                self.run(s + 1);
            }
            return;
        }
        for k in 0..FIBERS[f].len() as u8 {
            if self.allowed[s][f] & (1 << k) != 0 {
                row[f] = k;
                self.rows(s, f + 1, row);
            }
        }
    }

    fn consistent(&self, s: usize, row: &[u8; 6]) -> bool {
        if !self.heights || s == 0 {
            return true;
        }
        let zero = &self.assignment[0];
        let rel = |r: &[u8; 6], f: usize| {
            let n = FIBERS[f].len();
            (r[f] as usize + n - zero[f] as usize) % n
        };
        let own: i64 = (0..6).map(|f| contr8(FIBERS[f].len(), rel(row, f), rel(row, f))).sum();
        if own != 32 {
            return false;
        }
        (1..s).all(|t| {
            let other = &self.assignment[t];
            let pair: i64 = (0..6)
                .map(|f| {
                    let n = FIBERS[f].len();
                    let (i, j) = (rel(row, f), rel(other, f));
                    if n == 2 {
                        if i == 1 && j == 1 {
                            4
                        } else {
                            0
                        }
                    } else {
                        contr8(n, i, j)
                    }
                })
                .sum();
            pair == 16
        })
    }

    /// Determinants whose sections are exactly the first `s` ones to be assigned.
    fn dets_hold(&self, s: usize) -> bool {
        self.dets.iter().filter(|d| d.ready == s).all(|d| {
            let n = d.places.len();
            let mut m = IntMatrix::zeros(n, n);
            for (i, &a) in d.places.iter().enumerate() {
                for (j, &b) in d.places.iter().enumerate() {
                    m.set(i, j, self.meet(a, b, i == j));
                }
            }
            m.det_exact() == d.det
        })
    }

    fn meet(&self, a: Place, b: Place, same: bool) -> i64 {
        if same {
            return -2;
        }
        match (a, b) {
            (Place::Section(s), Place::Fiber(f, i)) | (Place::Fiber(f, i), Place::Section(s)) => {
                i64::from(self.assignment[s][f] as usize == i)
            }
            (Place::Section(_), Place::Section(_)) => 0,
            (Place::Fiber(f, i), Place::Fiber(g, j)) => {
                if f == g {
                    fiber_intersection(FIBERS[f].len(), i.min(j), i.max(j))
                } else {
                    0
                }
            }
        }
    }
}

struct DetCheck {
    places: Vec<Place>,
    det: BigInt,
    /// One past the largest section index involved.
    ready: usize,
}

/// Component indices of the reconstructed incidence, for diagnostics.
pub fn incidence_table(model: &A0Model) -> BTreeMap<String, Vec<&'static str>> {
    (0..8).map(|s| (SECTIONS[s].to_string(), model.section_components(s))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_model_satisfies_axioms() {
        let m = A0Model::shipped();
        assert_eq!((m.r(), m.t2()), (32, 72));
        assert_eq!(m.log_chern(), (80, 32));
        assert_eq!(m.section_components(1), vec!["F1", "F9", "B1", "B3", "C1", "C3"]);
    }

    #[test]
    fn incidence_round_trip() {
        let m = A0Model::shipped();
        let again = A0Model::from_incidence(m.incidence());
        assert_eq!(again.full_matrix(), m.full_matrix());
    }

    #[test]
    fn contributions() {
        assert_eq!(contr8(8, 4, 4), 16);
        assert_eq!(contr8(8, 2, 6), 4);
        assert_eq!(contr8(8, 0, 3), 0);
    }

    #[test]
    fn rejects_broken_model() {
        let text = A0_JSON.replace("[\"A1\", \"F7\"]", "[\"A1\", \"A2\"]");
        assert!(A0Model::parse(&text).is_err());
    }
}
