use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::matrix::IntMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CurveId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NodeId(pub u32);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Origin {
    Base,
    /// Created by the blow-up with this 1-based step index.
    Exceptional(u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Curve {
    pub id: CurveId,
    pub name: String,
    pub self_int: i64,
    pub self_nodes: u32,
    pub origin: Origin,
}

/// One transverse intersection point. Branch tags distinguish the two branches of a self-node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Node {
    pub id: NodeId,
    pub branches: [(CurveId, u8); 2],
}

impl Node {
    pub fn curves(&self) -> (CurveId, CurveId) {
        (self.branches[0].0, self.branches[1].0)
    }

    pub fn is_self_node(&self) -> bool {
        self.branches[0].0 == self.branches[1].0
    }

    pub fn touches(&self, c: CurveId) -> bool {
        self.branches[0].0 == c || self.branches[1].0 == c
    }

    /// The curve on the other branch.
    pub fn other(&self, c: CurveId) -> CurveId {
        if self.branches[0].0 == c {
            self.branches[1].0
        } else {
            self.branches[0].0
        }
    }

    pub fn joins(&self, a: CurveId, b: CurveId) -> bool {
        let (x, y) = self.curves();
        (x == a && y == b) || (x == b && y == a)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Ambient {
    K3,
    Enriques,
    Abstract { k2: i64, chi_top: i64 },
}

impl Ambient {
    pub fn k2(self) -> i64 {
        match self {
            Ambient::K3 | Ambient::Enriques => 0,
            Ambient::Abstract { k2, .. } => k2,
        }
    }

    pub fn chi_top(self) -> i64 {
        match self {
            Ambient::K3 => 24,
            Ambient::Enriques => 12,
            Ambient::Abstract { chi_top, .. } => chi_top,
        }
    }
}

/// Nodal configuration of rational curves on a smooth surface.
///
/// Curve ids are indices into `curves`; node ids are never reused. Values are immutable in
/// spirit: [`Configuration::blow_up`] returns a new configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Configuration {
    ambient: Ambient,
    curves: Vec<Curve>,
    nodes: Vec<Node>,
    by_name: HashMap<String, CurveId>,
    next_node: u32,
    blowups: u32,
    flags: Vec<String>,
}

impl Configuration {
    pub fn new(ambient: Ambient) -> Self {
        Configuration {
            ambient,
            curves: Vec::new(),
            nodes: Vec::new(),
            by_name: HashMap::new(),
            next_node: 0,
            blowups: 0,
            flags: Vec::new(),
        }
    }

    pub fn add_curve(&mut self, name: &str, self_int: i64) -> Result<CurveId> {
        self.push_curve(name.to_string(), self_int, Origin::Base)
    }

    fn push_curve(&mut self, name: String, self_int: i64, origin: Origin) -> Result<CurveId> {
        if self.by_name.contains_key(&name) {
            return Err(Error::DuplicateCurve(name));
        }
        let id = CurveId(self.curves.len() as u32);
        self.by_name.insert(name.clone(), id);
        self.curves.push(Curve { id, name, self_int, self_nodes: 0, origin });
        Ok(id)
    }

    /// Adds a transverse node; `a == b` adds a self-node.
    pub fn add_node(&mut self, a: CurveId, b: CurveId) -> Result<NodeId> {
        for c in [a, b] {
            if c.0 as usize >= self.curves.len() {
                return Err(Error::UnknownCurve(format!("#{}", c.0)));
            }
        }
        let id = NodeId(self.next_node);
        self.next_node += 1;
        let tag_b = u8::from(a == b);
        if a == b {
            self.curves[a.0 as usize].self_nodes += 1;
        }
        self.nodes.push(Node { id, branches: [(a, 0), (b, tag_b)] });
        Ok(id)
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn curves(&self) -> &[Curve] {
        &self.curves
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn curve(&self, id: CurveId) -> &Curve {
        &self.curves[id.0 as usize]
    }

    pub fn node(&self, id: NodeId) -> Option<&Node> {
        self.nodes.binary_search_by_key(&id, |n| n.id).ok().map(|i| &self.nodes[i])
    }

    pub fn id_of(&self, name: &str) -> Result<CurveId> {
        self.by_name.get(name).copied().ok_or_else(|| Error::UnknownCurve(name.to_string()))
    }

    pub fn name(&self, id: CurveId) -> &str {
        &self.curve(id).name
    }

    pub fn curve_ids(&self) -> impl Iterator<Item = CurveId> + '_ {
        self.curves.iter().map(|c| c.id)
    }

    /// Number of blow-ups performed to reach this configuration.
    pub fn blowup_count(&self) -> u32 {
        self.blowups
    }

    /// Warnings attached by the engine (e.g. self-node blow-ups).
    pub fn flags(&self) -> &[String] {
        &self.flags
    }

    pub fn r(&self) -> usize {
        self.curves.len()
    }

    pub fn t2(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes_between(&self, a: CurveId, b: CurveId) -> Vec<NodeId> {
        self.nodes.iter().filter(|n| n.joins(a, b)).map(|n| n.id).collect()
    }

    pub fn nodes_on(&self, c: CurveId) -> impl Iterator<Item = &Node> + '_ {
        self.nodes.iter().filter(move |n| n.touches(c))
    }

    /// Number of points where `a` meets `b` (for `a == b`, the self-intersection).
    pub fn intersection(&self, a: CurveId, b: CurveId) -> i64 {
        if a == b {
            self.curve(a).self_int
        } else {
            self.nodes.iter().filter(|n| n.joins(a, b)).count() as i64
        }
    }

    /// Symmetric intersection matrix in the given order (a subset restricts).
    pub fn intersection_matrix(&self, order: &[CurveId]) -> Result<IntMatrix> {
        let idx: HashMap<CurveId, usize> = order.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut m = IntMatrix::zeros(order.len(), order.len());
        for (i, &c) in order.iter().enumerate() {
            if c.0 as usize >= self.curves.len() {
                return Err(Error::UnknownCurve(format!("#{}", c.0)));
            }
            m.set(i, i, self.curve(c).self_int);
        }
        for n in &self.nodes {
            let (a, b) = n.curves();
            if a == b {
                continue;
            }
            if let (Some(&i), Some(&j)) = (idx.get(&a), idx.get(&b)) {
                m.set(i, j, m.get(i, j) + 1);
                m.set(j, i, m.get(j, i) + 1);
            }
        }
        Ok(m)
    }

    pub fn intersection_matrix_by_names(&self, names: &[&str]) -> Result<IntMatrix> {
        let ids = names.iter().map(|n| self.id_of(n)).collect::<Result<Vec<_>>>()?;
        self.intersection_matrix(&ids)
    }

    pub fn full_matrix(&self) -> IntMatrix {
        let ids: Vec<_> = self.curve_ids().collect();
        self.intersection_matrix(&ids).expect("own ids")
    }

    /// `K²` of the current (blown-up) surface.
    pub fn surface_k2(&self) -> i64 {
        self.ambient.k2() - i64::from(self.blowups)
    }

    /// Topological Euler number of the current (blown-up) surface.
    pub fn surface_chi_top(&self) -> i64 {
        self.ambient.chi_top() + i64::from(self.blowups)
    }

    /// `(c̄₁², c̄₂) = (2t₂ − 2r, χ_top + t₂ − 2r)`; invariant under node blow-ups.
    pub fn log_chern(&self) -> (i64, i64) {
        let (r, t2) = (self.r() as i64, self.t2() as i64);
        (2 * t2 - 2 * r, self.surface_chi_top() + t2 - 2 * r)
    }

    /// `(P, K)` with `P = ΣCᵢ² + 5r − 2t₂` and `K = K_S² + 2r − t₂ − P`; invariant under
    /// node blow-ups.
    pub fn pk_invariants(&self) -> (i64, i64) {
        let (r, t2) = (self.r() as i64, self.t2() as i64);
        let sum: i64 = self.curves.iter().map(|c| c.self_int).sum();
        let p = sum + 5 * r - 2 * t2;
        (p, self.surface_k2() + 2 * r - t2 - p)
    }

    /// Sub-configuration on `keep` (in that order) with all nodes among them.
    pub fn restrict(&self, keep: &[CurveId]) -> Result<Configuration> {
        let mut out = Configuration::new(self.ambient);
        let mut map = HashMap::new();
        for &c in keep {
            if c.0 as usize >= self.curves.len() {
                return Err(Error::UnknownCurve(format!("#{}", c.0)));
            }
            let cv = self.curve(c);
            let id = out.push_curve(cv.name.clone(), cv.self_int, cv.origin)?;
            map.insert(c, id);
        }
        for n in &self.nodes {
            let (a, b) = n.curves();
            if let (Some(&x), Some(&y)) = (map.get(&a), map.get(&b)) {
                out.add_node(x, y)?;
            }
        }
        out.blowups = self.blowups;
        Ok(out)
    }

    pub fn restrict_by_names<S: AsRef<str>>(&self, names: &[S]) -> Result<Configuration> {
        let ids = names.iter().map(|n| self.id_of(n.as_ref())).collect::<Result<Vec<_>>>()?;
        self.restrict(&ids)
    }

    /// Blows up `node`; the new (−1)-curve is the last curve of the result.
    ///
    /// Distinct branch curves drop by one each. A self-node of `C` turns `C` into `C − 2E`
    /// (self-intersection −4) meeting `E` twice; such steps are flagged.
    pub fn blow_up(&self, node: NodeId) -> Result<Configuration> {
        let pos = self.nodes.binary_search_by_key(&node, |n| n.id).map_err(|_| Error::UnknownNode(node.0))?;
        let mut out = self.clone();
        let removed = out.nodes.remove(pos);
        let (a, b) = removed.curves();
        out.blowups += 1;
        let step = out.blowups;
        let e = out.push_curve(out.fresh_name(step), -1, Origin::Exceptional(step))?;
        if a == b {
            let c = &mut out.curves[a.0 as usize];
            c.self_int -= 4;
            c.self_nodes -= 1;
            out.flags.push(format!("step {step}: blew up a self-node of {}", c.name));
        } else {
            out.curves[a.0 as usize].self_int -= 1;
            out.curves[b.0 as usize].self_int -= 1;
        }
        out.add_node(a, e)?;
        out.add_node(b, e)?;
        Ok(out)
    }

    pub(crate) fn with_origins(mut self, exceptional: &[(CurveId, u32)]) -> Self {
        for &(c, step) in exceptional {
            self.curves[c.0 as usize].origin = Origin::Exceptional(step);
            self.blowups = self.blowups.max(step);
        }
        self
    }

    /// The exceptional curve created last, if any.
    pub fn last_exceptional(&self) -> Option<CurveId> {
        self.curves.iter().rev().find(|c| matches!(c.origin, Origin::Exceptional(_))).map(|c| c.id)
    }

    fn fresh_name(&self, step: u32) -> String {
        let mut name = format!("E{step}");
        while self.by_name.contains_key(&name) {
            name.push('\'');
        }
        name
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(times: usize) -> (Configuration, CurveId, CurveId) {
        let mut c = Configuration::new(Ambient::K3);
        let a = c.add_curve("X", -2).unwrap();
        let b = c.add_curve("Y", -2).unwrap();
        for _ in 0..times {
            c.add_node(a, b).unwrap();
        }
        (c, a, b)
    }

    #[test]
    fn blow_up_single_node() {
        let (c, a, b) = pair(1);
        let n = c.nodes()[0].id;
        let d = c.blow_up(n).unwrap();
        assert_eq!((d.curve(a).self_int, d.curve(b).self_int), (-3, -3));
        assert_eq!(d.t2(), 2);
        let e = d.last_exceptional().unwrap();
        assert_eq!(d.curve(e).self_int, -1);
        assert_eq!((d.intersection(a, e), d.intersection(b, e), d.intersection(a, b)), (1, 1, 0));
        assert_eq!(c.pk_invariants(), d.pk_invariants());
        assert_eq!(c.log_chern(), d.log_chern());
    }

    #[test]
    fn blow_up_one_of_two_nodes() {
        let (c, a, b) = pair(2);
        let d = c.blow_up(c.nodes()[1].id).unwrap();
        assert_eq!(d.intersection(a, b), 1);
        assert_eq!(d.nodes_between(a, b), vec![c.nodes()[0].id]);
    }

    #[test]
    fn unknown_node_is_an_error() {
        let (c, _, _) = pair(1);
        assert!(matches!(c.blow_up(NodeId(7)), Err(Error::UnknownNode(7))));
    }

    #[test]
    fn i2_restriction() {
        let (c, a, b) = pair(2);
        let m = c.intersection_matrix(&[a, b]).unwrap();
        assert_eq!(m.to_rows(), vec![vec![-2, 2], vec![2, -2]]);
        assert_eq!(c.intersection_matrix(&[]).unwrap().rows(), 0);
    }

    #[test]
    fn empty_invariants() {
        let c = Configuration::new(Ambient::K3);
        assert_eq!(c.log_chern(), (0, 24));
        assert_eq!(c.pk_invariants(), (0, 0));
    }

    #[test]
    fn self_node_blow_up_is_flagged() {
        let mut c = Configuration::new(Ambient::K3);
        let a = c.add_curve("N", 0).unwrap();
        c.add_node(a, a).unwrap();
        assert_eq!(c.curve(a).self_nodes, 1);
        let d = c.blow_up(c.nodes()[0].id).unwrap();
        assert_eq!(d.curve(a).self_int, -4);
        assert_eq!(d.curve(a).self_nodes, 0);
        assert_eq!(d.intersection(a, d.last_exceptional().unwrap()), 2);
        assert_eq!(d.flags().len(), 1);
    }

    #[test]
    fn single_wahl_chain_has_p_one() {
        let mut c = Configuration::new(Ambient::K3);
        let ids: Vec<_> =
            [4, 5, 3, 2, 2].iter().enumerate().map(|(i, &b)| c.add_curve(&format!("W{i}"), -b).unwrap()).collect();
        for w in ids.windows(2) {
            c.add_node(w[0], w[1]).unwrap();
        }
        assert_eq!(c.pk_invariants().0, 1);
    }
}
