use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::Serialize;

use super::marked::{MarkedSurface, Membership};
use crate::cqs::meridian_exponents;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pi1Kind {
    Trivial,
    /// No sufficient condition applied; never read as "nontrivial".
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Pi1Verdict {
    pub kind: Pi1Kind,
    pub justification: Vec<String>,
}

/// Sufficient conditions for a simply connected smoothing, closed under propagation.
///
/// Each Wahl chain carries `g = gcd(n², imposed exponents)`; the chain's meridian generator
/// dies when `g = 1`. A free rational curve meeting the Wahl chains transversally imposes
/// `tᵢ` on chain `c` once all of its other contacts lie on dead chains and it meets `c` at
/// exactly one point, on curve `i`. Coprime indices joined end-to-end kill both chains.
pub fn pi1_verdict(ms: &MarkedSurface) -> Pi1Verdict {
    let surface = ms.surface();
    let chains = ms.wahl();
    let k = chains.len();
    let exps: Vec<Vec<BigInt>> = chains.iter().map(|w| meridian_exponents(&w.chain).t).collect();
    let mut g: Vec<BigInt> = chains.iter().map(|w| &w.n * &w.n).collect();
    let mut why = Vec::new();
    if k == 0 {
        return Pi1Verdict { kind: Pi1Kind::Trivial, justification: vec!["no Wahl chains".into()] };
    }
    let contacts = |gamma| -> Vec<(usize, usize)> {
        surface
            .nodes_on(gamma)
            .filter(|n| !n.is_self_node())
            .filter_map(|n| match ms.membership(n.other(gamma)) {
                Membership::Wahl { chain, pos } => Some((chain, pos)),
                _ => None,
            })
            .collect()
    };
    let is_end = |(c, p): (usize, usize)| p == 0 || p + 1 == chains[c].chain.len();
    let free: Vec<_> = ms.free_curves().iter().copied().filter(|&c| surface.curve(c).self_nodes == 0).collect();

    for &gamma in &free {
        if let [x, y] = contacts(gamma).as_slice() {
            let (x, y) = (*x, *y);
            if x.0 != y.0
                && is_end(x)
                && is_end(y)
                && chains[x.0].n.gcd(&chains[y.0].n).is_one()
                && !(g[x.0].is_one() && g[y.0].is_one())
            {
                g[x.0] = BigInt::one();
                g[y.0] = BigInt::one();
                why.push(format!(
                    "(I) {} joins ends of chains {} and {} with coprime indices {} and {}",
                    surface.name(gamma),
                    x.0 + 1,
                    y.0 + 1,
                    chains[x.0].n,
                    chains[y.0].n
                ));
            }
        }
    }
    loop {
        let mut changed = false;
        for &gamma in &free {
            let hits = contacts(gamma);
            let live: Vec<_> = hits.iter().copied().filter(|&(c, _)| !g[c].is_one()).collect();
            let [(c, pos)] = live.as_slice() else { continue };
            let t = &exps[*c][*pos];
            let next = g[*c].gcd(t);
            if next != g[*c] {
                let rule = if hits.len() == 1 && is_end((*c, *pos)) { "(II)" } else { "meridian" };
                why.push(format!(
                    "{rule} {} meets chain {} once at position {} imposing γ^{t} = 1; gcd now {next}",
                    surface.name(gamma),
                    c + 1,
                    pos + 1
                ));
                g[*c] = next;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let open: Vec<usize> = (0..k).filter(|&c| !g[c].is_one()).collect();
    if open.is_empty() {
        Pi1Verdict { kind: Pi1Kind::Trivial, justification: why }
    } else {
        for c in open {
            why.push(format!("chain {} ({}) keeps gcd {}", c + 1, chains[c].chain, g[c]));
        }
        Pi1Verdict { kind: Pi1Kind::Inconclusive, justification: why }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{Ambient, Configuration, CurveId};

    fn chain(c: &mut Configuration, prefix: &str, entries: &[i64]) -> Vec<CurveId> {
        let ids: Vec<_> =
            entries.iter().enumerate().map(|(i, &b)| c.add_curve(&format!("{prefix}{i}"), -b).unwrap()).collect();
        for w in ids.windows(2) {
            c.add_node(w[0], w[1]).unwrap();
        }
        ids
    }

    #[test]
    fn coprime_end_join_is_trivial() {
        let mut c = Configuration::new(Ambient::K3);
        let a = chain(&mut c, "A", &[4]);
        let b = chain(&mut c, "B", &[4, 2, 3, 5, 4, 2, 2]);
        let e = c.add_curve("E", -1).unwrap();
        c.add_node(a[0], e).unwrap();
        c.add_node(b[6], e).unwrap();
        let ms = MarkedSurface::with_blowups(c, vec![a, b], vec![], 0).unwrap();
        let v = pi1_verdict(&ms);
        assert_eq!(v.kind, Pi1Kind::Trivial);
        assert!(v.justification[0].starts_with("(I)"));
    }

    #[test]
    fn lone_chain_is_inconclusive() {
        let mut c = Configuration::new(Ambient::K3);
        let a = chain(&mut c, "A", &[5, 2]);
        let ms = MarkedSurface::with_blowups(c, vec![a], vec![], 0).unwrap();
        assert_eq!(pi1_verdict(&ms).kind, Pi1Kind::Inconclusive);
    }

    #[test]
    fn end_contact_is_trivial() {
        let mut c = Configuration::new(Ambient::K3);
        let a = chain(&mut c, "A", &[5, 2]);
        let e = c.add_curve("E", -1).unwrap();
        c.add_node(a[0], e).unwrap();
        let ms = MarkedSurface::with_blowups(c, vec![a], vec![], 0).unwrap();
        let v = pi1_verdict(&ms);
        assert_eq!(v.kind, Pi1Kind::Trivial);
        assert!(v.justification[0].starts_with("(II)"));
    }

    #[test]
    fn shared_factor_stays_inconclusive() {
        let mut c = Configuration::new(Ambient::K3);
        let a = chain(&mut c, "A", &[2, 2, 6]);
        let t = meridian_exponents(&crate::cqs::Chain::new(vec![2, 2, 6]).unwrap()).t;
        assert_eq!(t, vec![BigInt::from(11), BigInt::from(6), BigInt::from(1)]);
        let e = c.add_curve("E", -1).unwrap();
        c.add_node(a[1], e).unwrap();
        let ms = MarkedSurface::with_blowups(c, vec![a], vec![], 0).unwrap();
        let v = pi1_verdict(&ms);
        assert_eq!(v.kind, Pi1Kind::Inconclusive);
        assert!(v.justification.last().unwrap().contains("gcd 2"));
    }
}
