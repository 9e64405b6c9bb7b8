use std::collections::BTreeSet;

mod common;

use common::{eval_oracle, is_fibonacci_shape, presentation_solutions, wahl_oracle};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::prelude::*;
use wahl_core::cqs::{
    discrepancies, fibonacci, hj_eval, hj_expand, is_wahl, meridian_exponents, residual, wahl_generate, Chain,
};

const CASES: u32 = 10_000;

fn chain_strategy(max_len: usize, max_entry: u32) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(2..=max_entry, 1..=max_len)
}

fn coprime_pair() -> impl Strategy<Value = (u64, u64)> {
    (2u64..1_000_000_000_000).prop_flat_map(|m| (Just(m), 1..m)).prop_filter("coprime", |(m, q)| m.gcd(q) == 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(CASES))]

    #[test]
    fn expand_then_eval_is_identity((m, q) in coprime_pair()) {
        let chain = hj_expand(&m.into(), &q.into()).unwrap();
        prop_assert!(chain.entries().iter().all(|&b| b >= 2));
        prop_assert_eq!(hj_eval(&chain), (BigInt::from(m), BigInt::from(q)));
        prop_assert_eq!(eval_oracle(chain.entries()), (BigInt::from(m), BigInt::from(q)));
    }

    #[test]
    fn eval_then_expand_is_identity(b in chain_strategy(16, 12)) {
        let chain = Chain::new(b.clone()).unwrap();
        let (m, q) = hj_eval(&chain);
        prop_assert_eq!((m.clone(), q.clone()), eval_oracle(&b));
        prop_assert_eq!(hj_expand(&m, &q).unwrap(), chain);
    }

    #[test]
    fn wahl_recognition_matches_oracle(b in chain_strategy(8, 7)) {
        let got = is_wahl(&Chain::new(b.clone()).unwrap()).map(|w| (w.n, w.a));
        prop_assert_eq!(got, wahl_oracle(&b));
    }

    #[test]
    fn discrepancies_solve_their_system(b in chain_strategy(12, 9)) {
        let chain = Chain::new(b).unwrap();
        let d = discrepancies(&chain);
        prop_assert!(residual(&chain, &d).iter().all(Zero::is_zero));
        let minus_one = -BigRational::one();
        for x in &d {
            prop_assert!(*x > minus_one && !x.is_positive());
        }
    }

    #[test]
    fn meridian_t0_is_the_order(b in chain_strategy(8, 9)) {
        let chain = Chain::new(b).unwrap();
        let mer = meridian_exponents(&chain);
        prop_assert_eq!(mer.t0, hj_eval(&chain).0);
        prop_assert!(mer.t.last().unwrap().is_one());
    }

    #[test]
    fn wahl_growth_stays_wahl(path in prop::collection::vec(any::<bool>(), 0..20)) {
        let mut v = vec![4u32];
        for left in path {
            if left {
                v.insert(0, 2);
                *v.last_mut().unwrap() += 1;
            } else {
                v[0] += 1;
                v.push(2);
            }
        }
        let w = is_wahl(&Chain::new(v.clone()).unwrap());
        prop_assert!(w.is_some());
        prop_assert!(w.unwrap().n <= fibonacci(v.len()));
    }
}

#[test]
fn generation_counts_sums_and_fibonacci_bound() {
    for l in 1..=12 {
        let all = wahl_generate(l).unwrap();
        assert_eq!(all.len(), 1 << (l - 1), "ℓ = {l}");
        let mut at_bound = 0;
        for c in &all {
            assert_eq!(c.sum(), 3 * l as u64 + 1, "{c}");
            let w = is_wahl(c).unwrap_or_else(|| panic!("{c} is not Wahl"));
            let f = fibonacci(l);
            assert!(w.n <= f, "{c}: n = {} > F = {f}", w.n);
            assert_eq!(w.n == f, is_fibonacci_shape(c.entries()), "{c}");
            at_bound += usize::from(w.n == f);
        }
        assert_eq!(at_bound, if l == 1 { 1 } else { 2 }, "ℓ = {l}");
    }
}

#[test]
fn generation_equals_brute_force() {
    fn rec(prefix: &mut Vec<u32>, left: usize, budget: u32, out: &mut BTreeSet<Vec<u32>>) {
        if left == 0 {
            if budget == 0 && wahl_oracle(prefix).is_some() {
                out.insert(prefix.clone());
            }
            return;
        }
        for b in 2..=budget.saturating_sub(2 * (left as u32 - 1)) {
            prefix.push(b);
            rec(prefix, left - 1, budget - b, out);
            prefix.pop();
        }
    }
    for l in 1..=8 {
        let mut brute = BTreeSet::new();
        rec(&mut Vec::new(), l, 3 * l as u32 + 1, &mut brute);
        let got: BTreeSet<Vec<u32>> = wahl_generate(l).unwrap().into_iter().map(|c| c.entries().to_vec()).collect();
        assert_eq!(got, brute, "ℓ = {l}");
    }
}

#[test]
fn meridians_agree_with_group_presentation() {
    let mut checked = 0;
    for l in 1..=5usize {
        let mut stack: Vec<Vec<u32>> = vec![vec![]];
        while let Some(v) = stack.pop() {
            if v.len() < l {
                for b in 2..=7 {
                    let mut w = v.clone();
                    w.push(b);
                    stack.push(w);
                }
                continue;
            }
            let chain = Chain::new(v.clone()).unwrap();
            let m = hj_eval(&chain).0.to_u64().unwrap();
            if m.checked_pow(l as u32).is_none_or(|p| p > 400_000) {
                continue;
            }
            let sols = presentation_solutions(&v, m);
            // The link group is cyclic of order m: Hom(G, ℤ/m) has m elements.
            assert_eq!(sols.len() as u64, m, "{chain}");
            let normalized: Vec<&Vec<u64>> = sols.iter().filter(|x| x[l - 1] == 1).collect();
            assert_eq!(normalized.len(), 1, "{chain}");
            let t: Vec<u64> =
                meridian_exponents(&chain).t.iter().map(|x| x.mod_floor(&BigInt::from(m)).to_u64().unwrap()).collect();
            assert_eq!(&t, normalized[0], "{chain}");
            checked += 1;
        }
    }
    assert!(checked > 100, "only {checked} chains small enough");
}

#[test]
fn stated_long_chains() {
    let c = hj_expand(&BigInt::from(2168u64 * 2168), &BigInt::from(2168u64 * 459 - 1)).unwrap();
    let w = is_wahl(&c).unwrap();
    assert_eq!((w.n, w.a), (2168.into(), 459.into()));
    assert_eq!(
        is_wahl(&Chain::new(vec![4, 2, 3, 5, 4, 2, 2]).unwrap()).map(|w| (w.n, w.a)),
        Some((27.into(), 8.into()))
    );
}
