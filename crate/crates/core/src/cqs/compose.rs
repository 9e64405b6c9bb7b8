use super::chain::Chain;
use super::quotient::{eval_entries, CyclicQuotient};
use crate::error::{Error, Result};

/// Contracts every entry equal to 1 until all entries are `>= 2`.
///
/// An interior 1 is removed and both neighbours drop by one; an end 1 is removed and its
/// single neighbour drops by one.
pub fn contract(mut v: Vec<i64>) -> Result<Vec<i64>> {
    while let Some(i) = v.iter().position(|&b| b == 1) {
        if v.len() == 1 {
            return Err(Error::OverContraction);
        }
        if i > 0 {
            v[i - 1] -= 1;
        }
        if i + 1 < v.len() {
            v[i + 1] -= 1;
        }
        v.remove(i);
        if v.iter().any(|&b| b <= 0) {
            return Err(Error::ZeroEntry);
        }
    }
    Ok(v)
}

/// Contracts `[left, 1, right]` and returns the resulting germ, normalized.
pub fn blow_down_compose(left: &Chain, right: &Chain) -> Result<CyclicQuotient> {
    let mut v: Vec<i64> = left.entries().iter().map(|&b| i64::from(b)).collect();
    v.push(1);
    v.extend(right.entries().iter().map(|&b| i64::from(b)));
    let v = contract(v)?;
    let (m, q) = eval_entries(v.into_iter());
    Ok(CyclicQuotient::new(m, q)?.normalize())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn ch(v: &[u32]) -> Chain {
        Chain::new(v.to_vec()).unwrap()
    }

    #[test]
    fn four_one_four() {
        let cq = blow_down_compose(&ch(&[4]), &ch(&[4])).unwrap();
        assert_eq!((cq.m, cq.q), (BigInt::from(8), BigInt::from(3)));
    }

    #[test]
    fn contraction_edge_cases() {
        assert_eq!(contract(vec![1, 3]).unwrap(), vec![2]);
        assert_eq!(contract(vec![3, 1]).unwrap(), vec![2]);
        assert!(matches!(contract(vec![1]), Err(Error::OverContraction)));
        assert!(matches!(contract(vec![2, 1, 2]), Err(Error::ZeroEntry)));
        assert!(matches!(contract(vec![1, 2]), Err(Error::OverContraction)));
    }

    #[test]
    fn self_join_of_18_7() {
        let c = ch(&[3, 3, 2, 6, 3, 2]);
        let cq = blow_down_compose(&c, &c).unwrap();
        assert_eq!((cq.m, cq.q), (BigInt::from(648), BigInt::from(251)));
    }
}
