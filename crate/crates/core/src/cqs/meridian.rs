use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::chain::Chain;

/// Meridian exponents `t₁..t_ℓ` relative to the meridian of the last curve, plus `t₀`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Meridians {
    pub t: Vec<BigInt>,
    /// Equals the order `m` of the chain's germ.
    pub t0: BigInt,
}

pub fn meridian_exponents(chain: &Chain) -> Meridians {
    let b = chain.entries();
    let l = b.len();
    // ext[i] = tᵢ for i in 0..=l+1
    let mut ext = vec![BigInt::zero(); l + 2];
    ext[l] = BigInt::one();
    for i in (1..=l).rev() {
        ext[i - 1] = BigInt::from(b[i - 1]) * &ext[i] - &ext[i + 1];
    }
    Meridians { t0: ext[0].clone(), t: ext[1..=l].to_vec() }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(v: &[u32]) -> (Vec<i64>, i64) {
        let m = meridian_exponents(&Chain::new(v.to_vec()).unwrap());
        let t = m.t.iter().map(|x| i64::try_from(x).unwrap()).collect();
        (t, i64::try_from(&m.t0).unwrap())
    }

    #[test]
    fn examples() {
        assert_eq!(run(&[4]), (vec![1], 4));
        assert_eq!(run(&[5, 2]), (vec![2, 1], 9));
        assert_eq!(run(&[2, 5]), (vec![5, 1], 9));
    }
}
