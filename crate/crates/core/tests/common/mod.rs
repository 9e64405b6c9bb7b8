//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// `m/q` by exact rational back-substitution.
pub fn eval_oracle(b: &[u32]) -> (BigInt, BigInt) {
    let mut x = BigRational::from_integer(BigInt::from(*b.last().unwrap()));
    for &bi in b.iter().rev().skip(1) {
        x = BigRational::from_integer(BigInt::from(bi)) - x.recip();
    }
    (x.numer().clone(), x.denom().clone())
}

pub fn wahl_oracle(b: &[u32]) -> Option<(BigInt, BigInt)> {
    let (m, q) = eval_oracle(b);
    let n = m.sqrt();
    if &n * &n != m || n < BigInt::from(2) {
        return None;
    }
    let (a, r) = (&q + BigInt::one()).div_rem(&n);
    (r.is_zero() && a.gcd(&n).is_one()).then_some((n, a))
}

pub fn is_fibonacci_shape(b: &[u32]) -> bool {
    // [3,…,3,5,3,…,3,2] or its reversal, with the 3-blocks as long as possible on the 2's far side.
    let l = b.len();
    if l == 1 {
        return b == [4];
    }
    let shape = |v: &[u32]| {
        let i = (l - 1) / 2;
        let j = (l - 2) / 2;
        let mut want = vec![3; i];
        want.push(5);
        want.extend(std::iter::repeat_n(3, j));
        want.push(2);
        v == want.as_slice()
    };
    let rev: Vec<u32> = b.iter().rev().copied().collect();
    shape(b) || shape(&rev)
}

/// Solutions of `M x ≡ 0 (mod m)` over `(ℤ/m)^ℓ`, where `M` is the chain's intersection matrix,
/// by exhaustive enumeration.
pub fn presentation_solutions(b: &[u32], m: u64) -> Vec<Vec<u64>> {
    let l = b.len();
    let mut out = Vec::new();
    let mut x = vec![0u64; l];
    loop {
        let ok = (0..l).all(|i| {
            let mut s = -(i128::from(b[i])) * i128::from(x[i]);
            if i > 0 {
                s += i128::from(x[i - 1]);
            }
            if i + 1 < l {
                s += i128::from(x[i + 1]);
            }
            s.rem_euclid(i128::from(m)) == 0
        });
        if ok {
            out.push(x.clone());
        }
        let mut k = 0;
        loop {
            if k == l {
                return out;
            }
            x[k] += 1;
            if x[k] < m {
                break;
            }
            x[k] = 0;
            k += 1;
        }
    }
}

/// Laplace expansion along the first row.
pub fn cofactor_det(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &v)| v).collect())
                .collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * i128::from(m[0][j]) * cofactor_det(&minor)
        })
        .sum()
}
