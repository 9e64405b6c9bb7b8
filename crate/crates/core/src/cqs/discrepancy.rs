use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::chain::Chain;

/// Solves `−bᵢdᵢ + dᵢ₋₁ + dᵢ₊₁ = bᵢ − 2`, `d₀ = d_{ℓ+1} = 0`, exactly.
///
/// The matrix is negative definite for `bᵢ >= 2`, so the forward sweep never divides by zero.
pub fn discrepancies(chain: &Chain) -> Vec<BigRational> {
    let b: Vec<BigRational> = chain.entries().iter().map(|&x| rat(i64::from(x))).collect();
    let l = b.len();
    // Forward sweep: row i becomes dᵢ + cᵢ dᵢ₊₁ = rᵢ.
    let mut c = Vec::with_capacity(l);
    let mut r = Vec::with_capacity(l);
    for i in 0..l {
        let rhs = &b[i] - rat(2);
        let (diag, rhs) = if i == 0 { (-&b[i], rhs) } else { (-&b[i] - &c[i - 1], rhs - &r[i - 1]) };
        assert!(!diag.is_zero(), "singular discrepancy system");
        c.push(rat(1) / &diag);
        r.push(rhs / diag);
    }
    let mut d = vec![BigRational::zero(); l];
    for i in (0..l).rev() {
        d[i] = if i + 1 < l { &r[i] - &c[i] * &d[i + 1] } else { r[i].clone() };
    }
    d
}

/// Left-hand side minus right-hand side of the defining system, row by row.
pub fn residual(chain: &Chain, d: &[BigRational]) -> Vec<BigRational> {
    let b = chain.entries();
    let at = |i: isize| -> BigRational {
        if i < 0 || i as usize >= d.len() {
            BigRational::zero()
        } else {
            d[i as usize].clone()
        }
    };
    (0..b.len())
        .map(|i| {
            let bi = rat(i64::from(b[i]));
            -&bi * &d[i] + at(i as isize - 1) + at(i as isize + 1) - (bi - rat(2))
        })
        .collect()
}

fn rat(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}
