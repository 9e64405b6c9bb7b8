use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::chain::Chain;
use super::discrepancy::discrepancies;
use super::quotient::{hj_eval, CyclicQuotient};
use crate::error::{Error, Result};

/// Default cap on chain length for exhaustive generation (2^24 chains at the cap).
pub const DEFAULT_GENERATE_CAP: usize = 25;

/// `1/n²(1,na−1)` with its resolution chain, `a` read in the chain's orientation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WahlSingularity {
    pub n: BigInt,
    pub a: BigInt,
    pub chain: Chain,
    pub discrepancies: Vec<BigRational>,
}

impl WahlSingularity {
    pub fn quotient(&self) -> CyclicQuotient {
        CyclicQuotient { m: &self.n * &self.n, q: &self.n * &self.a - 1, normalized: false }
    }
}

impl fmt::Display for WahlSingularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(n,a)=({},{})", self.n, self.a)
    }
}

/// Recognizes a Wahl chain. Evaluation and rule-reduction are both run and must agree.
pub fn is_wahl(chain: &Chain) -> Option<WahlSingularity> {
    let by_eval = wahl_params(chain);
    debug_assert_eq!(by_eval.is_some(), reduces_to_four(chain.entries()), "{chain}");
    let (n, a) = by_eval?;
    Some(WahlSingularity { n, a, discrepancies: discrepancies(chain), chain: chain.clone() })
}

/// `(n, a)` when `hj_eval(chain) = (n², na−1)`.
pub fn wahl_params(chain: &Chain) -> Option<(BigInt, BigInt)> {
    let (m, q) = hj_eval(chain);
    let n = m.sqrt();
    if &n * &n != m || n < BigInt::from(2) {
        return None;
    }
    let (a, r) = (q + BigInt::one()).div_rem(&n);
    if !r.is_zero() || a.is_zero() || a >= n || !a.gcd(&n).is_one() {
        return None;
    }
    Some((n, a))
}

/// Inverts the growth rules `[b1+1,...,bl,2]` / `[2,b1,...,bl+1]` down to `[4]`.
pub fn reduces_to_four(entries: &[u32]) -> bool {
    let mut v = entries.to_vec();
    loop {
        match v.as_slice() {
            [4] => return true,
            [] | [_] => return false,
            [first, .., last] => {
                let (first, last) = (*first, *last);
                if first == 2 && last >= 3 {
                    v.remove(0);
                    *v.last_mut().unwrap() -= 1;
                } else if last == 2 && first >= 3 {
                    v.pop();
                    v[0] -= 1;
                } else {
                    return false;
                }
            }
        }
    }
}

/// All Wahl chains of length `len`, sorted; refuses lengths above [`DEFAULT_GENERATE_CAP`].
pub fn wahl_generate(len: usize) -> Result<BTreeSet<Chain>> {
    wahl_generate_capped(len, DEFAULT_GENERATE_CAP)
}

pub fn wahl_generate_capped(len: usize, cap: usize) -> Result<BTreeSet<Chain>> {
    Ok(WahlChains::new(len, cap)?.collect())
}

/// Depth-first enumeration of the Wahl chains of one length; each chain is produced once.
pub struct WahlChains {
    len: usize,
    stack: Vec<Vec<u32>>,
}

impl WahlChains {
    pub fn new(len: usize, cap: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::InvalidChain("length must be >= 1".into()));
        }
        if len > cap {
            return Err(Error::EnumerationCap { len, cap });
        }
        Ok(WahlChains { len, stack: vec![vec![4]] })
    }
}

impl Iterator for WahlChains {
    type Item = Chain;

    fn next(&mut self) -> Option<Chain> {
        while let Some(v) = self.stack.pop() {
            if v.len() == self.len {
                return Some(Chain::from_vec_unchecked(v));
            }
            let mut left = Vec::with_capacity(v.len() + 1);
            left.push(2);
            left.extend_from_slice(&v);
            *left.last_mut().unwrap() += 1;
            let mut right = v;
            right[0] += 1;
            right.push(2);
            self.stack.push(left);
            self.stack.push(right);
        }
        None
    }
}

/// `F_l` with `F_{-1} = F_0 = 1`.
pub fn fibonacci(l: usize) -> BigInt {
    let (mut a, mut b) = (BigInt::one(), BigInt::one());
    for _ in 0..l {
        let c = &a + &b;
        a = b;
        b = c;
    }
    b
}

/// `1/(dn²)(1,dna−1)` with `n >= 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TSingularity {
    pub d: BigInt,
    pub n: BigInt,
    pub a: BigInt,
    pub quotient: CyclicQuotient,
}

impl fmt::Display for TSingularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T: d={},n={},a={}", self.d, self.n, self.a)
    }
}

/// Largest-`n` T-structure of a germ, trying `q` and then `q⁻¹`.
/// Gives up (returns `None`) when `√m` exceeds 10⁸.
pub fn recognize_t(cq: &CyclicQuotient) -> Option<TSingularity> {
    let root = cq.m.sqrt().to_u64().filter(|&r| r <= 100_000_000)?;
    let twists = [cq.q.clone(), cq.q_inverse()];
    for n in (2..=root).rev() {
        let n = BigInt::from(n);
        let n2 = &n * &n;
        let (d, r) = cq.m.div_rem(&n2);
        if !r.is_zero() {
            continue;
        }
        let dn = &d * &n;
        for q in &twists {
            let (a, r) = (q + BigInt::one()).div_rem(&dn);
            if r.is_zero() && !a.is_zero() && a < n && a.gcd(&n).is_one() {
                return Some(TSingularity {
                    d,
                    n,
                    a,
                    quotient: CyclicQuotient { m: cq.m.clone(), q: q.clone(), normalized: cq.normalized && q == &cq.q },
                });
            }
        }
    }
    None
}
