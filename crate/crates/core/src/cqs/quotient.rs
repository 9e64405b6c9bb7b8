use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::chain::Chain;
use crate::error::{Error, Result};

/// The germ `1/m(1,q)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CyclicQuotient {
    pub m: BigInt,
    pub q: BigInt,
    pub normalized: bool,
}

impl CyclicQuotient {
    pub fn new(m: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Self> {
        let (m, q) = (m.into(), q.into());
        check_pair(&m, &q)?;
        Ok(CyclicQuotient { m, q, normalized: false })
    }

    /// `q⁻¹ mod m`; the same germ read from the other end of its chain.
    pub fn q_inverse(&self) -> BigInt {
        mod_inverse(&self.q, &self.m)
    }

    /// Replaces `q` by `min(q, q⁻¹ mod m)`. Idempotent.
    pub fn normalize(&self) -> Self {
        let qi = self.q_inverse();
        let q = if qi < self.q { qi } else { self.q.clone() };
        CyclicQuotient { m: self.m.clone(), q, normalized: true }
    }

    pub fn same_germ(&self, other: &Self) -> bool {
        self.normalize() == other.normalize()
    }

    pub fn chain(&self) -> Chain {
        hj_expand(&self.m, &self.q).expect("valid by construction")
    }
}

impl fmt::Display for CyclicQuotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "1/{}(1,{})", self.m, self.q)
    }
}

fn check_pair(m: &BigInt, q: &BigInt) -> Result<()> {
    if !(q.sign() == num_bigint::Sign::Plus && q < m && m.gcd(q).is_one()) {
        return Err(Error::InvalidQuotient { m: m.to_string(), q: q.to_string() });
    }
    Ok(())
}

pub(crate) fn mod_inverse(q: &BigInt, m: &BigInt) -> BigInt {
    let e = q.extended_gcd(m);
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(m)
}

/// Expands `m/q` as `b1 - 1/(b2 - ...)` with every `bi >= 2`.
pub fn hj_expand(m: &BigInt, q: &BigInt) -> Result<Chain> {
    check_pair(m, q)?;
    let (mut m, mut q) = (m.clone(), q.clone());
    let mut out = Vec::new();
    while !q.is_zero() {
        let b = m.div_ceil(&q);
        let next = &b * &q - &m;
        out.push(b.to_u32().ok_or_else(|| Error::InvalidChain(format!("entry {b} exceeds u32")))?);
        m = q;
        q = next;
    }
    Ok(Chain::from_vec_unchecked(out))
}

/// Evaluates a chain to its reduced fraction `(m, q)`.
pub fn hj_eval(chain: &Chain) -> (BigInt, BigInt) {
    eval_entries(chain.entries().iter().map(|&b| i64::from(b)))
}

/// Bottom-up evaluation of arbitrary integer entries (no canonicity required).
pub(crate) fn eval_entries<I>(entries: I) -> (BigInt, BigInt)
where
    I: DoubleEndedIterator<Item = i64>,
{
    let mut num = BigInt::one();
    let mut den = BigInt::zero();
    for b in entries.rev() {
        let next = BigInt::from(b) * &num - &den;
        den = num;
        num = next;
    }
    (num, den)
}
