//! Infinitely-near blow-ups over one node `X ∩ Y`, tracked as the string of exceptional
//! self-intersections (negated) between `X` and `Y`.

use serde::Serialize;

/// Which neighbour of the newest (−1)-curve the next blow-up is taken with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Side {
    /// Towards `X`.
    Left,
    /// Towards `Y`.
    Right,
}

impl Side {
    pub fn mirror(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// Result of `1 + sides.len()` blow-ups starting at `X ∩ Y`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LocalPattern {
    /// Exceptional curves read from `X` to `Y`; exactly one entry is 1.
    pub ex: Vec<u32>,
    /// Index of the (−1)-curve in `ex`.
    pub one: usize,
    /// Blow-ups on `X` and on `Y`.
    pub dx: u32,
    pub dy: u32,
}

impl LocalPattern {
    pub fn blowups(&self) -> usize {
        self.ex.len()
    }

    /// Non-(−1) exceptional curves hanging off `X`, read outward from `X`.
    pub fn x_tail(&self) -> &[u32] {
        &self.ex[..self.one]
    }

    /// Non-(−1) exceptional curves hanging off `Y`, read outward from `Y`.
    pub fn y_tail(&self) -> Vec<u32> {
        self.ex[self.one + 1..].iter().rev().copied().collect()
    }
}

pub fn simulate(sides: &[Side]) -> LocalPattern {
    let mut p = LocalPattern { ex: vec![1], one: 0, dx: 1, dy: 1 };
    for &s in sides {
        let i = p.one;
        p.ex[i] += 1;
        match s {
            Side::Left => {
                if i == 0 {
                    p.dx += 1
                } else {
                    p.ex[i - 1] += 1
                }
                p.ex.insert(i, 1);
            }
            Side::Right => {
                if i + 1 == p.ex.len() {
                    p.dy += 1
                } else {
                    p.ex[i + 1] += 1
                }
                p.ex.insert(i + 1, 1);
                p.one = i + 1;
            }
        }
    }
    p
}

/// The side sequence whose exceptional string read from `X` is `pattern`, if any.
pub fn sides_for_pattern(pattern: &[u32]) -> Option<Vec<Side>> {
    if pattern.iter().filter(|&&b| b == 1).count() != 1 || pattern.contains(&0) {
        return None;
    }
    let mut ex = pattern.to_vec();
    let mut sides = Vec::new();
    while ex.len() > 1 {
        let j = ex.iter().position(|&b| b == 1)?;
        if j > 0 {
            ex[j - 1] -= 1;
        }
        if j + 1 < ex.len() {
            ex[j + 1] -= 1;
        }
        ex.remove(j);
        if ex.contains(&0) || ex.iter().filter(|&&b| b == 1).count() != 1 {
            return None;
        }
        if j > 0 && ex[j - 1] == 1 {
            sides.push(Side::Right);
        } else if j < ex.len() && ex[j] == 1 {
            sides.push(Side::Left);
        } else {
            return None;
        }
    }
    if ex != [1] {
        return None;
    }
    sides.reverse();
    (simulate(&sides).ex == pattern).then_some(sides)
}

/// All `2^(k−1)` single-(−1) side sequences of `k` blow-ups, in lexicographic order.
pub fn all_sequences(k: usize) -> Vec<Vec<Side>> {
    assert!(k >= 1);
    let m = k - 1;
    (0..1u64 << m)
        .map(|bits| (0..m).map(|i| if bits >> (m - 1 - i) & 1 == 0 { Side::Left } else { Side::Right }).collect())
        .collect()
}
