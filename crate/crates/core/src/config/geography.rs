use serde::Serialize;

/// Outcome of the log-Chern geography test for `P` Wahl chains and `K² = k2` on a K3.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Geography {
    pub p: i64,
    pub k2: i64,
    /// `k2 ≤ 14 − (3P−2)/5`.
    pub admissible: bool,
    pub r: i64,
    pub t2: i64,
    pub nodes_to_blow_up: i64,
    pub family_dim: i64,
}

pub fn geography_check(p: i64, k2: i64) -> Geography {
    Geography {
        p,
        k2,
        admissible: 5 * k2 <= 70 - (3 * p - 2),
        r: p + 2 * k2,
        t2: 3 * k2 + p,
        nodes_to_blow_up: p + k2,
        family_dim: family_dim(k2),
    }
}

/// Dimension of the family of smoothings, `20 − 2K²`.
pub fn family_dim(k2: i64) -> i64 {
    20 - 2 * k2
}

/// Enriques analogue: admissible iff `K² ≤ 7 − (3P−1)/5`; returns `(admissible, c̄₂)`.
pub fn enriques_geography(p: i64, k2: i64) -> (bool, i64) {
    (5 * k2 <= 35 - (3 * p - 1), 12 - p - k2)
}
