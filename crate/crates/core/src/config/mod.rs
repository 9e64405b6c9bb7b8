//! Nodal curve configurations and the blow-up engine.

mod configuration;
mod format;
mod geography;
mod matrix;

pub use configuration::{Ambient, Configuration, Curve, CurveId, Node, NodeId, Origin};
pub use format::{emit_configuration, parse_configuration};
pub use geography::{enriques_geography, family_dim, geography_check, Geography};
pub use matrix::IntMatrix;

/// Determinant of a square integer matrix.
pub fn det_exact(m: &IntMatrix) -> num_bigint::BigInt {
    m.det_exact()
}
