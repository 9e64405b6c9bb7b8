//! Marked surfaces and their certification: ampleness, K², obstructions, π₁.

mod marked;
mod nef;
mod pi1;
mod report;

pub use marked::{chain_entries, path_components, MarkedSurface, Membership};
pub use nef::{discrepancy_sum, nef_ample_check, Contraction, NefReport, Positivity, Witness};
pub use pi1::{pi1_verdict, Pi1Kind, Pi1Verdict};
pub use report::{
    k_squared, obstruction, obstruction_dim, singularity_report, Obstruction, SingularityEntry, SurfaceReport,
};
