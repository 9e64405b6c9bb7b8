//! Blow-up plans: replayable scripts, inference from records, and search over the extremal
//! configuration.

mod blowup;
mod infer;
mod local;
mod mark;
mod search;

pub use blowup::{BlowupPlan, PlanStep};
pub use infer::{
    infer_plan, infer_unbracketed, Ambiguity, GroupReading, InferOptions, InferOutcome, Inferred, Interpretation,
    Target,
};
pub use local::{all_sequences, sides_for_pattern, simulate, LocalPattern, Side};
pub use mark::{ade_chains, mark_against, wahl_components};
pub use search::{search_constructions, SearchOutcome, SearchParams};
