//! Exact toolkit for Wahl-singularity degenerations of K3 surfaces.
//!
//! * [`cqs`] — Hirzebruch–Jung continued fractions, Wahl and T recognition,
//!   discrepancies, chain joins, meridian exponents.
//! * [`config`] — nodal curve configurations, intersection matrices, log
//!   Chern numbers and the blow-up engine.
//! * [`surface`] — marked surfaces: nef/ample certification, obstruction
//!   dimension, singularity and π₁ reports.
//! * [`catalog`] — the extremal configuration 𝒜₀, construction records and
//!   the verification ledger.
//! * [`plan`] — blow-up plan inference and construction search.
//!
//! All arithmetic is exact.

pub mod catalog;
pub mod config;
pub mod cqs;
pub mod error;
pub mod plan;
pub mod surface;

pub use error::{Error, Result};
