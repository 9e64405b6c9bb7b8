//! Cyclic quotient singularities through their Hirzebruch–Jung chains.

mod bounds;
mod chain;
mod compose;
mod discrepancy;
mod meridian;
mod quotient;
mod wahl;

pub use bounds::{length_bound, SurfaceClass};
pub use chain::Chain;
pub use compose::{blow_down_compose, contract};
pub use discrepancy::{discrepancies, residual};
pub use meridian::{meridian_exponents, Meridians};
pub use quotient::{hj_eval, hj_expand, CyclicQuotient};
pub use wahl::{
    fibonacci, is_wahl, recognize_t, reduces_to_four, wahl_generate, wahl_generate_capped, wahl_params, TSingularity,
    WahlChains, WahlSingularity, DEFAULT_GENERATE_CAP,
};
