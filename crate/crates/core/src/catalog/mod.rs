//! Shipped data: the extremal configuration, construction records and expected values.

mod a0;
mod expected;
mod record;
mod verify;

pub use a0::{
    incidence_table, reconstruct_a0, A0Constraint, A0Model, Incidence, ReconstructOptions, Reconstruction, A0_JSON,
    FIBERS, SECTIONS,
};
pub use expected::{
    parse_expected, BracketExample, Expected, ExpectedChain, MainConstruction, TJoin, Wormhole, EXPECTED_JSON,
    RECORDS_TXT,
};
pub use record::{parse_record, parse_records, StatedChain, Step, SurfaceRecord};
pub use verify::{
    contact_exponents, shipped_constraints, validate_a0, verify_all, verify_bracket_examples, verify_joins,
    verify_main, verify_record, Check, Ledger, Status, VerifyOptions,
};
