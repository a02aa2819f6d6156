//! Simplex geometry and interval verification of inequalities over edge
//! lengths.

pub mod grad;
pub mod interval;
pub mod simplex;
pub mod spec;
pub mod verify;

pub use interval::Interval;
pub use simplex::{arc, coordinate_oracle, delta6, delta_y, dih, dih2, dih3, eta, sol, Real, Unrealizable};
pub use spec::{emit_specs, parse_specs, IneqSpec};
pub use verify::{verify, Status, VerifyResult, DEFAULT_BUDGET};
