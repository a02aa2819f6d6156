//! Tame plane graphs: data model, tameness checks, patch enumeration, LP
//! relaxations with branch and bound, and interval verification of simplex
//! inequalities.

pub mod constants;
pub mod enumerate;
pub mod geometry;
pub mod lp;
pub mod par;
pub mod planegraph;
pub mod sexpr;
pub mod tame;

pub use constants::{constants, ConstantTable};
pub use planegraph::{PlaneGraph, PlaneGraphError};
