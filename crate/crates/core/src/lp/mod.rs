//! Linear programs: a generic model and simplex solver, the relaxation built
//! over a plane graph, face refinements, branching and bounding.

pub mod bound;
pub mod branch;
mod format;
pub mod ineqdb;
mod model;
pub mod refine;
pub mod relaxation;
pub mod simplex;

pub use bound::{bound_graph, bound_model, BoundReport, NodeStatus, RuleSpec, Strategy, TreeNode, Verdict};
pub use branch::{branch, BranchRule};
pub use format::{parse_lp_text, to_lp_text};
pub use ineqdb::IneqDb;
pub use model::{Derived, ExactCheck, LpError, LpModel, Outcome, Row, Var};
pub use refine::{refine_face, Refinement, Role};
pub use relaxation::{build_relaxation, schema, Schema};
pub use simplex::Rel;
