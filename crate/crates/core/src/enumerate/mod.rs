//! Generation of tame graphs by repeatedly carving complete faces out of
//! incomplete ones.

mod fsm;
mod partial;
mod patch;

pub use fsm::{
    enumerate, enumerate_tame, initial_states, transitions, EnumConfig, EnumReport, FaceSet, Prunes, Seed, State,
    Transition, PARTIAL_MARKER,
};
pub use partial::{arrangements, PartialError, PartialPlaneGraph};
pub use patch::{apply_patch, patches, Patch, PatchCache, PatchError, Pv};
