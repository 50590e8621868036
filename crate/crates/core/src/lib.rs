//! Local-unitary entanglement measure Γ for bipartite `M⊗N` systems.

pub mod bell_analysis;
pub mod cli;
pub mod conventions;
pub mod error;
pub mod local_unitary;
pub mod measures;
pub mod phase_povm;
pub mod rng;
pub mod states;
pub mod tensor;

pub use error::{Error, Result};
