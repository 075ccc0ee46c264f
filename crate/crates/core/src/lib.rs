//! Finite-model verification for grounded causal action models.
//!
//! States, actions and processes are explicit finite maps. On top of that
//! algebra the crate decides determination, effectiveness, invariance,
//! surgicality and naturality, encodes acyclic structural causal models as
//! action models, and provides a deterministic domino micro-world to ground
//! abstract models in.

pub mod abstraction;
pub mod checkers;
pub mod cli;
pub mod domino;
pub mod error;
pub mod factored;
pub mod io;
pub mod limits;
pub mod map;
pub mod model;
pub mod report;
pub mod scm;
pub mod set;

pub use error::{Error, Result};
pub use factored::{FactoredSpace, VarSet, Variable};
pub use limits::Limits;
pub use map::TotalMap;
pub use model::{ActionModel, ActionWord};
pub use set::FiniteSet;
