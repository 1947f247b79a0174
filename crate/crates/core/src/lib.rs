//! Strongly regular graphs, rank 3 permutation groups and coherent
//! configurations, with an exact construction of the Higman–Sims graph from
//! the Witt design S(3,6,22).

pub mod aut;
pub mod coherent;
pub mod design;
pub mod feasibility;
pub mod graph;
pub mod hs;
pub mod perm;

pub use graph::{Graph, SrgParams};
pub use perm::{PermGroup, Permutation};
