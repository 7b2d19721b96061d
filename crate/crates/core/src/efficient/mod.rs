//! Sub-optimal matchers built on expanded vertices and relaxation.

pub mod expanded;
pub mod relax;
pub mod suboptimal;

pub use expanded::{
    expanded_max_distance, expanded_vertex_distance, split_ag, split_fdg, AgExpandedVertex, FdgExpandedVertex,
};
pub use relax::{initial_probabilities, relax_probabilities, ProbMatrix, RelaxInit, RelaxParams};
pub use suboptimal::{allowed_mask, forbid_matrix, suboptimal_distance, SubMethod};
