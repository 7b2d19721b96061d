//! Function-described graphs (FDGs): probabilistic prototypes of sets of
//! attributed graphs, with synthesis, error-tolerant matching, sub-optimal
//! matchers, clustering and an experiment harness.

pub mod attr;
pub mod baseline;
pub mod clustering;
pub mod efficient;
pub mod error;
pub mod fdg;
pub mod forg;
pub mod graph;
pub mod harness;
pub mod labelling;
pub mod matching;
pub mod pdf;
pub mod synthesis;
pub mod weights;

pub use attr::{AttrTuple, AttrValue, Bin, Binning};
pub use error::{Error, Result};
pub use fdg::{co_occurrence, extend_fdg, unconditional_arc_prob, verify_identities, BoolMatrix, Fdg, RelationKind, Relations, Role};
pub use graph::{arc_number, extend_ag, AttributedGraph};
pub use labelling::{induced_arc_map, CommonLabelling, Labelling};
pub use pdf::{prob_cost, Pdf};
pub use synthesis::{ag_to_fdg, synth_from_labelled_ags, synth_from_labelled_fdgs, update_fdg_with_ag, Binnings};
pub use weights::{ConstraintMode, CostWeights};
pub use forg::{forg_distance, forg_entropy, forg_synthesize, outcome_probability, Forg};
pub use matching::{bnb_distance, count_labellings, count_search_nodes, exhaustive_oracle, labelling_cost, MatchResult};
