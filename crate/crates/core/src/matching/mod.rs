//! Error-tolerant matching of an attributed graph against an FDG.

pub mod bnb;
pub mod constraints;
pub mod cost;
pub mod count;
pub mod oracle;

pub use bnb::{bnb_distance, bnb_search, MatchResult, SearchOptions, TraceEvent};
pub use constraints::{check_constraints, cyclic_triple, Constraint, ConstraintReport};
pub use cost::{arc_cost, labelling_cost, second_order_cost, vertex_cost, LabellingCost, RelationCounts};
pub use count::{count_labellings, count_search_nodes};
pub use oracle::{exhaustive_oracle, exhaustive_oracle_masked, ORACLE_LIMIT};

use crate::error::{Error, Result};
use crate::fdg::Fdg;
use crate::graph::AttributedGraph;
use crate::labelling::Labelling;

pub(crate) fn check_labelling(f: &Labelling, g: &AttributedGraph, fdg: &Fdg) -> Result<()> {
    if f.len() != g.order() {
        return Err(Error::InvalidLabelling(format!(
            "labelling covers {} vertices but the graph has {}",
            f.len(),
            g.order()
        )));
    }
    f.check_injective()?;
    if let Some(t) = f.vertex_map.iter().flatten().find(|t| **t >= fdg.order()) {
        return Err(Error::InvalidLabelling(format!("target {t} outside the FDG")));
    }
    Ok(())
}
