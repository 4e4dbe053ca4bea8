//! SEP feasibility and vertexhood, BB-moves and ancestors, metric completion,
//! and a small-n vertex enumeration oracle.

mod enumerate;
mod feasibility;
mod metric;
mod moves;
mod vertex;

pub use enumerate::{enumerate_sep_vertices, MAX_ENUMERATION_NODES};
pub use feasibility::{check_sep_feasible, min_cut, SubtourCut, Violation};
pub use metric::metric_completion;
pub use moves::{bb_move, contract_to_ancestor, expand, expand_edge, AncestorDecomposition};
pub use vertex::{is_vertex, VertexCheckReport, MAX_DIRECT_CHECK_NODES};
