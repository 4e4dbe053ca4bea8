//! Exact machinery for bounding the integrality gap of the subtour-elimination
//! relaxation of the metric TSP on families of polytope vertices.

pub mod canon;
pub mod error;
pub mod fixtures;
pub mod gap;
pub mod graph;
pub mod lp;
pub mod par;
pub mod pipeline;
pub mod polytope;
pub mod rational;
pub mod tsp;
pub mod walks;

pub use error::{Error, Result};
pub use graph::{CostMatrix, Edge, SepPoint, WeightedGraph};
pub use rational::Rational;
