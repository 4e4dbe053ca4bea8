//! Exact linear programming and the two gap formulations built on it.

mod full;
mod opt2;
mod simplex;

pub use full::{solve_opt_plus_full, tours, FullSolution, MAX_FULL_NODES};
pub use opt2::{
    lift_dual_assignment, solve_opt2, solve_opt2_from, verify_dual_feasible, DualAssignment,
    DualViolation, Opt2Solution,
};
pub use simplex::{simplex_solve, Constraint, LinearProgram, LpSolution, Relation, Sense};
pub use crate::tsp::tsp_exact;
