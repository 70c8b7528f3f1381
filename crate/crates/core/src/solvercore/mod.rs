//! Numerical building blocks: linear programming, bipartite matching, dense
//! linear solves and hyperplane arrangements on the simplex.

pub mod arrangement;
pub mod linalg;
pub mod lp;
pub mod matching;

pub use arrangement::{arrangement_regions, ArrangementOptions, ArrangementRegions};
pub use linalg::solve_square_system;
pub use lp::{solve_lp, Constraint, LinearProgram, LpOutcome, Relation, Sense};
pub use matching::{konig_vertex_cover, max_bipartite_matching, Matching};
