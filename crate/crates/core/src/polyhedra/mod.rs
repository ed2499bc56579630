//! Exact convex polyhedra over rational linear constraints.

mod constraint;
mod fm;
mod linexpr;
mod list;
mod polyhedron;
mod simplex;
mod var;

pub use constraint::{eq, ge, gt, le, lt, Canonical, Constraint, Relation};
pub use linexpr::LinExpr;
pub use list::PolyList;
pub use polyhedron::{Bound, Polyhedron, DEFAULT_REDUNDANCY_THRESHOLD};
pub use simplex::is_feasible;
pub use var::Var;

use polyhedron::normalize as polyhedron_normalize;
