//! Binary labeling problems on properly 2-colored trees.
//!
//! The crate covers the instance model ([`tree`], [`problem`]), constraint
//! families ([`lang`]), complexity classification ([`classify`]), layer
//! decompositions ([`decompose`]), a synchronous round simulator ([`local`]),
//! the specialized solvers ([`solve`]) and an exact dynamic-programming
//! reference ([`oracle`]).

pub mod bitset;
pub mod classify;
pub mod decompose;
pub mod lang;
pub mod local;
pub mod oracle;
pub mod problem;
pub mod problem_file;
pub mod solve;
pub mod tree;

pub use num_rational::Ratio;
pub use problem::{ConstraintSet, Problem, StructureBudget};
pub use tree::{Color, ColoredTree, TreeKind};
