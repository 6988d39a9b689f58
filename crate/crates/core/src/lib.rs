//! Valued covers, strictly `f`-degenerate transversals and constructibility.
//!
//! A cover `H` of a graph `G` replaces every vertex `v` by a fiber of `κ`
//! cover vertices and every edge by a partial matching between fibers. Given
//! values `f: V(H) -> ℕ`, a transversal `R` (one cover vertex per fiber) is
//! an SFDT when `H[R]` is strictly `f`-degenerate.

pub mod cli;
pub mod construct;
pub mod cover;
pub mod degeneracy;
pub mod error;
pub mod graph;
pub mod harness;
pub mod io;
pub mod reductions;
pub mod solver;
mod serde_util;

pub use construct::{check_building, is_constructible, verify_construction_tree, BuildingKind, ConstructionTree};
pub use cover::{Cover, CoverSubgraph, CoverVertex, Matching, Transversal, ValueMap};
pub use degeneracy::{is_strictly_f_degenerate, removal_order, RemovalOrder};
pub use error::{Error, Result};
pub use graph::Graph;
pub use solver::{
    deficiency, find_minimal_non_sfdt, find_sfdt, find_sfdt_bounded, find_sfdt_strictly_bounded, is_sfdt,
    Deficiency, SolveOptions, SolveResult, SolveStatus,
};
