//! Red-blue "crumby" colorings of subcubic graphs: constructions for the two
//! generalized Petersen families, a streaming tree-coloring algorithm,
//! induced-matching obstructions, and an exhaustive backtracking search that
//! doubles as a brute-force oracle on small graphs.
//!
//! A coloring is *crumby* when every blue vertex has at most one blue
//! neighbor, every red vertex has at least one red neighbor, and the red
//! subgraph contains no path with three edges. On subcubic graphs this forces
//! every red component that is a tree to be a star with one, two or three
//! edges; [`verify::CrumbyPredicate`] exposes both the path-bound form and the
//! strict star form, plus the generalization that forbids red paths with `L`
//! edges.

pub mod coloring;
pub mod construct;
pub mod dot;
pub mod families;
pub mod graph;
pub mod graph6;
pub mod search;
pub mod treecolor;
pub mod trees;
pub mod verify;

pub use coloring::{Color, Coloring};
pub use graph::{Graph, GraphError, Matching};
