//! Graph family constructors: generalized Petersen graphs, toroidal grids,
//! and the small named graphs the test corpus keeps reaching for.

use std::str::FromStr;

use thiserror::Error;

use crate::graph::{are_isomorphic, Graph};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FamilyError {
    #[error("outer cycle needs at least 3 vertices, got {0}")]
    OuterTooSmall(usize),
    #[error("step {step} out of range for outer cycle {n_outer} (need 1 <= step < n_outer, 2*step != n_outer)")]
    BadStep { n_outer: usize, step: usize },
    #[error("toroidal grid needs both cycle lengths >= 3, got {0}x{1}")]
    TorusTooSmall(usize, usize),
    #[error("unknown graph name {0:?}")]
    UnknownName(String),
}

/// Parameters of a generalized Petersen graph: an outer cycle on `n_outer`
/// vertices, a spoke per position, and inner chords joining positions `step`
/// apart. `2*step == n_outer` is rejected because the inner chords would
/// collapse into doubled edges and the graph would not be 3-regular.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GPParams {
    pub n_outer: usize,
    pub step: usize,
}

impl GPParams {
    pub fn validate(self) -> Result<Self, FamilyError> {
        if self.n_outer < 3 {
            return Err(FamilyError::OuterTooSmall(self.n_outer));
        }
        if self.step == 0 || self.step >= self.n_outer || 2 * self.step == self.n_outer {
            return Err(FamilyError::BadStep {
                n_outer: self.n_outer,
                step: self.step,
            });
        }
        Ok(self)
    }

    /// Vertex id of the outer vertex at 1-based position `i` (wrapping).
    pub fn outer(self, i: usize) -> usize {
        (i + self.n_outer - 1) % self.n_outer
    }

    /// Vertex id of the inner vertex at 1-based position `i` (wrapping).
    pub fn inner(self, i: usize) -> usize {
        self.n_outer + (i + self.n_outer - 1) % self.n_outer
    }
}

/// Builds the generalized Petersen graph on `2 * n_outer` vertices. Outer
/// vertices take ids `0..n_outer` in cycle order; the inner vertex sharing a
/// spoke with outer id `i` is `n_outer + i`.
pub fn build_gp(params: GPParams) -> Result<Graph, FamilyError> {
    let GPParams { n_outer, step } = params.validate()?;
    let mut g = Graph::empty(2 * n_outer);
    for i in 0..n_outer {
        g.add_edge(i, (i + 1) % n_outer).unwrap();
        g.add_edge(i, n_outer + i).unwrap();
        g.add_edge(n_outer + i, n_outer + (i + step) % n_outer)
            .unwrap();
    }
    debug_assert!(g.is_cubic());
    Ok(g)
}

/// Cartesian product of two cycles; vertex `(i, j)` has id `i * n + j`.
pub fn build_toroidal(m: usize, n: usize) -> Result<Graph, FamilyError> {
    if m < 3 || n < 3 {
        return Err(FamilyError::TorusTooSmall(m, n));
    }
    let mut g = Graph::empty(m * n);
    for i in 0..m {
        for j in 0..n {
            g.add_edge(i * n + j, ((i + 1) % m) * n + j).unwrap();
            g.add_edge(i * n + j, i * n + (j + 1) % n).unwrap();
        }
    }
    debug_assert!(g.is_regular(4));
    Ok(g)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedGraph {
    Petersen,
    Prism3,
    Wagner,
    K33,
    K23,
    K33HandleAdjacent,
    K33HandleDisjoint,
    HGraph,
}

impl NamedGraph {
    pub const ALL: [NamedGraph; 8] = [
        NamedGraph::Petersen,
        NamedGraph::Prism3,
        NamedGraph::Wagner,
        NamedGraph::K33,
        NamedGraph::K23,
        NamedGraph::K33HandleAdjacent,
        NamedGraph::K33HandleDisjoint,
        NamedGraph::HGraph,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NamedGraph::Petersen => "petersen",
            NamedGraph::Prism3 => "prism3",
            NamedGraph::Wagner => "wagner",
            NamedGraph::K33 => "k33",
            NamedGraph::K23 => "k23",
            NamedGraph::K33HandleAdjacent => "k33_handle_adjacent",
            NamedGraph::K33HandleDisjoint => "k33_handle_disjoint",
            NamedGraph::HGraph => "h_graph",
        }
    }
}

impl FromStr for NamedGraph {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, FamilyError> {
        NamedGraph::ALL
            .into_iter()
            .find(|g| g.name() == s)
            .ok_or_else(|| FamilyError::UnknownName(s.to_string()))
    }
}

fn complete_bipartite(a: usize, b: usize) -> Graph {
    let mut g = Graph::empty(a + b);
    for i in 0..a {
        for j in 0..b {
            g.add_edge(i, a + j).unwrap();
        }
    }
    g
}

/// `K_{3,3}` with two of its edges subdivided (new vertices 6 and 7) and the
/// subdivision vertices joined by a handle. `adjacent` picks two edges
/// sharing an endpoint, otherwise two independent edges are subdivided.
fn k33_with_handle(adjacent: bool) -> Graph {
    let (e1, e2) = if adjacent {
        ((0, 3), (0, 4))
    } else {
        ((0, 3), (1, 4))
    };
    let mut g = Graph::empty(8);
    for i in 0..3 {
        for j in 3..6 {
            if (i, j) != e1 && (i, j) != e2 {
                g.add_edge(i, j).unwrap();
            }
        }
    }
    g.add_edge(e1.0, 6).unwrap();
    g.add_edge(6, e1.1).unwrap();
    g.add_edge(e2.0, 7).unwrap();
    g.add_edge(7, e2.1).unwrap();
    g.add_edge(6, 7).unwrap();
    g
}

pub fn named_graph(which: NamedGraph) -> Graph {
    match which {
        NamedGraph::Petersen => build_gp(GPParams {
            n_outer: 5,
            step: 2,
        })
        .unwrap(),
        NamedGraph::Prism3 => {
            Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)])
                .unwrap()
        }
        NamedGraph::Wagner => {
            let mut g = Graph::empty(8);
            for i in 0..8 {
                g.add_edge(i, (i + 1) % 8).unwrap();
            }
            for i in 0..4 {
                g.add_edge(i, i + 4).unwrap();
            }
            g
        }
        NamedGraph::K33 => complete_bipartite(3, 3),
        NamedGraph::K23 => complete_bipartite(2, 3),
        NamedGraph::K33HandleAdjacent => k33_with_handle(true),
        NamedGraph::K33HandleDisjoint => k33_with_handle(false),
        NamedGraph::HGraph => {
            // Of the two handle variants exactly one is the Wagner graph;
            // the other one is returned here. Identified at runtime rather
            // than hardcoded so the choice can never drift out of sync.
            let wagner = named_graph(NamedGraph::Wagner);
            let adjacent = k33_with_handle(true);
            let disjoint = k33_with_handle(false);
            let adj_is_wagner = are_isomorphic(&adjacent, &wagner).unwrap();
            let dis_is_wagner = are_isomorphic(&disjoint, &wagner).unwrap();
            assert!(
                adj_is_wagner != dis_is_wagner,
                "exactly one handle variant must be the Wagner graph"
            );
            if adj_is_wagner {
                disjoint
            } else {
                adjacent
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gp_validation() {
        assert!(build_gp(GPParams { n_outer: 5, step: 2 }).is_ok());
        assert!(matches!(
            build_gp(GPParams { n_outer: 8, step: 4 }),
            Err(FamilyError::BadStep { .. })
        ));
        assert!(matches!(
            build_gp(GPParams { n_outer: 5, step: 0 }),
            Err(FamilyError::BadStep { .. })
        ));
        assert!(matches!(
            build_gp(GPParams { n_outer: 2, step: 1 }),
            Err(FamilyError::OuterTooSmall(2))
        ));
    }

    #[test]
    fn gp_shape() {
        for (n, k) in [(5, 2), (8, 3), (27, 13), (20, 9)] {
            let g = build_gp(GPParams { n_outer: n, step: k }).unwrap();
            assert_eq!(g.n(), 2 * n);
            assert_eq!(g.edge_count(), 3 * n);
            assert!(g.is_cubic());
            assert!(g.is_connected());
        }
        // Petersen has girth 5: no two vertices share two common neighbors.
        let p = named_graph(NamedGraph::Petersen);
        for a in 0..10 {
            for b in (a + 1)..10 {
                let common = p
                    .neighbors(a)
                    .iter()
                    .filter(|w| p.neighbors(b).contains(w))
                    .count();
                assert!(common <= 1);
            }
        }
    }

    #[test]
    fn toroidal_shape() {
        let g = build_toroidal(5, 7).unwrap();
        assert_eq!(g.n(), 35);
        assert_eq!(g.edge_count(), 70);
        assert!(g.is_regular(4));
        assert!(g.is_connected());
        assert!(matches!(
            build_toroidal(2, 5),
            Err(FamilyError::TorusTooSmall(2, 5))
        ));
    }

    #[test]
    fn named_graph_shapes() {
        for which in NamedGraph::ALL {
            let g = named_graph(which);
            match which {
                NamedGraph::K23 => {
                    assert_eq!(g.n(), 5);
                    assert!(!g.is_cubic());
                }
                NamedGraph::Petersen => assert_eq!(g.n(), 10),
                NamedGraph::Prism3 | NamedGraph::K33 => {
                    assert_eq!(g.n(), 6);
                    assert!(g.is_cubic());
                }
                _ => {
                    assert_eq!(g.n(), 8);
                    assert!(g.is_cubic());
                }
            }
        }
        assert!(named_graph(NamedGraph::K33).is_bipartite());
        // Subdividing two K33 edges flips cycle parities, so both handle
        // variants are non-bipartite; Wagner contains 5-cycles directly.
        assert!(!named_graph(NamedGraph::Wagner).is_bipartite());
        assert!(!named_graph(NamedGraph::Prism3).is_bipartite());
    }

    #[test]
    fn handle_variants_and_h() {
        let adjacent = named_graph(NamedGraph::K33HandleAdjacent);
        let disjoint = named_graph(NamedGraph::K33HandleDisjoint);
        let wagner = named_graph(NamedGraph::Wagner);
        let h = named_graph(NamedGraph::HGraph);
        assert!(!are_isomorphic(&adjacent, &disjoint).unwrap());
        assert!(!are_isomorphic(&h, &wagner).unwrap());
        // The variant with a common endpoint closes a triangle through the
        // handle, which the Wagner graph (girth 4) cannot contain.
        assert!(are_isomorphic(&h, &adjacent).unwrap());
        assert!(are_isomorphic(&disjoint, &wagner).unwrap());
    }

    #[test]
    fn names_roundtrip() {
        for which in NamedGraph::ALL {
            assert_eq!(which.name().parse::<NamedGraph>().unwrap(), which);
        }
        assert!("nope".parse::<NamedGraph>().is_err());
    }
}
