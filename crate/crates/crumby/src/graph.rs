//! Simple undirected graphs on vertices `0..n` with adjacency lists, plus the
//! elementary structural queries the rest of the crate leans on.

use std::collections::VecDeque;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {0} out of range for graph on {1} vertices")]
    VertexOutOfRange(usize, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("isomorphism test limited to 12 vertices, got {0}")]
    IsomorphismTooLarge(usize),
}

/// Undirected simple graph. Neighbor lists are kept sorted, so iteration
/// order is deterministic everywhere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Graph::empty(n);
        for &(a, b) in edges {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, a: usize, b: usize) -> Result<(), GraphError> {
        let n = self.n();
        if a >= n {
            return Err(GraphError::VertexOutOfRange(a, n));
        }
        if b >= n {
            return Err(GraphError::VertexOutOfRange(b, n));
        }
        if a == b {
            return Err(GraphError::SelfLoop(a));
        }
        if self.adj[a].contains(&b) {
            return Err(GraphError::DuplicateEdge(a.min(b), a.max(b)));
        }
        self.adj[a].push(b);
        self.adj[b].push(a);
        self.adj[a].sort_unstable();
        self.adj[b].sort_unstable();
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }

    /// Edges as `(a, b)` with `a < b`, ascending.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.n() {
            for &b in &self.adj[a] {
                if a < b {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_subcubic(&self) -> bool {
        self.max_degree() <= 3
    }

    pub fn is_regular(&self, d: usize) -> bool {
        self.adj.iter().all(|row| row.len() == d)
    }

    pub fn is_cubic(&self) -> bool {
        self.is_regular(3)
    }

    /// Neighbor bitmask per vertex; only available when `n <= 64`.
    pub fn neighbor_masks(&self) -> Option<Vec<u64>> {
        if self.n() > 64 {
            return None;
        }
        Some(
            self.adj
                .iter()
                .map(|row| row.iter().fold(0u64, |m, &w| m | (1 << w)))
                .collect(),
        )
    }

    /// Connected components as sorted vertex lists, ordered by smallest member.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut comps = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut comp = Vec::new();
            let mut queue = VecDeque::from([start]);
            seen[start] = true;
            while let Some(v) = queue.pop_front() {
                comp.push(v);
                for &w in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.n() == 0 || self.connected_components().len() == 1
    }

    /// Two-colors the graph by BFS; `None` when an odd cycle exists.
    pub fn bipartition(&self) -> Option<Vec<bool>> {
        let n = self.n();
        let mut side = vec![None; n];
        for start in 0..n {
            if side[start].is_some() {
                continue;
            }
            side[start] = Some(false);
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                let sv = side[v].unwrap();
                for &w in &self.adj[v] {
                    match side[w] {
                        None => {
                            side[w] = Some(!sv);
                            queue.push_back(w);
                        }
                        Some(sw) if sw == sv => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        Some(side.into_iter().map(|s| s.unwrap()).collect())
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition().is_some()
    }

    fn connected_without(&self, removed: &[usize]) -> bool {
        let n = self.n();
        let mut skip = vec![false; n];
        for &r in removed {
            skip[r] = true;
        }
        let Some(start) = (0..n).find(|&v| !skip[v]) else {
            return true;
        };
        let mut seen = skip.clone();
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        let mut reached = 1;
        while let Some(v) = queue.pop_front() {
            for &w in &self.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    queue.push_back(w);
                }
            }
        }
        reached == n - removed.len()
    }

    /// Brute-force check that no vertex cutset of size below three exists.
    /// Intended for census-sized graphs; cost is `O(n^2)` connectivity scans.
    pub fn is_three_connected(&self) -> bool {
        let n = self.n();
        if n < 4 || !self.is_connected() {
            return false;
        }
        for a in 0..n {
            if !self.connected_without(&[a]) {
                return false;
            }
            for b in a + 1..n {
                if !self.connected_without(&[a, b]) {
                    return false;
                }
            }
        }
        true
    }
}

/// A set of pairwise disjoint edges, normalized to `(a, b)` with `a < b` and
/// sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    pub edges: Vec<(usize, usize)>,
}

impl Matching {
    pub fn new(mut edges: Vec<(usize, usize)>) -> Self {
        for e in edges.iter_mut() {
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
        }
        edges.sort_unstable();
        Matching { edges }
    }

    pub fn covers(&self, n: usize) -> bool {
        self.edges.len() * 2 == n
    }
}

/// All perfect matchings, found by pairing the lowest uncovered vertex with
/// each admissible neighbor in ascending order. Deterministic output order.
pub fn enumerate_perfect_matchings(g: &Graph) -> Vec<Matching> {
    let n = g.n();
    if n % 2 != 0 {
        return Vec::new();
    }
    let mut used = vec![false; n];
    let mut current = Vec::new();
    let mut out = Vec::new();
    fn rec(
        g: &Graph,
        used: &mut [bool],
        current: &mut Vec<(usize, usize)>,
        out: &mut Vec<Matching>,
    ) {
        let Some(v) = used.iter().position(|&u| !u) else {
            out.push(Matching::new(current.clone()));
            return;
        };
        used[v] = true;
        for &w in g.neighbors(v) {
            if !used[w] {
                used[w] = true;
                current.push((v, w));
                rec(g, used, current, out);
                current.pop();
                used[w] = false;
            }
        }
        used[v] = false;
    }
    rec(g, &mut used, &mut current, &mut out);
    out
}

/// Exact isomorphism test by backtracking over degree-compatible vertex maps.
/// Factorial worst case, so inputs are capped at 12 vertices.
pub fn are_isomorphic(a: &Graph, b: &Graph) -> Result<bool, GraphError> {
    let n = a.n();
    if n > 12 || b.n() > 12 {
        return Err(GraphError::IsomorphismTooLarge(n.max(b.n())));
    }
    if n != b.n() || a.edge_count() != b.edge_count() {
        return Ok(false);
    }
    let mut da: Vec<usize> = (0..n).map(|v| a.degree(v)).collect();
    let mut db: Vec<usize> = (0..n).map(|v| b.degree(v)).collect();
    da.sort_unstable();
    db.sort_unstable();
    if da != db {
        return Ok(false);
    }

    // map[v] = image of vertex v of `a` in `b`.
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn extend(a: &Graph, b: &Graph, v: usize, map: &mut [usize], used: &mut [bool]) -> bool {
        let n = a.n();
        if v == n {
            return true;
        }
        'cand: for w in 0..n {
            if used[w] || a.degree(v) != b.degree(w) {
                continue;
            }
            for u in 0..v {
                if a.has_edge(v, u) != b.has_edge(w, map[u]) {
                    continue 'cand;
                }
            }
            map[v] = w;
            used[w] = true;
            if extend(a, b, v + 1, map, used) {
                return true;
            }
            used[w] = false;
            map[v] = usize::MAX;
        }
        false
    }
    Ok(extend(a, b, 0, &mut map, &mut used))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn edge_validation() {
        let mut g = Graph::empty(3);
        g.add_edge(0, 1).unwrap();
        assert_eq!(g.add_edge(0, 1), Err(GraphError::DuplicateEdge(0, 1)));
        assert_eq!(g.add_edge(1, 0), Err(GraphError::DuplicateEdge(0, 1)));
        assert_eq!(g.add_edge(2, 2), Err(GraphError::SelfLoop(2)));
        assert_eq!(g.add_edge(0, 3), Err(GraphError::VertexOutOfRange(3, 3)));
    }

    #[test]
    fn components_split_and_merge() {
        let g = Graph::from_edges(5, &[(0, 1), (3, 4)]).unwrap();
        assert_eq!(
            g.connected_components(),
            vec![vec![0, 1], vec![2], vec![3, 4]]
        );
        assert!(!g.is_connected());
        assert!(cycle(5).is_connected());
    }

    #[test]
    fn bipartition_detects_odd_cycles() {
        assert!(cycle(6).is_bipartite());
        assert!(!cycle(5).is_bipartite());
    }

    #[test]
    fn perfect_matchings_of_small_graphs() {
        assert_eq!(enumerate_perfect_matchings(&cycle(4)).len(), 2);
        let k4 = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(enumerate_perfect_matchings(&k4).len(), 3);
        assert!(enumerate_perfect_matchings(&cycle(5)).is_empty());
        let m = &enumerate_perfect_matchings(&cycle(4))[0];
        assert!(m.covers(4));
    }

    #[test]
    fn isomorphism_basics() {
        // Petersen built two independent ways: coordinates vs disjoint 2-sets.
        let gp = crate::families::build_gp(crate::families::GPParams {
            n_outer: 5,
            step: 2,
        })
        .unwrap();
        let pairs: Vec<(usize, usize)> = (0..5)
            .flat_map(|a| ((a + 1)..5).map(move |b| (a, b)))
            .collect();
        let mut kneser = Graph::empty(10);
        for i in 0..10 {
            for j in (i + 1)..10 {
                let (a, b) = pairs[i];
                let (c, d) = pairs[j];
                if a != c && a != d && b != c && b != d {
                    kneser.add_edge(i, j).unwrap();
                }
            }
        }
        assert!(are_isomorphic(&gp, &kneser).unwrap());
        let two_triangles =
            Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert!(!are_isomorphic(&cycle(6), &two_triangles).unwrap());
        let big = Graph::empty(13);
        assert_eq!(
            are_isomorphic(&big, &big),
            Err(GraphError::IsomorphismTooLarge(13))
        );
    }

    #[test]
    fn three_connectivity_bruteforce() {
        let k4 = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert!(k4.is_three_connected());
        assert!(!cycle(6).is_three_connected());
        // Two triangles sharing a vertex pair-disconnect at the hinge.
        let hinge =
            Graph::from_edges(5, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)]).unwrap();
        assert!(!hinge.is_three_connected());
    }
}
