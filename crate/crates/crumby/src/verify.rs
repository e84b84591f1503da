//! Predicate checking for red-blue colorings: the crumby conditions with a
//! parametric red-path bound, induced-matching conditions, the auxiliary
//! multigraph over matching edges, and necessary-condition obstructions for
//! red-blue induced perfect matchings on cubic graphs.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::{Color, Coloring};
use crate::graph::Graph;

/// Parameters of the crumby predicate. A coloring satisfies it when every
/// blue vertex has at most one blue neighbor, every red vertex has at least
/// one red neighbor, and the red subgraph contains no simple path with
/// `red_path_bound` edges. With `strict_stars` every red component must
/// additionally be a star with 1, 2 or 3 edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CrumbyPredicate {
    /// Forbidden red path length in edges; must be at least 1.
    pub red_path_bound: usize,
    pub strict_stars: bool,
}

impl Default for CrumbyPredicate {
    fn default() -> Self {
        CrumbyPredicate {
            red_path_bound: 3,
            strict_stars: false,
        }
    }
}

impl CrumbyPredicate {
    pub fn strict() -> Self {
        CrumbyPredicate {
            strict_stars: true,
            ..Self::default()
        }
    }

    pub fn with_bound(red_path_bound: usize) -> Self {
        CrumbyPredicate {
            red_path_bound,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ViolationKind {
    /// Blue vertex with two or more blue neighbors.
    BlueOverdegree,
    /// Red vertex with no red neighbor.
    IsolatedRed,
    /// Simple path in the red subgraph with the forbidden number of edges.
    RedLongPath,
    /// Red component that is not a star with 1 to 3 edges.
    NonStarRed,
    /// Vertex without a color where a total coloring is required.
    Uncolored,
    /// Red vertex with two or more red neighbors (matching conditions).
    RedOverdegree,
    /// Blue vertex with no blue neighbor (perfect matching conditions).
    IsolatedBlue,
}

/// One failed condition together with the vertices that witness it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub vertices: Vec<usize>,
}

impl Violation {
    fn single(kind: ViolationKind, vertex: usize) -> Self {
        Violation {
            kind,
            vertices: vec![vertex],
        }
    }

    /// Re-checks this witness against the graph and coloring in time
    /// proportional to the witness size.
    pub fn holds(&self, g: &Graph, c: &Coloring) -> bool {
        let color_of = |v: usize| c.get(v);
        let same_color_neighbors = |v: usize, color: Color| {
            g.neighbors(v)
                .iter()
                .filter(|&&u| color_of(u) == Some(color))
                .count()
        };
        match self.kind {
            ViolationKind::BlueOverdegree => {
                let &[v] = self.vertices.as_slice() else {
                    return false;
                };
                color_of(v) == Some(Color::Blue) && same_color_neighbors(v, Color::Blue) >= 2
            }
            ViolationKind::RedOverdegree => {
                let &[v] = self.vertices.as_slice() else {
                    return false;
                };
                color_of(v) == Some(Color::Red) && same_color_neighbors(v, Color::Red) >= 2
            }
            ViolationKind::IsolatedRed => {
                let &[v] = self.vertices.as_slice() else {
                    return false;
                };
                color_of(v) == Some(Color::Red) && same_color_neighbors(v, Color::Red) == 0
            }
            ViolationKind::IsolatedBlue => {
                let &[v] = self.vertices.as_slice() else {
                    return false;
                };
                color_of(v) == Some(Color::Blue) && same_color_neighbors(v, Color::Blue) == 0
            }
            ViolationKind::Uncolored => {
                let &[v] = self.vertices.as_slice() else {
                    return false;
                };
                color_of(v).is_none()
            }
            ViolationKind::RedLongPath => {
                let path = &self.vertices;
                if path.len() < 2 {
                    return false;
                }
                let distinct: std::collections::HashSet<_> = path.iter().collect();
                distinct.len() == path.len()
                    && path.iter().all(|&v| color_of(v) == Some(Color::Red))
                    && path.windows(2).all(|w| g.has_edge(w[0], w[1]))
            }
            ViolationKind::NonStarRed => {
                // The witness is a whole red component; re-check that it is
                // red, connected within red, closed under red adjacency, and
                // not a star with 1..=3 edges.
                let comp = &self.vertices;
                if comp.is_empty() || !comp.iter().all(|&v| color_of(v) == Some(Color::Red)) {
                    return false;
                }
                let closed = comp.iter().all(|&v| {
                    g.neighbors(v)
                        .iter()
                        .filter(|&&u| color_of(u) == Some(Color::Red))
                        .all(|u| comp.contains(u))
                });
                let mut reached = vec![comp[0]];
                let mut head = 0;
                while head < reached.len() {
                    let v = reached[head];
                    head += 1;
                    for &u in g.neighbors(v) {
                        if comp.contains(&u) && !reached.contains(&u) {
                            reached.push(u);
                        }
                    }
                }
                closed && reached.len() == comp.len() && !is_small_star_set(g, comp)
            }
        }
    }
}

/// True when the set induces a connected star with 1..=3 edges.
fn is_small_star_set(g: &Graph, comp: &[usize]) -> bool {
    let s = comp.len();
    if !(2..=4).contains(&s) {
        return false;
    }
    let degree_within = |v: usize| {
        g.neighbors(v)
            .iter()
            .filter(|u| comp.contains(u))
            .count()
    };
    let mut centers = 0;
    let mut leaves = 0;
    for &v in comp {
        match degree_within(v) {
            d if d == s - 1 => centers += 1,
            1 => leaves += 1,
            _ => return false,
        }
    }
    // A 2-vertex star has two degree-1 vertices; larger stars have exactly
    // one center and s-1 leaves.
    s == 2 || (centers == 1 && leaves == s - 1)
}

/// Outcome of a verification run. `valid` holds exactly when `violations`
/// is empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

impl VerifyReport {
    fn from_violations(violations: Vec<Violation>) -> Self {
        VerifyReport {
            valid: violations.is_empty(),
            violations,
        }
    }
}

fn uncolored_report(c: &Coloring) -> Option<VerifyReport> {
    if c.is_total() {
        return None;
    }
    let violations = (0..c.n())
        .filter(|&v| c.get(v).is_none())
        .map(|v| Violation::single(ViolationKind::Uncolored, v))
        .collect();
    Some(VerifyReport::from_violations(violations))
}

/// Checks the crumby conditions on a total coloring. A partial coloring
/// yields an `Uncolored` witness per missing vertex and no further checks.
/// At most one long-path witness is reported per starting vertex.
pub fn verify_crumby(g: &Graph, c: &Coloring, p: &CrumbyPredicate) -> VerifyReport {
    assert!(p.red_path_bound >= 1, "red path bound must be at least 1");
    assert_eq!(g.n(), c.n(), "coloring size must match the graph");
    if let Some(report) = uncolored_report(c) {
        return report;
    }
    let mut violations = Vec::new();
    for v in 0..g.n() {
        let color = c.get(v).unwrap();
        let same = g
            .neighbors(v)
            .iter()
            .filter(|&&u| c.get(u) == Some(color))
            .count();
        match color {
            Color::Blue if same >= 2 => {
                violations.push(Violation::single(ViolationKind::BlueOverdegree, v));
            }
            Color::Red if same == 0 => {
                violations.push(Violation::single(ViolationKind::IsolatedRed, v));
            }
            _ => {}
        }
    }
    for v in 0..g.n() {
        if c.get(v) == Some(Color::Red) {
            if let Some(path) = red_path_from(g, c, v, p.red_path_bound) {
                violations.push(Violation {
                    kind: ViolationKind::RedLongPath,
                    vertices: path,
                });
            }
        }
    }
    if p.strict_stars {
        let (red_sub, red_ids) = c.color_class_subgraph(g, Color::Red);
        for comp in red_sub.connected_components() {
            let original: Vec<usize> = comp.iter().map(|&v| red_ids[v]).collect();
            if original.len() >= 2 && !is_small_star_set(g, &original) {
                violations.push(Violation {
                    kind: ViolationKind::NonStarRed,
                    vertices: original,
                });
            }
            // Singleton components are already reported as IsolatedRed.
        }
    }
    VerifyReport::from_violations(violations)
}

/// Depth-bounded DFS over red vertices: returns a simple red path with
/// exactly `bound` edges starting at `start`, if one exists. Every simple
/// path is found from either endpoint, so scanning all red starts is
/// complete.
fn red_path_from(g: &Graph, c: &Coloring, start: usize, bound: usize) -> Option<Vec<usize>> {
    fn extend(
        g: &Graph,
        c: &Coloring,
        stack: &mut Vec<usize>,
        bound: usize,
    ) -> bool {
        if stack.len() == bound + 1 {
            return true;
        }
        let last = *stack.last().unwrap();
        for &u in g.neighbors(last) {
            if c.get(u) == Some(Color::Red) && !stack.contains(&u) {
                stack.push(u);
                if extend(g, c, stack, bound) {
                    return true;
                }
                stack.pop();
            }
        }
        false
    }
    let mut stack = vec![start];
    extend(g, c, &mut stack, bound).then_some(stack)
}

/// Checks that both color classes induce graphs of maximum degree at most 1.
/// With `require_perfect`, additionally no vertex may be isolated within its
/// own class, so each class induces a perfect matching of itself.
pub fn verify_induced_matching(g: &Graph, c: &Coloring, require_perfect: bool) -> VerifyReport {
    assert_eq!(g.n(), c.n(), "coloring size must match the graph");
    if let Some(report) = uncolored_report(c) {
        return report;
    }
    let mut violations = Vec::new();
    for v in 0..g.n() {
        let color = c.get(v).unwrap();
        let same = g
            .neighbors(v)
            .iter()
            .filter(|&&u| c.get(u) == Some(color))
            .count();
        if same >= 2 {
            let kind = match color {
                Color::Red => ViolationKind::RedOverdegree,
                Color::Blue => ViolationKind::BlueOverdegree,
            };
            violations.push(Violation::single(kind, v));
        } else if same == 0 && require_perfect {
            let kind = match color {
                Color::Red => ViolationKind::IsolatedRed,
                Color::Blue => ViolationKind::IsolatedBlue,
            };
            violations.push(Violation::single(kind, v));
        }
    }
    VerifyReport::from_violations(violations)
}

#[derive(Debug, Error)]
pub enum AuxGraphError {
    #[error("auxiliary graph requires a cubic host graph")]
    NotCubic,
    #[error("coloring is not a red-blue induced perfect matching: {0:?}")]
    InvalidMatching(VerifyReport),
}

/// Bipartite multigraph over the monochromatic matching edges of a red-blue
/// induced perfect matching: one node per red edge, one per blue edge, and
/// one link per host edge joining a red vertex to a blue vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuxRbGraph {
    pub red_edges: Vec<(usize, usize)>,
    pub blue_edges: Vec<(usize, usize)>,
    /// `(red index, blue index)` with one entry per crossing host edge;
    /// repeated pairs are parallel links.
    pub links: Vec<(usize, usize)>,
}

impl AuxRbGraph {
    pub fn node_count(&self) -> usize {
        self.red_edges.len() + self.blue_edges.len()
    }

    pub fn degree_sequences(&self) -> (Vec<usize>, Vec<usize>) {
        let mut red = vec![0usize; self.red_edges.len()];
        let mut blue = vec![0usize; self.blue_edges.len()];
        for &(r, b) in &self.links {
            red[r] += 1;
            blue[b] += 1;
        }
        (red, blue)
    }

    pub fn is_four_regular(&self) -> bool {
        let (red, blue) = self.degree_sequences();
        red.iter().chain(blue.iter()).all(|&d| d == 4)
    }
}

/// Builds the auxiliary multigraph for a cubic graph and a coloring that
/// passes `verify_induced_matching(require_perfect = true)`. On a cubic host
/// each matching edge meets exactly four crossing host edges, so the result
/// is 4-regular and the two node classes have equal size.
pub fn build_aux_rb_graph(g: &Graph, c: &Coloring) -> Result<AuxRbGraph, AuxGraphError> {
    if !g.is_cubic() {
        return Err(AuxGraphError::NotCubic);
    }
    let report = verify_induced_matching(g, c, true);
    if !report.valid {
        return Err(AuxGraphError::InvalidMatching(report));
    }
    // Every vertex has exactly one same-colored neighbor: its matching
    // partner. Index the monochromatic edges in ascending order.
    let mut edge_index = vec![usize::MAX; g.n()];
    let mut red_edges = Vec::new();
    let mut blue_edges = Vec::new();
    for v in 0..g.n() {
        let color = c.get(v).unwrap();
        let partner = *g
            .neighbors(v)
            .iter()
            .find(|&&u| c.get(u) == Some(color))
            .expect("perfect matching grants a partner");
        if v < partner {
            let list = match color {
                Color::Red => &mut red_edges,
                Color::Blue => &mut blue_edges,
            };
            list.push((v, partner));
            edge_index[v] = list.len() - 1;
            edge_index[partner] = list.len() - 1;
        }
    }
    let mut links = Vec::new();
    for (a, b) in g.edges() {
        match (c.get(a).unwrap(), c.get(b).unwrap()) {
            (Color::Red, Color::Blue) => links.push((edge_index[a], edge_index[b])),
            (Color::Blue, Color::Red) => links.push((edge_index[b], edge_index[a])),
            _ => {}
        }
    }
    links.sort_unstable();
    Ok(AuxRbGraph {
        red_edges,
        blue_edges,
        links,
    })
}

/// Five-vertex witness that the graph contains `K_{2,3}` as a subgraph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct K23Witness {
    pub pair: (usize, usize),
    pub common: [usize; 3],
}

/// Scans all vertex pairs for three or more common neighbors; returns the
/// lexicographically first witness. Subgraph containment, not induced.
pub fn contains_k23(g: &Graph) -> Option<K23Witness> {
    for a in 0..g.n() {
        for b in a + 1..g.n() {
            let common: Vec<usize> = g
                .neighbors(a)
                .iter()
                .filter(|u| g.neighbors(b).contains(u))
                .copied()
                .collect();
            if common.len() >= 3 {
                return Some(K23Witness {
                    pair: (a, b),
                    common: [common[0], common[1], common[2]],
                });
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum RbipmObstruction {
    /// Cubic host with vertex count not divisible by 4: the auxiliary
    /// multigraph argument forces |red| = |blue| = n/2 with n/2 even.
    Divisibility { n: usize },
    /// Cubic host containing K_{2,3}: no consistent assignment exists around
    /// the witness.
    K23(K23Witness),
    NoKnownObstruction,
}

/// Necessary-condition report for red-blue induced perfect matchings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionReport {
    pub cubic: bool,
    pub bipartite: bool,
    pub verdict: RbipmObstruction,
}

/// Checks the known obstructions. Both arguments are proved for cubic
/// hosts only, so non-cubic graphs always report `NoKnownObstruction`;
/// the `cubic` and `bipartite` flags record the context either way.
pub fn check_rbipm_necessary(g: &Graph) -> ObstructionReport {
    let cubic = g.is_cubic();
    let bipartite = g.is_bipartite();
    let verdict = if !cubic {
        RbipmObstruction::NoKnownObstruction
    } else if g.n() % 4 != 0 {
        RbipmObstruction::Divisibility { n: g.n() }
    } else if let Some(witness) = contains_k23(g) {
        RbipmObstruction::K23(witness)
    } else {
        RbipmObstruction::NoKnownObstruction
    };
    ObstructionReport {
        cubic,
        bipartite,
        verdict,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{build_gp, named_graph, GPParams, NamedGraph};
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn coloring(s: &str) -> Coloring {
        Coloring::from_str_colors(s).unwrap()
    }

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, &(0..n - 1).map(|i| (i, i + 1)).collect::<Vec<_>>()).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    fn cube() -> Graph {
        let mut edges = Vec::new();
        for a in 0u8..8 {
            for bit in [1, 2, 4] {
                let b = a ^ bit;
                if a < b {
                    edges.push((a as usize, b as usize));
                }
            }
        }
        Graph::from_edges(8, &edges).unwrap()
    }

    #[test]
    fn crumby_basic_examples() {
        let k2 = path(2);
        assert!(verify_crumby(&k2, &coloring("BB"), &CrumbyPredicate::default()).valid);

        let p4 = path(4);
        let report = verify_crumby(&p4, &coloring("RRRR"), &CrumbyPredicate::default());
        assert!(!report.valid);
        let long = report
            .violations
            .iter()
            .find(|v| v.kind == ViolationKind::RedLongPath)
            .unwrap();
        assert_eq!(long.vertices.len(), 4);
        assert!(long.holds(&p4, &coloring("RRRR")));

        let c3 = cycle(3);
        assert!(verify_crumby(&c3, &coloring("RRR"), &CrumbyPredicate::default()).valid);
        let strict = verify_crumby(&c3, &coloring("RRR"), &CrumbyPredicate::strict());
        assert!(!strict.valid);
        assert_eq!(strict.violations[0].kind, ViolationKind::NonStarRed);
        assert!(strict.violations[0].holds(&c3, &coloring("RRR")));
    }

    #[test]
    fn crumby_gp83_example() {
        let g = build_gp(GPParams { n_outer: 8, step: 3 }).unwrap();
        let c = coloring("RRBBRRBBBBRRBBRR");
        assert!(verify_crumby(&g, &c, &CrumbyPredicate::strict()).valid);
    }

    #[test]
    fn partial_coloring_reports_uncolored() {
        let p4 = path(4);
        let c = coloring("R.B.");
        let report = verify_crumby(&p4, &c, &CrumbyPredicate::default());
        assert!(!report.valid);
        let kinds: Vec<_> = report.violations.iter().map(|v| v.kind).collect();
        assert_eq!(kinds, vec![ViolationKind::Uncolored, ViolationKind::Uncolored]);
        assert_eq!(report.violations[0].vertices, vec![1]);
        assert_eq!(report.violations[1].vertices, vec![3]);
    }

    #[test]
    fn blue_and_red_degree_violations() {
        let star = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let report = verify_crumby(&star, &coloring("BBBB"), &CrumbyPredicate::default());
        assert!(!report.valid);
        assert_eq!(report.violations[0].kind, ViolationKind::BlueOverdegree);
        assert_eq!(report.violations[0].vertices, vec![0]);

        // BRBB breaks both classes: the center keeps two blue neighbors and
        // the lone red leaf has none. Find the red violation by kind rather
        // than by emission position.
        let report = verify_crumby(&star, &coloring("BRBB"), &CrumbyPredicate::default());
        assert!(!report.valid);
        let isolated = report
            .violations
            .iter()
            .find(|v| v.kind == ViolationKind::IsolatedRed)
            .expect("vertex 1 has no red neighbor");
        assert_eq!(isolated.vertices, vec![1]);
        assert!(isolated.holds(&star, &coloring("BRBB")));
    }

    #[test]
    fn induced_matching_examples() {
        let c4 = cycle(4);
        assert!(verify_induced_matching(&c4, &coloring("RRBB"), true).valid);

        let c6 = cycle(6);
        let report = verify_induced_matching(&c6, &coloring("RRBBRR"), false);
        assert!(!report.valid);
        assert!(report
            .violations
            .iter()
            .any(|v| v.kind == ViolationKind::RedOverdegree));

        // Matching but not perfect: an isolated blue vertex on a path.
        let p3 = path(3);
        assert!(verify_induced_matching(&p3, &coloring("RRB"), false).valid);
        let report = verify_induced_matching(&p3, &coloring("RRB"), true);
        assert!(!report.valid);
        assert_eq!(report.violations[0].kind, ViolationKind::IsolatedBlue);
    }

    #[test]
    fn rbipm_is_a_strict_crumby_coloring() {
        let wagner = named_graph(NamedGraph::Wagner);
        let c = coloring("RBRBRBRB");
        assert!(verify_induced_matching(&wagner, &c, true).valid);
        assert!(verify_crumby(&wagner, &c, &CrumbyPredicate::strict()).valid);
    }

    #[test]
    fn aux_graph_wagner_and_k4() {
        let wagner = named_graph(NamedGraph::Wagner);
        let c = coloring("RBRBRBRB");
        let aux = build_aux_rb_graph(&wagner, &c).unwrap();
        assert_eq!(aux.node_count(), 4);
        assert_eq!(aux.red_edges.len(), aux.blue_edges.len());
        assert!(aux.is_four_regular());

        let k4 = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let aux = build_aux_rb_graph(&k4, &coloring("RRBB")).unwrap();
        assert_eq!(aux.red_edges, vec![(0, 1)]);
        assert_eq!(aux.blue_edges, vec![(2, 3)]);
        assert_eq!(aux.links.len(), 4);
        assert!(aux.is_four_regular());
    }

    #[test]
    fn aux_graph_refusals() {
        let c4 = cycle(4);
        assert!(matches!(
            build_aux_rb_graph(&c4, &coloring("RRBB")),
            Err(AuxGraphError::NotCubic)
        ));
        let k4 = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        // RBRB is a genuine induced-matching coloring of K4 (each class
        // induces one edge), so the builder must accept it.
        assert!(build_aux_rb_graph(&k4, &coloring("RBRB")).is_ok());
        // A red triangle is not a matching.
        assert!(matches!(
            build_aux_rb_graph(&k4, &coloring("RRRB")),
            Err(AuxGraphError::InvalidMatching(_))
        ));
    }

    #[test]
    fn k23_detection() {
        let k23 = named_graph(NamedGraph::K23);
        let witness = contains_k23(&k23).unwrap();
        assert_eq!(witness.common.len(), 3);

        let petersen = named_graph(NamedGraph::Petersen);
        assert!(contains_k23(&petersen).is_none());

        let prism = named_graph(NamedGraph::Prism3);
        assert!(contains_k23(&prism).is_none());
    }

    #[test]
    fn rbipm_obstructions() {
        let k33 = named_graph(NamedGraph::K33);
        let report = check_rbipm_necessary(&k33);
        assert!(report.cubic && report.bipartite);
        assert_eq!(report.verdict, RbipmObstruction::Divisibility { n: 6 });

        let q3 = cube();
        let report = check_rbipm_necessary(&q3);
        assert!(report.cubic && report.bipartite);
        assert_eq!(report.verdict, RbipmObstruction::NoKnownObstruction);

        // Cubic, 8 vertices, contains K_{2,3}: two hubs over {2,3,4}, each
        // of those matched down to a triangle.
        let g = Graph::from_edges(
            8,
            &[
                (0, 2),
                (0, 3),
                (0, 4),
                (1, 2),
                (1, 3),
                (1, 4),
                (2, 5),
                (3, 6),
                (4, 7),
                (5, 6),
                (6, 7),
                (5, 7),
            ],
        )
        .unwrap();
        let report = check_rbipm_necessary(&g);
        assert!(matches!(report.verdict, RbipmObstruction::K23(_)));

        // Non-cubic hosts get no verdict even when a K_{2,3} is present.
        let k23 = named_graph(NamedGraph::K23);
        let report = check_rbipm_necessary(&k23);
        assert!(!report.cubic);
        assert_eq!(report.verdict, RbipmObstruction::NoKnownObstruction);
    }

    #[test]
    fn report_json_shape() {
        let p4 = path(4);
        let report = verify_crumby(&p4, &coloring("RRRR"), &CrumbyPredicate::default());
        let json = serde_json::to_string(&report).unwrap();
        assert!(json.starts_with(r#"{"valid":false,"violations":[{"kind":"RedLongPath","#));
        let back: VerifyReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, report);
    }

    /// Independent long-path oracle: try every ordered tuple of distinct red
    /// vertices of the right length and test consecutive adjacency.
    fn has_red_path_exhaustive(g: &Graph, c: &Coloring, bound: usize) -> bool {
        let red: Vec<usize> = c.vertices_with(Color::Red);
        fn extend(g: &Graph, red: &[usize], tuple: &mut Vec<usize>, want: usize) -> bool {
            if tuple.len() == want {
                return tuple.windows(2).all(|w| g.has_edge(w[0], w[1]));
            }
            for &v in red {
                if !tuple.contains(&v) {
                    tuple.push(v);
                    if extend(g, red, tuple, want) {
                        return true;
                    }
                    tuple.pop();
                }
            }
            false
        }
        if red.len() < bound + 1 {
            return false;
        }
        extend(g, &red, &mut Vec::new(), bound + 1)
    }

    #[test]
    fn path_detection_matches_exhaustive_oracle() {
        let mut graphs = vec![path(4), cycle(3), cycle(6), path(8)];
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..6 {
            let n = 8;
            let mut edges = Vec::new();
            for a in 0..n {
                for b in a + 1..n {
                    if rng.gen_bool(0.3) {
                        edges.push((a, b));
                    }
                }
            }
            graphs.push(Graph::from_edges(n, &edges).unwrap());
        }
        for g in &graphs {
            let n = g.n();
            for bits in 0..(1u32 << n) {
                let colors: String = (0..n)
                    .map(|v| if bits >> v & 1 == 1 { 'R' } else { 'B' })
                    .collect();
                let c = coloring(&colors);
                for bound in 1..=4 {
                    let p = CrumbyPredicate {
                        red_path_bound: bound,
                        strict_stars: false,
                    };
                    let found = verify_crumby(g, &c, &p)
                        .violations
                        .iter()
                        .any(|v| v.kind == ViolationKind::RedLongPath);
                    assert_eq!(
                        found,
                        has_red_path_exhaustive(g, &c, bound),
                        "n={n} bits={bits:b} bound={bound}"
                    );
                }
            }
        }
    }

    #[test]
    fn strict_implies_default_and_subcubic_trees_are_stars() {
        // On subcubic graphs, any default-valid coloring whose red components
        // are acyclic must already have small-star components.
        let graphs = vec![
            named_graph(NamedGraph::Petersen),
            named_graph(NamedGraph::Prism3),
            build_gp(GPParams { n_outer: 7, step: 2 }).unwrap(),
        ];
        for g in &graphs {
            let n = g.n();
            for bits in 0..(1u32 << n) {
                let colors: String = (0..n)
                    .map(|v| if bits >> v & 1 == 1 { 'R' } else { 'B' })
                    .collect();
                let c = coloring(&colors);
                let default_ok = verify_crumby(g, &c, &CrumbyPredicate::default()).valid;
                let strict_ok = verify_crumby(g, &c, &CrumbyPredicate::strict()).valid;
                if strict_ok {
                    assert!(default_ok, "strict must imply default: {colors}");
                }
                if default_ok {
                    let (red_sub, _) = c.color_class_subgraph(g, Color::Red);
                    let acyclic = red_sub.edge_count() + red_sub.connected_components().len()
                        == red_sub.n();
                    if acyclic {
                        assert!(strict_ok, "tree components must be stars: {colors}");
                    }
                }
            }
        }
    }
}
