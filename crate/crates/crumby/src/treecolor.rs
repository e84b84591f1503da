//! Incremental coloring of rooted subcubic trees.
//!
//! Vertices are colored in breadth-first order. Each step colors one new
//! leaf `v` of the current colored subtree and may recolor a handful of
//! vertices next to it, chosen by a small case analysis on `v`'s parent
//! `x`. After every step the colored subtree satisfies the strict
//! predicate: blue components have at most two vertices and red components
//! are stars with one to three edges. States the case analysis does not
//! recognize surface as [`TreeColorError::UnhandledCase`]; the exhaustive
//! sweeps in [`check_tree_theorem`] collect any such failures as data.

use serde::Serialize;
use thiserror::Error;

use crate::coloring::{Color, Coloring};
use crate::graph::Graph;
use crate::trees::{enumerate_subcubic_trees, TreeError, TreeSpec};
use crate::verify::{verify_crumby, CrumbyPredicate};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TreeColorError {
    #[error("no rule covers vertex {vertex}: {detail}")]
    UnhandledCase { vertex: usize, detail: String },
}

fn unhandled(vertex: usize, detail: impl Into<String>) -> TreeColorError {
    TreeColorError::UnhandledCase {
        vertex,
        detail: detail.into(),
    }
}

fn colored_degree(g: &Graph, colors: &[Option<Color>], v: usize) -> usize {
    g.neighbors(v)
        .iter()
        .filter(|&&u| colors[u].is_some())
        .count()
}

fn colored_neighbor_with(
    g: &Graph,
    colors: &[Option<Color>],
    v: usize,
    color: Color,
) -> Option<usize> {
    g.neighbors(v)
        .iter()
        .copied()
        .find(|&u| colors[u] == Some(color))
}

/// Would `w` be a red vertex with no red neighbor once `p` turns blue?
/// `w` itself is never touched by the recoloring that motivates the check.
fn red_orphan_if_p_blue(g: &Graph, colors: &[Option<Color>], w: usize, p: usize) -> bool {
    colors[w] == Some(Color::Red)
        && g.neighbors(w)
            .iter()
            .all(|&u| u == p || colors[u] != Some(Color::Red))
}

/// One coloring step: assign `v`, possibly recoloring within distance two
/// of its parent (parent, sibling, grandparent, uncle, cousin).
fn color_step(
    spec: &TreeSpec,
    g: &Graph,
    colors: &mut [Option<Color>],
    v: usize,
) -> Result<(), TreeColorError> {
    use Color::{Blue, Red};

    // The root opens the coloring in blue.
    let Some(x) = spec.parent(v) else {
        colors[v] = Some(Blue);
        return Ok(());
    };
    let d = colored_degree(g, colors, x);
    let cx = colors[x]
        .ok_or_else(|| unhandled(v, "parent is uncolored, breadth-first order broken"))?;

    match (d, cx) {
        // An isolated blue parent absorbs the new vertex into a blue edge.
        (0, Blue) => {
            colors[v] = Some(Blue);
            Ok(())
        }
        (1, Blue) => {
            if colored_neighbor_with(g, colors, x, Blue).is_none() {
                // Parent is a singleton blue: extend it to a blue edge.
                colors[v] = Some(Blue);
            } else {
                // Parent sits on a blue edge; cut it by flipping the parent
                // red, paired with the new red vertex.
                colors[v] = Some(Red);
                colors[x] = Some(Red);
            }
            Ok(())
        }
        // A red parent with spare capacity takes a blue leaf.
        (1, Red) | (2, Red) => {
            colors[v] = Some(Blue);
            Ok(())
        }
        (2, Blue) => color_step_blue_fork(spec, g, colors, v, x),
        (d, c) => Err(unhandled(
            v,
            format!("parent {x} is {c:?} with {d} colored neighbors"),
        )),
    }
}

/// The involved case: `v`'s parent `x` is blue with two colored neighbors.
/// The colored subtree invariant forces those neighbors to be a blue first
/// son `l` and a red parent `p`; the action depends on `p`'s surroundings.
fn color_step_blue_fork(
    spec: &TreeSpec,
    g: &Graph,
    colors: &mut [Option<Color>],
    v: usize,
    x: usize,
) -> Result<(), TreeColorError> {
    use Color::{Blue, Red};

    let Some(p) = spec.parent(x) else {
        return Err(unhandled(v, "blue two-neighbor parent is the root"));
    };
    let l = *spec
        .children(x)
        .first()
        .ok_or_else(|| unhandled(v, "blue two-neighbor parent has no colored son"))?;
    if colors[p] != Some(Red) {
        return Err(unhandled(
            v,
            format!("grandparent {p} is {:?}, expected red", colors[p]),
        ));
    }
    if colors[l] != Some(Blue) {
        return Err(unhandled(
            v,
            format!("sibling {l} is {:?}, expected blue", colors[l]),
        ));
    }

    // The three recoloring moves. `push_down` swaps the red/blue roles along
    // the grandparent path, and is valid only while `p` has no blue neighbor
    // that already sits on a blue edge. `weld` keeps the surroundings and
    // joins `x` onto the red component of `p`, valid only while that
    // component is a lone edge. `spread` handles the remaining square, where
    // `p`'s other son `s` holds a blue child `c` and `p`'s red component
    // extends past it: every pair along both branches becomes its own red
    // edge and `p` goes singleton blue.
    let push_down = |colors: &mut [Option<Color>]| {
        colors[l] = Some(Red);
        colors[v] = Some(Red);
        colors[x] = Some(Red);
        colors[p] = Some(Blue);
    };
    let weld = |colors: &mut [Option<Color>]| {
        colors[x] = Some(Red);
        colors[v] = Some(Blue);
    };
    let spread = |colors: &mut [Option<Color>], s: usize, c: usize| {
        colors[s] = Some(Red);
        colors[c] = Some(Red);
        colors[l] = Some(Red);
        colors[x] = Some(Red);
        colors[v] = Some(Blue);
        colors[p] = Some(Blue);
    };

    let dp = colored_degree(g, colors, p);
    match dp {
        2 => {
            // `p` has only `x` and one more colored neighbor: its parent,
            // or its other son when `p` is the root. That vertex must not
            // be orphaned by `p` turning blue.
            let w = match spec.parent(p) {
                Some(gp) => gp,
                None => *spec
                    .children(p)
                    .iter()
                    .find(|&&s| s != x)
                    .ok_or_else(|| unhandled(v, "root grandparent has a single son"))?,
            };
            if red_orphan_if_p_blue(g, colors, w, p) {
                weld(colors);
            } else {
                push_down(colors);
            }
            Ok(())
        }
        3 => {
            let sons = spec.children(p);
            let pos = sons
                .iter()
                .position(|&s| s == x)
                .expect("x is a son of its parent");
            let (sibling, x_on_edge) = if sons.len() >= 2 && pos == sons.len() - 1 {
                (sons[0], true)
            } else if sons.len() >= 2 && pos == 0 {
                (sons[sons.len() - 1], true)
            } else {
                (x, false)
            };
            if !x_on_edge {
                return Err(unhandled(
                    v,
                    format!("parent {x} is a middle son of {p}"),
                ));
            }
            match colors[sibling] {
                Some(Blue) => {
                    // A fully red path would meet `p` from above, so push
                    // the red component down unless that orphans the vertex
                    // feeding `p` red. When the push would instead pair `p`
                    // with a sibling already on a blue edge, spread both
                    // branches into red edges.
                    let w = match spec.parent(p) {
                        Some(gp) => gp,
                        None => *sons
                            .iter()
                            .find(|&&s| s != x && s != sibling)
                            .ok_or_else(|| unhandled(v, "no third son to keep p red"))?,
                    };
                    if red_orphan_if_p_blue(g, colors, w, p) {
                        weld(colors);
                    } else if let Some(c) = colored_neighbor_with(g, colors, sibling, Blue) {
                        if c == p || spec.parent(c) != Some(sibling) {
                            return Err(unhandled(
                                v,
                                format!("sibling {sibling} pairs blue outside its sons"),
                            ));
                        }
                        spread(colors, sibling, c);
                    } else {
                        push_down(colors);
                    }
                    Ok(())
                }
                Some(Red) => {
                    // `p` already holds a red son, so `x` can join that
                    // star; this may grow it to three edges but never to a
                    // three-edge path.
                    colors[x] = Some(Red);
                    colors[l] = Some(Blue);
                    colors[v] = Some(Blue);
                    Ok(())
                }
                None => Err(unhandled(
                    v,
                    format!("sibling {sibling} of parent {x} is uncolored"),
                )),
            }
        }
        dp => Err(unhandled(
            v,
            format!("grandparent {p} has {dp} colored neighbors"),
        )),
    }
}

#[cfg(debug_assertions)]
fn assert_step_invariants(
    spec: &TreeSpec,
    g: &Graph,
    before: &[Option<Color>],
    after: &[Option<Color>],
    v: usize,
) {
    // Only the new vertex gained a color.
    let newly: Vec<usize> = (0..after.len())
        .filter(|&u| before[u].is_none() && after[u].is_some())
        .collect();
    assert_eq!(newly, vec![v], "exactly the new vertex becomes colored");

    // Recolorings stay inside {v, parent, first sibling, grandparent,
    // grandparent's other sons and their sons}.
    let mut allowed = vec![v];
    if let Some(x) = spec.parent(v) {
        allowed.push(x);
        if let Some(&l) = spec.children(x).first() {
            allowed.push(l);
        }
        if let Some(p) = spec.parent(x) {
            allowed.push(p);
            for &s in spec.children(p) {
                allowed.push(s);
                allowed.extend_from_slice(spec.children(s));
            }
        }
    }
    let changed: Vec<usize> = (0..after.len()).filter(|&u| before[u] != after[u]).collect();
    assert!(changed.len() <= 6, "at most six vertices change per step");
    for u in &changed {
        assert!(allowed.contains(u), "recoloring strays from the step site");
    }

    // The colored subtree stays strictly valid.
    let ids: Vec<usize> = (0..after.len()).filter(|&u| after[u].is_some()).collect();
    let mut index = vec![usize::MAX; after.len()];
    for (i, &u) in ids.iter().enumerate() {
        index[u] = i;
    }
    let mut sub = Graph::empty(ids.len());
    let mut sub_colors = Coloring::uncolored(ids.len());
    for &u in &ids {
        sub_colors.set(index[u], after[u].unwrap());
        for &w in g.neighbors(u) {
            if u < w && index[w] != usize::MAX {
                sub.add_edge(index[u], index[w]).unwrap();
            }
        }
    }
    let report = verify_crumby(&sub, &sub_colors, &CrumbyPredicate::strict());
    assert!(
        report.valid,
        "colored subtree invariant broken at vertex {v}: {:?}",
        report.violations
    );
}

/// Colors the tree in breadth-first order from its root. The result is a
/// total coloring whose blue components have at most two vertices and whose
/// red components are stars with one to three edges.
pub fn color_tree(spec: &TreeSpec) -> Result<Coloring, TreeColorError> {
    let g = spec.to_graph();
    let n = spec.n();
    let mut colors: Vec<Option<Color>> = vec![None; n];
    for v in spec.bfs_order() {
        #[cfg(debug_assertions)]
        let before = colors.clone();
        color_step(spec, &g, &mut colors, v)?;
        #[cfg(debug_assertions)]
        assert_step_invariants(spec, &g, &before, &colors, v);
    }
    let mut coloring = Coloring::uncolored(n);
    for (u, slot) in colors.iter().enumerate() {
        coloring.set(u, slot.expect("every vertex colored"));
    }
    Ok(coloring)
}

#[derive(Debug, Clone, Serialize)]
pub struct TheoremFailure {
    pub parents: Vec<i64>,
    pub reason: String,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct TheoremCheckReport {
    pub trees_checked: u64,
    pub failures: Vec<TheoremFailure>,
}

/// Runs [`color_tree`] over every rooted subcubic tree with up to `n_max`
/// vertices and re-verifies each result, collecting failures instead of
/// stopping on them.
pub fn check_tree_theorem(n_max: usize) -> Result<TheoremCheckReport, TreeError> {
    let mut report = TheoremCheckReport::default();
    for n in 1..=n_max {
        enumerate_subcubic_trees(n, |spec| {
            report.trees_checked += 1;
            match color_tree(spec) {
                Err(err) => report.failures.push(TheoremFailure {
                    parents: spec.to_parent_array(),
                    reason: err.to_string(),
                }),
                Ok(coloring) => {
                    let g = spec.to_graph();
                    let verdict = verify_crumby(&g, &coloring, &CrumbyPredicate::strict());
                    if !verdict.valid {
                        report.failures.push(TheoremFailure {
                            parents: spec.to_parent_array(),
                            reason: format!(
                                "coloring {} violates {:?}",
                                coloring.to_color_string(),
                                verdict.violations
                            ),
                        });
                    }
                }
            }
        })?;
    }
    Ok(report)
}
