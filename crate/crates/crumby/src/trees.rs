//! Rooted subcubic trees with ordered children: validation, exhaustive
//! enumeration for small sizes, an independent counting recurrence that
//! cross-checks the enumerator, and seeded random generation.

use std::rc::Rc;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TreeError {
    #[error("tree must have exactly one root, found {0}")]
    RootCount(usize),
    #[error("parent {parent} of vertex {child} out of range")]
    ParentOutOfRange { child: usize, parent: usize },
    #[error("parent links of vertex {0} do not reach the root")]
    Cyclic(usize),
    #[error("vertex {vertex} has {children} children, cap is {cap}")]
    TooManyChildren {
        vertex: usize,
        children: usize,
        cap: usize,
    },
    #[error("tree enumeration capped at 16 vertices, got {0}")]
    EnumerationTooLarge(usize),
    #[error("tree needs at least one vertex")]
    Empty,
}

/// Rooted tree with every vertex of total degree at most 3: the root may
/// have up to three children, any other vertex up to two. Children are
/// ordered by vertex id, which fixes the left/right role everywhere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeSpec {
    parents: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    root: usize,
}

impl TreeSpec {
    /// Builds and validates a tree from a parent array; entry `-1` marks the
    /// root, every other entry is the parent's vertex id.
    pub fn from_parents(parents: &[i64]) -> Result<Self, TreeError> {
        let n = parents.len();
        if n == 0 {
            return Err(TreeError::Empty);
        }
        let mut opt = Vec::with_capacity(n);
        let mut root = None;
        for (child, &p) in parents.iter().enumerate() {
            if p < 0 {
                if root.is_some() {
                    return Err(TreeError::RootCount(2));
                }
                root = Some(child);
                opt.push(None);
            } else {
                let p = p as usize;
                if p >= n {
                    return Err(TreeError::ParentOutOfRange { child, parent: p });
                }
                opt.push(Some(p));
            }
        }
        let Some(root) = root else {
            return Err(TreeError::RootCount(0));
        };
        let mut children = vec![Vec::new(); n];
        for (child, parent) in opt.iter().enumerate() {
            if let Some(p) = *parent {
                children[p].push(child);
            }
        }
        // Ids ascend within each child list, so insertion order already
        // matches the left-to-right order; still assert the degree caps.
        for v in 0..n {
            let cap = if v == root { 3 } else { 2 };
            if children[v].len() > cap {
                return Err(TreeError::TooManyChildren {
                    vertex: v,
                    children: children[v].len(),
                    cap,
                });
            }
        }
        // Every vertex must reach the root without revisiting anything.
        for start in 0..n {
            let mut hops = 0;
            let mut v = start;
            while let Some(p) = opt[v] {
                v = p;
                hops += 1;
                if hops > n {
                    return Err(TreeError::Cyclic(start));
                }
            }
            if v != root {
                return Err(TreeError::Cyclic(start));
            }
        }
        Ok(TreeSpec {
            parents: opt,
            children,
            root,
        })
    }

    pub fn n(&self) -> usize {
        self.parents.len()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parents[v]
    }

    /// Children of `v` in left-to-right order.
    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn to_parent_array(&self) -> Vec<i64> {
        self.parents
            .iter()
            .map(|p| p.map_or(-1, |v| v as i64))
            .collect()
    }

    pub fn to_graph(&self) -> Graph {
        let mut g = Graph::empty(self.n());
        for (child, parent) in self.parents.iter().enumerate() {
            if let Some(p) = *parent {
                g.add_edge(p, child).unwrap();
            }
        }
        g
    }

    /// Vertices in breadth-first order from the root, children left to right.
    pub fn bfs_order(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.n());
        let mut queue = std::collections::VecDeque::from([self.root]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            queue.extend(self.children(v).iter().copied());
        }
        order
    }
}

impl Serialize for TreeSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            parents: Vec<i64>,
        }
        Repr {
            parents: self.to_parent_array(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TreeSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            parents: Vec<i64>,
        }
        let repr = Repr::deserialize(deserializer)?;
        TreeSpec::from_parents(&repr.parents).map_err(D::Error::custom)
    }
}

/// Ordered tree shape with at most two children per node; shapes are shared
/// through `Rc` because subtree lists repeat heavily across sizes.
#[derive(Debug)]
struct Shape {
    children: Vec<Rc<Shape>>,
}

fn shapes_up_to(max_size: usize) -> Vec<Vec<Rc<Shape>>> {
    let mut by_size: Vec<Vec<Rc<Shape>>> = vec![Vec::new(); max_size + 1];
    if max_size == 0 {
        return by_size;
    }
    by_size[1].push(Rc::new(Shape {
        children: Vec::new(),
    }));
    for size in 2..=max_size {
        let mut shapes = Vec::new();
        for child in &by_size[size - 1] {
            shapes.push(Rc::new(Shape {
                children: vec![child.clone()],
            }));
        }
        for left_size in 1..size.saturating_sub(1) {
            let right_size = size - 1 - left_size;
            for left in &by_size[left_size] {
                for right in &by_size[right_size] {
                    shapes.push(Rc::new(Shape {
                        children: vec![left.clone(), right.clone()],
                    }));
                }
            }
        }
        by_size[size] = shapes;
    }
    by_size
}

fn shape_to_parents(out: &mut Vec<i64>, shape: &Shape, parent: i64) {
    let id = out.len() as i64;
    out.push(parent);
    for child in &shape.children {
        shape_to_parents(out, child, id);
    }
}

/// Calls `f` once per rooted ordered subcubic tree on exactly `n` vertices.
/// Vertices are labeled in preorder, so every structural tree appears under
/// exactly one labeling. Capped at `n <= 16`.
pub fn enumerate_subcubic_trees(
    n: usize,
    mut f: impl FnMut(&TreeSpec),
) -> Result<(), TreeError> {
    if n == 0 {
        return Err(TreeError::Empty);
    }
    if n > 16 {
        return Err(TreeError::EnumerationTooLarge(n));
    }
    let shapes = shapes_up_to(n - 1);
    let mut emit = |root_children: &[&Rc<Shape>]| {
        let mut parents = Vec::with_capacity(n);
        parents.push(-1);
        for shape in root_children {
            shape_to_parents(&mut parents, shape, 0);
        }
        let tree = TreeSpec::from_parents(&parents).expect("generated trees are valid");
        f(&tree);
    };
    let rest = n - 1;
    if rest == 0 {
        emit(&[]);
        return Ok(());
    }
    for a in &shapes[rest] {
        emit(&[a]);
    }
    for size_a in 1..rest {
        let size_b = rest - size_a;
        for a in &shapes[size_a] {
            for b in &shapes[size_b] {
                emit(&[a, b]);
            }
        }
    }
    for size_a in 1..rest {
        for size_b in 1..rest.saturating_sub(size_a) {
            let size_c = rest - size_a - size_b;
            for a in &shapes[size_a] {
                for b in &shapes[size_b] {
                    for c in &shapes[size_c] {
                        emit(&[a, b, c]);
                    }
                }
            }
        }
    }
    Ok(())
}

/// Counts the same family by an independent convolution recurrence, without
/// building any tree: `c2[s]` counts ordered trees on `s` vertices with at
/// most two children per node, and the root case sums over compositions of
/// `n - 1` into up to three such subtrees.
pub fn count_subcubic_trees(n: usize) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut c2 = vec![0u64; n.max(2)];
    c2[1] = 1;
    for s in 2..c2.len() {
        let mut total = c2[s - 1];
        for a in 1..s - 1 {
            total += c2[a] * c2[s - 1 - a];
        }
        c2[s] = total;
    }
    let rest = n - 1;
    if rest == 0 {
        return 1;
    }
    let mut total = c2[rest];
    for a in 1..rest {
        total += c2[a] * c2[rest - a];
    }
    for a in 1..rest {
        for b in 1..rest - a {
            total += c2[a] * c2[b] * c2[rest - a - b];
        }
    }
    total
}

/// Random subcubic rooted tree: vertex `i` attaches to a uniformly chosen
/// earlier vertex that still has child capacity. Deterministic per seed.
pub fn random_subcubic_tree(n: usize, seed: u64) -> Result<TreeSpec, TreeError> {
    if n == 0 {
        return Err(TreeError::Empty);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut parents = vec![-1i64; n];
    let mut child_count = vec![0usize; n];
    for i in 1..n {
        let candidates: Vec<usize> = (0..i)
            .filter(|&j| child_count[j] < if j == 0 { 3 } else { 2 })
            .collect();
        let pick = candidates[rng.gen_range(0..candidates.len())];
        parents[i] = pick as i64;
        child_count[pick] += 1;
    }
    TreeSpec::from_parents(&parents)
}
