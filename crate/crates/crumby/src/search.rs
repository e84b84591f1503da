//! Exhaustive and pruned backtracking search over red-blue colorings.
//!
//! The engine assigns vertices in a fixed order (by default breadth-first
//! from a maximum-degree vertex, so prefixes stay connected) and prunes a
//! branch as soon as the partial assignment carries a violation that no
//! extension can repair. Every pruning rule is irrevocable by construction,
//! so for counting goals the pruned search visits exactly the valid leaves
//! of the full 2^n tree.

use std::path::PathBuf;
use std::sync::Mutex;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::{Color, Coloring};
use crate::graph::Graph;
use crate::verify::{
    build_aux_rb_graph, check_rbipm_necessary, verify_crumby, verify_induced_matching,
    CrumbyPredicate, RbipmObstruction,
};

/// Practical bound for the exhaustive modes; FindFirst accepts any size.
pub const MAX_EXHAUSTIVE_N: usize = 40;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("{n} unassigned vertices exceed the exhaustive-search bound {max}")]
    TooLarge { n: usize, max: usize },
    #[error("component sizes must form a non-empty subset of {{1,2,3,4}}")]
    BadSizes,
    #[error("explicit order must list each unassigned vertex exactly once")]
    BadOrder,
    #[error("fixed coloring has {got} slots for a graph with {want} vertices")]
    BadFixed { got: usize, want: usize },
    #[error("checkpoint does not match this search: {0}")]
    CheckpointMismatch(String),
    #[error("checkpoint io: {0}")]
    CheckpointIo(#[from] std::io::Error),
    #[error("checkpoint format: {0}")]
    CheckpointFormat(#[from] serde_json::Error),
}

/// Allowed component sizes, a non-empty subset of {1,2,3,4}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SizeSet(u8);

impl SizeSet {
    pub fn from_sizes(sizes: &[usize]) -> Result<Self, SearchError> {
        let mut bits = 0u8;
        for &s in sizes {
            if !(1..=4).contains(&s) {
                return Err(SearchError::BadSizes);
            }
            bits |= 1 << s;
        }
        if bits == 0 {
            return Err(SearchError::BadSizes);
        }
        Ok(SizeSet(bits))
    }

    pub fn contains(self, size: usize) -> bool {
        (1..=4).contains(&size) && self.0 >> size & 1 == 1
    }

    pub fn max(self) -> usize {
        (1..=4).rev().find(|&s| self.contains(s)).unwrap()
    }

    pub fn sizes(self) -> Vec<usize> {
        (1..=4).filter(|&s| self.contains(s)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchPredicate {
    Crumby(CrumbyPredicate),
    InducedMatching { require_perfect: bool },
    /// Pure component-size constraints per color class.
    Custom { blue_sizes: SizeSet, red_sizes: SizeSet },
}

impl SearchPredicate {
    /// Whether swapping the two colors maps valid colorings onto valid
    /// colorings, which is what makes the symmetry fix sound.
    fn swap_symmetric(&self) -> bool {
        match self {
            SearchPredicate::Crumby(_) => false,
            SearchPredicate::InducedMatching { .. } => true,
            SearchPredicate::Custom {
                blue_sizes,
                red_sizes,
            } => blue_sizes == red_sizes,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SearchMode {
    FindFirst,
    CountAll,
    ProveNone,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchGoal {
    pub predicate: SearchPredicate,
    pub mode: SearchMode,
    /// Pin the first branch vertex to Red and double counts. Applied only
    /// when the predicate is color-swap symmetric and no vertices are fixed;
    /// `SearchStats::applied_symmetry` records whether it took effect.
    pub symmetry_fix: bool,
}

impl SearchGoal {
    pub fn crumby(mode: SearchMode) -> Self {
        SearchGoal {
            predicate: SearchPredicate::Crumby(CrumbyPredicate::default()),
            mode,
            symmetry_fix: false,
        }
    }

    pub fn crumby_with(p: CrumbyPredicate, mode: SearchMode) -> Self {
        SearchGoal {
            predicate: SearchPredicate::Crumby(p),
            mode,
            symmetry_fix: false,
        }
    }

    pub fn rbipm(mode: SearchMode) -> Self {
        SearchGoal {
            predicate: SearchPredicate::InducedMatching {
                require_perfect: true,
            },
            mode,
            symmetry_fix: true,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PruneCounts {
    pub blue_overdegree: u64,
    pub red_overdegree: u64,
    pub red_long_path: u64,
    pub isolated_vertex: u64,
    pub component_size: u64,
    pub component_shape: u64,
    pub forced_color: u64,
    pub symmetry_skips: u64,
}

impl PruneCounts {
    fn merge(&mut self, other: &PruneCounts) {
        self.blue_overdegree += other.blue_overdegree;
        self.red_overdegree += other.red_overdegree;
        self.red_long_path += other.red_long_path;
        self.isolated_vertex += other.isolated_vertex;
        self.component_size += other.component_size;
        self.component_shape += other.component_shape;
        self.forced_color += other.forced_color;
        self.symmetry_skips += other.symmetry_skips;
    }

    pub fn total(&self) -> u64 {
        self.blue_overdegree
            + self.red_overdegree
            + self.red_long_path
            + self.isolated_vertex
            + self.component_size
            + self.component_shape
            + self.forced_color
            + self.symmetry_skips
    }
}

#[derive(Debug, Clone, Copy)]
enum PruneReason {
    BlueOver,
    RedOver,
    RedPath,
    Isolated,
    CompSize,
    CompShape,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SearchResult {
    Witness(Coloring),
    Count(u64),
    NoneExists,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub prunes: PruneCounts,
    pub wall_ms: u64,
    pub applied_symmetry: bool,
    pub result: SearchResult,
}

/// Extra controls for [`search_colorings_with`].
#[derive(Debug, Clone, Default)]
pub struct SearchOptions {
    /// Frozen partial assignment; the search extends it without revisiting
    /// the fixed vertices.
    pub fixed: Option<Coloring>,
    /// Branch order over the unassigned vertices; defaults to
    /// [`default_search_order`] restricted to them.
    pub order: Option<Vec<usize>>,
    /// Worker count; 0 or 1 runs sequentially.
    pub jobs: usize,
    /// Depth at which the search tree is split into independent prefixes for
    /// parallel work or checkpointing; chosen automatically when absent.
    pub split_depth: Option<usize>,
    /// Resumable progress file for CountAll and ProveNone; ignored by
    /// FindFirst. Completed prefixes are skipped on resume.
    pub checkpoint: Option<PathBuf>,
}

/// Breadth-first order from a maximum-degree vertex (lowest id on ties),
/// restarted per component. Keeps assigned prefixes connected so violations
/// surface early.
pub fn default_search_order(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let root = (0..n)
            .filter(|&v| !seen[v])
            .min_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v))
            .unwrap();
        seen[root] = true;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &u in g.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
    }
    order
}

struct Engine<'a> {
    g: &'a Graph,
    order: &'a [usize],
    goal: &'a SearchGoal,
    colors: Vec<Option<Color>>,
    pin_first: bool,
    stop_at_first: bool,
    nodes: u64,
    prunes: PruneCounts,
    count: u64,
    witness: Option<Coloring>,
}

impl<'a> Engine<'a> {
    fn new(
        g: &'a Graph,
        order: &'a [usize],
        goal: &'a SearchGoal,
        colors: Vec<Option<Color>>,
        pin_first: bool,
    ) -> Self {
        let stop_at_first = matches!(goal.mode, SearchMode::FindFirst | SearchMode::ProveNone);
        Engine {
            g,
            order,
            goal,
            colors,
            pin_first,
            stop_at_first,
            nodes: 0,
            prunes: PruneCounts::default(),
            count: 0,
            witness: None,
        }
    }

    /// Returns true when the search should stop (a witness was found).
    fn run(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            return self.leaf();
        }
        let v = self.order[depth];
        for color in [Color::Red, Color::Blue] {
            if self.pin_first && depth == 0 && color == Color::Blue {
                self.prunes.symmetry_skips += 1;
                continue;
            }
            if self.forced_against(v, color) {
                self.prunes.forced_color += 1;
                continue;
            }
            self.nodes += 1;
            self.colors[v] = Some(color);
            match self.violation(v, color) {
                Some(reason) => self.bump(reason),
                None => {
                    if self.run(depth + 1) {
                        self.colors[v] = None;
                        return true;
                    }
                }
            }
            self.colors[v] = None;
        }
        false
    }

    fn leaf(&mut self) -> bool {
        debug_assert!(
            self.full_check(),
            "incremental pruning must imply leaf validity"
        );
        self.count += 1;
        if self.stop_at_first {
            self.witness = Some(self.snapshot());
            return true;
        }
        false
    }

    fn snapshot(&self) -> Coloring {
        let mut c = Coloring::uncolored(self.g.n());
        for (v, slot) in self.colors.iter().enumerate() {
            if let Some(color) = slot {
                c.set(v, *color);
            }
        }
        c
    }

    fn full_check(&self) -> bool {
        let c = self.snapshot();
        match &self.goal.predicate {
            SearchPredicate::Crumby(p) => verify_crumby(self.g, &c, p).valid,
            SearchPredicate::InducedMatching { require_perfect } => {
                verify_induced_matching(self.g, &c, *require_perfect).valid
            }
            SearchPredicate::Custom {
                blue_sizes,
                red_sizes,
            } => component_sizes_ok(self.g, &c, *blue_sizes, *red_sizes),
        }
    }

    fn bump(&mut self, reason: PruneReason) {
        match reason {
            PruneReason::BlueOver => self.prunes.blue_overdegree += 1,
            PruneReason::RedOver => self.prunes.red_overdegree += 1,
            PruneReason::RedPath => self.prunes.red_long_path += 1,
            PruneReason::Isolated => self.prunes.isolated_vertex += 1,
            PruneReason::CompSize => self.prunes.component_size += 1,
            PruneReason::CompShape => self.prunes.component_shape += 1,
        }
    }

    /// Pre-branch propagation for matching goals: a neighbor that already
    /// has a same-colored partner cannot take another one, so this color is
    /// dead before assignment.
    fn forced_against(&self, v: usize, color: Color) -> bool {
        if !matches!(self.goal.predicate, SearchPredicate::InducedMatching { .. }) {
            return false;
        }
        self.g.neighbors(v).iter().any(|&x| {
            self.colors[x] == Some(color) && self.same_color_degree(x, color) >= 1
        })
    }

    fn same_color_degree(&self, v: usize, color: Color) -> usize {
        self.g
            .neighbors(v)
            .iter()
            .filter(|&&u| self.colors[u] == Some(color))
            .count()
    }

    /// Irrevocable-violation check after assigning `v`. Every rule only
    /// fires on conditions that no extension of the current assignment can
    /// undo.
    fn violation(&mut self, v: usize, color: Color) -> Option<PruneReason> {
        match &self.goal.predicate {
            SearchPredicate::Crumby(p) => self.crumby_violation(v, color, *p),
            SearchPredicate::InducedMatching { require_perfect } => {
                self.matching_violation(v, color, *require_perfect)
            }
            SearchPredicate::Custom {
                blue_sizes,
                red_sizes,
            } => self.custom_violation(v, color, *blue_sizes, *red_sizes),
        }
    }

    fn crumby_violation(
        &mut self,
        v: usize,
        color: Color,
        p: CrumbyPredicate,
    ) -> Option<PruneReason> {
        if color == Color::Blue {
            if self.overdegree_around(v, Color::Blue) {
                return Some(PruneReason::BlueOver);
            }
        } else {
            if self.red_path_through(v, p.red_path_bound) {
                return Some(PruneReason::RedPath);
            }
            if p.strict_stars {
                if let Some(reason) = self.star_violation(v) {
                    return Some(reason);
                }
            }
        }
        if self.completed_isolated_nearby(v, true, false) {
            return Some(PruneReason::Isolated);
        }
        None
    }

    fn matching_violation(
        &mut self,
        v: usize,
        color: Color,
        require_perfect: bool,
    ) -> Option<PruneReason> {
        if self.overdegree_around(v, color) {
            return Some(match color {
                Color::Red => PruneReason::RedOver,
                Color::Blue => PruneReason::BlueOver,
            });
        }
        if require_perfect && self.completed_isolated_nearby(v, true, true) {
            return Some(PruneReason::Isolated);
        }
        None
    }

    fn custom_violation(
        &mut self,
        v: usize,
        color: Color,
        blue_sizes: SizeSet,
        red_sizes: SizeSet,
    ) -> Option<PruneReason> {
        let sizes_of = |c: Color| match c {
            Color::Blue => blue_sizes,
            Color::Red => red_sizes,
        };
        let own = self.mono_component(v, color);
        if own.len() > sizes_of(color).max() {
            return Some(PruneReason::CompSize);
        }
        if self.component_closed(&own) && !sizes_of(color).contains(own.len()) {
            return Some(PruneReason::CompSize);
        }
        // Assigning v may have sealed an adjacent opposite-colored
        // component: its last unassigned boundary vertex was v.
        let other = color.opposite();
        let mut checked: Vec<Vec<usize>> = Vec::new();
        for &u in self.g.neighbors(v) {
            if self.colors[u] != Some(other) || checked.iter().any(|c| c.contains(&u)) {
                continue;
            }
            let comp = self.mono_component(u, other);
            if self.component_closed(&comp) && !sizes_of(other).contains(comp.len()) {
                return Some(PruneReason::CompSize);
            }
            checked.push(comp);
        }
        None
    }

    /// True when `v` or one of its same-colored assigned neighbors has two
    /// or more same-colored assigned neighbors. Only `v`'s assignment can
    /// have created the condition, so scanning its closed neighborhood is
    /// complete.
    fn overdegree_around(&self, v: usize, color: Color) -> bool {
        if self.same_color_degree(v, color) >= 2 {
            return true;
        }
        self.g.neighbors(v).iter().any(|&u| {
            self.colors[u] == Some(color) && self.same_color_degree(u, color) >= 2
        })
    }

    /// True when some vertex in the closed neighborhood of `v` is colored,
    /// has its whole neighborhood assigned, and has no same-colored
    /// neighbor. Firing any earlier would be unsound because an unassigned
    /// neighbor could still supply the partner.
    fn completed_isolated_nearby(&self, v: usize, check_red: bool, check_blue: bool) -> bool {
        std::iter::once(v)
            .chain(self.g.neighbors(v).iter().copied())
            .any(|w| {
                let Some(cw) = self.colors[w] else {
                    return false;
                };
                let relevant = match cw {
                    Color::Red => check_red,
                    Color::Blue => check_blue,
                };
                relevant
                    && self.g.neighbors(w).iter().all(|&u| self.colors[u].is_some())
                    && self.same_color_degree(w, cw) == 0
            })
    }

    /// Any new red path with exactly `bound` edges must pass through the
    /// vertex just assigned. Enumerate a left arm of `a` edges and a
    /// vertex-disjoint right arm of `bound - a` edges, both from `v`.
    fn red_path_through(&self, v: usize, bound: usize) -> bool {
        let mut blocked = vec![false; self.g.n()];
        blocked[v] = true;
        for a in 0..=bound {
            if self.left_arm(v, v, a, bound - a, &mut blocked) {
                return true;
            }
        }
        false
    }

    fn left_arm(
        &self,
        origin: usize,
        cur: usize,
        left: usize,
        right: usize,
        blocked: &mut Vec<bool>,
    ) -> bool {
        if left == 0 {
            return self.right_arm(origin, right, blocked);
        }
        for &u in self.g.neighbors(cur) {
            if self.colors[u] == Some(Color::Red) && !blocked[u] {
                blocked[u] = true;
                let hit = self.left_arm(origin, u, left - 1, right, blocked);
                blocked[u] = false;
                if hit {
                    return true;
                }
            }
        }
        false
    }

    fn right_arm(&self, cur: usize, remaining: usize, blocked: &mut Vec<bool>) -> bool {
        if remaining == 0 {
            return true;
        }
        for &u in self.g.neighbors(cur) {
            if self.colors[u] == Some(Color::Red) && !blocked[u] {
                blocked[u] = true;
                let hit = self.right_arm(u, remaining - 1, blocked);
                blocked[u] = false;
                if hit {
                    return true;
                }
            }
        }
        false
    }

    /// Star-shape pruning for strict mode: the assigned red component of `v`
    /// may never exceed 4 vertices, hold two branch vertices, or hold a
    /// vertex of red degree 4 — red components only grow, so each condition
    /// is final.
    fn star_violation(&self, v: usize) -> Option<PruneReason> {
        let comp = self.mono_component(v, Color::Red);
        if comp.len() > 4 {
            return Some(PruneReason::CompSize);
        }
        let mut high = 0;
        for &w in &comp {
            match self.same_color_degree(w, Color::Red) {
                d if d >= 4 => return Some(PruneReason::CompShape),
                d if d >= 2 => high += 1,
                _ => {}
            }
        }
        if high >= 2 {
            return Some(PruneReason::CompShape);
        }
        None
    }

    fn mono_component(&self, v: usize, color: Color) -> Vec<usize> {
        let mut comp = vec![v];
        let mut head = 0;
        while head < comp.len() {
            let w = comp[head];
            head += 1;
            for &u in self.g.neighbors(w) {
                if self.colors[u] == Some(color) && !comp.contains(&u) {
                    comp.push(u);
                }
            }
        }
        comp
    }

    fn component_closed(&self, comp: &[usize]) -> bool {
        comp.iter()
            .all(|&w| self.g.neighbors(w).iter().all(|&u| self.colors[u].is_some()))
    }

    /// Enumerates all surviving assignments of the first `split` order
    /// vertices, for parallel or checkpointed execution.
    fn collect_prefixes(&mut self, depth: usize, split: usize, out: &mut Vec<Vec<Color>>) {
        if depth == split {
            let prefix = self.order[..split]
                .iter()
                .map(|&v| self.colors[v].unwrap())
                .collect();
            out.push(prefix);
            return;
        }
        let v = self.order[depth];
        for color in [Color::Red, Color::Blue] {
            if self.pin_first && depth == 0 && color == Color::Blue {
                self.prunes.symmetry_skips += 1;
                continue;
            }
            if self.forced_against(v, color) {
                self.prunes.forced_color += 1;
                continue;
            }
            self.nodes += 1;
            self.colors[v] = Some(color);
            match self.violation(v, color) {
                Some(reason) => self.bump(reason),
                None => self.collect_prefixes(depth + 1, split, out),
            }
            self.colors[v] = None;
        }
    }
}

/// Checks the custom component-size predicate on a total coloring.
fn component_sizes_ok(g: &Graph, c: &Coloring, blue_sizes: SizeSet, red_sizes: SizeSet) -> bool {
    if !c.is_total() {
        return false;
    }
    for (color, sizes) in [(Color::Blue, blue_sizes), (Color::Red, red_sizes)] {
        let (sub, _) = c.color_class_subgraph(g, color);
        for comp in sub.connected_components() {
            if !sizes.contains(comp.len()) {
                return false;
            }
        }
    }
    true
}

#[derive(Serialize, Deserialize)]
struct CheckpointState {
    fingerprint: String,
    done: Vec<(u64, u64)>,
}

fn checkpoint_fingerprint(
    g: &Graph,
    goal: &SearchGoal,
    order: &[usize],
    fixed: &[Option<Color>],
    split: usize,
) -> String {
    let mut edge_hash: u64 = 0xcbf2_9ce4_8422_2325;
    for (a, b) in g.edges() {
        for byte in [a as u64, b as u64] {
            edge_hash ^= byte;
            edge_hash = edge_hash.wrapping_mul(0x1000_0000_01b3);
        }
    }
    let fixed_repr: String = fixed
        .iter()
        .map(|s| match s {
            Some(Color::Red) => 'R',
            Some(Color::Blue) => 'B',
            None => '.',
        })
        .collect();
    format!(
        "v1|n={}|m={}|h={edge_hash:016x}|goal={:?}|order={:?}|fixed={}|split={}",
        g.n(),
        g.edge_count(),
        goal,
        order,
        fixed_repr,
        split
    )
}

fn load_checkpoint(
    path: &PathBuf,
    fingerprint: &str,
) -> Result<std::collections::HashMap<u64, u64>, SearchError> {
    if !path.exists() {
        return Ok(std::collections::HashMap::new());
    }
    let text = std::fs::read_to_string(path)?;
    let state: CheckpointState = serde_json::from_str(&text)?;
    if state.fingerprint != fingerprint {
        return Err(SearchError::CheckpointMismatch(state.fingerprint));
    }
    Ok(state.done.into_iter().collect())
}

fn store_checkpoint(
    path: &PathBuf,
    fingerprint: &str,
    done: &std::collections::HashMap<u64, u64>,
) -> Result<(), SearchError> {
    let mut entries: Vec<(u64, u64)> = done.iter().map(|(&k, &v)| (k, v)).collect();
    entries.sort_unstable();
    let state = CheckpointState {
        fingerprint: fingerprint.to_string(),
        done: entries,
    };
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, serde_json::to_string(&state)?)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// Runs the goal with default options: sequential, no fixed assignment,
/// breadth-first branch order.
pub fn search_colorings(g: &Graph, goal: &SearchGoal) -> Result<SearchStats, SearchError> {
    search_colorings_with(g, goal, &SearchOptions::default())
}

/// Full-control entry point; see [`SearchOptions`].
pub fn search_colorings_with(
    g: &Graph,
    goal: &SearchGoal,
    opts: &SearchOptions,
) -> Result<SearchStats, SearchError> {
    let start = Instant::now();
    let n = g.n();

    let mut base: Vec<Option<Color>> = vec![None; n];
    if let Some(fixed) = &opts.fixed {
        if fixed.n() != n {
            return Err(SearchError::BadFixed {
                got: fixed.n(),
                want: n,
            });
        }
        for v in 0..n {
            base[v] = fixed.get(v);
        }
    }
    let assigned: Vec<usize> = (0..n).filter(|&v| base[v].is_some()).collect();

    let order: Vec<usize> = match &opts.order {
        Some(order) => {
            let mut seen = vec![false; n];
            for &v in order {
                if v >= n || seen[v] || base[v].is_some() {
                    return Err(SearchError::BadOrder);
                }
                seen[v] = true;
            }
            if order.len() + assigned.len() != n {
                return Err(SearchError::BadOrder);
            }
            order.clone()
        }
        None => default_search_order(g)
            .into_iter()
            .filter(|&v| base[v].is_none())
            .collect(),
    };

    if matches!(goal.mode, SearchMode::CountAll | SearchMode::ProveNone)
        && order.len() > MAX_EXHAUSTIVE_N
    {
        return Err(SearchError::TooLarge {
            n: order.len(),
            max: MAX_EXHAUSTIVE_N,
        });
    }

    let applied_symmetry = goal.symmetry_fix
        && goal.predicate.swap_symmetric()
        && assigned.is_empty()
        && !order.is_empty();

    // Replay the fixed assignment through the same violation checks the
    // search applies, so a contradictory partial input dies immediately and
    // the leaf-validity induction still holds.
    let mut engine = Engine::new(g, &order, goal, vec![None; n], applied_symmetry);
    let mut fixed_dead = false;
    for &v in &assigned {
        let color = base[v].unwrap();
        engine.colors[v] = Some(color);
        if let Some(reason) = engine.violation(v, color) {
            engine.bump(reason);
            fixed_dead = true;
            break;
        }
    }

    let (count, witness) = if fixed_dead {
        (0, None)
    } else if opts.jobs > 1 || opts.checkpoint.is_some() {
        run_split(g, goal, &order, &engine.colors.clone(), applied_symmetry, opts, &mut engine)?
    } else {
        engine.run(0);
        (engine.count, engine.witness.take())
    };

    if let Some(w) = &witness {
        let ok = match &goal.predicate {
            SearchPredicate::Crumby(p) => verify_crumby(g, w, p).valid,
            SearchPredicate::InducedMatching { require_perfect } => {
                verify_induced_matching(g, w, *require_perfect).valid
            }
            SearchPredicate::Custom {
                blue_sizes,
                red_sizes,
            } => component_sizes_ok(g, w, *blue_sizes, *red_sizes),
        };
        assert!(ok, "witness failed re-verification");
    }

    let result = match goal.mode {
        SearchMode::CountAll => {
            let factor = if applied_symmetry { 2 } else { 1 };
            SearchResult::Count(count * factor)
        }
        SearchMode::FindFirst | SearchMode::ProveNone => match witness {
            Some(w) => SearchResult::Witness(w),
            None => SearchResult::NoneExists,
        },
    };

    Ok(SearchStats {
        nodes: engine.nodes,
        prunes: engine.prunes,
        wall_ms: start.elapsed().as_millis() as u64,
        applied_symmetry,
        result,
    })
}

/// Prefix-split execution: enumerate surviving assignments of the first
/// `split` vertices, then run the independent subtrees in parallel and/or
/// with per-prefix checkpointing.
#[allow(clippy::too_many_arguments)]
fn run_split(
    g: &Graph,
    goal: &SearchGoal,
    order: &[usize],
    base_colors: &[Option<Color>],
    pin_first: bool,
    opts: &SearchOptions,
    accumulator: &mut Engine,
) -> Result<(u64, Option<Coloring>), SearchError> {
    let jobs = opts.jobs.max(1);
    let split = opts
        .split_depth
        .unwrap_or_else(|| {
            let mut d = 0;
            let mut leaves = 1usize;
            while leaves < jobs * 16 && d < order.len() && d < 14 {
                d += 1;
                leaves *= 2;
            }
            if opts.checkpoint.is_some() {
                d = d.max(8);
            }
            d
        })
        .min(order.len());

    let mut prefixes = Vec::new();
    accumulator.collect_prefixes(0, split, &mut prefixes);

    let fingerprint = checkpoint_fingerprint(g, goal, order, base_colors, split);
    let use_checkpoint = opts.checkpoint.is_some()
        && matches!(goal.mode, SearchMode::CountAll | SearchMode::ProveNone);
    let done = if use_checkpoint {
        load_checkpoint(opts.checkpoint.as_ref().unwrap(), &fingerprint)?
    } else {
        std::collections::HashMap::new()
    };

    let done_count: u64 = done.values().sum();
    let shared_done = Mutex::new(done.clone());

    let pending: Vec<(u64, &Vec<Color>)> = prefixes
        .iter()
        .enumerate()
        .map(|(i, p)| (i as u64, p))
        .filter(|(i, _)| !done.contains_key(i))
        .collect();

    let run_prefix = |(idx, prefix): &(u64, &Vec<Color>)| -> (u64, u64, PruneCounts, Option<Coloring>) {
        let mut colors = base_colors.to_vec();
        for (slot, &color) in order[..split].iter().zip(prefix.iter()) {
            colors[*slot] = Some(color);
        }
        let mut worker = Engine::new(g, order, goal, colors, pin_first);
        worker.run(split);
        if use_checkpoint && worker.witness.is_none() {
            let mut map = shared_done.lock().unwrap();
            map.insert(*idx, worker.count);
            let path = opts.checkpoint.as_ref().unwrap();
            // Progress persistence is best-effort inside workers.
            let _ = store_checkpoint(path, &fingerprint, &map);
        }
        (worker.count, worker.nodes, worker.prunes, worker.witness)
    };

    let stop_at_first = matches!(goal.mode, SearchMode::FindFirst | SearchMode::ProveNone);
    let results: Vec<(u64, u64, PruneCounts, Option<Coloring>)> = if stop_at_first {
        // find_first preserves prefix order, so parallel FindFirst returns
        // the same witness the sequential search would.
        let found = if jobs > 1 {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build()
                .expect("thread pool");
            pool.install(|| {
                pending
                    .par_iter()
                    .map(run_prefix)
                    .find_first(|r| r.3.is_some())
            })
        } else {
            pending.iter().map(run_prefix).find(|r| r.3.is_some())
        };
        found.into_iter().collect()
    } else if jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .expect("thread pool");
        pool.install(|| pending.par_iter().map(run_prefix).collect())
    } else {
        pending.iter().map(run_prefix).collect()
    };

    let mut total = done_count;
    let mut witness = None;
    for (count, nodes, prunes, w) in results {
        total += count;
        accumulator.nodes += nodes;
        accumulator.prunes.merge(&prunes);
        if witness.is_none() {
            witness = w;
        }
    }
    Ok((total, witness))
}

/// Search for a red-blue induced perfect matching; a specialization of
/// [`search_colorings`] with the matched-neighbor propagation rule active.
pub fn search_rbipm(g: &Graph, mode: SearchMode) -> Result<SearchStats, SearchError> {
    search_colorings(g, &SearchGoal::rbipm(mode))
}

/// One line of a census run.
#[derive(Debug, Clone, Serialize)]
pub struct CensusRow {
    pub index: usize,
    pub n: usize,
    pub edges: usize,
    pub cubic: bool,
    pub bipartite: bool,
    pub connected: bool,
    pub three_connected: bool,
    pub rbipm: Option<Coloring>,
    pub obstruction: Option<RbipmObstruction>,
    pub error: Option<String>,
}

/// Runs the necessary-condition check and the exhaustive matching search on
/// every input graph; parse failures become rows with `error` set and the
/// stream continues. For every witness found on a cubic host the auxiliary
/// multigraph is asserted 4-regular with equally many red and blue nodes.
pub fn census_rbipm<I>(graphs: I) -> Vec<CensusRow>
where
    I: IntoIterator<Item = Result<Graph, String>>,
{
    let mut rows = Vec::new();
    for (index, item) in graphs.into_iter().enumerate() {
        match item {
            Err(message) => rows.push(CensusRow {
                index,
                n: 0,
                edges: 0,
                cubic: false,
                bipartite: false,
                connected: false,
                three_connected: false,
                rbipm: None,
                obstruction: None,
                error: Some(message),
            }),
            Ok(g) => {
                let report = check_rbipm_necessary(&g);
                let stats = search_rbipm(&g, SearchMode::FindFirst)
                    .expect("FindFirst has no size bound");
                let rbipm = match stats.result {
                    SearchResult::Witness(w) => Some(w),
                    _ => None,
                };
                if let Some(w) = &rbipm {
                    if report.cubic {
                        let aux = build_aux_rb_graph(&g, w).expect("witness is a valid matching");
                        assert!(aux.is_four_regular(), "auxiliary graph must be 4-regular");
                        assert_eq!(
                            aux.red_edges.len(),
                            aux.blue_edges.len(),
                            "red and blue node counts must agree"
                        );
                    }
                }
                rows.push(CensusRow {
                    index,
                    n: g.n(),
                    edges: g.edge_count(),
                    cubic: report.cubic,
                    bipartite: report.bipartite,
                    connected: g.is_connected(),
                    three_connected: g.is_three_connected(),
                    rbipm,
                    obstruction: Some(report.verdict),
                    error: None,
                });
            }
        }
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{build_gp, build_toroidal, named_graph, GPParams, NamedGraph};

    fn naive_count(g: &Graph, predicate: &SearchPredicate) -> u64 {
        let n = g.n();
        assert!(n <= 20, "naive oracle caps at 20 vertices");
        let mut count = 0;
        for bits in 0..(1u64 << n) {
            let mut c = Coloring::uncolored(n);
            for v in 0..n {
                c.set(
                    v,
                    if bits >> v & 1 == 1 {
                        Color::Red
                    } else {
                        Color::Blue
                    },
                );
            }
            let ok = match predicate {
                SearchPredicate::Crumby(p) => verify_crumby(g, &c, p).valid,
                SearchPredicate::InducedMatching { require_perfect } => {
                    verify_induced_matching(g, &c, *require_perfect).valid
                }
                SearchPredicate::Custom {
                    blue_sizes,
                    red_sizes,
                } => component_sizes_ok(g, &c, *blue_sizes, *red_sizes),
            };
            if ok {
                count += 1;
            }
        }
        count
    }

    fn count_of(stats: &SearchStats) -> u64 {
        match stats.result {
            SearchResult::Count(k) => k,
            _ => panic!("expected a count"),
        }
    }

    #[test]
    fn prism_has_no_crumby_coloring() {
        let prism = named_graph(NamedGraph::Prism3);
        let stats = search_colorings(&prism, &SearchGoal::crumby(SearchMode::CountAll)).unwrap();
        assert_eq!(stats.result, SearchResult::Count(0));
        let stats = search_colorings(&prism, &SearchGoal::crumby(SearchMode::ProveNone)).unwrap();
        assert_eq!(stats.result, SearchResult::NoneExists);
    }

    #[test]
    fn petersen_has_a_crumby_coloring() {
        let petersen = named_graph(NamedGraph::Petersen);
        let stats = search_colorings(&petersen, &SearchGoal::crumby(SearchMode::FindFirst)).unwrap();
        let SearchResult::Witness(w) = &stats.result else {
            panic!("expected a witness");
        };
        assert!(verify_crumby(&petersen, w, &CrumbyPredicate::default()).valid);
    }

    #[test]
    fn pruned_counts_match_naive_oracle() {
        let corpus = vec![
            named_graph(NamedGraph::Prism3),
            Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap(),
            named_graph(NamedGraph::Petersen),
            named_graph(NamedGraph::K33HandleAdjacent),
        ];
        let goals = vec![
            SearchPredicate::Crumby(CrumbyPredicate::default()),
            SearchPredicate::Crumby(CrumbyPredicate::strict()),
            SearchPredicate::InducedMatching {
                require_perfect: true,
            },
            SearchPredicate::InducedMatching {
                require_perfect: false,
            },
        ];
        for g in &corpus {
            for predicate in &goals {
                let goal = SearchGoal {
                    predicate: predicate.clone(),
                    mode: SearchMode::CountAll,
                    symmetry_fix: false,
                };
                let stats = search_colorings(g, &goal).unwrap();
                assert_eq!(count_of(&stats), naive_count(g, predicate));
            }
        }
    }

    #[test]
    fn symmetry_fix_preserves_counts_and_existence() {
        let graphs = vec![
            named_graph(NamedGraph::Wagner),
            named_graph(NamedGraph::K33),
            named_graph(NamedGraph::Prism3),
        ];
        for g in &graphs {
            for symmetry in [false, true] {
                let goal = SearchGoal {
                    predicate: SearchPredicate::InducedMatching {
                        require_perfect: true,
                    },
                    mode: SearchMode::CountAll,
                    symmetry_fix: symmetry,
                };
                let stats = search_colorings(g, &goal).unwrap();
                assert_eq!(
                    count_of(&stats),
                    naive_count(
                        g,
                        &SearchPredicate::InducedMatching {
                            require_perfect: true
                        }
                    ),
                    "symmetry={symmetry}"
                );
                assert_eq!(stats.applied_symmetry, symmetry);
            }
        }
    }

    #[test]
    fn custom_goal_matches_naive_oracle() {
        let c6 = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5)]).unwrap();
        let predicate = SearchPredicate::Custom {
            blue_sizes: SizeSet::from_sizes(&[1, 2]).unwrap(),
            red_sizes: SizeSet::from_sizes(&[2, 3]).unwrap(),
        };
        let goal = SearchGoal {
            predicate: predicate.clone(),
            mode: SearchMode::CountAll,
            symmetry_fix: false,
        };
        let stats = search_colorings(&c6, &goal).unwrap();
        assert_eq!(count_of(&stats), naive_count(&c6, &predicate));

        let petersen = named_graph(NamedGraph::Petersen);
        let predicate = SearchPredicate::Custom {
            blue_sizes: SizeSet::from_sizes(&[1, 2]).unwrap(),
            red_sizes: SizeSet::from_sizes(&[2, 3, 4]).unwrap(),
        };
        let goal = SearchGoal {
            predicate: predicate.clone(),
            mode: SearchMode::CountAll,
            symmetry_fix: false,
        };
        let stats = search_colorings(&petersen, &goal).unwrap();
        assert_eq!(count_of(&stats), naive_count(&petersen, &predicate));
    }

    #[test]
    fn size_set_validation() {
        assert!(SizeSet::from_sizes(&[]).is_err());
        assert!(SizeSet::from_sizes(&[5]).is_err());
        let s = SizeSet::from_sizes(&[2, 4]).unwrap();
        assert!(s.contains(2) && s.contains(4) && !s.contains(3));
        assert_eq!(s.max(), 4);
        assert_eq!(s.sizes(), vec![2, 4]);
    }

    #[test]
    fn rbipm_wagner_h_and_k33() {
        let wagner = named_graph(NamedGraph::Wagner);
        let stats = search_rbipm(&wagner, SearchMode::FindFirst).unwrap();
        assert!(matches!(stats.result, SearchResult::Witness(_)));

        let h = named_graph(NamedGraph::HGraph);
        let stats = search_rbipm(&h, SearchMode::ProveNone).unwrap();
        assert_eq!(stats.result, SearchResult::NoneExists);

        let k33 = named_graph(NamedGraph::K33);
        let stats = search_rbipm(&k33, SearchMode::ProveNone).unwrap();
        assert_eq!(stats.result, SearchResult::NoneExists);
        assert!(matches!(
            check_rbipm_necessary(&k33).verdict,
            RbipmObstruction::Divisibility { .. }
        ));
    }

    #[test]
    fn fixed_partial_assignments() {
        let petersen = named_graph(NamedGraph::Petersen);
        // Freeze a valid full coloring minus the inner vertices and ask for
        // the extension back.
        let mut fixed = Coloring::uncolored(10);
        for (v, ch) in "RBRRB".chars().enumerate() {
            fixed.set(
                v,
                if ch == 'R' { Color::Red } else { Color::Blue },
            );
        }
        let goal = SearchGoal {
            predicate: SearchPredicate::Crumby(CrumbyPredicate::strict()),
            mode: SearchMode::FindFirst,
            symmetry_fix: false,
        };
        let opts = SearchOptions {
            fixed: Some(fixed),
            order: Some((5..10).collect()),
            ..Default::default()
        };
        let stats = search_colorings_with(&petersen, &goal, &opts).unwrap();
        let SearchResult::Witness(w) = &stats.result else {
            panic!("expected an extension");
        };
        assert_eq!(&w.to_color_string()[..5], "RBRRB");

        // A fixed blue triangle is already dead.
        let c3 = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let mut fixed = Coloring::uncolored(3);
        for v in 0..3 {
            fixed.set(v, Color::Blue);
        }
        let goal = SearchGoal::crumby(SearchMode::CountAll);
        let opts = SearchOptions {
            fixed: Some(fixed),
            ..Default::default()
        };
        let stats = search_colorings_with(&c3, &goal, &opts).unwrap();
        assert_eq!(stats.result, SearchResult::Count(0));
    }

    #[test]
    fn parallel_counts_match_sequential() {
        let petersen = named_graph(NamedGraph::Petersen);
        let goal = SearchGoal::crumby(SearchMode::CountAll);
        let sequential = search_colorings(&petersen, &goal).unwrap();
        let parallel = search_colorings_with(
            &petersen,
            &goal,
            &SearchOptions {
                jobs: 4,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(count_of(&sequential), count_of(&parallel));

        // Parallel FindFirst returns the same witness as sequential.
        let goal = SearchGoal::crumby(SearchMode::FindFirst);
        let sequential = search_colorings(&petersen, &goal).unwrap();
        let parallel = search_colorings_with(
            &petersen,
            &goal,
            &SearchOptions {
                jobs: 4,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(sequential.result, parallel.result);
    }

    #[test]
    fn checkpoint_resume_and_mismatch() {
        let petersen = named_graph(NamedGraph::Petersen);
        let goal = SearchGoal::crumby(SearchMode::CountAll);
        let full = count_of(&search_colorings(&petersen, &goal).unwrap());

        let dir = std::env::temp_dir().join(format!("crumby-ckpt-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("petersen.json");
        let _ = std::fs::remove_file(&path);

        let opts = SearchOptions {
            checkpoint: Some(path.clone()),
            split_depth: Some(4),
            ..Default::default()
        };
        let first = search_colorings_with(&petersen, &goal, &opts).unwrap();
        assert_eq!(count_of(&first), full);
        assert!(path.exists());

        // Resuming over the fully recorded file reuses every prefix, so the
        // only remaining work is re-enumerating the split level.
        let resumed = search_colorings_with(&petersen, &goal, &opts).unwrap();
        assert_eq!(count_of(&resumed), full);
        assert!(resumed.nodes < first.nodes);

        // A checkpoint for a different search is rejected.
        let other_goal = SearchGoal::crumby(SearchMode::ProveNone);
        let err = search_colorings_with(&petersen, &other_goal, &opts).unwrap_err();
        assert!(matches!(err, SearchError::CheckpointMismatch(_)));

        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn exhaustive_size_bound() {
        let big = Graph::from_edges(
            41,
            &(0..40).map(|i| (i, i + 1)).collect::<Vec<_>>(),
        )
        .unwrap();
        let err = search_colorings(&big, &SearchGoal::crumby(SearchMode::CountAll)).unwrap_err();
        assert!(matches!(err, SearchError::TooLarge { n: 41, max: 40 }));
        // FindFirst has no bound.
        assert!(search_colorings(&big, &SearchGoal::crumby(SearchMode::FindFirst)).is_ok());
    }

    #[test]
    fn longer_path_bound_matches_naive() {
        let torus = build_toroidal(3, 3).unwrap();
        let predicate = SearchPredicate::Crumby(CrumbyPredicate::with_bound(4));
        let goal = SearchGoal {
            predicate: predicate.clone(),
            mode: SearchMode::CountAll,
            symmetry_fix: false,
        };
        let stats = search_colorings(&torus, &goal).unwrap();
        assert_eq!(count_of(&stats), naive_count(&torus, &predicate));
    }

    #[test]
    fn census_rows_and_error_rows() {
        let rows = census_rbipm(vec![
            Ok(named_graph(NamedGraph::K33)),
            Err("unreadable line".to_string()),
            Ok(named_graph(NamedGraph::Wagner)),
        ]);
        assert_eq!(rows.len(), 3);
        assert!(rows[0].cubic && rows[0].bipartite && rows[0].rbipm.is_none());
        assert!(matches!(
            rows[0].obstruction,
            Some(RbipmObstruction::Divisibility { .. })
        ));
        assert_eq!(rows[1].error.as_deref(), Some("unreadable line"));
        assert!(rows[2].rbipm.is_some());
    }

    #[test]
    fn gp_count_is_positive_and_symmetric_under_orders() {
        // The same count must come out of an arbitrary explicit order.
        let g = build_gp(GPParams { n_outer: 5, step: 2 }).unwrap();
        let goal = SearchGoal::crumby(SearchMode::CountAll);
        let default_count = count_of(&search_colorings(&g, &goal).unwrap());
        let reversed: Vec<usize> = (0..10).rev().collect();
        let opts = SearchOptions {
            order: Some(reversed),
            ..Default::default()
        };
        let reordered = count_of(&search_colorings_with(&g, &goal, &opts).unwrap());
        assert_eq!(default_count, reordered);
        assert!(default_count > 0);
    }
}
