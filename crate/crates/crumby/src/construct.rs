//! Explicit colorings of the two generalized Petersen families, assembled
//! from column stamps.
//!
//! Columns are 1-based positions on the outer cycle; column `i` is the
//! spoke pair `(u_i, v_i)`. A stamp colors a fixed set of columns relative
//! to its anchor, and a plan is a list of stamps that must tile every
//! column exactly once. The odd family `GP(2k+1, k)` is encoded by a pair
//! of strings giving the outer colors on positions `1..k` and `k+1..2k`;
//! matching runs of the two strings decode into stamps. The even family
//! `GP(4k, 2k-1)` tiles directly.

use thiserror::Error;

use crate::coloring::{Color, Coloring};
use crate::families::{FamilyError, GPParams};
use crate::graph::Graph;
use crate::search::{
    search_colorings_with, SearchGoal, SearchMode, SearchOptions, SearchPredicate, SearchResult,
};
use crate::verify::CrumbyPredicate;

/// Strict coloring of `GP(9, 4)`, the one odd-family case outside the
/// string recursions; found by deterministic exhaustive completion and
/// frozen here (see `stored_constants_regenerate`).
const GP9_4_COLORING: &str = "RRBRBRRBBRBBRBBRRR";

/// Strict coloring of `GP(12, 5)`, the one even-family case outside the
/// tiling plans; found the same way as `GP9_4_COLORING`.
const GP12_5_COLORING: &str = "RRRBRRBRBRRBBBBRBRRRRRBR";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConstructError {
    #[error("family parameter k must be at least 2, got {k}")]
    KTooSmall { k: usize },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PlanError {
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error("vertex {vertex} gets {existing:?} from the stamp at {first_anchor} and {incoming:?} from the stamp at {second_anchor}")]
    ConflictingStamp {
        vertex: usize,
        existing: Color,
        incoming: Color,
        first_anchor: usize,
        second_anchor: usize,
    },
    #[error("vertex {vertex} is covered by no stamp")]
    UncoveredVertex { vertex: usize },
    #[error("upper string has {upper} runs but lower string has {lower}")]
    RunCountMismatch { upper: usize, lower: usize },
    #[error("run pair {index} ({upper_char} x{upper_len} over {lower_char} x{lower_len}) matches no stamp")]
    UnknownRunPair {
        index: usize,
        upper_char: char,
        upper_len: usize,
        lower_char: char,
        lower_len: usize,
    },
    #[error("run pair {index} starts at position {upper_start} above and {lower_start} below, which no stamp allows")]
    MisalignedRuns {
        index: usize,
        upper_start: usize,
        lower_start: usize,
    },
}

/// A column stamp. The first four tile the odd family and read their inner
/// chord offset from the plan's `step`; the last three tile the even family
/// on consecutive columns only.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StampKind {
    /// Column `i` red on both cycles, columns `i+step`, `i+step+1` red
    /// outside and blue inside: a red spoke feeding the red outer pair
    /// below it.
    RedSyringe,
    /// Columns `i`, `i+step`, `i+step+1` blue outside and red inside: the
    /// inner chords form a red two-edge star against a blue outer pair.
    RedWedge,
    /// Column `i` red on both cycles, flanked by `i-1`, `i+1` and topped by
    /// `i+step`, `i+step+1`, all red outside and blue inside; the four blue
    /// inner vertices pair up across the chords.
    BlueCross,
    /// Columns `i` and `i+step` blue outside and red inside; the two red
    /// inner vertices share a chord.
    HorizontalCut,
    /// Four columns `i..i+3`: outer `RRBB`, inner `BBRR`.
    OppositeQuad,
    /// Three columns `i..i+2`: outer `RRR`, inner `BRB`, a red claw around
    /// the middle spoke.
    RedAnchor,
    /// Two columns `i`, `i+1`: outer `BB`, inner `RR`.
    BlueEdgePair,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockStamp {
    pub kind: StampKind,
    pub anchor: usize,
}

/// How a plan was produced; carried along for reporting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlanProvenance {
    /// Decoded from the odd-family half strings for this `k`.
    RecursiveStrings { k: usize },
    /// The period-4 quad tiling used for even `k`.
    QuadTiling { k: usize },
    /// Two shifted copies of the anchor/pair/quad half plan, for odd `k`.
    SplitHalves { k: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockPlan {
    pub params: GPParams,
    pub blocks: Vec<BlockStamp>,
    pub provenance: PlanProvenance,
}

pub fn odd_gp_params(k: usize) -> GPParams {
    GPParams {
        n_outer: 2 * k + 1,
        step: k,
    }
}

pub fn even_gp_params(k: usize) -> GPParams {
    GPParams {
        n_outer: 4 * k,
        step: 2 * k - 1,
    }
}

fn stamp_cells(kind: StampKind, anchor: usize, step: usize, n_outer: usize) -> Vec<(usize, Color, Color)> {
    use Color::{Blue as B, Red as R};
    let i = anchor;
    match kind {
        StampKind::RedSyringe => vec![(i, R, R), (i + step, R, B), (i + step + 1, R, B)],
        StampKind::RedWedge => vec![(i, B, R), (i + step, B, R), (i + step + 1, B, R)],
        StampKind::BlueCross => vec![
            (i + n_outer - 1, R, B),
            (i, R, R),
            (i + 1, R, B),
            (i + step, R, B),
            (i + step + 1, R, B),
        ],
        StampKind::HorizontalCut => vec![(i, B, R), (i + step, B, R)],
        StampKind::OppositeQuad => vec![(i, R, B), (i + 1, R, B), (i + 2, B, R), (i + 3, B, R)],
        StampKind::RedAnchor => vec![(i, R, B), (i + 1, R, R), (i + 2, R, B)],
        StampKind::BlueEdgePair => vec![(i, B, R), (i + 1, B, R)],
    }
}

/// Applies every stamp of the plan, requiring the stamps to tile all
/// columns exactly once.
pub fn stamp_plan(plan: &BlockPlan) -> Result<Coloring, PlanError> {
    let params = plan.params.validate()?;
    let n = 2 * params.n_outer;
    let mut coloring = Coloring::uncolored(n);
    let mut owner: Vec<Option<usize>> = vec![None; n];
    for block in &plan.blocks {
        for (col, outer_color, inner_color) in
            stamp_cells(block.kind, block.anchor, params.step, params.n_outer)
        {
            for (vertex, color) in [
                (params.outer(col), outer_color),
                (params.inner(col), inner_color),
            ] {
                if let Some(existing) = coloring.get(vertex) {
                    return Err(PlanError::ConflictingStamp {
                        vertex,
                        existing,
                        incoming: color,
                        first_anchor: owner[vertex].unwrap(),
                        second_anchor: block.anchor,
                    });
                }
                coloring.set(vertex, color);
                owner[vertex] = Some(block.anchor);
            }
        }
    }
    if let Some(vertex) = (0..n).find(|&v| coloring.get(v).is_none()) {
        return Err(PlanError::UncoveredVertex { vertex });
    }
    Ok(coloring)
}

/// Outer-cycle colors of `GP(2k+1, k)` on positions `1..k` (upper) and
/// `k+1..2k` (lower), grown by prepending a fixed block per residue class
/// of `k` mod 3. Returns `None` for `k = 4`, the one case the recursions
/// skip, and for `k < 2`.
pub fn odd_half_strings(k: usize) -> Option<(String, String)> {
    if k < 2 || k == 4 {
        return None;
    }
    let (base, mut upper, mut lower) = match k % 3 {
        2 => (2, "R".to_string(), "RR".to_string()),
        0 => (3, "RR".to_string(), "RRR".to_string()),
        1 => (7, "RRBBRR".to_string(), "RRRBRRR".to_string()),
        _ => unreachable!(),
    };
    for _ in 0..(k - base) / 3 {
        match k % 3 {
            2 | 0 => {
                upper = format!("RBB{upper}");
                lower = format!("RRB{lower}");
            }
            1 => {
                upper = format!("RRBBR{}", &upper[2..]);
                lower = format!("RRRBRR{}", &lower[3..]);
            }
            _ => unreachable!(),
        }
    }
    debug_assert_eq!(upper.len(), k - 1);
    debug_assert_eq!(lower.len(), k);
    Some((upper, lower))
}

fn runs(s: &str) -> Vec<(char, usize, usize)> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let start = i;
        while i < chars.len() && chars[i] == chars[start] {
            i += 1;
        }
        out.push((chars[start], start + 1, i - start));
    }
    out
}

/// Decodes the half strings into stamps. Run `j` of the upper string pairs
/// with run `j` of the lower string; the accepted pairs are a single R over
/// a double R (syringe at the upper position), a double B over a single B
/// (wedge at the lower position, which sits one column right of the upper
/// pair), and a double R over a triple R (cross centered on the lower run).
/// The closing horizontal cut at column `2k+1` is appended automatically.
pub fn decode_half_strings(
    k: usize,
    upper: &str,
    lower: &str,
) -> Result<Vec<BlockStamp>, PlanError> {
    let upper_runs = runs(upper);
    let lower_runs = runs(lower);
    if upper_runs.len() != lower_runs.len() {
        return Err(PlanError::RunCountMismatch {
            upper: upper_runs.len(),
            lower: lower_runs.len(),
        });
    }
    let mut blocks = Vec::new();
    for (index, (&(uc, us, ul), &(lc, ls, ll))) in
        upper_runs.iter().zip(&lower_runs).enumerate()
    {
        let (kind, anchor, aligned) = match (uc, ul, lc, ll) {
            ('R', 1, 'R', 2) => (StampKind::RedSyringe, us, us == ls),
            ('B', 2, 'B', 1) => (StampKind::RedWedge, k + ls, us + 1 == ls),
            ('R', 2, 'R', 3) => (StampKind::BlueCross, k + ls + 1, us == ls),
            _ => {
                return Err(PlanError::UnknownRunPair {
                    index,
                    upper_char: uc,
                    upper_len: ul,
                    lower_char: lc,
                    lower_len: ll,
                })
            }
        };
        if !aligned {
            return Err(PlanError::MisalignedRuns {
                index,
                upper_start: us,
                lower_start: ls,
            });
        }
        blocks.push(BlockStamp { kind, anchor });
    }
    blocks.push(BlockStamp {
        kind: StampKind::HorizontalCut,
        anchor: 2 * k + 1,
    });
    Ok(blocks)
}

/// Stamp plan for `GP(2k+1, k)`; `None` for `k = 4`, which ships as a
/// stored coloring instead.
pub fn odd_plan(k: usize) -> Result<Option<BlockPlan>, ConstructError> {
    if k < 2 {
        return Err(ConstructError::KTooSmall { k });
    }
    let Some((upper, lower)) = odd_half_strings(k) else {
        return Ok(None);
    };
    let blocks = decode_half_strings(k, &upper, &lower)
        .expect("recursion strings always decode");
    Ok(Some(BlockPlan {
        params: odd_gp_params(k),
        blocks,
        provenance: PlanProvenance::RecursiveStrings { k },
    }))
}

/// Stamp plan for `GP(4k, 2k-1)`; `None` for `k = 3`, which ships as a
/// stored coloring instead. Even `k` tiles with quads; odd `k >= 5` uses
/// two shifted half plans of claws, blue pairs, and quads.
pub fn even_plan(k: usize) -> Result<Option<BlockPlan>, ConstructError> {
    if k < 2 {
        return Err(ConstructError::KTooSmall { k });
    }
    if k == 3 {
        return Ok(None);
    }
    let params = even_gp_params(k);
    let mut blocks = Vec::new();
    let provenance;
    if k % 2 == 0 {
        for q in 0..k {
            blocks.push(BlockStamp {
                kind: StampKind::OppositeQuad,
                anchor: 1 + 4 * q,
            });
        }
        provenance = PlanProvenance::QuadTiling { k };
    } else {
        for o in [0, 2 * k] {
            blocks.push(BlockStamp {
                kind: StampKind::RedAnchor,
                anchor: 1 + o,
            });
            blocks.push(BlockStamp {
                kind: StampKind::BlueEdgePair,
                anchor: 4 + o,
            });
            blocks.push(BlockStamp {
                kind: StampKind::RedAnchor,
                anchor: 6 + o,
            });
            blocks.push(BlockStamp {
                kind: StampKind::BlueEdgePair,
                anchor: 9 + o,
            });
            let mut anchor = 11;
            while anchor + 3 <= 2 * k {
                blocks.push(BlockStamp {
                    kind: StampKind::OppositeQuad,
                    anchor: anchor + o,
                });
                anchor += 4;
            }
        }
        provenance = PlanProvenance::SplitHalves { k };
    }
    Ok(Some(BlockPlan {
        params,
        blocks,
        provenance,
    }))
}

/// Strict crumby coloring of `GP(2k+1, k)` for any `k >= 2`.
pub fn color_gp_odd(k: usize) -> Result<Coloring, ConstructError> {
    match odd_plan(k)? {
        Some(plan) => Ok(stamp_plan(&plan).expect("family plan tiles its graph")),
        None => Ok(Coloring::from_str_colors(GP9_4_COLORING).expect("stored coloring parses")),
    }
}

/// Strict crumby coloring of `GP(4k, 2k-1)` for any `k >= 2`.
pub fn color_gp_even(k: usize) -> Result<Coloring, ConstructError> {
    match even_plan(k)? {
        Some(plan) => Ok(stamp_plan(&plan).expect("family plan tiles its graph")),
        None => Ok(Coloring::from_str_colors(GP12_5_COLORING).expect("stored coloring parses")),
    }
}

/// Extends a partial coloring to a total one whose red components are small
/// stars, by deterministic exhaustive search (unassigned vertices in
/// ascending order, red tried before blue). Returns `None` when no
/// extension exists.
pub fn complete_partial(g: &Graph, partial: &Coloring) -> Option<Coloring> {
    assert_eq!(partial.n(), g.n(), "partial coloring must match the graph");
    let order: Vec<usize> = (0..g.n()).filter(|&v| partial.get(v).is_none()).collect();
    let goal = SearchGoal {
        predicate: SearchPredicate::Crumby(CrumbyPredicate::strict()),
        mode: SearchMode::FindFirst,
        symmetry_fix: false,
    };
    let opts = SearchOptions {
        fixed: Some(partial.clone()),
        order: Some(order),
        ..Default::default()
    };
    let stats = search_colorings_with(g, &goal, &opts).expect("FindFirst has no size bound");
    match stats.result {
        SearchResult::Witness(w) => Some(w),
        _ => None,
    }
}
