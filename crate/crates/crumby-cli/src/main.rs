//! `crumby`: build subcubic graphs, construct and verify red-blue colorings,
//! and run exhaustive searches, all from one binary.
//!
//! Exit codes: 0 when the requested claim holds (coloring valid, witness
//! found, emptiness proven), 1 when it is refuted, 2 on usage errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crumby::coloring::Coloring;
use crumby::construct::{color_gp_even, color_gp_odd, even_gp_params, odd_gp_params};
use crumby::dot::export_dot;
use crumby::families::build_gp;
use crumby::graph::Graph;
use crumby::graph6::{parse_graph6, write_graph6};
use crumby::search::{
    census_rbipm, search_colorings_with, SearchGoal, SearchMode, SearchOptions, SearchPredicate,
    SearchResult, SizeSet,
};
use crumby::treecolor::color_tree;
use crumby::trees::TreeSpec;
use crumby::verify::{verify_crumby, verify_induced_matching, CrumbyPredicate};

use crumby_cli::graphspec::parse_graph_spec;
use crumby_cli::repro::{run_criteria, ReproOptions};

#[derive(Parser)]
#[command(
    name = "crumby",
    version,
    about = "Construct, verify, and exhaustively search red-blue colorings of subcubic graphs"
)]
struct Cli {
    /// Write the primary output to this file instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a graph from a specifier and print it.
    Build(BuildArgs),
    /// Construct a coloring from the closed-form families or the tree rules.
    #[command(subcommand)]
    Color(ColorCommand),
    /// Check a coloring file against a graph and print the report.
    Verify(VerifyArgs),
    /// Exhaustively search the colorings of a graph.
    Search(SearchArgs),
    /// Tabulate induced-perfect-matching results over a graph6 file.
    Census(CensusArgs),
    /// Re-run the bundled verification suite.
    Repro(ReproArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum BuildFormat {
    Graph6,
    Dot,
    Json,
}

#[derive(Args)]
struct BuildArgs {
    /// Graph specifier: named:<name>, gp:<n>:<k>, torus:<m>:<n>,
    /// g6:<file>[:line], or tree:<file>.
    #[arg(long, value_name = "SPEC")]
    graph: String,

    #[arg(long, value_enum, default_value = "graph6")]
    format: BuildFormat,
}

#[derive(Subcommand)]
enum ColorCommand {
    /// Color a generalized Petersen graph from the closed-form families.
    Gp(ColorGpArgs),
    /// Color a rooted subcubic tree with the breadth-first rules.
    Tree(ColorTreeArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Odd,
    Even,
}

#[derive(Args)]
struct ColorGpArgs {
    /// Family to draw from: odd is GP(2k+1,k), even is GP(4k,2k-1).
    #[arg(long, value_enum, conflicts_with = "n")]
    family: Option<Family>,

    /// Family parameter k (with --family), or the GP step size (with --n).
    #[arg(long)]
    k: usize,

    /// Outer cycle length; the matching family is inferred from (n, k).
    #[arg(long)]
    n: Option<usize>,

    /// Re-verify the constructed coloring before printing it.
    #[arg(long)]
    verify: bool,

    /// With --verify, also require every red component to be a star.
    #[arg(long)]
    strict_stars: bool,

    /// Emit the colored graph as DOT instead of coloring JSON.
    #[arg(long)]
    dot: bool,
}

#[derive(Args)]
struct ColorTreeArgs {
    /// JSON tree file: {"parents":[-1,0,0,...]} with -1 marking the root.
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,

    /// Emit the colored tree as DOT instead of coloring JSON.
    #[arg(long)]
    dot: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_name = "SPEC")]
    graph: String,

    /// Coloring file: either a bare color string like RRBRB or coloring JSON.
    #[arg(long, value_name = "FILE")]
    coloring: PathBuf,

    /// Longest-red-path bound: forbid red paths with this many edges.
    #[arg(long, value_name = "EDGES")]
    l: Option<usize>,

    /// Also require every red component to be a star with 1..=3 edges.
    #[arg(long)]
    strict_stars: bool,

    /// Check for a red-blue induced perfect matching instead.
    #[arg(long)]
    rbipm: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum GoalKind {
    Crumby,
    Rbipm,
    Custom,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeKind {
    First,
    Count,
    None,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long, value_name = "SPEC")]
    graph: String,

    #[arg(long, value_enum, default_value = "crumby")]
    goal: GoalKind,

    #[arg(long, value_enum, default_value = "first")]
    mode: ModeKind,

    /// Longest-red-path bound for the crumby goal.
    #[arg(long, value_name = "EDGES")]
    l: Option<usize>,

    /// Star restriction for the crumby goal.
    #[arg(long)]
    strict_stars: bool,

    /// Allowed blue component sizes for the custom goal, e.g. 1,2.
    #[arg(long, value_name = "LIST")]
    blue_sizes: Option<String>,

    /// Allowed red component sizes for the custom goal, e.g. 1,2.
    #[arg(long, value_name = "LIST")]
    red_sizes: Option<String>,

    /// Worker threads; 0 or 1 runs sequentially.
    #[arg(long, default_value_t = 1)]
    jobs: usize,

    /// Resumable progress file (count and none modes only).
    #[arg(long, value_name = "FILE")]
    checkpoint: Option<PathBuf>,

    /// Print node and prune statistics to stderr.
    #[arg(long)]
    stats: bool,
}

#[derive(Args)]
struct CensusArgs {
    /// graph6 file, one graph per line.
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
}

#[derive(Args)]
struct ReproArgs {
    /// Also run the long checkpointed jobs.
    #[arg(long)]
    include_long: bool,

    /// Emit the rows as JSON instead of a table.
    #[arg(long)]
    json: bool,

    #[arg(long, default_value_t = 42)]
    seed: u64,

    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

/// A usage error (exit 2), as opposed to a refuted claim (exit 1).
struct Usage(String);

fn usage(e: impl std::fmt::Display) -> Usage {
    Usage(e.to_string())
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Usage> {
    match out {
        Some(path) => {
            fs::write(path, format!("{text}\n")).map_err(|e| Usage(format!("{}: {e}", path.display())))?
        }
        None => println!("{text}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.out.clone();
    match run(cli, &out) {
        Ok(code) => code,
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli, out: &Option<PathBuf>) -> Result<ExitCode, Usage> {
    match cli.command {
        Command::Build(args) => run_build(args, out),
        Command::Color(ColorCommand::Gp(args)) => run_color_gp(args, out),
        Command::Color(ColorCommand::Tree(args)) => run_color_tree(args, out),
        Command::Verify(args) => run_verify(args, out),
        Command::Search(args) => run_search(args, out),
        Command::Census(args) => run_census(args, out),
        Command::Repro(args) => run_repro(args, out),
    }
}

fn run_build(args: BuildArgs, out: &Option<PathBuf>) -> Result<ExitCode, Usage> {
    let g = parse_graph_spec(&args.graph).map_err(Usage)?;
    let text = match args.format {
        BuildFormat::Graph6 => write_graph6(&g),
        BuildFormat::Dot => export_dot(&g, None),
        BuildFormat::Json => json!({ "n": g.n(), "edges": g.edges() }).to_string(),
    };
    emit(out, text.trim_end())?;
    Ok(ExitCode::SUCCESS)
}

/// Resolves (family, k, n) to a constructed graph-plus-coloring pair.
fn construct_gp(args: &ColorGpArgs) -> Result<(Graph, Coloring), Usage> {
    let family = match (args.family, args.n) {
        (Some(f), None) => f,
        (None, Some(n)) => {
            if n == 2 * args.k + 1 {
                Family::Odd
            } else if n % 4 == 0 && args.k == n / 2 - 1 {
                Family::Even
            } else {
                return Err(Usage(format!(
                    "no construction covers GP({n},{}); known shapes are GP(2k+1,k) and GP(4k,2k-1)",
                    args.k
                )));
            }
        }
        _ => return Err(Usage("give either --family with --k, or --n with --k".into())),
    };
    let (params, coloring) = match family {
        Family::Odd => {
            let k = args.k;
            (odd_gp_params(k), color_gp_odd(k).map_err(usage)?)
        }
        Family::Even => {
            let k = match args.n {
                Some(n) => n / 4,
                None => args.k,
            };
            (even_gp_params(k), color_gp_even(k).map_err(usage)?)
        }
    };
    let g = build_gp(params).map_err(usage)?;
    Ok((g, coloring))
}

fn run_color_gp(args: ColorGpArgs, out: &Option<PathBuf>) -> Result<ExitCode, Usage> {
    let (g, coloring) = construct_gp(&args)?;
    if args.verify {
        let predicate = if args.strict_stars {
            CrumbyPredicate::strict()
        } else {
            CrumbyPredicate::default()
        };
        let report = verify_crumby(&g, &coloring, &predicate);
        if !report.valid {
            eprintln!("{}", serde_json::to_string(&report).map_err(usage)?);
            return Ok(ExitCode::FAILURE);
        }
    }
    let text = if args.dot {
        export_dot(&g, Some(&coloring))
    } else {
        serde_json::to_string(&coloring).map_err(usage)?
    };
    emit(out, text.trim_end())?;
    Ok(ExitCode::SUCCESS)
}

fn run_color_tree(args: ColorTreeArgs, out: &Option<PathBuf>) -> Result<ExitCode, Usage> {
    let text = fs::read_to_string(&args.input)
        .map_err(|e| Usage(format!("{}: {e}", args.input.display())))?;
    let spec: TreeSpec = serde_json::from_str(&text)
        .map_err(|e| Usage(format!("{}: {e}", args.input.display())))?;
    let coloring = match color_tree(&spec) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return Ok(ExitCode::FAILURE);
        }
    };
    let text = if args.dot {
        export_dot(&spec.to_graph(), Some(&coloring))
    } else {
        serde_json::to_string(&coloring).map_err(usage)?
    };
    emit(out, text.trim_end())?;
    Ok(ExitCode::SUCCESS)
}

fn read_coloring(path: &PathBuf, n: usize) -> Result<Coloring, Usage> {
    let text = fs::read_to_string(path).map_err(|e| Usage(format!("{}: {e}", path.display())))?;
    let trimmed = text.trim();
    let coloring = if trimmed.starts_with('{') {
        serde_json::from_str(trimmed).map_err(|e| Usage(format!("{}: {e}", path.display())))?
    } else {
        Coloring::from_str_colors(trimmed).map_err(Usage)?
    };
    if coloring.n() != n {
        return Err(Usage(format!(
            "coloring has {} entries for a graph with {n} vertices",
            coloring.n()
        )));
    }
    Ok(coloring)
}

fn run_verify(args: VerifyArgs, out: &Option<PathBuf>) -> Result<ExitCode, Usage> {
    if args.rbipm && (args.l.is_some() || args.strict_stars) {
        return Err(Usage(
            "--rbipm is a different predicate; it takes neither --l nor --strict-stars".into(),
        ));
    }
    let g = parse_graph_spec(&args.graph).map_err(Usage)?;
    let coloring = read_coloring(&args.coloring, g.n())?;
    let report = if args.rbipm {
        verify_induced_matching(&g, &coloring, true)
    } else {
        let mut predicate = if args.strict_stars {
            CrumbyPredicate::strict()
        } else {
            CrumbyPredicate::default()
        };
        if let Some(l) = args.l {
            predicate.red_path_bound = l;
        }
        verify_crumby(&g, &coloring, &predicate)
    };
    emit(out, &serde_json::to_string(&report).map_err(usage)?)?;
    Ok(if report.valid {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn parse_sizes(list: &str) -> Result<SizeSet, Usage> {
    let sizes = list
        .split(',')
        .map(|s| s.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Usage(format!("bad size list {list:?}: {e}")))?;
    SizeSet::from_sizes(&sizes).map_err(usage)
}

fn run_search(args: SearchArgs, out: &Option<PathBuf>) -> Result<ExitCode, Usage> {
    let g = parse_graph_spec(&args.graph).map_err(Usage)?;
    let mode = match args.mode {
        ModeKind::First => SearchMode::FindFirst,
        ModeKind::Count => SearchMode::CountAll,
        ModeKind::None => SearchMode::ProveNone,
    };
    if !matches!(args.goal, GoalKind::Custom)
        && (args.blue_sizes.is_some() || args.red_sizes.is_some())
    {
        return Err(Usage("size lists only apply to the custom goal".into()));
    }
    let goal = match args.goal {
        GoalKind::Crumby => {
            let mut predicate = if args.strict_stars {
                CrumbyPredicate::strict()
            } else {
                CrumbyPredicate::default()
            };
            if let Some(l) = args.l {
                predicate.red_path_bound = l;
            }
            SearchGoal::crumby_with(predicate, mode)
        }
        GoalKind::Rbipm => {
            if args.l.is_some() || args.strict_stars {
                return Err(Usage(
                    "--l and --strict-stars only apply to the crumby goal".into(),
                ));
            }
            SearchGoal::rbipm(mode)
        }
        GoalKind::Custom => {
            if args.l.is_some() || args.strict_stars {
                return Err(Usage(
                    "--l and --strict-stars only apply to the crumby goal".into(),
                ));
            }
            let (blue, red) = match (&args.blue_sizes, &args.red_sizes) {
                (Some(b), Some(r)) => (parse_sizes(b)?, parse_sizes(r)?),
                _ => {
                    return Err(Usage(
                        "the custom goal needs both --blue-sizes and --red-sizes".into(),
                    ))
                }
            };
            SearchGoal {
                predicate: SearchPredicate::Custom {
                    blue_sizes: blue,
                    red_sizes: red,
                },
                mode,
                symmetry_fix: false,
            }
        }
    };
    let options = SearchOptions {
        jobs: args.jobs,
        checkpoint: args.checkpoint.clone(),
        ..SearchOptions::default()
    };
    let stats = search_colorings_with(&g, &goal, &options).map_err(usage)?;
    if args.stats {
        eprintln!("{}", serde_json::to_string(&stats).map_err(usage)?);
    }
    let (text, code) = match (&args.mode, &stats.result) {
        (ModeKind::First, SearchResult::Witness(w)) => (
            json!({ "witness": w }).to_string(),
            ExitCode::SUCCESS,
        ),
        (ModeKind::First, SearchResult::NoneExists) => {
            (json!({ "witness": null }).to_string(), ExitCode::FAILURE)
        }
        (ModeKind::Count, SearchResult::Count(c)) => {
            (json!({ "count": c }).to_string(), ExitCode::SUCCESS)
        }
        (ModeKind::None, SearchResult::NoneExists) => {
            (json!({ "none": true }).to_string(), ExitCode::SUCCESS)
        }
        (ModeKind::None, SearchResult::Witness(w)) => (
            json!({ "none": false, "witness": w }).to_string(),
            ExitCode::FAILURE,
        ),
        (_, result) => {
            return Err(Usage(format!("unexpected search outcome {result:?}")));
        }
    };
    emit(out, &text)?;
    Ok(code)
}

fn run_census(args: CensusArgs, out: &Option<PathBuf>) -> Result<ExitCode, Usage> {
    let text = fs::read_to_string(&args.input)
        .map_err(|e| Usage(format!("{}: {e}", args.input.display())))?;
    let rows = census_rbipm(text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()).map(
        |(i, line)| parse_graph6(line.trim()).map_err(|e| format!("line {}: {e}", i + 1)),
    ));
    emit(out, &serde_json::to_string(&rows).map_err(usage)?)?;
    Ok(ExitCode::SUCCESS)
}

fn run_repro(args: ReproArgs, out: &Option<PathBuf>) -> Result<ExitCode, Usage> {
    let opts = ReproOptions {
        include_long: args.include_long,
        seed: args.seed,
        jobs: args.jobs,
    };
    let criteria = run_criteria(&opts);
    let all_pass = criteria.iter().all(|c| c.pass);
    let text = if args.json {
        serde_json::to_string_pretty(&criteria).map_err(usage)?
    } else {
        let mut lines = Vec::new();
        for c in &criteria {
            lines.push(format!(
                "{} {:2}  {:<62} {:>7} ms  {}",
                if c.pass { "PASS" } else { "FAIL" },
                c.id,
                c.name,
                c.millis,
                c.detail
            ));
        }
        lines.push(format!(
            "{} of {} checks passed",
            criteria.iter().filter(|c| c.pass).count(),
            criteria.len()
        ));
        lines.join("\n")
    };
    emit(out, &text)?;
    Ok(if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}
