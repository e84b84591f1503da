//! One-string graph specifiers shared by every subcommand.
//!
//! Accepted forms:
//! - `named:<name>` for the built-in graphs,
//! - `gp:<n>:<k>` for the generalized Petersen graph GP(n, k),
//! - `torus:<m>:<n>` for the toroidal grid Cm x Cn,
//! - `g6:<file>[:line]` for a graph6 file (1-based line, default 1),
//! - `tree:<file>` for a parent-array JSON tree file.

use std::str::FromStr;

use crumby::families::{build_gp, build_toroidal, named_graph, GPParams, NamedGraph};
use crumby::graph::Graph;
use crumby::graph6::parse_graph6;
use crumby::trees::TreeSpec;

fn usize_field(target: &str, value: &str) -> Result<usize, String> {
    value
        .parse()
        .map_err(|_| format!("{target} must be a non-negative integer, got {value:?}"))
}

/// Parses a specifier into a graph. Errors are one-line, actionable, and
/// meant for direct printing.
pub fn parse_graph_spec(spec: &str) -> Result<Graph, String> {
    let (kind, rest) = spec
        .split_once(':')
        .ok_or_else(|| format!("graph specifier {spec:?} has no kind prefix; expected named:, gp:, torus:, g6:, or tree:"))?;
    match kind {
        "named" => {
            let which = NamedGraph::from_str(rest).map_err(|_| {
                let all: Vec<&str> = NamedGraph::ALL.iter().map(|g| g.name()).collect();
                format!("unknown graph name {rest:?}; known names: {}", all.join(", "))
            })?;
            Ok(named_graph(which))
        }
        "gp" => {
            let (n, k) = rest
                .split_once(':')
                .ok_or_else(|| format!("gp specifier needs gp:<n>:<k>, got {spec:?}"))?;
            let params = GPParams {
                n_outer: usize_field("gp n", n)?,
                step: usize_field("gp k", k)?,
            };
            build_gp(params).map_err(|e| format!("bad gp parameters: {e}"))
        }
        "torus" => {
            let (m, n) = rest
                .split_once(':')
                .ok_or_else(|| format!("torus specifier needs torus:<m>:<n>, got {spec:?}"))?;
            build_toroidal(usize_field("torus m", m)?, usize_field("torus n", n)?)
                .map_err(|e| format!("bad torus parameters: {e}"))
        }
        "g6" => {
            // An optional trailing :<digits> selects a 1-based line.
            let (path, line) = match rest.rsplit_once(':') {
                Some((p, l)) if !l.is_empty() && l.bytes().all(|b| b.is_ascii_digit()) => {
                    (p, usize_field("g6 line", l)?)
                }
                _ => (rest, 1),
            };
            if line == 0 {
                return Err("g6 line numbers are 1-based".into());
            }
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read graph6 file {path}: {e}"))?;
            let wanted = text
                .lines()
                .nth(line - 1)
                .ok_or_else(|| format!("{path} has no line {line}"))?;
            parse_graph6(wanted).map_err(|e| format!("{path}:{line}: {e}"))
        }
        "tree" => {
            let text = std::fs::read_to_string(rest)
                .map_err(|e| format!("cannot read tree file {rest}: {e}"))?;
            let tree: TreeSpec = serde_json::from_str(&text)
                .map_err(|e| format!("{rest}: expected {{\"parents\":[-1,...]}}: {e}"))?;
            Ok(tree.to_graph())
        }
        other => Err(format!(
            "unknown graph specifier kind {other:?}; expected named:, gp:, torus:, g6:, or tree:"
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_and_parametric_specs() {
        assert_eq!(parse_graph_spec("named:petersen").unwrap().n(), 10);
        assert_eq!(parse_graph_spec("gp:7:2").unwrap().n(), 14);
        assert_eq!(parse_graph_spec("torus:3:4").unwrap().n(), 12);
    }

    #[test]
    fn file_specs() {
        let dir = std::env::temp_dir().join("crumby_spec_test");
        std::fs::create_dir_all(&dir).unwrap();
        let g6 = dir.join("two.g6");
        std::fs::write(&g6, "EFz_\nDqo\n").unwrap();
        let base = g6.display();
        assert_eq!(parse_graph_spec(&format!("g6:{base}")).unwrap().n(), 6);
        assert_eq!(parse_graph_spec(&format!("g6:{base}:2")).unwrap().n(), 5);
        assert!(parse_graph_spec(&format!("g6:{base}:9")).is_err());

        let tree = dir.join("t.json");
        std::fs::write(&tree, "{\"parents\":[-1,0,0,1]}").unwrap();
        let g = parse_graph_spec(&format!("tree:{}", tree.display())).unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.edge_count(), 3);
    }

    #[test]
    fn errors_are_actionable() {
        for bad in ["petersen", "named:nope", "gp:5", "torus:a:3", "what:x"] {
            let err = parse_graph_spec(bad).unwrap_err();
            assert!(!err.is_empty(), "{bad} should error");
        }
    }
}
