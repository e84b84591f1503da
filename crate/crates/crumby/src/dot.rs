//! Graphviz DOT export with vertices filled by their assigned color.

use crate::coloring::{Color, Coloring};
use crate::graph::Graph;

/// Renders `g` as an undirected DOT graph. Red and blue vertices are filled
/// with their color, unset vertices stay white. Output order is vertex id
/// ascending, then edges `(a, b)` with `a < b` ascending, so the text is
/// deterministic for a given input.
pub fn export_dot(g: &Graph, coloring: Option<&Coloring>) -> String {
    let mut out = String::from("graph g {\n  node [style=filled];\n");
    for v in 0..g.n() {
        let fill = match coloring.and_then(|c| c.get(v)) {
            Some(Color::Red) => "red",
            Some(Color::Blue) => "blue",
            None => "white",
        };
        let font = if fill == "white" { "black" } else { "white" };
        out.push_str(&format!(
            "  {v} [fillcolor={fill}, fontcolor={font}];\n"
        ));
    }
    for (a, b) in g.edges() {
        out.push_str(&format!("  {a} -- {b};\n"));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn petersen_export_counts() {
        let g = crate::families::named_graph(crate::families::NamedGraph::Petersen);
        let c = Coloring::from_str_colors("RBRRBRRBBR").unwrap();
        let dot = export_dot(&g, Some(&c));
        assert_eq!(dot.matches(" -- ").count(), 15);
        assert_eq!(dot.matches("fillcolor=").count(), 10);
        let reds = dot.matches("fillcolor=red").count();
        let blues = dot.matches("fillcolor=blue").count();
        assert_eq!((reds, blues), (6, 4));
        assert!(dot.starts_with("graph g {"));
    }

    #[test]
    fn uncolored_vertices_are_white() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let dot = export_dot(&g, None);
        assert_eq!(dot.matches("fillcolor=white").count(), 2);
    }
}
