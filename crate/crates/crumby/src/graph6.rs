//! graph6 encoding of undirected simple graphs: a length header followed by
//! the upper triangle of the adjacency matrix, column by column, packed into
//! 6-bit groups offset by 63 into printable ASCII.

use thiserror::Error;

use crate::graph::Graph;

const OPTIONAL_HEADER: &str = ">>graph6<<";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Graph6Error {
    #[error("byte {byte:#04x} at offset {offset} outside graph6 range 63..=126")]
    BadByte { offset: usize, byte: u8 },
    #[error("truncated length header at offset {offset}")]
    TruncatedHeader { offset: usize },
    #[error("vertex count {n} exceeds supported maximum {max}")]
    Oversize { n: u64, max: u64 },
    #[error("adjacency bits truncated: need {need} bytes after the header, got {got}")]
    TruncatedBits { need: usize, got: usize },
    #[error("unexpected trailing byte at offset {offset}")]
    TrailingBytes { offset: usize },
    #[error("nonzero padding bit at offset {offset}")]
    TrailingBits { offset: usize },
}

/// Hard cap on parsed vertex counts; far above anything the toolkit handles,
/// but keeps hostile headers from driving allocations.
const MAX_N: u64 = 1 << 20;

fn sextet(bytes: &[u8], offset: usize) -> Result<u64, Graph6Error> {
    match bytes.get(offset) {
        None => Err(Graph6Error::TruncatedHeader { offset }),
        Some(&b) if !(63..=126).contains(&b) => Err(Graph6Error::BadByte { offset, byte: b }),
        Some(&b) => Ok(u64::from(b - 63)),
    }
}

/// Reads the length header, returning `(n, bytes consumed)`.
fn parse_length(bytes: &[u8]) -> Result<(u64, usize), Graph6Error> {
    let first = sextet(bytes, 0)?;
    if first < 63 {
        return Ok((first, 1));
    }
    // 126 starts an extended header: 3 sextets, or 126 again then 6 sextets.
    let second = sextet(bytes, 1)?;
    if second < 63 {
        let mut n = second;
        for off in 2..4 {
            n = (n << 6) | sextet(bytes, off)?;
        }
        Ok((n, 4))
    } else {
        let mut n = 0;
        for off in 2..8 {
            n = (n << 6) | sextet(bytes, off)?;
        }
        Ok((n, 8))
    }
}

/// Parses a single graph6 line; an optional `>>graph6<<` prefix is accepted.
pub fn parse_graph6(line: &str) -> Result<Graph, Graph6Error> {
    let line = line.strip_prefix(OPTIONAL_HEADER).unwrap_or(line);
    let bytes = line.trim_end_matches(['\r', '\n']).as_bytes();
    let (n64, header_len) = parse_length(bytes)?;
    if n64 > MAX_N {
        return Err(Graph6Error::Oversize { n: n64, max: MAX_N });
    }
    let n = n64 as usize;
    let bit_count = n * n.saturating_sub(1) / 2;
    let need = bit_count.div_ceil(6);
    let got = bytes.len() - header_len;
    if got < need {
        return Err(Graph6Error::TruncatedBits { need, got });
    }
    if got > need {
        return Err(Graph6Error::TrailingBytes {
            offset: header_len + need,
        });
    }

    let mut g = Graph::empty(n);
    let mut bit_index = 0usize;
    let mut pairs = Vec::with_capacity(bit_count);
    for j in 1..n {
        for i in 0..j {
            pairs.push((i, j));
        }
    }
    for off in header_len..bytes.len() {
        let group = sextet(bytes, off)?;
        for k in 0..6 {
            let bit = (group >> (5 - k)) & 1;
            if bit_index < bit_count {
                if bit == 1 {
                    let (i, j) = pairs[bit_index];
                    g.add_edge(i, j).expect("upper-triangle pairs are simple");
                }
            } else if bit == 1 {
                return Err(Graph6Error::TrailingBits { offset: off });
            }
            bit_index += 1;
        }
    }
    Ok(g)
}

/// Canonical graph6 line for a graph: minimal-length header, no trailer.
pub fn write_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        out.push(((n >> 12) & 63) as u8 + 63);
        out.push(((n >> 6) & 63) as u8 + 63);
        out.push((n & 63) as u8 + 63);
    } else {
        out.push(126);
        out.push(126);
        for shift in (0..36).step_by(6).rev() {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    }
    let mut group = 0u8;
    let mut filled = 0u8;
    for j in 1..n {
        for i in 0..j {
            group <<= 1;
            if g.has_edge(i, j) {
                group |= 1;
            }
            filled += 1;
            if filled == 6 {
                out.push(group + 63);
                group = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((group << (6 - filled)) + 63);
    }
    String::from_utf8(out).expect("graph6 bytes are printable ASCII")
}

/// Parses every non-empty line of a graph6 file.
pub fn parse_graph6_lines(text: &str) -> Result<Vec<Graph>, (usize, Graph6Error)> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        .map(|(i, l)| parse_graph6(l).map_err(|e| (i, e)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    // Expectations below are decoded by hand from the format definition, so
    // they cross-check the parser rather than restating it.

    #[test]
    fn trivial_graphs() {
        assert_eq!(parse_graph6("?").unwrap().n(), 0);
        let k1 = parse_graph6("@").unwrap();
        assert_eq!((k1.n(), k1.edge_count()), (1, 0));
        let k2 = parse_graph6("A_").unwrap();
        assert_eq!(k2.edges(), vec![(0, 1)]);
        assert_eq!(write_graph6(&k2), "A_");
        let e2 = parse_graph6("A?").unwrap();
        assert_eq!((e2.n(), e2.edge_count()), (2, 0));
    }

    #[test]
    fn five_vertex_star() {
        // 'D' = 5 vertices; '?' = six zero bits for pairs up to column 3;
        // '{' = 111100, so exactly the four pairs (i, 4) are edges.
        let g = parse_graph6("D?{").unwrap();
        assert_eq!(g.edges(), vec![(0, 4), (1, 4), (2, 4), (3, 4)]);
        assert_eq!(write_graph6(&g), "D?{");
    }

    #[test]
    fn header_prefix_accepted() {
        let g = parse_graph6(">>graph6<<A_").unwrap();
        assert_eq!(g.edges(), vec![(0, 1)]);
    }

    #[test]
    fn error_offsets() {
        assert_eq!(
            parse_graph6("A"),
            Err(Graph6Error::TruncatedBits { need: 1, got: 0 })
        );
        assert_eq!(
            parse_graph6("A_%"),
            Err(Graph6Error::TrailingBytes { offset: 2 })
        );
        assert_eq!(
            parse_graph6("A\x20"),
            Err(Graph6Error::BadByte {
                offset: 1,
                byte: 0x20
            })
        );
        // 'O' = 010000: the padding after the single (0,1) bit is nonzero.
        assert_eq!(
            parse_graph6("AO"),
            Err(Graph6Error::TrailingBits { offset: 1 })
        );
        assert_eq!(
            parse_graph6("~"),
            Err(Graph6Error::TruncatedHeader { offset: 1 })
        );
    }

    #[test]
    fn extended_header_roundtrip() {
        // 63 vertices forces the 3-sextet header.
        let mut g = Graph::empty(63);
        g.add_edge(0, 62).unwrap();
        g.add_edge(30, 31).unwrap();
        let line = write_graph6(&g);
        assert!(line.starts_with('~'));
        let back = parse_graph6(&line).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn multi_line_parsing() {
        let graphs = parse_graph6_lines("A_\n\nD?{\n").unwrap();
        assert_eq!(graphs.len(), 2);
        assert_eq!(graphs[1].degree(4), 4);
        let err = parse_graph6_lines("A_\nA\n").unwrap_err();
        assert_eq!(err.0, 1);
    }
}
