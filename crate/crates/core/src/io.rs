//! Graph serialisation: graph6, plain edge lists, and JSON.
//!
//! The graph6 codec is the header-less de-facto standard: `N(n)` followed by
//! the upper-triangle bit vector in column-major order, six bits per
//! printable byte (offset 63). Labels survive the JSON form only.

use crate::graph::{Graph, GraphError, GraphJson};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum FormatError {
    #[error("empty input")]
    Empty,
    #[error("graph6 byte {byte:#x} at offset {offset} out of range")]
    BadByte { byte: u8, offset: usize },
    #[error("graph6 payload truncated: expected {expected} data bytes, got {got}")]
    Truncated { expected: usize, got: usize },
    #[error("graph orders above 258047 are unsupported by this codec")]
    OrderOutOfRange,
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("edge list declared {declared} edges but contained {got}")]
    EdgeCountMismatch { declared: usize, got: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("json: {0}")]
    Json(String),
}

pub fn to_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258047 {
        out.push(126);
        out.push(((n >> 12) & 63) as u8 + 63);
        out.push(((n >> 6) & 63) as u8 + 63);
        out.push((n & 63) as u8 + 63);
    } else {
        // n > 258047 never occurs here (vertex limit is in the hundreds).
        panic!("graph order {n} exceeds graph6 3-byte range");
    }
    let m = n * n.saturating_sub(1) / 2;
    let mut group = 0u8;
    let mut filled = 0usize;
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
    if m > 0 && filled > 0 {
        group <<= 6 - filled;
        out.push(group + 63);
    }
    String::from_utf8(out).expect("graph6 bytes are printable ASCII")
}

pub fn from_graph6(s: &str) -> Result<Graph, FormatError> {
    let bytes = s.trim().as_bytes();
    if bytes.is_empty() {
        return Err(FormatError::Empty);
    }
    for (i, &b) in bytes.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(FormatError::BadByte { byte: b, offset: i });
        }
    }
    let (n, mut pos) = if bytes[0] == 126 {
        if bytes.len() < 4 {
            return Err(FormatError::Truncated { expected: 4, got: bytes.len() });
        }
        if bytes[1] == 126 {
            // 8-byte order form is beyond this crate's vertex limit.
            return Err(FormatError::OrderOutOfRange);
        }
        let n = (((bytes[1] - 63) as usize) << 12)
            | (((bytes[2] - 63) as usize) << 6)
            | ((bytes[3] - 63) as usize);
        (n, 4usize)
    } else {
        ((bytes[0] - 63) as usize, 1usize)
    };
    let m = n * n.saturating_sub(1) / 2;
    let data_bytes = m.div_ceil(6);
    if bytes.len() < pos + data_bytes {
        return Err(FormatError::Truncated { expected: data_bytes, got: bytes.len() - pos });
    }
    let mut g = Graph::new(n);
    let mut bit = 0usize;
    'outer: for j in 1..n {
        for i in 0..j {
            let byte = bytes[pos + bit / 6] - 63;
            if (byte >> (5 - bit % 6)) & 1 == 1 {
                g.add_edge(i, j);
            }
            bit += 1;
            if bit >= m {
                break 'outer;
            }
        }
    }
    pos += data_bytes;
    if bytes.len() > pos {
        return Err(FormatError::Malformed {
            line: 1,
            msg: format!("{} trailing bytes after graph6 payload", bytes.len() - pos),
        });
    }
    Ok(g)
}

/// Plain text: first line `n m`, then one `u v` line per edge, 0-based.
pub fn to_edge_list(g: &Graph) -> String {
    let edges = g.edges();
    let mut out = format!("{} {}\n", g.n(), edges.len());
    for (u, v) in edges {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

pub fn from_edge_list(s: &str) -> Result<Graph, FormatError> {
    let mut lines = s.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (lineno, header) = lines.next().ok_or(FormatError::Empty)?;
    let mut it = header.split_whitespace();
    let parse = |tok: Option<&str>, lineno: usize| -> Result<usize, FormatError> {
        tok.ok_or(FormatError::Malformed { line: lineno + 1, msg: "missing field".into() })?
            .parse()
            .map_err(|e| FormatError::Malformed { line: lineno + 1, msg: format!("{e}") })
    };
    let n = parse(it.next(), lineno)?;
    let m = parse(it.next(), lineno)?;
    let mut g = Graph::new(n);
    let mut got = 0usize;
    for (lineno, line) in lines {
        let mut it = line.split_whitespace();
        let u = parse(it.next(), lineno)?;
        let v = parse(it.next(), lineno)?;
        g.try_add_edge(u, v)?;
        got += 1;
    }
    if got != m {
        return Err(FormatError::EdgeCountMismatch { declared: m, got });
    }
    Ok(g)
}

pub fn to_json(g: &Graph) -> String {
    serde_json::to_string(&GraphJson::from(g)).expect("graph json serialises")
}

pub fn from_json(s: &str) -> Result<Graph, FormatError> {
    let j: GraphJson = serde_json::from_str(s).map_err(|e| FormatError::Json(e.to_string()))?;
    Ok(Graph::try_from(j)?)
}

/// Parses a graph in any of the three formats, keyed by `format` name.
pub fn parse_as(format: &str, content: &str) -> Result<Graph, FormatError> {
    match format {
        "g6" | "graph6" => from_graph6(content),
        "edgelist" => from_edge_list(content),
        "json" => from_json(content),
        other => Err(FormatError::Malformed { line: 0, msg: format!("unknown format {other}") }),
    }
}

pub fn render_as(format: &str, g: &Graph) -> Result<String, FormatError> {
    match format {
        "g6" | "graph6" => Ok(to_graph6(g)),
        "edgelist" => Ok(to_edge_list(g)),
        "json" => Ok(to_json(g)),
        other => Err(FormatError::Malformed { line: 0, msg: format!("unknown format {other}") }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn known_graph6_strings() {
        // C5 in standard graph6 is "Dhc" ((0,1),(1,2),(2,3),(3,4),(0,4)).
        let c5 = Graph::cycle(5);
        assert_eq!(to_graph6(&c5), "Dhc");
        assert_eq!(from_graph6("Dhc").unwrap(), c5);
        // K4 is "C~".
        assert_eq!(to_graph6(&Graph::complete(4)), "C~");
        // The empty graph on 0 vertices is "?".
        assert_eq!(to_graph6(&Graph::new(0)), "?");
        assert_eq!(from_graph6("?").unwrap().n(), 0);
    }

    #[test]
    fn graph6_rejects_garbage() {
        assert!(matches!(from_graph6(""), Err(FormatError::Empty)));
        assert!(matches!(from_graph6("D\u{7}"), Err(FormatError::BadByte { .. })));
        assert!(matches!(from_graph6("E"), Err(FormatError::Truncated { .. })));
        assert!(matches!(from_graph6("DhcK"), Err(FormatError::Malformed { .. })));
    }

    #[test]
    fn edge_list_roundtrip_and_errors() {
        let g = Graph::petersen();
        let text = to_edge_list(&g);
        assert_eq!(from_edge_list(&text).unwrap(), g);
        assert!(matches!(
            from_edge_list("2 1\n0 5\n"),
            Err(FormatError::Graph(GraphError::OutOfRange { .. }))
        ));
        assert!(matches!(
            from_edge_list("3 2\n0 1\n"),
            Err(FormatError::EdgeCountMismatch { declared: 2, got: 1 })
        ));
    }

    #[test]
    fn json_keeps_labels() {
        let mut g = Graph::cycle(4);
        g.set_labels(vec!["A".into(), "A".into(), "B".into(), "B".into()]);
        let s = to_json(&g);
        let back = from_json(&s).unwrap();
        assert_eq!(back.labels().unwrap()[2], "B");
        assert_eq!(back, g);
    }

    proptest! {
        #[test]
        fn graph6_roundtrip(n in 0usize..65, seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut g = Graph::new(n);
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.random_bool(0.5) {
                        g.add_edge(u, v);
                    }
                }
            }
            let s = to_graph6(&g);
            prop_assert_eq!(from_graph6(&s).unwrap(), g.clone());
            let el = to_edge_list(&g);
            prop_assert_eq!(from_edge_list(&el).unwrap(), g);
        }

        #[test]
        fn graph6_wide_orders(n in 63usize..150) {
            let mut g = Graph::new(n);
            g.add_edge(0, n - 1);
            g.add_edge(n / 2, n / 2 + 1);
            let s = to_graph6(&g);
            prop_assert!(s.starts_with('~'));
            prop_assert_eq!(from_graph6(&s).unwrap(), g);
        }
    }
}
