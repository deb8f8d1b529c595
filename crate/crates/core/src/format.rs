//! Text interchange formats.
//!
//! * graph6 for simple undirected graphs (optional `>>graph6<<` header);
//! * edge-list `n; u-v,u-v,...` with 1-indexed vertices, undirected, loops allowed;
//! * arc-list `n; u->v,...` with 1-indexed vertices, directed.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, MAX_VERTICES};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GraphFormat {
    Graph6,
    EdgeList,
    ArcList,
}

impl FromStr for GraphFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "graph6" | "g6" => Ok(GraphFormat::Graph6),
            "edge-list" | "edges" => Ok(GraphFormat::EdgeList),
            "arc-list" | "arcs" => Ok(GraphFormat::ArcList),
            other => Err(Error::Parse(format!("unknown graph format {other:?}"))),
        }
    }
}

impl GraphFormat {
    /// Guesses the format of `text`: `->` means arc-list, `;` edge-list,
    /// anything else graph6.
    pub fn detect(text: &str) -> GraphFormat {
        if text.contains("->") {
            GraphFormat::ArcList
        } else if text.contains(';') {
            GraphFormat::EdgeList
        } else {
            GraphFormat::Graph6
        }
    }
}

pub fn parse_graph(text: &str, format: GraphFormat) -> Result<Graph> {
    match format {
        GraphFormat::Graph6 => parse_graph6(text),
        GraphFormat::EdgeList => parse_pairs(text, "-", false),
        GraphFormat::ArcList => parse_pairs(text, "->", true),
    }
}

/// Parses with [`GraphFormat::detect`].
pub fn parse_graph_auto(text: &str) -> Result<Graph> {
    parse_graph(text, GraphFormat::detect(text))
}

pub fn render_graph(g: &Graph, format: GraphFormat) -> Result<String> {
    match format {
        GraphFormat::Graph6 => render_graph6(g),
        GraphFormat::EdgeList => {
            if g.is_directed() {
                Err(Error::DirectedInput)
            } else {
                Ok(render_edge_list(g))
            }
        }
        GraphFormat::ArcList => Ok(render_arc_list(g)),
    }
}

const GRAPH6_HEADER: &str = ">>graph6<<";

pub fn parse_graph6(text: &str) -> Result<Graph> {
    let body = text.trim();
    let body = body.strip_prefix(GRAPH6_HEADER).unwrap_or(body);
    let bytes = body.as_bytes();
    if bytes.is_empty() {
        return Err(Error::Parse("empty graph6 string".into()));
    }
    if let Some(&b) = bytes.iter().find(|&&b| !(63..=126).contains(&b)) {
        return Err(Error::Parse(format!("byte {b:#04x} is not a graph6 character")));
    }
    let (n, rest) = if bytes[0] < 126 {
        ((bytes[0] - 63) as usize, &bytes[1..])
    } else if bytes.len() >= 4 && bytes[1] < 126 {
        let n = bytes[1..4].iter().fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize);
        (n, &bytes[4..])
    } else {
        return Err(Error::Parse("malformed graph6 size header".into()));
    };
    if n > MAX_VERTICES {
        return Err(Error::TooManyVertices { n, max: MAX_VERTICES });
    }
    let bits = n * n.saturating_sub(1) / 2;
    let expected = bits.div_ceil(6);
    if rest.len() != expected {
        return Err(Error::Parse(format!(
            "graph6 body for n={n} needs {expected} bytes, found {}",
            rest.len()
        )));
    }
    let bit = |k: usize| (rest[k / 6] - 63) >> (5 - k % 6) & 1 == 1;
    let mut g = Graph::empty(n);
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if bit(k) {
                g.add_edge(i, j)?;
            }
            k += 1;
        }
    }
    if (bits..expected * 6).any(bit) {
        return Err(Error::Parse("nonzero graph6 padding bits".into()));
    }
    Ok(g)
}

/// graph6 without header. Only simple undirected graphs can be expressed.
pub fn render_graph6(g: &Graph) -> Result<String> {
    if g.is_directed() {
        return Err(Error::DirectedInput);
    }
    if g.has_loops() {
        return Err(Error::LoopedInput);
    }
    let n = g.n();
    let mut out = Vec::new();
    if n < 63 {
        out.push(n as u8 + 63);
    } else {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = acc << 1 | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    Ok(String::from_utf8(out).expect("graph6 bytes are ASCII"))
}

fn parse_pairs(text: &str, sep: &str, directed: bool) -> Result<Graph> {
    let (head, body) = text
        .split_once(';')
        .ok_or_else(|| Error::Parse("expected \"n; ...\" header".into()))?;
    let n: usize = head
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad vertex count {:?}", head.trim())))?;
    if n > MAX_VERTICES {
        return Err(Error::TooManyVertices { n, max: MAX_VERTICES });
    }
    let mut g = if directed { Graph::empty_directed(n) } else { Graph::empty(n) };
    for item in body.split([',', '\n']).map(str::trim).filter(|s| !s.is_empty()) {
        if !directed && item.contains("->") {
            return Err(Error::Parse(format!("arc {item:?} in an edge-list")));
        }
        let (a, b) = item
            .split_once(sep)
            .ok_or_else(|| Error::Parse(format!("bad pair {item:?}")))?;
        let parse_vertex = |s: &str| -> Result<usize> {
            let v: usize = s
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad vertex {:?}", s.trim())))?;
            if v == 0 || v > n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            Ok(v - 1)
        };
        g.add_arc(parse_vertex(a)?, parse_vertex(b)?)?;
    }
    Ok(g)
}

/// `n; u-v,...`, 1-indexed, edges sorted.
pub fn render_edge_list(g: &Graph) -> String {
    let mut s = format!("{};", g.n());
    for (k, (u, v)) in g.edges().into_iter().enumerate() {
        let _ = write!(s, "{}{}-{}", if k == 0 { " " } else { "," }, u + 1, v + 1);
    }
    s
}

/// `n; u->v,...`, 1-indexed, arcs sorted.
pub fn render_arc_list(g: &Graph) -> String {
    let mut s = format!("{};", g.n());
    for (k, (u, v)) in g.arcs().into_iter().enumerate() {
        let _ = write!(s, "{}{}->{}", if k == 0 { " " } else { "," }, u + 1, v + 1);
    }
    s
}
