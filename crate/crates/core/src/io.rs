//! Graph file formats: graph6 / sparse6 for simple graphs and a JSON
//! edge-list format for multigraphs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, EdgeId, Multigraph, VertexId};

/// `{"vertices":[...], "edges":[[id,a,b],...]}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<(EdgeId, VertexId, VertexId)>,
}

impl From<&Multigraph> for GraphJson {
    fn from(g: &Multigraph) -> Self {
        GraphJson {
            vertices: g.vertices().to_vec(),
            edges: g.edges().iter().map(|e| (e.id, e.a, e.b)).collect(),
        }
    }
}

impl TryFrom<GraphJson> for Multigraph {
    type Error = Error;

    fn try_from(j: GraphJson) -> Result<Multigraph> {
        Multigraph::new(j.vertices, j.edges.into_iter().map(|(id, a, b)| Edge::new(id, a, b)))
    }
}

pub fn graph_from_json(text: &str) -> Result<Multigraph> {
    let j: GraphJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    Multigraph::try_from(j)
}

pub fn graph_to_json(g: &Multigraph) -> String {
    serde_json::to_string(&GraphJson::from(g)).expect("graph json serializes")
}

fn six_bits(s: &[u8]) -> Result<Vec<u8>> {
    s.iter()
        .map(|&c| {
            if (63..=126).contains(&c) {
                Ok(c - 63)
            } else {
                Err(Error::Parse(format!("byte {c} outside the printable graph6 range")))
            }
        })
        .collect()
}

// Returns (n, remaining 6-bit groups).
fn read_size(data: &[u8]) -> Result<(usize, &[u8])> {
    let short = || Error::Parse("truncated size field".into());
    match data.first() {
        None => Err(short()),
        Some(&63) if data.len() >= 2 && data[1] == 63 => {
            if data.len() < 8 {
                return Err(short());
            }
            let n = data[2..8].iter().fold(0usize, |acc, &x| (acc << 6) | x as usize);
            Ok((n, &data[8..]))
        }
        Some(&63) => {
            if data.len() < 4 {
                return Err(short());
            }
            let n = data[1..4].iter().fold(0usize, |acc, &x| (acc << 6) | x as usize);
            Ok((n, &data[4..]))
        }
        Some(&x) => Ok((x as usize, &data[1..])),
    }
}

fn bits(data: &[u8]) -> impl Iterator<Item = bool> + '_ {
    data.iter().flat_map(|&x| (0..6).rev().map(move |k| (x >> k) & 1 == 1))
}

/// Parses one graph6 line (optional `>>graph6<<` header).
pub fn parse_graph6(line: &str) -> Result<Multigraph> {
    let line = line.trim();
    let line = line.strip_prefix(">>graph6<<").unwrap_or(line);
    let data = six_bits(line.as_bytes())?;
    let (n, rest) = read_size(&data)?;
    let needed = n * n.saturating_sub(1) / 2;
    let mut it = bits(rest);
    let mut pairs = Vec::new();
    for j in 1..n {
        for i in 0..j {
            match it.next() {
                Some(true) => pairs.push((i, j)),
                Some(false) => {}
                None => return Err(Error::Parse(format!("graph6 body shorter than {needed} bits"))),
            }
        }
    }
    Multigraph::from_pairs(n, &pairs)
}

/// Parses one sparse6 line (leading `:`, optional `>>sparse6<<` header).
/// Loops and parallel edges are preserved.
pub fn parse_sparse6(line: &str) -> Result<Multigraph> {
    let line = line.trim();
    let line = line.strip_prefix(">>sparse6<<").unwrap_or(line);
    let body = line
        .strip_prefix(':')
        .ok_or_else(|| Error::Parse("sparse6 must start with ':'".into()))?;
    let data = six_bits(body.as_bytes())?;
    let (n, rest) = read_size(&data)?;
    let mut k = 0;
    while n > 1 && (1usize << k) < n {
        k += 1;
    }
    let all: Vec<bool> = bits(rest).collect();
    let mut pos = 0;
    let mut v = 0usize;
    let mut pairs = Vec::new();
    while pos + 1 + k <= all.len() {
        let b = all[pos];
        let x = all[pos + 1..pos + 1 + k].iter().fold(0usize, |acc, &bit| (acc << 1) | bit as usize);
        pos += 1 + k;
        if b {
            v += 1;
        }
        // padding with ones can produce out-of-range values
        if x >= n || v >= n {
            break;
        } else if x > v {
            v = x;
        } else {
            pairs.push((x, v));
        }
    }
    Multigraph::from_pairs(n, &pairs)
}

/// Parses a single graph6 or sparse6 line, chosen by its leading character.
pub fn parse_graph6_or_sparse6(line: &str) -> Result<Multigraph> {
    let t = line.trim();
    if t.starts_with(':') || t.starts_with(">>sparse6<<") {
        parse_sparse6(t)
    } else {
        parse_graph6(t)
    }
}

/// Parses every non-empty line of a graph6/sparse6 file.
pub fn parse_graph6_file(text: &str) -> Result<Vec<Multigraph>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(parse_graph6_or_sparse6)
        .collect()
}

/// Encodes a simple graph with vertices `0..n` as graph6.
pub fn to_graph6(g: &Multigraph) -> Result<String> {
    let n = g.vertex_count();
    if g.vertices().iter().enumerate().any(|(i, &v)| i != v) {
        return Err(Error::Parse("graph6 needs vertices 0..n".into()));
    }
    let mut adj = vec![false; n * n];
    for e in g.edges() {
        if e.is_loop() || adj[e.a * n + e.b] {
            return Err(Error::Parse("graph6 cannot encode loops or parallel edges".into()));
        }
        adj[e.a * n + e.b] = true;
        adj[e.b * n + e.a] = true;
    }
    let mut out: Vec<u8> = Vec::new();
    if n <= 62 {
        out.push(n as u8);
    } else if n <= 258047 {
        out.push(63);
        out.extend((0..3).rev().map(|k| ((n >> (6 * k)) & 63) as u8));
    } else {
        out.push(63);
        out.push(63);
        out.extend((0..6).rev().map(|k| ((n >> (6 * k)) & 63) as u8));
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | adj[i * n + j] as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push(acc << (6 - filled));
    }
    Ok(out.into_iter().map(|x| (x + 63) as char).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph6_k4() {
        // K4 is "C~" in graph6
        let g = parse_graph6("C~").unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edge_count(), 6);
        assert!(g.is_cubic());
        assert_eq!(to_graph6(&g).unwrap(), "C~");
    }

    #[test]
    fn graph6_petersen() {
        let g = parse_graph6("IheA@GUAo").unwrap();
        assert_eq!(g.vertex_count(), 10);
        assert_eq!(g.edge_count(), 15);
        assert!(g.is_cubic());
        assert_eq!(to_graph6(&g).unwrap(), "IheA@GUAo");
    }

    #[test]
    fn graph6_rejects_garbage() {
        assert!(parse_graph6("C").is_err());
        assert!(parse_graph6("C\u{7}").is_err());
    }

    #[test]
    fn sparse6_example() {
        // The example from the format description: 7 vertices, edges
        // 0-1 0-2 1-2 5-6.
        let g = parse_sparse6(":Fa@x^").unwrap();
        assert_eq!(g.vertex_count(), 7);
        let mut pairs: Vec<(usize, usize)> = g.edges().iter().map(|e| (e.a, e.b)).collect();
        pairs.sort();
        assert_eq!(pairs, vec![(0, 1), (0, 2), (1, 2), (5, 6)]);
    }

    #[test]
    fn json_roundtrip_theta() {
        let g = Multigraph::from_pairs(2, &[(0, 1), (0, 1), (0, 1)]).unwrap();
        let text = graph_to_json(&g);
        assert_eq!(text, r#"{"vertices":[0,1],"edges":[[0,0,1],[1,0,1],[2,0,1]]}"#);
        assert_eq!(graph_from_json(&text).unwrap(), g);
    }
}
