//! Small exhaustive families: connected cubic graphs, and 3-row graphs up to
//! symmetry, with the scan for row graphs lacking an amiable coloring.

use std::collections::{BTreeMap, HashMap};

use petgraph::algo::is_isomorphic;
use petgraph::graph::UnGraph;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Multigraph;
use crate::named;
use crate::rowgraph::{brute_force_amiable, AmiableColoring, Node, OracleGuard, RowGraph, RowGraphJson, ROW_PERMUTATIONS};

fn bfs_labelled(n: usize, v: usize, discovered: usize, adj: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
    if v == n {
        if discovered == n {
            out.push(adj.clone());
        }
        return;
    }
    if v >= discovered {
        return; // v was never reached: disconnected
    }
    let need = 3 - adj[v].len();
    let existing: Vec<usize> = (v + 1..discovered)
        .filter(|&w| adj[w].len() < 3 && !adj[v].contains(&w))
        .collect();
    for fresh in 0..=need {
        if discovered + fresh > n || need - fresh > existing.len() {
            continue;
        }
        for pick in subsets(&existing, need - fresh) {
            let targets: Vec<usize> = pick.into_iter().chain(discovered..discovered + fresh).collect();
            for &w in &targets {
                adj[v].push(w);
                adj[w].push(v);
            }
            bfs_labelled(n, v + 1, discovered + fresh, adj, out);
            for &w in &targets {
                adj[v].pop();
                adj[w].pop();
            }
        }
    }
}

fn subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if items.len() < k {
        return Vec::new();
    }
    let mut out: Vec<Vec<usize>> = subsets(&items[1..], k - 1)
        .into_iter()
        .map(|mut s| {
            s.insert(0, items[0]);
            s
        })
        .collect();
    out.extend(subsets(&items[1..], k));
    out
}

fn to_petgraph(g: &Multigraph) -> UnGraph<(), ()> {
    let mut pg = UnGraph::new_undirected();
    let idx: BTreeMap<usize, _> = g.vertices().iter().map(|&v| (v, pg.add_node(()))).collect();
    for e in g.edges() {
        pg.add_edge(idx[&e.a], idx[&e.b], ());
    }
    pg
}

/// Cheap isomorphism invariant: sorted per-vertex (triangles, BFS layer sizes).
fn invariant(adj: &[Vec<usize>]) -> Vec<(usize, Vec<usize>)> {
    let n = adj.len();
    let mut out: Vec<(usize, Vec<usize>)> = (0..n)
        .map(|v| {
            let tri = adj[v]
                .iter()
                .flat_map(|&a| adj[v].iter().map(move |&b| (a, b)))
                .filter(|&(a, b)| a < b && adj[a].contains(&b))
                .count();
            let mut dist = vec![usize::MAX; n];
            dist[v] = 0;
            let mut queue = std::collections::VecDeque::from([v]);
            let mut layers = vec![0usize; n];
            while let Some(x) = queue.pop_front() {
                layers[dist[x]] += 1;
                for &y in &adj[x] {
                    if dist[y] == usize::MAX {
                        dist[y] = dist[x] + 1;
                        queue.push_back(y);
                    }
                }
            }
            (tri, layers)
        })
        .collect();
    out.sort();
    out
}

/// Connected simple cubic graphs on `n` vertices, one per isomorphism class.
pub fn cubic_graphs(n: usize) -> Vec<Multigraph> {
    if n < 4 || n % 2 == 1 {
        return Vec::new();
    }
    let mut labelled = Vec::new();
    bfs_labelled(n, 0, 1, &mut vec![Vec::new(); n], &mut labelled);
    let mut classes: HashMap<Vec<(usize, Vec<usize>)>, Vec<(Multigraph, UnGraph<(), ()>)>> = HashMap::new();
    let mut order = Vec::new();
    for adj in labelled {
        let key = invariant(&adj);
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|v| adj[v].iter().filter(move |&&w| v < w).map(move |&w| (v, w)))
            .collect();
        let g = Multigraph::from_pairs(n, &pairs).expect("valid pairs");
        let pg = to_petgraph(&g);
        let bucket = classes.entry(key.clone()).or_default();
        if bucket.iter().all(|(_, other)| !is_isomorphic(&pg, other)) {
            bucket.push((g, pg));
            order.push((key, bucket.len() - 1));
        }
    }
    order.into_iter().map(|(k, i)| classes[&k][i].0.clone()).collect()
}

/// The θ-graph followed by every connected simple cubic graph on at most
/// `max_n` vertices, named `theta` and `c{n}_{k}`.
pub fn cubic_corpus(max_n: usize) -> Vec<(String, Multigraph)> {
    let mut out = vec![("theta".to_string(), named::theta())];
    for n in (4..=max_n).step_by(2) {
        for (k, g) in cubic_graphs(n).into_iter().enumerate() {
            out.push((format!("c{n}_{k}"), g));
        }
    }
    out
}

/// Symmetries used to thin out row-graph enumerations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Symmetry {
    None,
    /// Column permutations only.
    Columns,
    /// Column permutations and independent row permutations per column.
    Rearrangements,
}

/// Edge types between distinct columns, indexed by column pair `(j1 < j2)`
/// then rows `(i1, i2)`.
pub fn row_edge_types(s: usize) -> Vec<(Node, Node)> {
    let mut out = Vec::new();
    for j1 in 0..s {
        for j2 in j1 + 1..s {
            for i1 in 0..3 {
                for i2 in 0..3 {
                    out.push((Node::new(i1, j1), Node::new(i2, j2)));
                }
            }
        }
    }
    out
}

pub fn row_graph_from_types(s: usize, types: &[u16]) -> RowGraph {
    let all = row_edge_types(s);
    let tuples: Vec<(usize, usize, usize, usize)> = types
        .iter()
        .map(|&t| {
            let (a, b) = all[t as usize];
            (a.row, a.col, b.row, b.col)
        })
        .collect();
    RowGraph::from_tuples(3, s, &tuples).expect("edge types join distinct columns")
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Each symmetry as a map on edge-type indices.
fn type_maps(s: usize, sym: Symmetry) -> Vec<Vec<u16>> {
    let types = row_edge_types(s);
    let index: HashMap<(Node, Node), u16> = types.iter().enumerate().map(|(k, &t)| (t, k as u16)).collect();
    let col_perms = match sym {
        Symmetry::None => return Vec::new(),
        _ => permutations(s),
    };
    let row_choices: Vec<Vec<Vec<usize>>> = match sym {
        Symmetry::Rearrangements => {
            let mut acc: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
            for _ in 0..s {
                acc = acc
                    .into_iter()
                    .flat_map(|prefix| {
                        ROW_PERMUTATIONS.iter().map(move |p| {
                            let mut next = prefix.clone();
                            next.push(p.iter().map(|&c| c as usize - 1).collect());
                            next
                        })
                    })
                    .collect();
            }
            acc
        }
        _ => vec![vec![vec![0, 1, 2]; s]],
    };
    let mut maps = Vec::new();
    for cp in &col_perms {
        for rp in &row_choices {
            let map = |n: Node| Node::new(rp[n.col][n.row], cp[n.col]);
            maps.push(
                types
                    .iter()
                    .map(|&(a, b)| {
                        let (x, y) = (map(a), map(b));
                        let key = if x.col < y.col { (x, y) } else { (y, x) };
                        index[&key]
                    })
                    .collect(),
            );
        }
    }
    maps
}

fn is_canonical(seq: &[u16], maps: &[Vec<u16>], buf: &mut Vec<u16>) -> bool {
    for m in maps {
        buf.clear();
        buf.extend(seq.iter().map(|&t| m[t as usize]));
        buf.sort_unstable();
        if buf.as_slice() < seq {
            return false;
        }
    }
    true
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowEnumeration {
    pub s: usize,
    /// Sorted edge-type multisets of the kept instances.
    pub instances: Vec<Vec<u16>>,
    /// Multisets dropped because `R_C` is not eulerian.
    pub skipped_non_eulerian: usize,
}

/// Every multiset of at most `max_edges` edge types on `s` columns with
/// eulerian column contraction, one per symmetry orbit.
pub fn enumerate_row_graphs(s: usize, max_edges: usize, sym: Symmetry) -> RowEnumeration {
    let types = row_edge_types(s);
    let ends: Vec<(usize, usize)> = types.iter().map(|(a, b)| (a.col, b.col)).collect();
    let maps = type_maps(s, sym);
    let mut out = RowEnumeration {
        s,
        ..Default::default()
    };
    let mut seq = Vec::new();
    let mut parity = vec![false; s];
    let mut buf = Vec::new();
    fn rec(
        start: usize,
        max_edges: usize,
        ends: &[(usize, usize)],
        maps: &[Vec<u16>],
        seq: &mut Vec<u16>,
        parity: &mut Vec<bool>,
        buf: &mut Vec<u16>,
        out: &mut RowEnumeration,
    ) {
        if parity.iter().all(|p| !p) {
            if is_canonical(seq, maps, buf) {
                out.instances.push(seq.clone());
            }
        } else {
            out.skipped_non_eulerian += 1;
        }
        if seq.len() == max_edges {
            return;
        }
        for t in start..ends.len() {
            let (a, b) = ends[t];
            parity[a] = !parity[a];
            parity[b] = !parity[b];
            seq.push(t as u16);
            rec(t, max_edges, ends, maps, seq, parity, buf, out);
            seq.pop();
            parity[a] = !parity[a];
            parity[b] = !parity[b];
        }
    }
    rec(0, max_edges, &ends, &maps, &mut seq, &mut parity, &mut buf, &mut out);
    out
}

/// Result of checking one row graph for an amiable coloring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AmiabilityCheck {
    /// `R_C` is not eulerian, so the hypothesis fails.
    Skipped,
    Amiable(AmiableColoring),
    Counterexample,
}

pub fn check_amiability(r: &RowGraph, guard: OracleGuard) -> Result<AmiabilityCheck> {
    if !r.is_rc_eulerian() {
        return Ok(AmiabilityCheck::Skipped);
    }
    Ok(match brute_force_amiable(r, guard)? {
        Some(a) => AmiabilityCheck::Amiable(a),
        None => AmiabilityCheck::Counterexample,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub s_max: usize,
    pub edge_max: usize,
    pub instances: usize,
    pub skipped_non_eulerian: usize,
    pub counterexamples: Vec<RowGraphJson>,
}

/// Scans all 3-row graphs with `s <= s_max` and at most `edge_max` edges,
/// up to rearrangement. `on_counterexample` sees each failing instance
/// before anything else happens to it.
pub fn scan_amiability(
    s_max: usize,
    edge_max: usize,
    guard: OracleGuard,
    on_counterexample: impl Fn(&RowGraph) + Sync,
) -> Result<ScanReport> {
    if s_max > guard.max_columns || edge_max > guard.max_edges {
        return Err(Error::OracleLimit(format!(
            "scan bounds {s_max} columns / {edge_max} edges exceed {} / {}",
            guard.max_columns, guard.max_edges
        )));
    }
    let mut rep = ScanReport {
        s_max,
        edge_max,
        ..Default::default()
    };
    for s in 1..=s_max {
        let en = enumerate_row_graphs(s, edge_max, Symmetry::Rearrangements);
        rep.skipped_non_eulerian += en.skipped_non_eulerian;
        rep.instances += en.instances.len();
        let found: Result<Vec<Option<RowGraphJson>>> = en
            .instances
            .par_iter()
            .map(|types| {
                let r = row_graph_from_types(s, types);
                Ok(match check_amiability(&r, guard)? {
                    AmiabilityCheck::Counterexample => {
                        on_counterexample(&r);
                        Some(r.to_json())
                    }
                    _ => None,
                })
            })
            .collect();
        rep.counterexamples.extend(found?.into_iter().flatten());
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_counts() {
        let counts: Vec<usize> = [4, 6, 8, 10].iter().map(|&n| cubic_graphs(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 5, 19]);
        for g in cubic_graphs(8) {
            assert!(g.is_cubic());
            assert!(crate::graph::is_connected(&g));
        }
    }

    #[test]
    fn corpus_names() {
        let c = cubic_corpus(6);
        let names: Vec<&str> = c.iter().map(|(n, _)| n.as_str()).collect();
        assert_eq!(names, vec!["theta", "c4_0", "c6_0", "c6_1"]);
    }

    // brute force orbit count for s = 2 under the 72 rearrangements
    #[test]
    fn rearrangement_orbits_match_brute_force() {
        let maps = type_maps(2, Symmetry::Rearrangements);
        assert_eq!(maps.len(), 72);
        let en = enumerate_row_graphs(2, 4, Symmetry::Rearrangements);
        let all = enumerate_row_graphs(2, 4, Symmetry::None);
        let mut orbits = std::collections::BTreeSet::new();
        for seq in &all.instances {
            let canon = maps
                .iter()
                .map(|m| {
                    let mut v: Vec<u16> = seq.iter().map(|&t| m[t as usize]).collect();
                    v.sort();
                    v
                })
                .min()
                .unwrap();
            orbits.insert(canon);
        }
        assert_eq!(en.instances.len(), orbits.len());
        assert_eq!(en.skipped_non_eulerian, all.skipped_non_eulerian);
        // sizes 0, 2 and 4 over 9 types; odd sizes are skipped
        assert_eq!(all.instances.len(), 1 + 45 + 495);
    }

    #[test]
    fn single_cross_edge_is_skipped() {
        let r = RowGraph::from_tuples(3, 2, &[(0, 0, 1, 1)]).unwrap();
        assert_eq!(check_amiability(&r, OracleGuard::default()).unwrap(), AmiabilityCheck::Skipped);
    }

    #[test]
    fn small_scan_has_no_counterexamples() {
        let rep = scan_amiability(2, 4, OracleGuard::default(), |_| {}).unwrap();
        assert!(rep.counterexamples.is_empty());
        assert!(rep.instances > 0);
        assert!(scan_amiability(9, 4, OracleGuard::default(), |_| {}).is_err());
    }
}
