//! Row graphs: vertices `v_ij` on a grid of `rows` rows and `s` columns with
//! every column an independent set. Rows and columns are 0-based here and
//! 1-based in JSON.
//!
//! Row graphs built from a frame carry the host edge id of every edge, which
//! is also used as the row-graph edge id.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::{is_perfect_coloring, Frame};
use crate::graph::{EdgeId, Multigraph, VertexId};
use crate::kotzig::{Color, PerfectColoring};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Node {
    pub row: usize,
    pub col: usize,
}

impl Node {
    pub fn new(row: usize, col: usize) -> Self {
        Node { row, col }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RowEdge {
    pub id: EdgeId,
    pub a: Node,
    pub b: Node,
    pub origin: Option<EdgeId>,
}

impl RowEdge {
    pub fn other(&self, n: Node) -> Node {
        if self.a == n {
            self.b
        } else {
            self.a
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowGraph {
    rows: usize,
    s: usize,
    edges: Vec<RowEdge>,
}

impl RowGraph {
    pub fn new(rows: usize, s: usize, mut edges: Vec<RowEdge>) -> Result<Self> {
        edges.sort_by_key(|e| e.id);
        for w in edges.windows(2) {
            if w[0].id == w[1].id {
                return Err(Error::DuplicateEdge(w[0].id));
            }
        }
        for e in &edges {
            for n in [e.a, e.b] {
                if n.row >= rows || n.col >= s {
                    return Err(Error::MalformedRowGraph(format!(
                        "edge {} touches ({}, {}) outside {rows}x{s}",
                        e.id, n.row, n.col
                    )));
                }
            }
            if e.a.col == e.b.col {
                return Err(Error::MalformedRowGraph(format!(
                    "edge {} lies inside column {}",
                    e.id, e.a.col
                )));
            }
        }
        Ok(RowGraph { rows, s, edges })
    }

    /// Synthetic instance from `(row, col, row, col)` tuples; ids are 0, 1, ...
    pub fn from_tuples(rows: usize, s: usize, tuples: &[(usize, usize, usize, usize)]) -> Result<Self> {
        let edges = tuples
            .iter()
            .enumerate()
            .map(|(id, &(i1, j1, i2, j2))| RowEdge {
                id,
                a: Node::new(i1, j1),
                b: Node::new(i2, j2),
                origin: None,
            })
            .collect();
        RowGraph::new(rows, s, edges)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn edges(&self) -> &[RowEdge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> Option<&RowEdge> {
        self.edges.binary_search_by_key(&id, |e| e.id).ok().map(|k| &self.edges[k])
    }

    pub fn nodes(&self) -> impl Iterator<Item = Node> + '_ {
        (0..self.s).flat_map(move |col| (0..self.rows).map(move |row| Node { row, col }))
    }

    pub fn index(&self, n: Node) -> VertexId {
        n.row * self.s + n.col
    }

    pub fn node(&self, v: VertexId) -> Node {
        Node::new(v / self.s, v % self.s)
    }

    pub fn incident(&self, n: Node) -> impl Iterator<Item = &RowEdge> + '_ {
        self.edges.iter().filter(move |e| e.a == n || e.b == n)
    }

    pub fn degree(&self, n: Node) -> usize {
        self.incident(n).count()
    }

    /// Degree of `n` counting only edges whose other end lies in `rows`.
    pub fn degree_into(&self, n: Node, rows: &[usize]) -> usize {
        self.incident(n).filter(|e| rows.contains(&e.other(n).row)).count()
    }

    pub fn is_isolated(&self, n: Node) -> bool {
        self.degree(n) == 0
    }

    /// The row graph as a plain multigraph on `rows * s` vertices
    /// (vertex id `row * s + col`), edge ids preserved.
    pub fn to_multigraph(&self) -> Multigraph {
        Multigraph::new(
            0..self.rows * self.s,
            self.edges
                .iter()
                .map(|e| crate::graph::Edge::new(e.id, self.index(e.a), self.index(e.b))),
        )
        .expect("row graph is a valid multigraph")
    }

    /// `R[V_i ∪ ...]` for the listed rows; vertex ids as in [`Self::to_multigraph`].
    pub fn induced_rows(&self, rows: &[usize]) -> Multigraph {
        let keep: BTreeSet<VertexId> = self
            .nodes()
            .filter(|n| rows.contains(&n.row))
            .map(|n| self.index(n))
            .collect();
        self.to_multigraph().induced_subgraph(&keep)
    }

    /// `R_C`: columns identified, multiplicities kept. Columns are
    /// independent, so no loops arise.
    pub fn column_contraction(&self) -> Multigraph {
        Multigraph::new(
            0..self.s,
            self.edges.iter().map(|e| crate::graph::Edge::new(e.id, e.a.col, e.b.col)),
        )
        .expect("column contraction is valid")
    }

    pub fn is_rc_eulerian(&self) -> bool {
        let mut deg = vec![0usize; self.s];
        for e in &self.edges {
            deg[e.a.col] += 1;
            deg[e.b.col] += 1;
        }
        deg.iter().all(|d| d % 2 == 0)
    }

    /// Sub-row-graph on the given columns (renumbered in the given order).
    /// Edges leaving the column set are dropped.
    pub fn restrict_columns(&self, cols: &[usize]) -> RowGraph {
        let pos: BTreeMap<usize, usize> = cols.iter().enumerate().map(|(k, &c)| (c, k)).collect();
        let edges = self
            .edges
            .iter()
            .filter(|e| pos.contains_key(&e.a.col) && pos.contains_key(&e.b.col))
            .map(|e| RowEdge {
                a: Node::new(e.a.row, pos[&e.a.col]),
                b: Node::new(e.b.row, pos[&e.b.col]),
                ..*e
            })
            .collect();
        RowGraph::new(self.rows, cols.len(), edges).expect("restriction stays valid")
    }

    /// Unordered edge list `(min node, max node, origin)` as a sorted multiset;
    /// two row graphs are identical iff these agree.
    pub fn edge_multiset(&self) -> Vec<(Node, Node, Option<EdgeId>)> {
        let mut out: Vec<_> = self
            .edges
            .iter()
            .map(|e| (e.a.min(e.b), e.a.max(e.b), e.origin))
            .collect();
        out.sort();
        out
    }

    pub fn to_json(&self) -> RowGraphJson {
        RowGraphJson {
            s: self.s,
            rows: self.rows,
            edges: self
                .edges
                .iter()
                .map(|e| {
                    let mut t = vec![e.a.row + 1, e.a.col + 1, e.b.row + 1, e.b.col + 1];
                    t.extend(e.origin);
                    t
                })
                .collect(),
        }
    }
}

fn default_rows() -> usize {
    3
}

/// `{s, edges:[[i1,j1,i2,j2,origin?],...]}`, 1-based rows and columns.
/// Edge ids are the origins when every edge has one, positions otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowGraphJson {
    pub s: usize,
    #[serde(default = "default_rows")]
    pub rows: usize,
    pub edges: Vec<Vec<usize>>,
}

impl RowGraphJson {
    pub fn into_row_graph(&self) -> Result<RowGraph> {
        let all_origins = self.edges.iter().all(|t| t.len() == 5);
        let mut edges = Vec::with_capacity(self.edges.len());
        for (k, t) in self.edges.iter().enumerate() {
            if !(t.len() == 4 || t.len() == 5) || t[..4].contains(&0) {
                return Err(Error::Parse(format!("row-graph edge {k} must be [i1,j1,i2,j2,origin?] with 1-based entries")));
            }
            let origin = t.get(4).copied();
            edges.push(RowEdge {
                id: if all_origins { t[4] } else { k },
                a: Node::new(t[0] - 1, t[1] - 1),
                b: Node::new(t[2] - 1, t[3] - 1),
                origin,
            });
        }
        RowGraph::new(self.rows, self.s, edges)
    }
}

/// `R(G,F,alpha)`: column `j` is frame component `j`, row `i` collects the
/// 2-valent vertices of alpha-color `i + 1`. Edges are the non-frame,
/// non-chord host edges, keyed by host edge id.
pub fn build_row_graph(f: &Frame, alpha: &PerfectColoring) -> Result<RowGraph> {
    if !is_perfect_coloring(f, alpha) {
        return Err(Error::NotPerfect("row graph needs a perfect coloring".into()));
    }
    let node_of = |x: VertexId| -> Node {
        let c = alpha.vertex[&x];
        Node::new(c as usize - 1, f.component_of(x))
    };
    let edges = f
        .crossing_edges()
        .map(|e| RowEdge {
            id: e.id,
            a: node_of(e.a),
            b: node_of(e.b),
            origin: Some(e.id),
        })
        .collect();
    let r = RowGraph::new(3, f.len(), edges)?;
    Ok(r)
}

/// `node (i, j) -> (row_perms[j][i], col_perm[j])`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rearrangement {
    pub col_perm: Vec<usize>,
    pub row_perms: Vec<Vec<usize>>,
}

fn check_perm(p: &[usize], n: usize, what: &str) -> Result<()> {
    let mut seen = vec![false; n];
    if p.len() != n {
        return Err(Error::MalformedPermutation(format!("{what} has length {} instead of {n}", p.len())));
    }
    for &x in p {
        if x >= n || std::mem::replace(&mut seen[x], true) {
            return Err(Error::MalformedPermutation(format!("{what} = {p:?}")));
        }
    }
    Ok(())
}

fn invert(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        inv[x] = i;
    }
    inv
}

impl Rearrangement {
    pub fn identity(rows: usize, s: usize) -> Self {
        Rearrangement {
            col_perm: (0..s).collect(),
            row_perms: vec![(0..rows).collect(); s],
        }
    }

    /// The same row permutation in every column.
    pub fn global_rows(row_perm: Vec<usize>, s: usize) -> Self {
        Rearrangement {
            col_perm: (0..s).collect(),
            row_perms: vec![row_perm; s],
        }
    }

    pub fn validate(&self, rows: usize, s: usize) -> Result<()> {
        check_perm(&self.col_perm, s, "column permutation")?;
        if self.row_perms.len() != s {
            return Err(Error::MalformedPermutation(format!("{} row permutations for {s} columns", self.row_perms.len())));
        }
        for (j, p) in self.row_perms.iter().enumerate() {
            check_perm(p, rows, &format!("row permutation of column {j}"))?;
        }
        Ok(())
    }

    pub fn map(&self, n: Node) -> Node {
        Node::new(self.row_perms[n.col][n.row], self.col_perm[n.col])
    }

    pub fn inverse(&self) -> Rearrangement {
        let col_inv = invert(&self.col_perm);
        let mut row_perms = vec![Vec::new(); self.col_perm.len()];
        for (j, p) in self.row_perms.iter().enumerate() {
            row_perms[self.col_perm[j]] = invert(p);
        }
        Rearrangement {
            col_perm: col_inv,
            row_perms,
        }
    }

    /// First `self`, then `next`.
    pub fn then(&self, next: &Rearrangement) -> Rearrangement {
        let col_perm = self.col_perm.iter().map(|&c| next.col_perm[c]).collect();
        let row_perms = self
            .row_perms
            .iter()
            .enumerate()
            .map(|(j, p)| p.iter().map(|&i| next.row_perms[self.col_perm[j]][i]).collect())
            .collect();
        Rearrangement { col_perm, row_perms }
    }

    pub fn is_identity(&self) -> bool {
        self.col_perm.iter().enumerate().all(|(j, &c)| j == c)
            && self.row_perms.iter().all(|p| p.iter().enumerate().all(|(i, &x)| i == x))
    }
}

pub fn rearrange(r: &RowGraph, rr: &Rearrangement) -> Result<RowGraph> {
    rr.validate(r.rows, r.s)?;
    let edges = r
        .edges
        .iter()
        .map(|e| RowEdge {
            a: rr.map(e.a),
            b: rr.map(e.b),
            ..*e
        })
        .collect();
    RowGraph::new(r.rows, r.s, edges)
}

/// Realizes a rearrangement on the frame side: a relabeled frame and recolored alpha whose
/// row graph is identical to `rearrange(build_row_graph(f, alpha), rr)`.
pub fn realize_rearrangement(f: &Frame, alpha: &PerfectColoring, rr: &Rearrangement) -> Result<(Frame, PerfectColoring)> {
    rr.validate(3, f.len())?;
    let mut order = vec![0; f.len()];
    for (j, &c) in rr.col_perm.iter().enumerate() {
        order[c] = j;
    }
    let relabeled = f.relabeled(&order)?;
    let mut out = PerfectColoring::default();
    for (j, comp) in f.components().iter().enumerate() {
        let p = &rr.row_perms[j];
        let perm: [Color; 3] = [p[0] as Color + 1, p[1] as Color + 1, p[2] as Color + 1];
        let mut part = PerfectColoring::default();
        for &v in &comp.vertices {
            if let Some(&c) = alpha.vertex.get(&v) {
                part.vertex.insert(v, c);
            }
        }
        for &e in &comp.edges {
            if let Some(&c) = alpha.edge.get(&e) {
                part.edge.insert(e, c);
            }
        }
        out.merge(&part.permuted(perm));
    }
    Ok((relabeled, out))
}

/// `f` as `f[col][row]`, `g` by edge id.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmiableColoring {
    pub f: Vec<Vec<Color>>,
    pub g: BTreeMap<EdgeId, Color>,
}

impl AmiableColoring {
    /// `f(v_ij) = i + 1` in every column, no edge colors yet.
    pub fn identity_f(s: usize) -> Self {
        AmiableColoring {
            f: vec![vec![1, 2, 3]; s],
            g: BTreeMap::new(),
        }
    }

    pub fn f_at(&self, n: Node) -> Color {
        self.f[n.col][n.row]
    }

    /// Coloring of `R` from a coloring of `rearrange(R, rr)`.
    pub fn pull_back(&self, rr: &Rearrangement) -> AmiableColoring {
        let s = rr.col_perm.len();
        let rows = rr.row_perms.first().map_or(3, Vec::len);
        let f = (0..s)
            .map(|j| (0..rows).map(|i| self.f_at(rr.map(Node::new(i, j)))).collect())
            .collect();
        AmiableColoring { f, g: self.g.clone() }
    }

    /// Coloring of `rearrange(R, rr)` from a coloring of `R`.
    pub fn push_forward(&self, rr: &Rearrangement) -> AmiableColoring {
        self.pull_back(&rr.inverse())
    }
}

/// Checks the three amiable conditions literally and names the first failure.
pub fn check_amiable(r: &RowGraph, a: &AmiableColoring) -> std::result::Result<(), String> {
    if r.rows != 3 {
        return Err(format!("amiable colorings need 3 rows, found {}", r.rows));
    }
    if a.f.len() != r.s || a.f.iter().any(|c| c.len() != 3) {
        return Err("vertex coloring has the wrong shape".into());
    }
    for (j, col) in a.f.iter().enumerate() {
        let mut sorted = col.clone();
        sorted.sort_unstable();
        if sorted != [1, 2, 3] {
            return Err(format!("column {} has vertex colors {col:?}", j + 1));
        }
    }
    let mut parity = vec![[0u8; 3]; r.s];
    for e in &r.edges {
        let Some(&c) = a.g.get(&e.id) else {
            return Err(format!("edge {} has no color", e.id));
        };
        if !(1..=3).contains(&c) {
            return Err(format!("edge {} has color {c}", e.id));
        }
        for n in [e.a, e.b] {
            if a.f_at(n) == c {
                return Err(format!("edge {} and its end ({}, {}) share color {c}", e.id, n.row + 1, n.col + 1));
            }
            parity[n.col][c as usize - 1] ^= 1;
        }
    }
    for (j, p) in parity.iter().enumerate() {
        if let Some(c) = p.iter().position(|&x| x == 1) {
            return Err(format!("column {} has odd color-{} degree sum", j + 1, c + 1));
        }
    }
    Ok(())
}

pub fn is_amiable(r: &RowGraph, a: &AmiableColoring) -> bool {
    check_amiable(r, a).is_ok()
}

/// Size bounds for exhaustive searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleGuard {
    pub max_edges: usize,
    pub max_columns: usize,
}

impl Default for OracleGuard {
    fn default() -> Self {
        OracleGuard {
            max_edges: 24,
            max_columns: 6,
        }
    }
}

impl OracleGuard {
    pub fn unlimited() -> Self {
        OracleGuard {
            max_edges: usize::MAX,
            max_columns: usize::MAX,
        }
    }

    pub fn check(&self, r: &RowGraph) -> Result<()> {
        if r.edges.len() > self.max_edges || r.s > self.max_columns {
            return Err(Error::OracleLimit(format!(
                "{} edges / {} columns exceeds {} / {}",
                r.edges.len(),
                r.s,
                self.max_edges,
                self.max_columns
            )));
        }
        Ok(())
    }
}

/// Edge coloring completing a fixed vertex coloring `f`, if one exists.
/// Each edge has at most two admissible colors; columns are checked for
/// parity as soon as their last edge is colored.
pub fn amiable_extension(r: &RowGraph, f: &[Vec<Color>]) -> Option<BTreeMap<EdgeId, Color>> {
    let m = r.edges.len();
    let mut last = vec![None; r.s];
    for (k, e) in r.edges.iter().enumerate() {
        last[e.a.col] = Some(k);
        last[e.b.col] = Some(k);
    }
    let mut closing: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (j, l) in last.iter().enumerate() {
        if let Some(k) = l {
            closing[*k].push(j);
        }
    }
    let choices: Vec<Vec<Color>> = r
        .edges
        .iter()
        .map(|e| {
            let (x, y) = (f[e.a.col][e.a.row], f[e.b.col][e.b.row]);
            (1..=3).filter(|&c| c != x && c != y).collect()
        })
        .collect();
    let mut parity = vec![[0u8; 3]; r.s];
    let mut g = vec![0 as Color; m];

    fn rec(
        k: usize,
        r: &RowGraph,
        choices: &[Vec<Color>],
        closing: &[Vec<usize>],
        parity: &mut [[u8; 3]],
        g: &mut [Color],
    ) -> bool {
        if k == g.len() {
            return true;
        }
        let e = r.edges[k];
        for &c in &choices[k] {
            let ci = c as usize - 1;
            parity[e.a.col][ci] ^= 1;
            parity[e.b.col][ci] ^= 1;
            if closing[k].iter().all(|&j| parity[j] == [0, 0, 0]) {
                g[k] = c;
                if rec(k + 1, r, choices, closing, parity, g) {
                    return true;
                }
            }
            parity[e.a.col][ci] ^= 1;
            parity[e.b.col][ci] ^= 1;
        }
        false
    }

    if rec(0, r, &choices, &closing, &mut parity, &mut g) {
        Some(r.edges.iter().zip(g).map(|(e, c)| (e.id, c)).collect())
    } else {
        None
    }
}

pub const ROW_PERMUTATIONS: [[Color; 3]; 6] = [[1, 2, 3], [1, 3, 2], [2, 1, 3], [2, 3, 1], [3, 1, 2], [3, 2, 1]];

/// Exhaustive search for an amiable coloring. Column 0 is fixed to
/// `f = (1, 2, 3)` (global color permutations preserve amiability); the
/// other columns range over all six orders.
pub fn brute_force_amiable(r: &RowGraph, guard: OracleGuard) -> Result<Option<AmiableColoring>> {
    if r.rows != 3 {
        return Err(Error::MalformedRowGraph("amiable colorings need 3 rows".into()));
    }
    guard.check(r)?;
    if r.s == 0 {
        return Ok(Some(AmiableColoring { f: Vec::new(), g: BTreeMap::new() }));
    }
    let mut idx = vec![0usize; r.s];
    loop {
        let f: Vec<Vec<Color>> = idx.iter().map(|&k| ROW_PERMUTATIONS[k].to_vec()).collect();
        if let Some(g) = amiable_extension(r, &f) {
            let a = AmiableColoring { f, g };
            debug_assert!(is_amiable(r, &a));
            return Ok(Some(a));
        }
        // odometer over columns 1..s
        let mut k = r.s;
        loop {
            k -= 1;
            if k == 0 {
                return Ok(None);
            }
            idx[k] += 1;
            if idx[k] < 6 {
                break;
            }
            idx[k] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::{validate_frame, PerfectColorings};
    use crate::named;

    fn cube_two_squares() -> (Multigraph, Frame) {
        let cube = named::cube();
        let edges = cube
            .edges()
            .iter()
            .filter(|e| (e.a ^ e.b) != 4)
            .map(|e| e.id)
            .collect();
        let f = validate_frame(&cube, &edges).unwrap();
        (cube, f)
    }

    fn mono(f: &Frame, colors: &[Color]) -> PerfectColoring {
        let mut alpha = PerfectColoring::default();
        for (c, &col) in f.components().iter().zip(colors) {
            alpha.vertex.extend(c.vertices.iter().map(|&v| (v, col)));
            alpha.edge.extend(c.edges.iter().map(|&e| (e, col)));
        }
        alpha
    }

    #[test]
    fn prism_single_column() {
        let p = named::prism();
        let f = validate_frame(&p, &[0, 1, 8, 4, 3, 6].into_iter().collect()).unwrap();
        let r = build_row_graph(&f, &mono(&f, &[1])).unwrap();
        assert_eq!((r.s(), r.edges().len()), (1, 0));
        assert_eq!(r.nodes().filter(|&n| r.is_isolated(n)).count(), 3);
    }

    #[test]
    fn theta_frame_row_graph_is_empty() {
        let t = named::theta();
        let f = validate_frame(&t, &t.edge_ids().collect()).unwrap();
        let alpha = PerfectColorings::new(&f, false).unwrap().next().unwrap();
        let r = build_row_graph(&f, &alpha).unwrap();
        assert_eq!((r.s(), r.edges().len()), (1, 0));
    }

    #[test]
    fn cube_row_graph_and_contraction() {
        let (_, f) = cube_two_squares();
        let r = build_row_graph(&f, &mono(&f, &[1, 2])).unwrap();
        assert_eq!(r.edges().len(), 4);
        for e in r.edges() {
            let (x, y) = (e.a.min(e.b), e.a.max(e.b));
            assert_eq!((x, y), (Node::new(0, 0), Node::new(1, 1)));
            assert_eq!(e.origin, Some(e.id));
        }
        let rc = r.column_contraction();
        assert_eq!((rc.vertex_count(), rc.edge_count()), (2, 4));
        assert!(r.is_rc_eulerian());
        assert_eq!(RowGraph::from_tuples(3, 3, &[]).unwrap().column_contraction().edge_count(), 0);
    }

    #[test]
    fn in_column_edges_rejected() {
        assert!(RowGraph::from_tuples(3, 2, &[(0, 0, 1, 0)]).is_err());
        assert!(RowGraph::from_tuples(3, 2, &[(0, 0, 3, 1)]).is_err());
    }

    #[test]
    fn rearrangement_algebra() {
        let r = RowGraph::from_tuples(3, 3, &[(0, 0, 1, 1), (2, 1, 0, 2), (1, 0, 1, 2)]).unwrap();
        let id = Rearrangement::identity(3, 3);
        assert_eq!(rearrange(&r, &id).unwrap(), r);
        let swap = Rearrangement {
            col_perm: vec![1, 0, 2],
            row_perms: vec![vec![0, 1, 2]; 3],
        };
        let twice = rearrange(&rearrange(&r, &swap).unwrap(), &swap).unwrap();
        assert_eq!(twice, r);
        let rr = Rearrangement {
            col_perm: vec![2, 0, 1],
            row_perms: vec![vec![1, 2, 0], vec![0, 2, 1], vec![2, 1, 0]],
        };
        let back = rearrange(&rearrange(&r, &rr).unwrap(), &rr.inverse()).unwrap();
        assert_eq!(back, r);
        let composed = rearrange(&r, &rr.then(&swap)).unwrap();
        assert_eq!(composed, rearrange(&rearrange(&r, &rr).unwrap(), &swap).unwrap());
        assert!(rearrange(&r, &Rearrangement { col_perm: vec![0, 0, 1], row_perms: vec![vec![0, 1, 2]; 3] }).is_err());
    }

    #[test]
    fn amiable_examples() {
        let single = RowGraph::from_tuples(3, 1, &[]).unwrap();
        assert!(brute_force_amiable(&single, OracleGuard::default()).unwrap().is_some());
        let one_edge = RowGraph::from_tuples(3, 2, &[(0, 0, 0, 1)]).unwrap();
        assert!(brute_force_amiable(&one_edge, OracleGuard::default()).unwrap().is_none());
        let two = RowGraph::from_tuples(3, 2, &[(0, 0, 0, 1), (1, 0, 1, 1)]).unwrap();
        let a = brute_force_amiable(&two, OracleGuard::default()).unwrap().unwrap();
        assert!(is_amiable(&two, &a));
        assert_eq!(a.g.values().collect::<Vec<_>>(), vec![&3, &3]);
        let fixed = amiable_extension(&two, &[vec![1, 2, 3], vec![1, 2, 3]]).unwrap();
        assert_eq!(fixed.values().copied().collect::<Vec<_>>(), vec![3, 3]);
    }

    #[test]
    fn check_amiable_reports_each_condition() {
        let two = RowGraph::from_tuples(3, 2, &[(0, 0, 0, 1), (1, 0, 1, 1)]).unwrap();
        let good = AmiableColoring {
            f: vec![vec![1, 2, 3]; 2],
            g: [(0, 3), (1, 3)].into_iter().collect(),
        };
        assert!(check_amiable(&two, &good).is_ok());
        let mut bad = good.clone();
        bad.f[0] = vec![1, 1, 3];
        assert!(check_amiable(&two, &bad).unwrap_err().contains("vertex colors"));
        let mut bad = good.clone();
        bad.g.insert(0, 1);
        assert!(check_amiable(&two, &bad).unwrap_err().contains("share color"));
        let three = RowGraph::from_tuples(3, 2, &[(0, 0, 0, 1), (1, 0, 1, 1)]).unwrap();
        let mut odd = good.clone();
        odd.g.insert(1, 1);
        assert!(check_amiable(&three, &odd).unwrap_err().contains("odd"));
    }

    #[test]
    fn oracle_guard() {
        let big = RowGraph::from_tuples(3, 7, &[]).unwrap();
        assert!(brute_force_amiable(&big, OracleGuard::default()).is_err());
        assert!(brute_force_amiable(&big, OracleGuard::unlimited()).unwrap().is_some());
    }

    #[test]
    fn colorings_follow_rearrangements() {
        let r = RowGraph::from_tuples(3, 3, &[(0, 0, 1, 1), (1, 1, 2, 2), (2, 2, 0, 0), (0, 0, 0, 1)]).unwrap();
        let rr = Rearrangement {
            col_perm: vec![1, 2, 0],
            row_perms: vec![vec![2, 0, 1], vec![1, 0, 2], vec![0, 2, 1]],
        };
        let r2 = rearrange(&r, &rr).unwrap();
        if let Some(a) = brute_force_amiable(&r, OracleGuard::default()).unwrap() {
            assert!(is_amiable(&r2, &a.push_forward(&rr)));
        }
        if let Some(b) = brute_force_amiable(&r2, OracleGuard::default()).unwrap() {
            assert!(is_amiable(&r, &b.pull_back(&rr)));
        }
    }

    #[test]
    fn realized_rearrangement_on_cube() {
        let (_, f) = cube_two_squares();
        let alpha = mono(&f, &[1, 2]);
        let r = build_row_graph(&f, &alpha).unwrap();
        let rr = Rearrangement {
            col_perm: vec![1, 0],
            row_perms: vec![vec![2, 0, 1], vec![1, 2, 0]],
        };
        let (f1, a1) = realize_rearrangement(&f, &alpha, &rr).unwrap();
        let r1 = build_row_graph(&f1, &a1).unwrap();
        assert_eq!(r1.edge_multiset(), rearrange(&r, &rr).unwrap().edge_multiset());
    }

    #[test]
    fn json_roundtrip() {
        let (_, f) = cube_two_squares();
        let r = build_row_graph(&f, &mono(&f, &[1, 2])).unwrap();
        let text = serde_json::to_string(&r.to_json()).unwrap();
        let back: RowGraphJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.into_row_graph().unwrap(), r);
        let synthetic: RowGraphJson = serde_json::from_str(r#"{"s":2,"edges":[[1,1,1,2],[2,1,2,2]]}"#).unwrap();
        let r2 = synthetic.into_row_graph().unwrap();
        assert_eq!(r2.edges()[1].a, Node::new(1, 0));
        assert!(serde_json::from_str::<RowGraphJson>(r#"{"s":2,"edges":[[0,1,1,2]]}"#)
            .unwrap()
            .into_row_graph()
            .is_err());
    }
}
