//! Constructive amiable colorings and their parity-coloring reformulations.
//!
//! All constructors share one engine. It expects a row graph whose first row
//! has at most one component with more than one vertex and in which every
//! column outside that component has a zero-degree vertex in the first row
//! and at most one vertex of nonzero degree. It then
//!
//! 1. joins the odd vertices of rows 2/3 (identified per column) by an
//!    acyclic t-join `T*23` and straightens it into the rows by swapping
//!    rows 2 and 3 in some columns,
//! 2. sets `f = (2, 3, 1)` down every column and `g = 2` on the remaining
//!    rows-2/3 edges,
//! 3. repairs the first row's parity with a second t-join `T*1` and colors
//!    the rest 1 or 3.
//!
//! Rows are 0-based in code; trace fields use the 1-based names.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::{well_connected_witness, ComponentKind, Frame, Witness};
use crate::graph::{components, is_acyclic, EdgeId, Multigraph, VertexId};
use crate::kotzig::{Color, PerfectColoring};
use crate::parity::{acyclic_t_join, odd_vertices, resolve_two_row};
use crate::rowgraph::{check_amiable, rearrange, AmiableColoring, Node, Rearrangement, RowEdge, RowGraph};

const ENGINE_F: [Color; 3] = [2, 3, 1];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TraceKind {
    /// At most one column: any distinct vertex colors, no edges.
    Trivial,
    Engine,
    /// Disconnected special columns solved as independent pieces.
    Split,
}

/// Everything needed to replay a construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionTrace {
    pub kind: TraceKind,
    /// Columns of the parent row graph this trace covers (all when empty).
    #[serde(default)]
    pub columns: Vec<usize>,
    pub notes: Vec<String>,
    /// Applied to the input before the engine runs.
    pub rearrangement: Rearrangement,
    /// Columns whose rows 2 and 3 were swapped to straighten `T*23`.
    pub swapped_columns: Vec<usize>,
    pub y23: Vec<usize>,
    pub t23: Vec<EdgeId>,
    pub t2: Vec<EdgeId>,
    pub t3: Vec<EdgeId>,
    /// Columns whose first-row vertex is a terminal of `T*1`.
    pub y1: Vec<usize>,
    pub t1: Vec<EdgeId>,
    #[serde(default)]
    pub pieces: Vec<ConstructionTrace>,
}

impl ConstructionTrace {
    fn trivial(r: &RowGraph, note: &str) -> Self {
        ConstructionTrace {
            kind: TraceKind::Trivial,
            columns: Vec::new(),
            notes: vec![note.to_string()],
            rearrangement: Rearrangement::identity(r.rows(), r.s()),
            swapped_columns: Vec::new(),
            y23: Vec::new(),
            t23: Vec::new(),
            t2: Vec::new(),
            t3: Vec::new(),
            y1: Vec::new(),
            t1: Vec::new(),
            pieces: Vec::new(),
        }
    }
}

fn invariant(stage: &'static str, detail: impl Into<String>) -> Error {
    Error::ConstructionInvariant {
        stage,
        detail: detail.into(),
    }
}

fn require_three_rows(r: &RowGraph) -> Result<()> {
    if r.rows() != 3 {
        return Err(Error::MalformedRowGraph(format!("expected 3 rows, found {}", r.rows())));
    }
    Ok(())
}

fn require_eulerian(r: &RowGraph) -> Result<()> {
    if !r.is_rc_eulerian() {
        return Err(Error::NotEulerian);
    }
    Ok(())
}

fn both_in_rows(e: &RowEdge, rows: &[usize]) -> bool {
    rows.contains(&e.a.row) && rows.contains(&e.b.row)
}

/// Runs the engine on `rp` (already rearranged). Returns the coloring of `rp`
/// and fills the engine fields of `trace`.
fn engine(rp: &RowGraph, trace: &mut ConstructionTrace) -> Result<AmiableColoring> {
    let s = rp.s();
    // rows 2/3 with the two vertices of each column identified
    let r23: Vec<&RowEdge> = rp.edges().iter().filter(|e| both_in_rows(e, &[1, 2])).collect();
    let star23 = Multigraph::new(
        0..s,
        r23.iter().map(|e| crate::graph::Edge::new(e.id, e.a.col, e.b.col)),
    )?;
    let all23: BTreeSet<EdgeId> = star23.edge_ids().collect();
    let y23 = odd_vertices(&star23, &all23);
    let t23 = acyclic_t_join(&star23, &y23).map_err(|e| invariant("T*23", e.to_string()))?;
    if !is_acyclic(&star23, &t23) {
        return Err(invariant("T*23", "join is not acyclic"));
    }

    // straighten T*23 into rows 2 and 3
    let two_row = RowGraph::new(
        2,
        s,
        r23.iter()
            .filter(|e| t23.contains(&e.id))
            .map(|e| RowEdge {
                a: Node::new(e.a.row - 1, e.a.col),
                b: Node::new(e.b.row - 1, e.b.col),
                ..**e
            })
            .collect(),
    )?;
    let u = resolve_two_row(&two_row)?;
    let mut swap = Rearrangement::identity(3, s);
    for &j in &u {
        swap.row_perms[j] = vec![0, 2, 1];
    }
    let rs = rearrange(rp, &swap)?;

    let mut t2 = BTreeSet::new();
    let mut t3 = BTreeSet::new();
    for &id in &t23 {
        let e = rs.edge(id).expect("join edge");
        match (e.a.row, e.b.row) {
            (1, 1) => t2.insert(id),
            (2, 2) => t3.insert(id),
            _ => return Err(invariant("T*23 straightening", format!("edge {id} still crosses rows 2/3"))),
        };
    }

    let mut g: BTreeMap<EdgeId, Color> = BTreeMap::new();
    for e in rs.edges().iter().filter(|e| both_in_rows(e, &[1, 2])) {
        if !t23.contains(&e.id) {
            g.insert(e.id, 2);
        }
    }

    // R*12 = first-row edges, rows-1/2 edges, and T*2
    let star12: Vec<&RowEdge> = rs
        .edges()
        .iter()
        .filter(|e| {
            (e.a.row == 0 || e.b.row == 0) && both_in_rows(e, &[0, 1]) || t2.contains(&e.id)
        })
        .collect();
    let mut deg = vec![[0usize; 2]; s];
    for e in &star12 {
        for n in [e.a, e.b] {
            deg[n.col][n.row] += 1;
        }
    }
    let y1: BTreeSet<usize> = (0..s).filter(|&j| (deg[j][0] + deg[j][1]) % 2 == 1).collect();

    let row1 = rs.induced_rows(&[0]);
    let terminals: BTreeSet<VertexId> = y1.iter().map(|&j| rs.index(Node::new(0, j))).collect();
    for comp in components(&row1) {
        let inside = comp.iter().filter(|v| terminals.contains(v)).count();
        if inside % 2 == 1 {
            return Err(invariant(
                "Y1",
                format!(
                    "component of the first row containing column {} holds {inside} terminals; \
                     the hypothesis on the first row does not hold",
                    rs.node(comp[0]).col + 1
                ),
            ));
        }
    }
    let t1 = acyclic_t_join(&row1, &terminals).map_err(|e| invariant("T*1", e.to_string()))?;
    for e in &star12 {
        if !t1.contains(&e.id) {
            g.insert(e.id, 1);
        }
    }
    for e in rs.edges() {
        g.entry(e.id).or_insert(3);
    }
    let a = AmiableColoring {
        f: vec![ENGINE_F.to_vec(); s],
        g,
    };
    check_amiable(&rs, &a).map_err(|d| invariant("final check", d))?;

    trace.kind = TraceKind::Engine;
    trace.swapped_columns = u.into_iter().collect();
    trace.y23 = y23.into_iter().collect();
    trace.t23 = t23.into_iter().collect();
    trace.t2 = t2.into_iter().collect();
    trace.t3 = t3.into_iter().collect();
    trace.y1 = y1.into_iter().collect();
    trace.t1 = t1.into_iter().collect();
    Ok(a.pull_back(&swap))
}

/// Recomputes the coloring from a trace without re-deriving any set.
pub fn replay(r: &RowGraph, trace: &ConstructionTrace) -> Result<AmiableColoring> {
    match trace.kind {
        TraceKind::Trivial => Ok(AmiableColoring {
            f: vec![vec![1, 2, 3]; r.s()],
            g: r.edges().iter().map(|e| (e.id, 1)).collect(),
        }),
        TraceKind::Split => {
            let mut out = AmiableColoring {
                f: vec![Vec::new(); r.s()],
                g: BTreeMap::new(),
            };
            for piece in &trace.pieces {
                let sub = r.restrict_columns(&piece.columns);
                let a = replay(&sub, piece)?;
                for (k, &j) in piece.columns.iter().enumerate() {
                    out.f[j] = a.f[k].clone();
                }
                out.g.extend(a.g);
            }
            Ok(out)
        }
        TraceKind::Engine => {
            let rp = rearrange(r, &trace.rearrangement)?;
            let mut swap = Rearrangement::identity(3, r.s());
            for &j in &trace.swapped_columns {
                swap.row_perms[j] = vec![0, 2, 1];
            }
            let rs = rearrange(&rp, &swap)?;
            let t23: BTreeSet<EdgeId> = trace.t23.iter().copied().collect();
            let t2: BTreeSet<EdgeId> = trace.t2.iter().copied().collect();
            let t1: BTreeSet<EdgeId> = trace.t1.iter().copied().collect();
            let g = rs
                .edges()
                .iter()
                .map(|e| {
                    let c = if both_in_rows(e, &[1, 2]) && !t23.contains(&e.id) {
                        2
                    } else if ((e.a.row == 0 || e.b.row == 0) && both_in_rows(e, &[0, 1]) || t2.contains(&e.id))
                        && !t1.contains(&e.id)
                    {
                        1
                    } else {
                        3
                    };
                    (e.id, c)
                })
                .collect();
            let a = AmiableColoring {
                f: vec![ENGINE_F.to_vec(); r.s()],
                g,
            };
            Ok(a.pull_back(&swap).pull_back(&trace.rearrangement))
        }
    }
}

#[derive(Clone, Debug)]
pub struct Construction {
    /// Amiable coloring of the input row graph.
    pub coloring: AmiableColoring,
    pub trace: ConstructionTrace,
}

/// The main construction. `r` must be `R(G,F,alpha)` for a normalized
/// coloring (see [`normalize_for_construction`]): the first `k` columns are
/// the K-components, the witness has color 1, and every column outside the
/// witness has an isolated first-row vertex.
pub fn construct_amiable_main(r: &RowGraph, witness: &Witness, k: usize) -> Result<Construction> {
    require_three_rows(r)?;
    require_eulerian(r)?;
    if witness.color != 1 {
        return Err(Error::InvalidWitness(format!("witness has color {}, expected 1", witness.color)));
    }
    if let Some(j) = (0..k).find(|j| !witness.vertices.contains(j)) {
        return Err(Error::InvalidWitness(format!("K-column {} is not in the witness", j + 1)));
    }
    if let Some(&j) = witness.vertices.iter().find(|&&j| j >= r.s()) {
        return Err(Error::InvalidWitness(format!("witness column {} out of range", j + 1)));
    }
    // the witness columns must form one component of the first row
    let row1 = r.induced_rows(&[0]);
    let comps = components(&row1);
    let comp_of = |j: usize| comps.iter().position(|c| c.contains(&r.index(Node::new(0, j))));
    if let Some(&first) = witness.vertices.iter().next() {
        let c = comp_of(first);
        if witness.vertices.iter().any(|&j| comp_of(j) != c) {
            return Err(Error::InvalidWitness("witness columns are not connected in the first row".into()));
        }
    }
    for j in (0..r.s()).filter(|j| !witness.vertices.contains(j)) {
        if !r.is_isolated(Node::new(0, j)) {
            return Err(Error::Hypothesis(format!(
                "column {} lies outside the witness but its first-row vertex has edges",
                j + 1
            )));
        }
    }
    if r.s() <= 1 {
        let trace = ConstructionTrace::trivial(r, "one column: trivial coloring");
        return Ok(Construction {
            coloring: replay(r, &trace)?,
            trace,
        });
    }
    let mut trace = ConstructionTrace::trivial(r, "main construction");
    trace.notes.push("vertex colors f = (2, 3, 1) down every column".into());
    let coloring = engine(r, &mut trace)?;
    Ok(Construction { coloring, trace })
}

/// Puts `alpha` into the form the main construction expects: the witness
/// color becomes 1 by a global color swap, and every C-component of color 1
/// outside the witness is recolored 2. Returns the new coloring and witness.
pub fn normalize_for_construction(f: &Frame, alpha: &PerfectColoring, w: &Witness) -> Result<(PerfectColoring, Witness, Vec<String>)> {
    let mut notes = Vec::new();
    let mut perm: [Color; 3] = [1, 2, 3];
    if w.color != 1 {
        perm[0] = w.color;
        perm[w.color as usize - 1] = 1;
        notes.push(format!("swapped colors 1 and {} globally", w.color));
    }
    let mut out = alpha.permuted(perm);
    let nw = well_connected_witness(f, &out)
        .filter(|x| x.color == 1)
        .ok_or_else(|| Error::InvalidWitness("witness lost after the color swap".into()))?;
    for (j, comp) in f.components().iter().enumerate() {
        if comp.kind != ComponentKind::C || nw.vertices.contains(&j) {
            continue;
        }
        if out.vertex.get(&comp.vertices[0]) == Some(&1) {
            for &v in &comp.vertices {
                out.vertex.insert(v, 2);
            }
            for &e in &comp.edges {
                out.edge.insert(e, 2);
            }
            notes.push(format!("recolored C-component {} from 1 to 2", j + 1));
        }
    }
    let final_w = well_connected_witness(f, &out)
        .filter(|x| x.color == 1 && x.vertices == nw.vertices)
        .ok_or_else(|| invariant("normalization", "recoloring changed the witness"))?;
    Ok((out, final_w, notes))
}

fn first_row_hypothesis(r: &RowGraph) -> std::result::Result<(), String> {
    let row1 = r.induced_rows(&[0]);
    let big = components(&row1).into_iter().filter(|c| c.len() > 1).count();
    if big > 1 {
        return Err(format!("the first row has {big} components with more than one vertex"));
    }
    for j in 0..r.s() {
        let v = r.index(Node::new(0, j));
        if row1.degree(v) == 0 {
            let busy = (0..3).filter(|&i| !r.is_isolated(Node::new(i, j))).count();
            if busy > 1 {
                return Err(format!(
                    "column {} has an isolated first-row vertex and {busy} vertices of nonzero degree",
                    j + 1
                ));
            }
        }
    }
    Ok(())
}

/// In every column whose first-row vertex is isolated within the first row
/// but has edges elsewhere, move a zero-degree vertex into the first row.
fn park_isolated(r: &RowGraph) -> Rearrangement {
    let row1 = r.induced_rows(&[0]);
    let mut rr = Rearrangement::identity(3, r.s());
    for j in 0..r.s() {
        let v = Node::new(0, j);
        if row1.degree(r.index(v)) == 0 && !r.is_isolated(v) {
            if let Some(z) = (1..3).find(|&i| r.is_isolated(Node::new(i, j))) {
                let mut p = vec![0, 1, 2];
                p.swap(0, z);
                rr.row_perms[j] = p;
            }
        }
    }
    rr
}

fn engine_on_first_row(r: &RowGraph, pre: Rearrangement, mut notes: Vec<String>) -> Result<Construction> {
    let r1 = rearrange(r, &pre)?;
    first_row_hypothesis(&r1).map_err(Error::Hypothesis)?;
    let park = park_isolated(&r1);
    let full = pre.then(&park);
    let rp = rearrange(r, &full)?;
    let mut trace = ConstructionTrace::trivial(r, "");
    trace.notes.clear();
    if !park.is_identity() {
        notes.push("moved zero-degree vertices into the first row of isolated columns".into());
    }
    trace.notes = notes;
    trace.rearrangement = full.clone();
    if r.s() <= 1 {
        trace.kind = TraceKind::Trivial;
        return Ok(Construction {
            coloring: replay(r, &trace)?,
            trace,
        });
    }
    let a = engine(&rp, &mut trace)?;
    Ok(Construction {
        coloring: a.pull_back(&full),
        trace,
    })
}

/// Row `i` (0-based) has at most one component with more than one vertex,
/// and every column with an isolated row-`i` vertex (within row `i`) has at
/// most one vertex of nonzero degree.
pub fn construct_amiable_sparse_row(r: &RowGraph, i: usize) -> Result<Construction> {
    require_three_rows(r)?;
    require_eulerian(r)?;
    if i > 2 {
        return Err(Error::Hypothesis(format!("row {i} does not exist")));
    }
    let mut p = vec![0, 1, 2];
    p.swap(0, i);
    let notes = vec![format!("row {} moved to the first row", i + 1)];
    engine_on_first_row(r, Rearrangement::global_rows(p, r.s()), notes)
}

/// Some row induces a connected subgraph.
pub fn construct_amiable_connected_row(r: &RowGraph) -> Result<Construction> {
    require_three_rows(r)?;
    require_eulerian(r)?;
    let i = (0..3)
        .find(|&i| components(&r.induced_rows(&[i])).len() <= 1)
        .ok_or_else(|| Error::Hypothesis("no row induces a connected subgraph".into()))?;
    construct_amiable_sparse_row(r, i)
}

fn has_two_isolated(r: &RowGraph, j: usize) -> bool {
    (0..3).filter(|&i| r.is_isolated(Node::new(i, j))).count() >= 2
}

/// Shortest path (as nodes) from any vertex of column `p` to any vertex of
/// column `q`, breadth first with edges scanned in id order.
fn shortest_column_path(r: &RowGraph, p: usize, q: usize) -> Option<Vec<Node>> {
    let mut prev: BTreeMap<Node, Option<Node>> = BTreeMap::new();
    let mut queue = VecDeque::new();
    for i in 0..3 {
        let n = Node::new(i, p);
        prev.insert(n, None);
        queue.push_back(n);
    }
    let mut adj: BTreeMap<Node, Vec<Node>> = BTreeMap::new();
    for e in r.edges() {
        adj.entry(e.a).or_default().push(e.b);
        adj.entry(e.b).or_default().push(e.a);
    }
    while let Some(n) = queue.pop_front() {
        if n.col == q {
            let mut path = vec![n];
            let mut cur = n;
            while let Some(Some(x)) = prev.get(&cur) {
                path.push(*x);
                cur = *x;
            }
            path.reverse();
            return Some(path);
        }
        for &w in adj.get(&n).into_iter().flatten() {
            if let std::collections::btree_map::Entry::Vacant(slot) = prev.entry(w) {
                slot.insert(Some(n));
                queue.push_back(w);
            }
        }
    }
    None
}

/// Every column other than `p` and `q` has two isolated vertices.
pub fn construct_amiable_two_columns(r: &RowGraph, p: usize, q: usize) -> Result<Construction> {
    require_three_rows(r)?;
    require_eulerian(r)?;
    if p >= r.s() || q >= r.s() {
        return Err(Error::Hypothesis(format!("special columns {} and {} out of range", p + 1, q + 1)));
    }
    if let Some(j) = (0..r.s()).find(|&j| j != p && j != q && !has_two_isolated(r, j)) {
        return Err(Error::Hypothesis(format!("column {} has fewer than two isolated vertices", j + 1)));
    }
    if r.s() <= 1 {
        let trace = ConstructionTrace::trivial(r, "one column: trivial coloring");
        return Ok(Construction {
            coloring: replay(r, &trace)?,
            trace,
        });
    }
    let q = if p == q { (0..r.s()).find(|&j| j != p).expect("s > 1") } else { q };
    match shortest_column_path(r, p, q) {
        Some(path) => {
            let mut rr = Rearrangement::identity(3, r.s());
            let on_path: BTreeMap<usize, usize> = path.iter().map(|n| (n.col, n.row)).collect();
            for j in 0..r.s() {
                let lead = match on_path.get(&j) {
                    Some(&i) => i,
                    None => (0..3).find(|&i| r.is_isolated(Node::new(i, j))).expect("two isolated vertices"),
                };
                let mut perm = vec![0, 1, 2];
                perm.swap(0, lead);
                rr.row_perms[j] = perm;
            }
            let notes = vec![format!(
                "shortest path between columns {} and {} of length {} moved into the first row",
                p + 1,
                q + 1,
                path.len() - 1
            )];
            engine_on_first_row(r, rr, notes)
        }
        None => {
            // columns reachable from column p versus the rest
            let mut reach: BTreeSet<usize> = BTreeSet::from([p]);
            let mut stack: Vec<Node> = (0..3).map(|i| Node::new(i, p)).collect();
            let mut seen: BTreeSet<Node> = stack.iter().copied().collect();
            while let Some(n) = stack.pop() {
                for e in r.incident(n) {
                    let w = e.other(n);
                    if seen.insert(w) {
                        reach.insert(w.col);
                        stack.push(w);
                    }
                }
            }
            let first: Vec<usize> = reach.iter().copied().collect();
            let second: Vec<usize> = (0..r.s()).filter(|j| !reach.contains(j)).collect();
            let mut trace = ConstructionTrace::trivial(r, "");
            trace.kind = TraceKind::Split;
            trace.notes = vec![format!("no path between columns {} and {}; solved as two pieces", p + 1, q + 1)];
            let mut coloring = AmiableColoring {
                f: vec![Vec::new(); r.s()],
                g: BTreeMap::new(),
            };
            for (cols, special) in [(first, p), (second, q)] {
                let sub = r.restrict_columns(&cols);
                let local = cols.iter().position(|&j| j == special).expect("special column in its piece");
                let part = construct_amiable_two_columns(&sub, local, local)?;
                for (k, &j) in cols.iter().enumerate() {
                    coloring.f[j] = part.coloring.f[k].clone();
                }
                coloring.g.extend(part.coloring.g);
                let mut pt = part.trace;
                pt.columns = cols;
                trace.pieces.push(pt);
            }
            check_amiable(r, &coloring).map_err(|d| invariant("split merge", d))?;
            Ok(Construction { coloring, trace })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ParityMode {
    Standard,
    Symmetric,
}

/// How `|N(v) ∩ V_i|` counts neighbors joined by parallel edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum NeighborCount {
    #[default]
    Multiplicity,
    Distinct,
}

/// Black/white vertex coloring, `black[col][row]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityColoring {
    pub mode: ParityMode,
    pub black: Vec<Vec<bool>>,
}

impl ParityColoring {
    pub fn is_black(&self, n: Node) -> bool {
        self.black[n.col][n.row]
    }
}

fn neighbors_in_row(r: &RowGraph, n: Node, row: usize, count: NeighborCount) -> usize {
    match count {
        NeighborCount::Multiplicity => r.degree_into(n, &[row]),
        NeighborCount::Distinct => r
            .incident(n)
            .map(|e| e.other(n))
            .filter(|w| w.row == row)
            .collect::<BTreeSet<Node>>()
            .len(),
    }
}

/// The per-column conditions. `want[j]` gives, for column `j`, whether
/// rows 1/2 and rows 2/3 must share a color.
fn column_rules(r: &RowGraph, mode: ParityMode, count: NeighborCount) -> Vec<(bool, bool)> {
    (0..r.s())
        .map(|j| {
            let v1 = Node::new(0, j);
            let v2 = Node::new(1, j);
            let v3 = Node::new(2, j);
            let first = (r.degree_into(v1, &[0, 1]) + neighbors_in_row(r, v2, 0, count)) % 2 == 0;
            let second = match mode {
                ParityMode::Standard => (r.degree_into(v2, &[1, 2]) + r.degree_into(v3, &[1, 2])) % 2 == 0,
                ParityMode::Symmetric => (r.degree_into(v2, &[1, 2]) + neighbors_in_row(r, v3, 1, count)) % 2 == 0,
            };
            (first, second)
        })
        .collect()
}

/// Components of each row, as node lists.
fn row_components(r: &RowGraph) -> Vec<Vec<Node>> {
    (0..3)
        .flat_map(|i| components(&r.induced_rows(&[i])))
        .map(|comp| comp.into_iter().map(|v| r.node(v)).collect())
        .collect()
}

fn rows_even(comps: &[Vec<Node>], black: &[Vec<bool>]) -> bool {
    comps
        .iter()
        .all(|comp| comp.iter().filter(|n| black[n.col][n.row]).count() % 2 == 0)
}

pub fn is_parity_coloring_with(r: &RowGraph, phi: &ParityColoring, mode: ParityMode, count: NeighborCount) -> bool {
    if r.rows() != 3 || phi.black.len() != r.s() || phi.black.iter().any(|c| c.len() != 3) {
        return false;
    }
    let rules = column_rules(r, mode, count);
    let local = rules
        .iter()
        .zip(&phi.black)
        .all(|(&(same12, same23), col)| (col[0] == col[1]) == same12 && (col[1] == col[2]) == same23);
    local && rows_even(&row_components(r), &phi.black)
}

pub fn is_parity_coloring(r: &RowGraph, phi: &ParityColoring, mode: ParityMode) -> bool {
    is_parity_coloring_with(r, phi, mode, NeighborCount::Multiplicity)
}

fn require_identity_f(a: &AmiableColoring) -> Result<()> {
    if a.f.iter().any(|c| c != &[1, 2, 3]) {
        return Err(Error::Hypothesis(
            "vertex colors must be f(v_ij) = i; rearrange with identity_f_rearrangement first".into(),
        ));
    }
    Ok(())
}

/// Column-wise row permutation after which `a`'s vertex colors become
/// `f(v_ij) = i`. Push `a` forward along it.
pub fn identity_f_rearrangement(a: &AmiableColoring) -> Rearrangement {
    Rearrangement {
        col_perm: (0..a.f.len()).collect(),
        row_perms: a.f.iter().map(|c| c.iter().map(|&x| x as usize - 1).collect()).collect(),
    }
}

fn color_degree_in_row(r: &RowGraph, a: &AmiableColoring, n: Node, row: usize, color: Color) -> usize {
    r.incident(n)
        .filter(|e| e.other(n).row == row && a.g[&e.id] == color)
        .count()
}

fn check_amiable_input(r: &RowGraph, a: &AmiableColoring) -> Result<()> {
    check_amiable(r, a).map_err(Error::NotAmiable)?;
    require_identity_f(a)
}

/// Black iff `d_{i+1}(v_ij, R[V_i])` is odd (colors cyclic).
pub fn amiable_to_symmetric(r: &RowGraph, a: &AmiableColoring) -> Result<ParityColoring> {
    check_amiable_input(r, a)?;
    let black = (0..r.s())
        .map(|j| {
            (0..3)
                .map(|i| color_degree_in_row(r, a, Node::new(i, j), i, ((i + 1) % 3) as Color + 1) % 2 == 1)
                .collect()
        })
        .collect();
    Ok(ParityColoring {
        mode: ParityMode::Symmetric,
        black,
    })
}

/// Row 1 black iff `d_2` within row 1 is odd, row 2 uses `d_3`, row 3 uses `d_2`.
pub fn amiable_to_parity(r: &RowGraph, a: &AmiableColoring) -> Result<ParityColoring> {
    check_amiable_input(r, a)?;
    const WITNESS_COLOR: [Color; 3] = [2, 3, 2];
    let black = (0..r.s())
        .map(|j| {
            (0..3)
                .map(|i| color_degree_in_row(r, a, Node::new(i, j), i, WITNESS_COLOR[i]) % 2 == 1)
                .collect()
        })
        .collect();
    Ok(ParityColoring {
        mode: ParityMode::Standard,
        black,
    })
}

/// t-joins of the black vertices inside each row.
fn row_joins(r: &RowGraph, phi: &ParityColoring) -> Result<[BTreeSet<EdgeId>; 3]> {
    let mut out: [BTreeSet<EdgeId>; 3] = Default::default();
    for (i, slot) in out.iter_mut().enumerate() {
        let row = r.induced_rows(&[i]);
        let t = (0..r.s())
            .filter(|&j| phi.black[j][i])
            .map(|j| r.index(Node::new(i, j)))
            .collect();
        *slot = acyclic_t_join(&row, &t).map_err(|e| Error::InvalidParityColoring(e.to_string()))?;
    }
    Ok(out)
}

fn third_color(x: usize, y: usize) -> Color {
    (3 - x - y) as Color + 1
}

pub fn symmetric_to_amiable(r: &RowGraph, phi: &ParityColoring) -> Result<AmiableColoring> {
    require_three_rows(r)?;
    require_eulerian(r)?;
    if !is_parity_coloring(r, phi, ParityMode::Symmetric) {
        return Err(Error::InvalidParityColoring("not a symmetric parity-coloring".into()));
    }
    let joins = row_joins(r, phi)?;
    let g = r
        .edges()
        .iter()
        .map(|e| {
            let c = if e.a.row == e.b.row {
                let i = e.a.row;
                // row i edge: color i+1 on the join, i+2 elsewhere (cyclic, 1-based)
                if joins[i].contains(&e.id) {
                    ((i + 1) % 3) as Color + 1
                } else {
                    ((i + 2) % 3) as Color + 1
                }
            } else {
                third_color(e.a.row, e.b.row)
            };
            (e.id, c)
        })
        .collect();
    let a = AmiableColoring {
        f: vec![vec![1, 2, 3]; r.s()],
        g,
    };
    check_amiable(r, &a).map_err(|d| invariant("symmetric to amiable", d))?;
    Ok(a)
}

pub fn parity_to_amiable(r: &RowGraph, phi: &ParityColoring) -> Result<AmiableColoring> {
    require_three_rows(r)?;
    require_eulerian(r)?;
    if !is_parity_coloring(r, phi, ParityMode::Standard) {
        return Err(Error::InvalidParityColoring("not a parity-coloring".into()));
    }
    let joins = row_joins(r, phi)?;
    let g = r
        .edges()
        .iter()
        .map(|e| {
            let (x, y) = (e.a.row.min(e.b.row), e.a.row.max(e.b.row));
            let c = match (x, y) {
                (0, 0) => if joins[0].contains(&e.id) { 2 } else { 3 },
                (1, 1) => if joins[1].contains(&e.id) { 3 } else { 1 },
                (2, 2) => if joins[2].contains(&e.id) { 2 } else { 1 },
                (1, 2) => 1,
                (0, 1) => 3,
                _ => 2,
            };
            (e.id, c)
        })
        .collect();
    let a = AmiableColoring {
        f: vec![vec![1, 2, 3]; r.s()],
        g,
    };
    check_amiable(r, &a).map_err(|d| invariant("parity to amiable", d))?;
    Ok(a)
}

/// Exhaustive search. Conditions (i) and (ii) fix rows 2 and 3 once row 1
/// is chosen, so only the `2^s` first-row choices are enumerated.
pub fn has_parity_coloring_bruteforce(r: &RowGraph, mode: ParityMode) -> Result<Option<ParityColoring>> {
    has_parity_coloring_bruteforce_with(r, mode, NeighborCount::Multiplicity)
}

pub fn has_parity_coloring_bruteforce_with(
    r: &RowGraph,
    mode: ParityMode,
    count: NeighborCount,
) -> Result<Option<ParityColoring>> {
    require_three_rows(r)?;
    if r.s() > 24 {
        return Err(Error::OracleLimit(format!("{} columns exceed the parity search limit 24", r.s())));
    }
    let rules = column_rules(r, mode, count);
    let comps = row_components(r);
    for mask in 0u32..(1u32 << r.s()) {
        let black: Vec<Vec<bool>> = rules
            .iter()
            .enumerate()
            .map(|(j, &(same12, same23))| {
                let b1 = mask >> j & 1 == 1;
                let b2 = if same12 { b1 } else { !b1 };
                let b3 = if same23 { b2 } else { !b2 };
                vec![b1, b2, b3]
            })
            .collect();
        if rows_even(&comps, &black) {
            return Ok(Some(ParityColoring { mode, black }));
        }
    }
    Ok(None)
}

/// Whether `f(v_ij) = i` extends to an amiable coloring.
pub fn has_identity_extension(r: &RowGraph) -> Option<AmiableColoring> {
    let f = vec![vec![1, 2, 3]; r.s()];
    crate::rowgraph::amiable_extension(r, &f).map(|g| AmiableColoring { f, g })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rowgraph::{brute_force_amiable, is_amiable, OracleGuard};

    fn rg(s: usize, t: &[(usize, usize, usize, usize)]) -> RowGraph {
        RowGraph::from_tuples(3, s, t).unwrap()
    }

    // every black/white assignment, no pruning
    fn naive_parity(r: &RowGraph, mode: ParityMode) -> bool {
        let n = 3 * r.s();
        (0u32..(1 << n)).any(|m| {
            let black = (0..r.s()).map(|j| (0..3).map(|i| m >> (3 * j + i) & 1 == 1).collect()).collect();
            is_parity_coloring(r, &ParityColoring { mode, black }, mode)
        })
    }

    fn instances() -> Vec<RowGraph> {
        vec![
            rg(1, &[]),
            rg(2, &[(0, 0, 0, 1), (1, 0, 1, 1)]),
            rg(2, &[(0, 0, 1, 1), (0, 0, 1, 1)]),
            rg(2, &[(0, 0, 1, 1), (2, 0, 0, 1)]),
            rg(3, &[(0, 0, 0, 1), (0, 1, 0, 2), (0, 2, 0, 0)]),
            rg(3, &[(0, 0, 1, 1), (1, 1, 2, 2), (2, 2, 0, 0)]),
            rg(3, &[(0, 0, 1, 1), (2, 1, 2, 2), (1, 2, 0, 0), (1, 0, 1, 2), (0, 1, 0, 2), (2, 0, 2, 1)]),
            rg(3, &[(1, 0, 1, 1), (1, 0, 1, 1), (2, 1, 0, 2), (2, 1, 0, 2)]),
        ]
    }

    #[test]
    fn edgeless_parity_examples() {
        let r = rg(3, &[]);
        let white = ParityColoring {
            mode: ParityMode::Standard,
            black: vec![vec![false; 3]; 3],
        };
        assert!(is_parity_coloring(&r, &white, ParityMode::Standard));
        assert!(is_parity_coloring(&r, &white, ParityMode::Symmetric));
        let mut one = white.clone();
        one.black[1][0] = true;
        assert!(!is_parity_coloring(&r, &one, ParityMode::Standard));
        let a = has_identity_extension(&r).unwrap();
        assert_eq!(amiable_to_parity(&r, &a).unwrap().black, white.black);
        assert_eq!(symmetric_to_amiable(&r, &ParityColoring { mode: ParityMode::Symmetric, ..white.clone() }).unwrap(), a);
        assert_eq!(parity_to_amiable(&r, &white).unwrap(), a);
    }

    #[test]
    fn pruned_parity_search_matches_naive() {
        for r in instances() {
            for mode in [ParityMode::Standard, ParityMode::Symmetric] {
                assert_eq!(has_parity_coloring_bruteforce(&r, mode).unwrap().is_some(), naive_parity(&r, mode), "{r:?}");
            }
        }
    }

    #[test]
    fn three_way_agreement_and_round_trips() {
        for r in instances().into_iter().filter(RowGraph::is_rc_eulerian) {
            let ext = has_identity_extension(&r);
            let std = has_parity_coloring_bruteforce(&r, ParityMode::Standard).unwrap();
            let sym = has_parity_coloring_bruteforce(&r, ParityMode::Symmetric).unwrap();
            assert_eq!(ext.is_some(), std.is_some(), "{r:?}");
            assert_eq!(ext.is_some(), sym.is_some(), "{r:?}");
            if let Some(a) = ext {
                let p = amiable_to_parity(&r, &a).unwrap();
                assert!(is_parity_coloring(&r, &p, ParityMode::Standard));
                assert!(is_amiable(&r, &parity_to_amiable(&r, &p).unwrap()));
                let q = amiable_to_symmetric(&r, &a).unwrap();
                assert!(is_parity_coloring(&r, &q, ParityMode::Symmetric));
                assert!(is_amiable(&r, &symmetric_to_amiable(&r, &q).unwrap()));
            }
        }
    }

    #[test]
    fn non_identity_f_needs_rearranging() {
        let r = rg(2, &[(0, 0, 0, 1), (1, 0, 1, 1)]);
        let a = AmiableColoring {
            f: vec![vec![2, 1, 3], vec![1, 2, 3]],
            g: [(0, 3), (1, 3)].into_iter().collect(),
        };
        assert!(is_amiable(&r, &a));
        assert!(amiable_to_parity(&r, &a).is_err());
        let rr = identity_f_rearrangement(&a);
        let r2 = rearrange(&r, &rr).unwrap();
        let a2 = a.push_forward(&rr);
        assert!(is_amiable(&r2, &a2));
        assert!(amiable_to_parity(&r2, &a2).is_ok());
    }

    #[test]
    fn sparse_row_examples() {
        // first row connected
        let r = rg(3, &[(0, 0, 0, 1), (0, 1, 0, 2), (0, 2, 0, 0), (1, 0, 2, 1), (1, 1, 2, 2), (1, 2, 2, 0)]);
        let c = construct_amiable_sparse_row(&r, 0).unwrap();
        assert!(is_amiable(&r, &c.coloring));
        assert_eq!(replay(&r, &c.trace).unwrap(), c.coloring);
        assert!(is_amiable(&r, &construct_amiable_connected_row(&r).unwrap().coloring));
        // edgeless
        let e = rg(4, &[]);
        for i in 0..3 {
            assert!(is_amiable(&e, &construct_amiable_sparse_row(&e, i).unwrap().coloring));
        }
        // isolated first-row vertices in a column with two busy vertices
        let bad = rg(2, &[(1, 0, 1, 1), (2, 0, 2, 1)]);
        assert!(matches!(construct_amiable_sparse_row(&bad, 0), Err(Error::Hypothesis(_))));
        assert!(construct_amiable_sparse_row(&bad, 1).is_ok());
    }

    #[test]
    fn two_column_examples() {
        let direct = rg(2, &[(0, 0, 1, 1), (0, 0, 1, 1)]);
        let c = construct_amiable_two_columns(&direct, 0, 1).unwrap();
        assert!(is_amiable(&direct, &c.coloring));
        // two special columns, path through a third
        let path = rg(3, &[(0, 0, 2, 2), (1, 0, 2, 2), (2, 2, 1, 1), (2, 2, 0, 1)]);
        assert!(path.is_rc_eulerian());
        let c = construct_amiable_two_columns(&path, 0, 1).unwrap();
        assert!(is_amiable(&path, &c.coloring));
        assert!(c.trace.notes[0].contains("length 2"), "{:?}", c.trace.notes);
        // p and q in different pieces
        let split = rg(4, &[(0, 0, 1, 2), (0, 0, 1, 2), (2, 1, 0, 3), (1, 1, 0, 3)]);
        let c = construct_amiable_two_columns(&split, 0, 1).unwrap();
        assert_eq!(c.trace.kind, TraceKind::Split);
        assert!(is_amiable(&split, &c.coloring));
        assert_eq!(replay(&split, &c.trace).unwrap(), c.coloring);
        let bad = rg(3, &[(0, 2, 0, 0), (1, 2, 1, 1), (0, 2, 0, 0), (1, 2, 1, 1)]);
        assert!(matches!(construct_amiable_two_columns(&bad, 0, 1), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn constructions_agree_with_oracle() {
        for r in instances().into_iter().filter(RowGraph::is_rc_eulerian) {
            let oracle = brute_force_amiable(&r, OracleGuard::default()).unwrap();
            for i in 0..3 {
                if let Ok(c) = construct_amiable_sparse_row(&r, i) {
                    assert!(is_amiable(&r, &c.coloring));
                    assert!(oracle.is_some());
                }
            }
        }
    }

    #[test]
    fn trace_serializes() {
        let r = rg(2, &[(0, 0, 0, 1), (0, 0, 0, 1)]);
        let c = construct_amiable_sparse_row(&r, 0).unwrap();
        let text = serde_json::to_string(&c.trace).unwrap();
        let back: ConstructionTrace = serde_json::from_str(&text).unwrap();
        assert_eq!(back, c.trace);
    }
}
