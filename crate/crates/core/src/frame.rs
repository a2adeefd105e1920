//! Kotzig-frames of cubic graphs.
//!
//! A frame is a spanning subgraph whose components all have an even number
//! of vertices and are either cycles (C-components) or subdivisions of
//! Kotzig graphs (K-components). Non-frame edges with both ends in one
//! component are chords; the remaining non-frame edges survive in the
//! contraction `G_F`, which is always eulerian.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{components, contract_edges, is_eulerian, is_two_connected, EdgeId, Multigraph, VertexId};
use crate::kotzig::{
    classify_component, enumerate_perfect_colorings, is_perfect_on_component, Color, ComponentClass, PerfectColoring,
    COLORS,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ComponentKind {
    C,
    K,
}

#[derive(Clone, Debug)]
pub struct FrameComponent {
    pub kind: ComponentKind,
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
    pub class: ComponentClass,
    pub subgraph: Multigraph,
}

impl FrameComponent {
    /// Vertices of degree 2 inside the component (all vertices of a C-component).
    pub fn two_valent(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.iter().copied().filter(|&v| self.subgraph.degree(v) == 2)
    }
}

#[derive(Clone, Debug)]
pub struct Frame {
    host: Multigraph,
    frame_edges: BTreeSet<EdgeId>,
    components: Vec<FrameComponent>,
    chords: BTreeSet<EdgeId>,
    component_of: BTreeMap<VertexId, usize>,
    warnings: Vec<String>,
}

/// Validates `frame_edges` as a Kotzig-frame of the cubic graph `g`.
/// Components are ordered K first, then by size, then by smallest vertex.
pub fn validate_frame(g: &Multigraph, frame_edges: &BTreeSet<EdgeId>) -> Result<Frame> {
    g.require_cubic()?;
    for &id in frame_edges {
        if g.edge(id).is_none() {
            return Err(Error::UnknownEdge(id));
        }
    }
    let sub = g.spanning_subgraph(frame_edges);
    for &v in g.vertices() {
        if sub.degree(v) == 0 {
            return Err(Error::NotSpanning(v));
        }
    }
    let mut comps = Vec::new();
    for verts in components(&sub) {
        if verts.len() % 2 == 1 {
            return Err(Error::OddComponent {
                vertex: verts[0],
                order: verts.len(),
            });
        }
        let set: BTreeSet<VertexId> = verts.iter().copied().collect();
        let subgraph = sub.induced_subgraph(&set);
        let class = classify_component(&subgraph);
        let kind = match class {
            ComponentClass::Cycle => ComponentKind::C,
            ComponentClass::KotzigSubdivision { .. } => ComponentKind::K,
            ComponentClass::Neither => return Err(Error::BadComponent(verts[0])),
        };
        comps.push(FrameComponent {
            kind,
            edges: subgraph.edge_ids().collect(),
            vertices: verts,
            class,
            subgraph,
        });
    }
    comps.sort_by(|x, y| {
        (std::cmp::Reverse(x.kind), x.vertices.len(), x.vertices[0]).cmp(&(
            std::cmp::Reverse(y.kind),
            y.vertices.len(),
            y.vertices[0],
        ))
    });
    let mut warnings = Vec::new();
    if !is_two_connected(g) {
        warnings.push("host graph is not 2-connected".to_string());
    }
    for c in &comps {
        if c.kind == ComponentKind::K && c.two_valent().next().is_none() {
            warnings.push(format!(
                "K-component containing vertex {} is cubic (no 2-valent vertices)",
                c.vertices[0]
            ));
        }
    }
    Ok(Frame::assemble(g.clone(), frame_edges.clone(), comps, warnings))
}

impl Frame {
    fn assemble(
        host: Multigraph,
        frame_edges: BTreeSet<EdgeId>,
        components: Vec<FrameComponent>,
        warnings: Vec<String>,
    ) -> Frame {
        let mut component_of = BTreeMap::new();
        for (j, c) in components.iter().enumerate() {
            for &v in &c.vertices {
                component_of.insert(v, j);
            }
        }
        let chords = host
            .edges()
            .iter()
            .filter(|e| !frame_edges.contains(&e.id) && component_of[&e.a] == component_of[&e.b])
            .map(|e| e.id)
            .collect();
        Frame {
            host,
            frame_edges,
            components,
            chords,
            component_of,
            warnings,
        }
    }

    pub fn host(&self) -> &Multigraph {
        &self.host
    }

    pub fn frame_edges(&self) -> &BTreeSet<EdgeId> {
        &self.frame_edges
    }

    pub fn components(&self) -> &[FrameComponent] {
        &self.components
    }

    /// Number of components `s`.
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn k_count(&self) -> usize {
        self.components.iter().filter(|c| c.kind == ComponentKind::K).count()
    }

    pub fn chords(&self) -> &BTreeSet<EdgeId> {
        &self.chords
    }

    pub fn component_of(&self, v: VertexId) -> usize {
        self.component_of[&v]
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Non-frame edges joining different components: the edges of `G_F`.
    pub fn crossing_edges(&self) -> impl Iterator<Item = &crate::graph::Edge> + '_ {
        self.host
            .edges()
            .iter()
            .filter(|e| !self.frame_edges.contains(&e.id) && !self.chords.contains(&e.id))
    }

    /// Reorders components: new position `p` holds old component `order[p]`.
    pub fn relabeled(&self, order: &[usize]) -> Result<Frame> {
        let mut seen = vec![false; self.len()];
        if order.len() != self.len() || order.iter().any(|&j| j >= self.len() || std::mem::replace(&mut seen[j], true)) {
            return Err(Error::MalformedPermutation(format!("{order:?} is not a permutation of 0..{}", self.len())));
        }
        let comps = order.iter().map(|&j| self.components[j].clone()).collect();
        Ok(Frame::assemble(
            self.host.clone(),
            self.frame_edges.clone(),
            comps,
            self.warnings.clone(),
        ))
    }

    pub fn to_json(&self) -> FrameJson {
        FrameJson {
            frame_edges: self.frame_edges.iter().copied().collect(),
            components: self
                .components
                .iter()
                .enumerate()
                .map(|(j, c)| ComponentJson {
                    kind: c.kind,
                    vertices: c.vertices.clone(),
                    label: j + 1,
                })
                .collect(),
            chords: self.chords.iter().copied().collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentJson {
    pub kind: ComponentKind,
    pub vertices: Vec<VertexId>,
    pub label: usize,
}

/// `{frame_edges:[ids], components:[{kind, vertices, label}], chords:[ids]}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameJson {
    pub frame_edges: Vec<EdgeId>,
    #[serde(default)]
    pub components: Vec<ComponentJson>,
    #[serde(default)]
    pub chords: Vec<EdgeId>,
}

impl FrameJson {
    /// Validates against `g`. When components are listed they must match the
    /// computed ones and their labels fix the component order.
    pub fn into_frame(&self, g: &Multigraph) -> Result<Frame> {
        let frame = validate_frame(g, &self.frame_edges.iter().copied().collect())?;
        if self.components.is_empty() {
            return Ok(frame);
        }
        if self.components.len() != frame.len() {
            return Err(Error::Parse(format!(
                "frame file lists {} components, the edge set has {}",
                self.components.len(),
                frame.len()
            )));
        }
        let mut listed: Vec<&ComponentJson> = self.components.iter().collect();
        listed.sort_by_key(|c| c.label);
        let mut order = Vec::new();
        for c in listed {
            let mut verts = c.vertices.clone();
            verts.sort_unstable();
            let j = frame
                .components()
                .iter()
                .position(|fc| fc.vertices == verts)
                .ok_or_else(|| Error::Parse(format!("component with label {} does not match the frame", c.label)))?;
            if frame.components()[j].kind != c.kind {
                return Err(Error::Parse(format!("component with label {} has the wrong kind", c.label)));
            }
            order.push(j);
        }
        frame.relabeled(&order)
    }
}

/// `G_F`: one vertex per component (vertex id = component index).
#[derive(Clone, Debug)]
pub struct ContractedFrame {
    pub graph: Multigraph,
    pub kinds: Vec<ComponentKind>,
}

impl ContractedFrame {
    pub fn k_vertices(&self) -> BTreeSet<usize> {
        (0..self.kinds.len()).filter(|&j| self.kinds[j] == ComponentKind::K).collect()
    }

    pub fn c_vertices(&self) -> BTreeSet<usize> {
        (0..self.kinds.len()).filter(|&j| self.kinds[j] == ComponentKind::C).collect()
    }
}

pub fn contract_frame(f: &Frame) -> ContractedFrame {
    let (g, map) = contract_edges(&f.host, &f.frame_edges, true).expect("frame edges belong to the host");
    // contraction ids follow smallest vertices; translate to component order
    let mut to_comp = BTreeMap::new();
    for (&v, &new) in &map {
        to_comp.insert(new, f.component_of(v));
    }
    let graph = Multigraph::new(
        0..f.len(),
        g.edges()
            .iter()
            .map(|e| crate::graph::Edge::new(e.id, to_comp[&e.a], to_comp[&e.b])),
    )
    .expect("relabeled contraction is valid");
    assert!(is_eulerian(&graph), "frame contraction must be eulerian");
    ContractedFrame {
        graph,
        kinds: f.components.iter().map(|c| c.kind).collect(),
    }
}

pub fn is_perfect_coloring(f: &Frame, alpha: &PerfectColoring) -> bool {
    f.components
        .iter()
        .all(|c| is_perfect_on_component(&c.subgraph, &c.class, alpha))
}

/// `G_{F,alpha}`: the contraction with an edge colored `c` iff both host
/// endpoints have alpha-color `c`.
#[derive(Clone, Debug)]
pub struct ColoredContraction {
    pub contracted: ContractedFrame,
    pub edge_color: BTreeMap<EdgeId, Option<Color>>,
}

fn colored_contraction_unchecked(f: &Frame, cf: ContractedFrame, alpha: &PerfectColoring) -> ColoredContraction {
    let edge_color = cf
        .graph
        .edges()
        .iter()
        .map(|e| {
            let h = f.host.edge(e.id).expect("contraction keeps host ids");
            let (ca, cb) = (alpha.vertex.get(&h.a), alpha.vertex.get(&h.b));
            let c = match (ca, cb) {
                (Some(x), Some(y)) if x == y => Some(*x),
                _ => None,
            };
            (e.id, c)
        })
        .collect();
    ColoredContraction {
        contracted: cf,
        edge_color,
    }
}

pub fn build_colored_contraction(f: &Frame, alpha: &PerfectColoring) -> Result<ColoredContraction> {
    if !is_perfect_coloring(f, alpha) {
        return Err(Error::NotPerfect("coloring fails the perfect-coloring conditions".into()));
    }
    Ok(colored_contraction_unchecked(f, contract_frame(f), alpha))
}

/// A monochromatic connected subgraph `H` of `G_{F,alpha}` containing every
/// K-vertex, taken maximal: the whole `color`-component around the K-vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub color: Color,
    /// Component indices (vertices of `G_F`) in `H`.
    pub vertices: BTreeSet<usize>,
    pub edges: BTreeSet<EdgeId>,
}

fn color_component(cc: &ColoredContraction, color: Color, anchor: usize) -> Witness {
    let g = &cc.contracted.graph;
    let mut vertices = BTreeSet::from([anchor]);
    let mut edges = BTreeSet::new();
    let mut stack = vec![anchor];
    while let Some(v) = stack.pop() {
        for e in g.incident(v) {
            if cc.edge_color[&e.id] != Some(color) {
                continue;
            }
            edges.insert(e.id);
            let w = e.other(v);
            if vertices.insert(w) {
                stack.push(w);
            }
        }
    }
    Witness { color, vertices, edges }
}

fn witness_in(cc: &ColoredContraction, alpha: &PerfectColoring, f: &Frame) -> Option<Witness> {
    let ks = cc.contracted.k_vertices();
    match ks.iter().next() {
        None => {
            // no K-vertices: anchor at the first component in its own color
            let first = f.components.first()?;
            let color = alpha.vertex.get(&first.vertices[0]).copied().unwrap_or(1);
            Some(color_component(cc, color, 0))
        }
        Some(&anchor) => COLORS
            .iter()
            .map(|&c| color_component(cc, c, anchor))
            .find(|w| ks.is_subset(&w.vertices)),
    }
}

pub fn well_connected_witness(f: &Frame, alpha: &PerfectColoring) -> Option<Witness> {
    debug_assert!(is_perfect_coloring(f, alpha));
    let cc = colored_contraction_unchecked(f, contract_frame(f), alpha);
    witness_in(&cc, alpha, f)
}

/// Iterates perfect colorings of a frame as the product of per-component
/// choices (components in frame order, odometer with the last component
/// fastest). With `symmetry_pruned`, the first K-component (or, without
/// K-components, the first C-component) is restricted to one representative
/// per global color permutation.
pub struct PerfectColorings {
    fragments: Vec<Vec<PerfectColoring>>,
    index: Vec<usize>,
    done: bool,
}

impl PerfectColorings {
    pub fn new(f: &Frame, symmetry_pruned: bool) -> Result<Self> {
        let mut fragments = Vec::with_capacity(f.len());
        for (j, c) in f.components.iter().enumerate() {
            let mut frags = enumerate_perfect_colorings(&c.subgraph, &c.class)?;
            if symmetry_pruned && j == 0 {
                frags.retain(|x| x.is_color_canonical());
            }
            fragments.push(frags);
        }
        let done = fragments.iter().any(Vec::is_empty);
        Ok(PerfectColorings {
            index: vec![0; fragments.len()],
            fragments,
            done,
        })
    }

    pub fn total(&self) -> usize {
        self.fragments.iter().map(Vec::len).product()
    }
}

impl Iterator for PerfectColorings {
    type Item = PerfectColoring;

    fn next(&mut self) -> Option<PerfectColoring> {
        if self.done {
            return None;
        }
        let mut alpha = PerfectColoring::default();
        for (frags, &i) in self.fragments.iter().zip(&self.index) {
            alpha.merge(&frags[i]);
        }
        // advance
        let mut k = self.index.len();
        loop {
            if k == 0 {
                self.done = true;
                break;
            }
            k -= 1;
            self.index[k] += 1;
            if self.index[k] < self.fragments[k].len() {
                break;
            }
            self.index[k] = 0;
        }
        Some(alpha)
    }
}

/// First perfect coloring (in [`PerfectColorings`] order, symmetry pruned)
/// for which `G_F` is well connected, with its witness.
pub fn find_well_connected_frame_coloring(f: &Frame) -> Option<(PerfectColoring, Witness)> {
    let cf = contract_frame(f);
    for alpha in PerfectColorings::new(f, true).ok()? {
        let cc = colored_contraction_unchecked(f, cf.clone(), &alpha);
        if let Some(w) = witness_in(&cc, &alpha, f) {
            return Some((alpha, w));
        }
    }
    None
}

/// Three sufficient conditions on `G_F` for well-connectedness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SufficientConditions {
    /// K-vertices independent and `G_F - K` connected.
    pub k_independent_rest_connected: bool,
    /// Every K-vertex adjacent to a C-vertex and `G_F - K` connected.
    pub k_touch_c_rest_connected: bool,
    /// Some C-vertex set inducing a connected graph has every K-vertex in its neighborhood.
    pub connected_c_set_dominates_k: bool,
}

pub fn check_sufficient_conditions(cf: &ContractedFrame) -> SufficientConditions {
    let g = &cf.graph;
    let ks = cf.k_vertices();
    let cs = cf.c_vertices();
    let independent = g
        .edges()
        .iter()
        .all(|e| !(ks.contains(&e.a) && ks.contains(&e.b)));
    let rest = g.induced_subgraph(&cs);
    let rest_connected = components(&rest).len() <= 1;
    let touches_c = ks
        .iter()
        .all(|&k| g.incident(k).any(|e| cs.contains(&e.other(k))));
    let dominated = if ks.is_empty() {
        true
    } else {
        components(&rest).iter().any(|comp| {
            let nbrs: BTreeSet<usize> = comp
                .iter()
                .flat_map(|&c| g.incident(c).map(move |e| e.other(c)))
                .collect();
            ks.is_subset(&nbrs)
        })
    };
    SufficientConditions {
        k_independent_rest_connected: independent && rest_connected,
        k_touch_c_rest_connected: touches_c && rest_connected,
        connected_c_set_dominates_k: dominated,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FrameStrategy {
    /// Complements of perfect matchings whose cycles are all even.
    TwoFactor,
    /// Complements of all matchings, smallest matching first.
    Exhaustive { max_edges: usize },
    UserSupplied(BTreeSet<EdgeId>),
}

fn matchings_rec(
    g: &Multigraph,
    k: usize,
    used: &mut BTreeSet<VertexId>,
    cur: &mut Vec<EdgeId>,
    perfect_only: bool,
    out: &mut Vec<BTreeSet<EdgeId>>,
) {
    if perfect_only {
        // branch on the smallest unmatched vertex
        let Some(&v) = g.vertices().iter().find(|v| !used.contains(v)) else {
            out.push(cur.iter().copied().collect());
            return;
        };
        let choices: Vec<(EdgeId, VertexId)> = g
            .incident(v)
            .filter(|e| !e.is_loop() && !used.contains(&e.other(v)))
            .map(|e| (e.id, e.other(v)))
            .collect();
        for (id, w) in choices {
            used.insert(v);
            used.insert(w);
            cur.push(id);
            matchings_rec(g, k, used, cur, true, out);
            cur.pop();
            used.remove(&v);
            used.remove(&w);
        }
        return;
    }
    if k == g.edge_count() {
        out.push(cur.iter().copied().collect());
        return;
    }
    matchings_rec(g, k + 1, used, cur, false, out);
    let e = g.edges()[k];
    if !e.is_loop() && !used.contains(&e.a) && !used.contains(&e.b) {
        used.insert(e.a);
        used.insert(e.b);
        cur.push(e.id);
        matchings_rec(g, k + 1, used, cur, false, out);
        cur.pop();
        used.remove(&e.a);
        used.remove(&e.b);
    }
}

pub fn perfect_matchings(g: &Multigraph) -> Vec<BTreeSet<EdgeId>> {
    let mut out = Vec::new();
    matchings_rec(g, 0, &mut BTreeSet::new(), &mut Vec::new(), true, &mut out);
    out
}

/// All matchings (including the empty one), by size then lexicographically.
pub fn matchings(g: &Multigraph) -> Vec<BTreeSet<EdgeId>> {
    let mut out = Vec::new();
    matchings_rec(g, 0, &mut BTreeSet::new(), &mut Vec::new(), false, &mut out);
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.iter().cmp(b.iter())));
    out
}

/// Frames of `g` found by the given strategy. Every yielded frame passed
/// [`validate_frame`].
pub fn search_frames<'a>(g: &'a Multigraph, strategy: &FrameStrategy) -> Result<Box<dyn Iterator<Item = Frame> + 'a>> {
    g.require_cubic()?;
    let all: BTreeSet<EdgeId> = g.edge_ids().collect();
    match strategy {
        FrameStrategy::TwoFactor => {
            let pms = perfect_matchings(g);
            Ok(Box::new(pms.into_iter().filter_map(move |m| {
                let f = validate_frame(g, &all.difference(&m).copied().collect()).ok()?;
                f.components.iter().all(|c| c.kind == ComponentKind::C).then_some(f)
            })))
        }
        FrameStrategy::Exhaustive { max_edges } => {
            if g.edge_count() > *max_edges {
                return Err(Error::OracleLimit(format!(
                    "exhaustive frame search over {} edges exceeds the limit {}",
                    g.edge_count(),
                    max_edges
                )));
            }
            let ms = matchings(g);
            Ok(Box::new(
                ms.into_iter()
                    .filter_map(move |m| validate_frame(g, &all.difference(&m).copied().collect()).ok()),
            ))
        }
        FrameStrategy::UserSupplied(edges) => Ok(Box::new(validate_frame(g, edges).into_iter())),
    }
}
