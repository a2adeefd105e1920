//! Multigraph substrate shared by every structure in the crate.
//!
//! Edges are first-class identities: two parallel edges are distinct because
//! their ids differ, and every derived structure (contractions, row graphs,
//! certificates) refers back to host edges by id. Loops are permitted and
//! count 2 toward the degree of their vertex.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type VertexId = usize;
pub type EdgeId = usize;

/// Old vertex id -> new vertex id, recorded by contractions.
pub type VertexMap = BTreeMap<VertexId, VertexId>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub id: EdgeId,
    pub a: VertexId,
    pub b: VertexId,
}

impl Edge {
    pub fn new(id: EdgeId, a: VertexId, b: VertexId) -> Self {
        Edge { id, a, b }
    }

    pub fn is_loop(&self) -> bool {
        self.a == self.b
    }

    /// The endpoint opposite `v`. For a loop this is `v` itself.
    pub fn other(&self, v: VertexId) -> VertexId {
        if self.a == v {
            self.b
        } else {
            self.a
        }
    }

    pub fn touches(&self, v: VertexId) -> bool {
        self.a == v || self.b == v
    }
}

#[derive(Clone, Debug)]
pub struct Multigraph {
    vertices: Vec<VertexId>,
    edges: Vec<Edge>,
    vertex_pos: HashMap<VertexId, usize>,
    edge_pos: HashMap<EdgeId, usize>,
    // Edge positions incident with each vertex position; a loop is listed once.
    incidence: Vec<Vec<usize>>,
}

impl PartialEq for Multigraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.edges == other.edges
    }
}

impl Eq for Multigraph {}

impl Multigraph {
    /// Builds a multigraph, sorting vertices and edges by id.
    pub fn new(vertices: impl IntoIterator<Item = VertexId>, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let mut vertices: Vec<VertexId> = vertices.into_iter().collect();
        vertices.sort_unstable();
        for w in vertices.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateVertex(w[0]));
            }
        }
        let mut edges: Vec<Edge> = edges.into_iter().collect();
        edges.sort_unstable_by_key(|e| e.id);
        for w in edges.windows(2) {
            if w[0].id == w[1].id {
                return Err(Error::DuplicateEdge(w[0].id));
            }
        }
        let vertex_pos: HashMap<VertexId, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut incidence = vec![Vec::new(); vertices.len()];
        let mut edge_pos = HashMap::with_capacity(edges.len());
        for (i, e) in edges.iter().enumerate() {
            let pa = *vertex_pos.get(&e.a).ok_or(Error::UnknownVertex(e.a))?;
            let pb = *vertex_pos.get(&e.b).ok_or(Error::UnknownVertex(e.b))?;
            incidence[pa].push(i);
            if pb != pa {
                incidence[pb].push(i);
            }
            edge_pos.insert(e.id, i);
        }
        Ok(Multigraph {
            vertices,
            edges,
            vertex_pos,
            edge_pos,
            incidence,
        })
    }

    /// Vertices `0..n`, edges numbered `0..` in the given order.
    pub fn from_pairs(n: usize, pairs: &[(VertexId, VertexId)]) -> Result<Self> {
        Multigraph::new(
            0..n,
            pairs.iter().enumerate().map(|(i, &(a, b))| Edge::new(i, a, b)),
        )
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.vertex_pos.contains_key(&v)
    }

    pub fn edge(&self, id: EdgeId) -> Option<&Edge> {
        self.edge_pos.get(&id).map(|&i| &self.edges[i])
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges.iter().map(|e| e.id)
    }

    /// Edges at `v` in id order; a loop appears once.
    pub fn incident(&self, v: VertexId) -> impl Iterator<Item = &Edge> + '_ {
        let list: &[usize] = match self.vertex_pos.get(&v) {
            Some(&p) => &self.incidence[p],
            None => &[],
        };
        list.iter().map(move |&i| &self.edges[i])
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.incident(v).map(|e| if e.is_loop() { 2 } else { 1 }).sum()
    }

    pub fn is_cubic(&self) -> bool {
        self.vertices.iter().all(|&v| self.degree(v) == 3)
    }

    pub fn require_cubic(&self) -> Result<()> {
        for &v in &self.vertices {
            let d = self.degree(v);
            if d != 3 {
                return Err(Error::BadDegree {
                    vertex: v,
                    degree: d,
                    expected: "3",
                });
            }
        }
        Ok(())
    }

    /// Same vertex set, only the listed edges.
    pub fn spanning_subgraph(&self, keep: &BTreeSet<EdgeId>) -> Multigraph {
        Multigraph::new(
            self.vertices.iter().copied(),
            self.edges.iter().filter(|e| keep.contains(&e.id)).copied(),
        )
        .expect("subgraph of a valid graph is valid")
    }

    /// Subgraph induced by a vertex subset.
    pub fn induced_subgraph(&self, keep: &BTreeSet<VertexId>) -> Multigraph {
        Multigraph::new(
            self.vertices.iter().copied().filter(|v| keep.contains(v)),
            self.edges
                .iter()
                .filter(|e| keep.contains(&e.a) && keep.contains(&e.b))
                .copied(),
        )
        .expect("subgraph of a valid graph is valid")
    }

    /// Copy with every edge oriented so that `a <= b`.
    pub fn normalized(&self) -> Multigraph {
        Multigraph::new(
            self.vertices.iter().copied(),
            self.edges.iter().map(|e| Edge::new(e.id, e.a.min(e.b), e.a.max(e.b))),
        )
        .expect("reorientation keeps the graph valid")
    }

    /// Vertex sets of connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        components(self)
    }
}

/// Union-find over dense indices.
#[derive(Clone, Debug)]
pub struct DisjointSets {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl DisjointSets {
    pub fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        true
    }
}

/// Contracts the given edges. Merged classes get fresh ids `0..k`, numbered
/// by their smallest original vertex. Surviving edges keep their ids; loops
/// created by the contraction are dropped iff `delete_loops`. Loops that were
/// already present and not contracted are kept.
pub fn contract_edges(
    g: &Multigraph,
    contracted: &BTreeSet<EdgeId>,
    delete_loops: bool,
) -> Result<(Multigraph, VertexMap)> {
    let mut ds = DisjointSets::new(g.vertex_count());
    for &id in contracted {
        let e = g.edge(id).ok_or(Error::UnknownEdge(id))?;
        ds.union(g.vertex_pos[&e.a], g.vertex_pos[&e.b]);
    }
    let mut root_to_new: HashMap<usize, VertexId> = HashMap::new();
    let mut map = VertexMap::new();
    for (p, &v) in g.vertices.iter().enumerate() {
        let r = ds.find(p);
        let next = root_to_new.len();
        let id = *root_to_new.entry(r).or_insert(next);
        map.insert(v, id);
    }
    let mut edges = Vec::new();
    for e in &g.edges {
        if contracted.contains(&e.id) {
            continue;
        }
        let (a, b) = (map[&e.a], map[&e.b]);
        if a == b && !e.is_loop() && delete_loops {
            continue;
        }
        edges.push(Edge::new(e.id, a, b));
    }
    let h = Multigraph::new(0..root_to_new.len(), edges)?;
    Ok((h, map))
}

/// Result of suppressing all 2-valent vertices of a subdivision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Suppressed {
    /// Cubic graph on the 3-valent vertices. Each base edge is named by the
    /// smallest edge id on the path it replaces.
    pub base: Multigraph,
    /// Base edge -> edges of the replaced path, ordered from `base_edge.a` to `base_edge.b`.
    pub path_map: BTreeMap<EdgeId, Vec<EdgeId>>,
    /// Base edge -> interior (2-valent) vertices of its path, in the same order.
    pub interior: BTreeMap<EdgeId, Vec<VertexId>>,
}

impl Suppressed {
    /// Rebuilds the subdivided graph from the base and the path data. Edge
    /// orientation is not recorded, so compare via [`Multigraph::normalized`].
    pub fn resubdivide(&self) -> Result<Multigraph> {
        let mut vertices: Vec<VertexId> = self.base.vertices().to_vec();
        let mut edges = Vec::new();
        for be in self.base.edges() {
            let path = &self.path_map[&be.id];
            let inner = &self.interior[&be.id];
            vertices.extend(inner.iter().copied());
            let mut chain = Vec::with_capacity(inner.len() + 2);
            chain.push(be.a);
            chain.extend(inner.iter().copied());
            chain.push(be.b);
            for (k, &id) in path.iter().enumerate() {
                edges.push(Edge::new(id, chain[k], chain[k + 1]));
            }
        }
        Multigraph::new(vertices, edges)
    }
}

/// Suppresses every 2-valent vertex of a connected graph whose vertices all
/// have degree 2 or 3, producing the cubic base graph and the path of `h`
/// each base edge stands for.
pub fn suppress_degree2(h: &Multigraph) -> Result<Suppressed> {
    let mut branch = Vec::new();
    for &v in h.vertices() {
        match h.degree(v) {
            2 => {}
            3 => branch.push(v),
            d => {
                return Err(Error::BadDegree {
                    vertex: v,
                    degree: d,
                    expected: "2 or 3",
                })
            }
        }
    }
    if branch.is_empty() {
        return Err(Error::NoBranchVertex);
    }
    let mut used: BTreeSet<EdgeId> = BTreeSet::new();
    let mut base_edges = Vec::new();
    let mut path_map = BTreeMap::new();
    let mut interior = BTreeMap::new();
    for &b in &branch {
        let starts: Vec<Edge> = h.incident(b).copied().collect();
        for start in starts {
            if used.contains(&start.id) {
                continue;
            }
            let mut path = vec![start.id];
            let mut inner = Vec::new();
            used.insert(start.id);
            let mut cur_edge = start;
            let mut cur = start.other(b);
            while h.degree(cur) == 2 {
                inner.push(cur);
                let next = h
                    .incident(cur)
                    .find(|e| e.id != cur_edge.id)
                    .copied()
                    .ok_or(Error::Disconnected)?;
                if !used.insert(next.id) {
                    return Err(Error::Disconnected);
                }
                path.push(next.id);
                cur = next.other(cur);
                cur_edge = next;
            }
            let name = *path.iter().min().expect("non-empty path");
            base_edges.push(Edge::new(name, b, cur));
            path_map.insert(name, path);
            interior.insert(name, inner);
        }
    }
    if used.len() != h.edge_count() {
        // some cycle of 2-valent vertices is not attached to a branch vertex
        return Err(Error::Disconnected);
    }
    let base = Multigraph::new(branch, base_edges)?;
    if components(&base).len() != 1 {
        return Err(Error::Disconnected);
    }
    Ok(Suppressed {
        base,
        path_map,
        interior,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bipartition {
    pub left: Vec<VertexId>,
    pub right: Vec<VertexId>,
}

impl Bipartition {
    pub fn is_left(&self, v: VertexId) -> bool {
        self.left.binary_search(&v).is_ok()
    }
}

/// Two-colors every component (smallest vertex on the left), or `None` if an
/// odd closed walk exists. A loop is an odd closed walk.
pub fn is_bipartite(g: &Multigraph) -> Option<Bipartition> {
    let mut side: HashMap<VertexId, bool> = HashMap::new();
    for &root in g.vertices() {
        if side.contains_key(&root) {
            continue;
        }
        side.insert(root, false);
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            let sv = side[&v];
            for e in g.incident(v) {
                if e.is_loop() {
                    return None;
                }
                let w = e.other(v);
                match side.get(&w) {
                    Some(&sw) if sw == sv => return None,
                    Some(_) => {}
                    None => {
                        side.insert(w, !sv);
                        queue.push_back(w);
                    }
                }
            }
        }
    }
    let mut left = Vec::new();
    let mut right = Vec::new();
    for &v in g.vertices() {
        if side[&v] {
            right.push(v);
        } else {
            left.push(v);
        }
    }
    Some(Bipartition { left, right })
}

/// Every degree even; connectivity is not required.
pub fn is_eulerian(g: &Multigraph) -> bool {
    g.vertices().iter().all(|&v| g.degree(v) % 2 == 0)
}

pub fn components(g: &Multigraph) -> Vec<Vec<VertexId>> {
    let mut seen: BTreeSet<VertexId> = BTreeSet::new();
    let mut out = Vec::new();
    for &root in g.vertices() {
        if !seen.insert(root) {
            continue;
        }
        let mut comp = vec![root];
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            for e in g.incident(v) {
                let w = e.other(v);
                if seen.insert(w) {
                    comp.push(w);
                    stack.push(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

pub fn is_connected(g: &Multigraph) -> bool {
    components(g).len() <= 1
}

/// Breadth-first spanning forest. Trees are rooted at the smallest vertex of
/// each component and neighbors are scanned in edge-id order.
#[derive(Clone, Debug)]
pub struct BfsForest {
    /// Vertices in visiting order; every vertex appears after its parent.
    pub order: Vec<VertexId>,
    /// Non-root vertex -> (parent, tree edge).
    pub parent: HashMap<VertexId, (VertexId, EdgeId)>,
    /// Vertex -> root of its tree.
    pub root: HashMap<VertexId, VertexId>,
}

pub fn bfs_forest(g: &Multigraph) -> BfsForest {
    let mut order = Vec::with_capacity(g.vertex_count());
    let mut parent = HashMap::new();
    let mut root_of = HashMap::new();
    for &root in g.vertices() {
        if root_of.contains_key(&root) {
            continue;
        }
        root_of.insert(root, root);
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for e in g.incident(v) {
                let w = e.other(v);
                if let std::collections::hash_map::Entry::Vacant(slot) = root_of.entry(w) {
                    slot.insert(root);
                    parent.insert(w, (v, e.id));
                    queue.push_back(w);
                }
            }
        }
    }
    BfsForest {
        order,
        parent,
        root: root_of,
    }
}

/// A maximal acyclic edge set.
pub fn spanning_forest(g: &Multigraph) -> BTreeSet<EdgeId> {
    bfs_forest(g).parent.values().map(|&(_, e)| e).collect()
}

/// True iff the listed edges of `g` contain no cycle (loops and parallel
/// pairs count as cycles).
pub fn is_acyclic(g: &Multigraph, edges: &BTreeSet<EdgeId>) -> bool {
    let pos: HashMap<VertexId, usize> = g.vertices().iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut ds = DisjointSets::new(g.vertex_count());
    for &id in edges {
        let Some(e) = g.edge(id) else { return false };
        if !ds.union(pos[&e.a], pos[&e.b]) {
            return false;
        }
    }
    true
}

/// Connected and no single vertex or edge removal disconnects it. Brute force;
/// intended for desk-scale graphs.
pub fn is_two_connected(g: &Multigraph) -> bool {
    if g.vertex_count() == 0 || !is_connected(g) {
        return false;
    }
    for e in g.edges() {
        let keep: BTreeSet<EdgeId> = g.edge_ids().filter(|&id| id != e.id).collect();
        if !is_connected(&g.spanning_subgraph(&keep)) {
            return false;
        }
    }
    if g.vertex_count() >= 3 {
        for &v in g.vertices() {
            let keep: BTreeSet<VertexId> = g.vertices().iter().copied().filter(|&w| w != v).collect();
            if !is_connected(&g.induced_subgraph(&keep)) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(ids: &[EdgeId]) -> BTreeSet<EdgeId> {
        ids.iter().copied().collect()
    }

    fn triangle() -> Multigraph {
        Multigraph::from_pairs(3, &[(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    fn theta() -> Multigraph {
        Multigraph::from_pairs(2, &[(0, 1), (0, 1), (0, 1)]).unwrap()
    }

    #[test]
    fn rejects_bad_construction() {
        assert_eq!(
            Multigraph::new([0, 1], [Edge::new(0, 0, 1), Edge::new(0, 1, 0)]).unwrap_err(),
            Error::DuplicateEdge(0)
        );
        assert_eq!(
            Multigraph::new([0, 1], [Edge::new(0, 0, 5)]).unwrap_err(),
            Error::UnknownVertex(5)
        );
    }

    #[test]
    fn loop_counts_twice() {
        let g = Multigraph::from_pairs(2, &[(0, 0), (0, 1)]).unwrap();
        assert_eq!(g.degree(0), 3);
        assert_eq!(g.degree(1), 1);
    }

    #[test]
    fn contract_triangle_fully() {
        let (h, map) = contract_edges(&triangle(), &set(&[0, 1, 2]), true).unwrap();
        assert_eq!(h.vertex_count(), 1);
        assert_eq!(h.edge_count(), 0);
        assert_eq!(map.len(), 3);
    }

    #[test]
    fn contract_theta_one_edge() {
        let (h, _) = contract_edges(&theta(), &set(&[0]), true).unwrap();
        assert_eq!(h.vertex_count(), 1);
        assert_eq!(h.edge_count(), 0);
        let (h, _) = contract_edges(&theta(), &set(&[0]), false).unwrap();
        assert_eq!(h.edge_count(), 2);
        assert!(h.edges().iter().all(|e| e.is_loop()));
    }

    #[test]
    fn contract_path_edge() {
        let p = Multigraph::from_pairs(3, &[(0, 1), (1, 2)]).unwrap();
        let (h, map) = contract_edges(&p, &set(&[0]), true).unwrap();
        assert_eq!(h.vertex_count(), 2);
        assert_eq!(h.edge_count(), 1);
        assert_eq!(h.edge(1).unwrap(), &Edge::new(1, 0, 1));
        assert_eq!(map[&0], map[&1]);
    }

    #[test]
    fn contract_unknown_edge() {
        assert_eq!(
            contract_edges(&triangle(), &set(&[9]), true).unwrap_err(),
            Error::UnknownEdge(9)
        );
    }

    #[test]
    fn suppress_theta_subdivision() {
        // branch vertices 0,1; paths 0-1, 0-2-1, 0-3-1
        let h = Multigraph::from_pairs(4, &[(0, 1), (0, 2), (2, 1), (0, 3), (3, 1)]).unwrap();
        let s = suppress_degree2(&h).unwrap();
        assert_eq!(s.base.vertex_count(), 2);
        assert!(s.base.is_cubic());
        let mut lens: Vec<usize> = s.path_map.values().map(Vec::len).collect();
        lens.sort();
        assert_eq!(lens, vec![1, 2, 2]);
        assert_eq!(s.resubdivide().unwrap().normalized(), h.normalized());
    }

    #[test]
    fn suppress_identity_on_cubic() {
        let k4 = Multigraph::from_pairs(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let s = suppress_degree2(&k4).unwrap();
        assert_eq!(s.base, k4);
        assert!(s.path_map.values().all(|p| p.len() == 1));
    }

    #[test]
    fn suppress_rejects_cycle_and_bad_degree() {
        let c6 = Multigraph::from_pairs(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]).unwrap();
        assert_eq!(suppress_degree2(&c6).unwrap_err(), Error::NoBranchVertex);
        let p = Multigraph::from_pairs(2, &[(0, 1)]).unwrap();
        assert!(matches!(suppress_degree2(&p), Err(Error::BadDegree { .. })));
    }

    #[test]
    fn bipartite_cases() {
        let c4 = Multigraph::from_pairs(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let bp = is_bipartite(&c4).unwrap();
        assert_eq!(bp.left, vec![0, 2]);
        assert_eq!(bp.right, vec![1, 3]);
        assert!(is_bipartite(&triangle()).is_none());
        let looped = Multigraph::from_pairs(1, &[(0, 0)]).unwrap();
        assert!(is_bipartite(&looped).is_none());
    }

    #[test]
    fn eulerian_components_forest() {
        let two = Multigraph::from_pairs(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        assert!(is_eulerian(&two));
        assert_eq!(components(&two).len(), 2);
        let p = Multigraph::from_pairs(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(!is_eulerian(&p));
        let c4 = Multigraph::from_pairs(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let f = spanning_forest(&c4);
        assert_eq!(f.len(), 3);
        assert!(is_acyclic(&c4, &f));
        assert!(!is_acyclic(&c4, &set(&[0, 1, 2, 3])));
    }

    #[test]
    fn two_connectivity() {
        assert!(is_two_connected(&theta()));
        assert!(is_two_connected(&triangle()));
        let p = Multigraph::from_pairs(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(!is_two_connected(&p));
    }
}
