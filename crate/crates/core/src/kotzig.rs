//! Kotzig-colorings, recognition of frame components and their perfect
//! colorings.
//!
//! A Kotzig-coloring of a cubic graph is a proper 3-edge-coloring in which
//! the union of any two color classes is a single hamiltonian cycle.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{is_connected, suppress_degree2, EdgeId, Multigraph, Suppressed, VertexId};

/// Colors are `1`, `2`, `3`.
pub type Color = u8;

pub const COLORS: [Color; 3] = [1, 2, 3];

pub type EdgeColoring3 = BTreeMap<EdgeId, Color>;

/// All six permutations of the colors, as images of `[1, 2, 3]`.
pub const COLOR_PERMUTATIONS: [[Color; 3]; 6] = [
    [1, 2, 3],
    [1, 3, 2],
    [2, 1, 3],
    [2, 3, 1],
    [3, 1, 2],
    [3, 2, 1],
];

pub fn is_kotzig_coloring(k: &Multigraph, c: &EdgeColoring3) -> Result<bool> {
    k.require_cubic()?;
    if k.edges().iter().any(|e| !matches!(c.get(&e.id), Some(1..=3))) {
        return Ok(false);
    }
    for &v in k.vertices() {
        let mut seen = [false; 4];
        for e in k.incident(v) {
            if e.is_loop() {
                return Ok(false);
            }
            let col = c[&e.id] as usize;
            if seen[col] {
                return Ok(false);
            }
            seen[col] = true;
        }
    }
    for (x, y) in [(1, 2), (1, 3), (2, 3)] {
        let keep = k
            .edges()
            .iter()
            .filter(|e| c[&e.id] == x || c[&e.id] == y)
            .map(|e| e.id)
            .collect();
        if !is_connected(&k.spanning_subgraph(&keep)) {
            return Ok(false);
        }
    }
    Ok(true)
}

// Backtracking search over proper 3-edge-colorings with a pruning rule: an
// assignment that closes a bicolored cycle shorter than n is abandoned.
struct KotzigSearch<'a> {
    g: &'a Multigraph,
    n: usize,
    // (endpoint a position, endpoint b position, id) in search order
    order: Vec<(usize, usize, EdgeId)>,
    at: Vec<[Option<usize>; 4]>,
    color: Vec<Color>,
}

impl<'a> KotzigSearch<'a> {
    fn new(g: &'a Multigraph) -> Self {
        let pos: BTreeMap<VertexId, usize> = g.vertices().iter().enumerate().map(|(i, &v)| (v, i)).collect();
        // breadth-first edge order from the smallest vertex
        let mut order = Vec::with_capacity(g.edge_count());
        let mut seen_edge = std::collections::BTreeSet::new();
        let mut seen_vertex = std::collections::BTreeSet::new();
        for &root in g.vertices() {
            if !seen_vertex.insert(root) {
                continue;
            }
            let mut queue = VecDeque::from([root]);
            while let Some(v) = queue.pop_front() {
                for e in g.incident(v) {
                    if seen_edge.insert(e.id) {
                        order.push((pos[&e.a], pos[&e.b], e.id));
                    }
                    let w = e.other(v);
                    if seen_vertex.insert(w) {
                        queue.push_back(w);
                    }
                }
            }
        }
        let n = g.vertex_count();
        KotzigSearch {
            g,
            n,
            at: vec![[None; 4]; n],
            color: vec![0; order.len()],
            order,
        }
    }

    // Length of the (x,y)-colored cycle through edge slot `k`, or None if it
    // is still an open path.
    fn closed_cycle_len(&self, k: usize, x: Color, y: Color) -> Option<usize> {
        let (start, mut cur, _) = self.order[k];
        let mut last = self.color[k];
        let mut len = 1;
        loop {
            let next = if last == x { y } else { x };
            let slot = self.at[cur][next as usize]?;
            len += 1;
            let (a, b, _) = self.order[slot];
            cur = if a == cur { b } else { a };
            last = next;
            if cur == start {
                return Some(len);
            }
        }
    }

    fn search(&mut self, k: usize, found: &mut Vec<EdgeColoring3>, limit: usize) {
        if found.len() >= limit {
            return;
        }
        if k == self.order.len() {
            let c: EdgeColoring3 = self.order.iter().zip(&self.color).map(|(&(_, _, id), &col)| (id, col)).collect();
            debug_assert!(is_kotzig_coloring(self.g, &c).unwrap_or(false));
            found.push(c);
            return;
        }
        let (a, b, _) = self.order[k];
        if a == b {
            return;
        }
        for col in COLORS {
            if self.at[a][col as usize].is_some() || self.at[b][col as usize].is_some() {
                continue;
            }
            self.at[a][col as usize] = Some(k);
            self.at[b][col as usize] = Some(k);
            self.color[k] = col;
            let short = COLORS
                .iter()
                .filter(|&&d| d != col)
                .any(|&d| matches!(self.closed_cycle_len(k, col, d), Some(len) if len < self.n));
            if !short {
                self.search(k + 1, found, limit);
            }
            self.at[a][col as usize] = None;
            self.at[b][col as usize] = None;
            self.color[k] = 0;
        }
    }
}

fn search_kotzig(k: &Multigraph, limit: usize) -> Result<Vec<EdgeColoring3>> {
    k.require_cubic()?;
    let mut s = KotzigSearch::new(k);
    let mut found = Vec::new();
    s.search(0, &mut found, limit);
    Ok(found)
}

pub fn find_kotzig_coloring(k: &Multigraph) -> Result<Option<EdgeColoring3>> {
    Ok(search_kotzig(k, 1)?.pop())
}

/// Every Kotzig-coloring of `k` (color permutations counted separately).
pub fn kotzig_colorings(k: &Multigraph) -> Result<Vec<EdgeColoring3>> {
    search_kotzig(k, usize::MAX)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComponentClass {
    Cycle,
    KotzigSubdivision {
        suppressed: Suppressed,
        witness: EdgeColoring3,
    },
    Neither,
}

impl ComponentClass {
    pub fn is_cycle(&self) -> bool {
        matches!(self, ComponentClass::Cycle)
    }

    pub fn is_kotzig(&self) -> bool {
        matches!(self, ComponentClass::KotzigSubdivision { .. })
    }
}

/// Classifies a connected graph as a cycle, a subdivision of a Kotzig graph
/// (a cubic graph counts as its own subdivision), or neither.
pub fn classify_component(h: &Multigraph) -> ComponentClass {
    if h.vertex_count() == 0 {
        return ComponentClass::Neither;
    }
    if h.vertices().iter().all(|&v| h.degree(v) == 2) {
        return if is_connected(h) {
            ComponentClass::Cycle
        } else {
            ComponentClass::Neither
        };
    }
    let Ok(suppressed) = suppress_degree2(h) else {
        return ComponentClass::Neither;
    };
    match find_kotzig_coloring(&suppressed.base) {
        Ok(Some(witness)) => ComponentClass::KotzigSubdivision { suppressed, witness },
        _ => ComponentClass::Neither,
    }
}

/// A 3-total-coloring of (part of) a frame. 3-valent vertices of K-components
/// carry no vertex color.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerfectColoring {
    pub vertex: BTreeMap<VertexId, Color>,
    pub edge: BTreeMap<EdgeId, Color>,
}

impl PerfectColoring {
    pub fn merge(&mut self, other: &PerfectColoring) {
        self.vertex.extend(other.vertex.iter().map(|(&k, &v)| (k, v)));
        self.edge.extend(other.edge.iter().map(|(&k, &v)| (k, v)));
    }

    /// Applies `perm` (image of colors 1, 2, 3) to every color.
    pub fn permuted(&self, perm: [Color; 3]) -> PerfectColoring {
        let p = |c: &Color| perm[*c as usize - 1];
        PerfectColoring {
            vertex: self.vertex.iter().map(|(&k, c)| (k, p(c))).collect(),
            edge: self.edge.iter().map(|(&k, c)| (k, p(c))).collect(),
        }
    }

    /// True when colors first appear in the order 1, 2, 3 scanning edges by
    /// id (vertices if there are no edges). Exactly one member of every
    /// color-permutation orbit of a Kotzig-based coloring has this property.
    pub fn is_color_canonical(&self) -> bool {
        let mut next = 1;
        let seq: Box<dyn Iterator<Item = &Color>> = if self.edge.is_empty() {
            Box::new(self.vertex.values())
        } else {
            Box::new(self.edge.values())
        };
        for &c in seq {
            if c == next {
                next += 1;
            } else if c > next {
                return false;
            }
        }
        true
    }
}

/// Lifts a coloring of the base graph along the subdivided paths.
pub fn lift_coloring(suppressed: &Suppressed, base: &EdgeColoring3) -> PerfectColoring {
    let mut out = PerfectColoring::default();
    for (bid, path) in &suppressed.path_map {
        let c = base[bid];
        for &id in path {
            out.edge.insert(id, c);
        }
        for &v in &suppressed.interior[bid] {
            out.vertex.insert(v, c);
        }
    }
    out
}

/// All perfect colorings of one frame component: the three monochromatic
/// colorings of a cycle, or every Kotzig-coloring of the base lifted.
pub fn enumerate_perfect_colorings(h: &Multigraph, class: &ComponentClass) -> Result<Vec<PerfectColoring>> {
    match class {
        ComponentClass::Cycle => Ok(COLORS
            .iter()
            .map(|&c| PerfectColoring {
                vertex: h.vertices().iter().map(|&v| (v, c)).collect(),
                edge: h.edges().iter().map(|e| (e.id, c)).collect(),
            })
            .collect()),
        ComponentClass::KotzigSubdivision { suppressed, .. } => Ok(kotzig_colorings(&suppressed.base)?
            .iter()
            .map(|c| lift_coloring(suppressed, c))
            .collect()),
        ComponentClass::Neither => Err(Error::BadComponent(h.vertices().first().copied().unwrap_or(0))),
    }
}

/// Checks one component's share of a coloring literally against the
/// definition: monochromatic cycles; for subdivisions, 2-valent vertices and
/// their edges agree and the induced base coloring is Kotzig.
pub fn is_perfect_on_component(h: &Multigraph, class: &ComponentClass, alpha: &PerfectColoring) -> bool {
    match class {
        ComponentClass::Cycle => {
            let Some(&c) = h.edges().first().and_then(|e| alpha.edge.get(&e.id)) else {
                return false;
            };
            h.edges().iter().all(|e| alpha.edge.get(&e.id) == Some(&c))
                && h.vertices().iter().all(|v| alpha.vertex.get(v) == Some(&c))
        }
        ComponentClass::KotzigSubdivision { suppressed, .. } => {
            for &v in h.vertices() {
                if h.degree(v) != 2 {
                    continue;
                }
                let Some(&vc) = alpha.vertex.get(&v) else { return false };
                if h.incident(v).any(|e| alpha.edge.get(&e.id) != Some(&vc)) {
                    return false;
                }
            }
            let mut base = EdgeColoring3::new();
            for (bid, path) in &suppressed.path_map {
                let Some(&c) = alpha.edge.get(&path[0]) else { return false };
                if path.iter().any(|id| alpha.edge.get(id) != Some(&c)) {
                    return false;
                }
                base.insert(*bid, c);
            }
            is_kotzig_coloring(&suppressed.base, &base).unwrap_or(false)
        }
        ComponentClass::Neither => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::named;

    // every proper 3-edge-coloring, edge by edge in id order
    fn proper_colorings_bruteforce(g: &Multigraph) -> Vec<EdgeColoring3> {
        fn rec(g: &Multigraph, k: usize, c: &mut EdgeColoring3, out: &mut Vec<EdgeColoring3>) {
            let Some(e) = g.edges().get(k) else {
                out.push(c.clone());
                return;
            };
            for col in 1..=3 {
                let clash = [e.a, e.b]
                    .iter()
                    .any(|&v| g.incident(v).any(|f| f.id != e.id && c.get(&f.id) == Some(&col)));
                if e.is_loop() || clash {
                    continue;
                }
                c.insert(e.id, col);
                rec(g, k + 1, c, out);
                c.remove(&e.id);
            }
        }
        let mut out = Vec::new();
        rec(g, 0, &mut EdgeColoring3::new(), &mut out);
        out
    }

    // bicolored unions as vertex-disjoint cycles, computed independently
    fn bicolored_cycle_lengths(g: &Multigraph, c: &EdgeColoring3, x: Color, y: Color) -> Vec<usize> {
        let keep = g.edges().iter().filter(|e| c[&e.id] == x || c[&e.id] == y).map(|e| e.id).collect();
        let h = g.spanning_subgraph(&keep);
        crate::graph::components(&h).iter().map(Vec::len).collect()
    }

    #[test]
    fn theta_is_kotzig() {
        let t = named::theta();
        let c: EdgeColoring3 = [(0, 1), (1, 2), (2, 3)].into_iter().collect();
        assert!(is_kotzig_coloring(&t, &c).unwrap());
        assert!(find_kotzig_coloring(&t).unwrap().is_some());
        assert_eq!(kotzig_colorings(&t).unwrap().len(), 6);
    }

    #[test]
    fn every_proper_coloring_of_k4_is_kotzig() {
        let k4 = named::k4();
        let proper = proper_colorings_bruteforce(&k4);
        // K4 has exactly 6 proper 3-edge-colorings (one 1-factorization, 3! labelings)
        assert_eq!(proper.len(), 6);
        for c in &proper {
            for (x, y) in [(1, 2), (1, 3), (2, 3)] {
                assert_eq!(bicolored_cycle_lengths(&k4, c, x, y), vec![4]);
            }
            assert!(is_kotzig_coloring(&k4, c).unwrap());
        }
        assert_eq!(kotzig_colorings(&k4).unwrap().len(), 6);
    }

    #[test]
    fn cube_dimension_coloring_is_not_kotzig() {
        let cube = named::cube();
        // vertices are 3-bit strings; color by the flipped bit
        let c: EdgeColoring3 = cube
            .edges()
            .iter()
            .map(|e| (e.id, ((e.a ^ e.b).trailing_zeros() + 1) as Color))
            .collect();
        for (x, y) in [(1, 2), (1, 3), (2, 3)] {
            assert_eq!(bicolored_cycle_lengths(&cube, &c, x, y), vec![4, 4]);
        }
        assert!(!is_kotzig_coloring(&cube, &c).unwrap());
    }

    #[test]
    fn petersen_and_k33() {
        assert!(proper_colorings_bruteforce(&named::petersen()).is_empty());
        assert!(find_kotzig_coloring(&named::petersen()).unwrap().is_none());
        let k33 = named::k33();
        let brute: Vec<EdgeColoring3> = proper_colorings_bruteforce(&k33)
            .into_iter()
            .filter(|c| {
                [(1, 2), (1, 3), (2, 3)]
                    .iter()
                    .all(|&(x, y)| bicolored_cycle_lengths(&k33, c, x, y) == vec![6])
            })
            .collect();
        assert!(!brute.is_empty());
        let mut found = kotzig_colorings(&k33).unwrap();
        found.sort();
        let mut brute_sorted = brute.clone();
        brute_sorted.sort();
        assert_eq!(found, brute_sorted);
    }

    #[test]
    fn search_agrees_with_bruteforce_on_small_cubic_graphs() {
        for g in [named::k4(), named::prism(), named::cube(), named::k33(), named::theta()] {
            let mut brute: Vec<EdgeColoring3> = proper_colorings_bruteforce(&g)
                .into_iter()
                .filter(|c| {
                    [(1, 2), (1, 3), (2, 3)]
                        .iter()
                        .all(|&(x, y)| bicolored_cycle_lengths(&g, c, x, y) == vec![g.vertex_count()])
                })
                .collect();
            brute.sort();
            let mut found = kotzig_colorings(&g).unwrap();
            found.sort();
            assert_eq!(found, brute);
        }
    }

    #[test]
    fn non_cubic_rejected() {
        let p = Multigraph::from_pairs(2, &[(0, 1)]).unwrap();
        assert!(is_kotzig_coloring(&p, &EdgeColoring3::new()).is_err());
        assert!(find_kotzig_coloring(&p).is_err());
    }

    #[test]
    fn classify_examples() {
        let c6 = Multigraph::from_pairs(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]).unwrap();
        assert_eq!(classify_component(&c6), ComponentClass::Cycle);
        let sub = Multigraph::from_pairs(4, &[(0, 1), (0, 2), (2, 1), (0, 3), (3, 1)]).unwrap();
        match classify_component(&sub) {
            ComponentClass::KotzigSubdivision { suppressed, .. } => {
                assert_eq!(suppressed.base.vertex_count(), 2);
                assert_eq!(suppressed.base.edge_count(), 3);
            }
            other => panic!("unexpected {other:?}"),
        }
        let k2 = Multigraph::from_pairs(2, &[(0, 1)]).unwrap();
        assert_eq!(classify_component(&k2), ComponentClass::Neither);
        assert_eq!(classify_component(&named::petersen()), ComponentClass::Neither);
    }

    #[test]
    fn perfect_colorings_of_components() {
        let c4 = Multigraph::from_pairs(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let cls = classify_component(&c4);
        let frags = enumerate_perfect_colorings(&c4, &cls).unwrap();
        assert_eq!(frags.len(), 3);
        for (f, c) in frags.iter().zip(COLORS) {
            assert!(f.edge.values().chain(f.vertex.values()).all(|&x| x == c));
            assert!(is_perfect_on_component(&c4, &cls, f));
        }

        let sub = Multigraph::from_pairs(4, &[(0, 1), (0, 2), (2, 1), (0, 3), (3, 1)]).unwrap();
        let cls = classify_component(&sub);
        let frags = enumerate_perfect_colorings(&sub, &cls).unwrap();
        assert_eq!(frags.len(), 6);
        for f in &frags {
            assert!(is_perfect_on_component(&sub, &cls, f));
            // 3-valent vertices carry no color
            assert!(!f.vertex.contains_key(&0) && !f.vertex.contains_key(&1));
        }
        assert_eq!(frags.iter().filter(|f| f.is_color_canonical()).count(), 1);

        // one path gets two different edge colors
        let mut bad = frags[0].clone();
        let c = bad.edge[&1];
        bad.edge.insert(1, c % 3 + 1);
        assert!(!is_perfect_on_component(&sub, &cls, &bad));
    }

    #[test]
    fn cubic_component_has_no_colored_vertices() {
        let k4 = named::k4();
        let cls = classify_component(&k4);
        assert!(cls.is_kotzig());
        let frags = enumerate_perfect_colorings(&k4, &cls).unwrap();
        assert_eq!(frags.len(), 6);
        assert!(frags.iter().all(|f| f.vertex.is_empty()));
    }
}
