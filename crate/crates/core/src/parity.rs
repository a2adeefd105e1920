//! Red/blue switching, straightening 2-row graphs, and acyclic t-joins.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{bfs_forest, components, contract_edges, is_acyclic, is_bipartite, EdgeId, Multigraph, VertexId};
use crate::rowgraph::{rearrange, Rearrangement, RowGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Shade {
    Red,
    Blue,
}

impl Shade {
    pub fn flipped(self) -> Shade {
        match self {
            Shade::Red => Shade::Blue,
            Shade::Blue => Shade::Red,
        }
    }
}

/// A total red/blue edge coloring.
pub type TwoColoring = BTreeMap<EdgeId, Shade>;

/// Vertices to switch, in order; repeats allowed.
pub type SwitchSequence = Vec<VertexId>;

/// Flips every non-loop edge at `v`.
pub fn apply_switch(g: &Multigraph, c: &TwoColoring, v: VertexId) -> Result<TwoColoring> {
    if !g.has_vertex(v) {
        return Err(Error::UnknownVertex(v));
    }
    let mut out = c.clone();
    for e in g.incident(v).filter(|e| !e.is_loop()) {
        if let Some(s) = out.get_mut(&e.id) {
            *s = s.flipped();
        }
    }
    Ok(out)
}

pub fn apply_switches(g: &Multigraph, c: &TwoColoring, seq: &[VertexId]) -> Result<TwoColoring> {
    seq.iter().try_fold(c.clone(), |acc, &v| apply_switch(g, &acc, v))
}

fn is_all_blue(g: &Multigraph, c: &TwoColoring) -> bool {
    g.edges().iter().all(|e| c.get(&e.id) == Some(&Shade::Blue))
}

/// Contract the blue edges (keeping the loops this creates); a switch set
/// exists iff the result is bipartite. The returned set switches every
/// vertex whose blob lies on the side not containing the smallest blob.
pub fn switchable_to_blue(g: &Multigraph, c: &TwoColoring) -> Option<SwitchSequence> {
    let blue: BTreeSet<EdgeId> = g
        .edges()
        .iter()
        .filter(|e| c.get(&e.id) == Some(&Shade::Blue))
        .map(|e| e.id)
        .collect();
    let (gb, map) = contract_edges(g, &blue, false).expect("blue edges belong to g");
    let sides = is_bipartite(&gb)?;
    Some(g.vertices().iter().copied().filter(|v| !sides.is_left(map[v])).collect())
}

/// Tries every subset of vertices. Exponential; for tests and small inputs.
pub fn switchable_to_blue_bruteforce(g: &Multigraph, c: &TwoColoring) -> Option<SwitchSequence> {
    let vs = g.vertices();
    assert!(vs.len() < 64, "brute force over 2^|V| subsets needs |V| < 64");
    for mask in 0u64..(1u64 << vs.len()) {
        let seq: SwitchSequence = (0..vs.len()).filter(|&k| mask >> k & 1 == 1).map(|k| vs[k]).collect();
        let out = apply_switches(g, c, &seq).expect("vertices of g");
        if is_all_blue(g, &out) {
            return Some(seq);
        }
    }
    None
}

/// Swaps the two rows in the listed columns of a 2-row graph.
pub fn swap_rows_in(r2: &RowGraph, columns: &BTreeSet<usize>) -> Rearrangement {
    let mut rr = Rearrangement::identity(r2.rows(), r2.s());
    for &j in columns {
        rr.row_perms[j] = vec![1, 0];
    }
    rr
}

/// Columns `U` such that swapping rows in `U` leaves no edge between the two
/// rows. Needs the column contraction to be a forest.
pub fn resolve_two_row(r2: &RowGraph) -> Result<BTreeSet<usize>> {
    if r2.rows() != 2 {
        return Err(Error::MalformedRowGraph(format!("expected 2 rows, found {}", r2.rows())));
    }
    let rc = r2.column_contraction();
    if !is_acyclic(&rc, &rc.edge_ids().collect()) {
        return Err(Error::NotAForest);
    }
    let coloring: TwoColoring = r2
        .edges()
        .iter()
        .map(|e| (e.id, if e.a.row != e.b.row { Shade::Red } else { Shade::Blue }))
        .collect();
    let u: BTreeSet<usize> = switchable_to_blue(&rc, &coloring)
        .expect("forests are bipartite after any contraction")
        .into_iter()
        .collect();
    let straightened = rearrange(r2, &swap_rows_in(r2, &u))?;
    debug_assert!(straightened.edges().iter().all(|e| e.a.row == e.b.row));
    Ok(u)
}

/// A forest whose odd-degree vertices are exactly `t`. Built on the BFS
/// forest (roots at the smallest vertex id) by toggling parities from the
/// leaves up.
pub fn acyclic_t_join(g: &Multigraph, t: &BTreeSet<VertexId>) -> Result<BTreeSet<EdgeId>> {
    for &v in t {
        if !g.has_vertex(v) {
            return Err(Error::UnknownVertex(v));
        }
    }
    for comp in components(g) {
        if comp.iter().filter(|v| t.contains(v)).count() % 2 == 1 {
            return Err(Error::OddTerminals(comp[0]));
        }
    }
    let forest = bfs_forest(g);
    let mut odd: BTreeSet<VertexId> = t.clone();
    let mut join = BTreeSet::new();
    for &v in forest.order.iter().rev() {
        if !odd.contains(&v) {
            continue;
        }
        if let Some(&(p, e)) = forest.parent.get(&v) {
            join.insert(e);
            odd.remove(&v);
            if !odd.remove(&p) {
                odd.insert(p);
            }
        }
    }
    debug_assert!(odd.is_empty());
    Ok(join)
}

/// Vertices of odd degree in the spanning subgraph on `edges`.
pub fn odd_vertices(g: &Multigraph, edges: &BTreeSet<EdgeId>) -> BTreeSet<VertexId> {
    let mut odd = BTreeSet::new();
    for &id in edges {
        let e = g.edge(id).expect("edge of g");
        for v in [e.a, e.b] {
            if !odd.remove(&v) {
                odd.insert(v);
            }
        }
    }
    odd
}

#[cfg(test)]
mod tests {
    use super::*;

    fn colored(g: &Multigraph, shades: &[Shade]) -> TwoColoring {
        g.edge_ids().zip(shades.iter().copied()).collect()
    }

    use Shade::{Blue, Red};

    #[test]
    fn switch_examples() {
        let g = Multigraph::from_pairs(2, &[(0, 1)]).unwrap();
        let c = colored(&g, &[Red]);
        assert_eq!(apply_switch(&g, &c, 0).unwrap()[&0], Blue);
        let l = Multigraph::from_pairs(1, &[(0, 0)]).unwrap();
        let c = colored(&l, &[Red]);
        assert_eq!(apply_switch(&l, &c, 0).unwrap()[&0], Red);
        let p = Multigraph::from_pairs(3, &[(0, 1), (1, 2)]).unwrap();
        let c = colored(&p, &[Red, Blue]);
        assert_eq!(apply_switches(&p, &c, &[1, 1]).unwrap(), c);
        assert!(apply_switch(&p, &c, 9).is_err());
    }

    #[test]
    fn switchable_examples() {
        let p = Multigraph::from_pairs(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let c = colored(&p, &[Red, Blue, Red]);
        let seq = switchable_to_blue(&p, &c).unwrap();
        assert!(is_all_blue(&p, &apply_switches(&p, &c, &seq).unwrap()));
        let tri = Multigraph::from_pairs(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(switchable_to_blue(&tri, &colored(&tri, &[Red, Red, Red])).is_none());
        let theta = Multigraph::from_pairs(2, &[(0, 1), (0, 1)]).unwrap();
        assert!(switchable_to_blue(&theta, &colored(&theta, &[Red, Blue])).is_none());
        assert!(switchable_to_blue_bruteforce(&theta, &colored(&theta, &[Red, Blue])).is_none());
    }

    #[test]
    fn resolve_two_row_examples() {
        let r = RowGraph::from_tuples(2, 2, &[(0, 0, 1, 1)]).unwrap();
        let u = resolve_two_row(&r).unwrap();
        assert_eq!(u.len(), 1);
        assert!(resolve_two_row(&RowGraph::from_tuples(2, 3, &[]).unwrap()).unwrap().is_empty());
        let r = RowGraph::from_tuples(2, 3, &[(0, 0, 1, 1), (1, 0, 0, 2)]).unwrap();
        let u = resolve_two_row(&r).unwrap();
        let out = rearrange(&r, &swap_rows_in(&r, &u)).unwrap();
        assert!(out.edges().iter().all(|e| e.a.row == e.b.row));
        let cyc = RowGraph::from_tuples(2, 2, &[(0, 0, 1, 1), (0, 0, 0, 1)]).unwrap();
        assert_eq!(resolve_two_row(&cyc), Err(Error::NotAForest));
    }

    #[test]
    fn t_join_examples() {
        let p = Multigraph::from_pairs(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(acyclic_t_join(&p, &BTreeSet::from([0, 2])).unwrap(), BTreeSet::from([0, 1]));
        assert!(acyclic_t_join(&p, &BTreeSet::new()).unwrap().is_empty());
        assert!(matches!(acyclic_t_join(&p, &BTreeSet::from([1])), Err(Error::OddTerminals(0))));
        let tri = Multigraph::from_pairs(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let t = BTreeSet::from([1, 2]);
        let j = acyclic_t_join(&tri, &t).unwrap();
        assert!(is_acyclic(&tri, &j));
        assert_eq!(odd_vertices(&tri, &j), t);
        // brute force: every acyclic join of {1, 2} in the triangle
        let joins: Vec<BTreeSet<EdgeId>> = (0u32..8)
            .map(|m| (0..3).filter(|k| m >> k & 1 == 1).collect::<BTreeSet<EdgeId>>())
            .filter(|s| is_acyclic(&tri, s) && odd_vertices(&tri, s) == t)
            .collect();
        assert_eq!(joins.len(), 2);
        assert!(joins.contains(&j));
    }
}
