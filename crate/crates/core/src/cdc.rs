//! Assembling a 6-cycle double cover from an amiable coloring, and checking
//! cycle double cover certificates independently of how they were built.
//!
//! For each color `i` the host edges split into `H_i` (frame edges not of
//! color `i`), `E_i` (row-graph edges with `g = i`) and `X_i` (a share of the
//! chords). `H_i` is a disjoint union of even cycles and `E_i ∪ X_i` is a
//! matching on their vertices, so `J_i` has a two-class cycle cover using
//! `H_i` once and the matching twice.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::graph::{components, EdgeId, Multigraph, VertexId};
use crate::kotzig::{Color, PerfectColoring, COLORS};
use crate::rowgraph::{build_row_graph, check_amiable, AmiableColoring};

pub const CLASS_LABELS: [&str; 6] = ["1a", "1b", "2a", "2b", "3a", "3b"];

/// `{classes: {"1a": [[edge ids], ...], ...}}`; each inner list is one cycle
/// in traversal order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CdcCertificate {
    pub classes: BTreeMap<String, Vec<Vec<EdgeId>>>,
}

impl CdcCertificate {
    pub fn cycles(&self) -> impl Iterator<Item = (&str, &Vec<EdgeId>)> + '_ {
        self.classes
            .iter()
            .flat_map(|(label, cs)| cs.iter().map(move |c| (label.as_str(), c)))
    }

    pub fn cycle_count(&self) -> usize {
        self.classes.values().map(Vec::len).sum()
    }
}

/// Chord class of every chord: the smallest color avoiding both endpoint
/// colors.
pub fn partition_chords(f: &Frame, alpha: &PerfectColoring) -> [BTreeSet<EdgeId>; 3] {
    let mut out: [BTreeSet<EdgeId>; 3] = Default::default();
    for &id in f.chords() {
        let e = f.host().edge(id).expect("chord of the host");
        let (x, y) = (alpha.vertex.get(&e.a), alpha.vertex.get(&e.b));
        let i = COLORS
            .iter()
            .copied()
            .find(|c| Some(c) != x && Some(c) != y)
            .expect("at most two colors are excluded");
        out[i as usize - 1].insert(id);
    }
    out
}

/// Walks a 2-regular edge set and returns its cycles as edge sequences,
/// each starting at its smallest edge id.
fn trace_cycles(g: &Multigraph, edges: &BTreeSet<EdgeId>) -> Result<Vec<Vec<EdgeId>>> {
    let mut at: BTreeMap<VertexId, Vec<EdgeId>> = BTreeMap::new();
    for &id in edges {
        let e = g.edge(id).ok_or(Error::UnknownEdge(id))?;
        at.entry(e.a).or_default().push(id);
        at.entry(e.b).or_default().push(id);
    }
    if let Some((v, es)) = at.iter().find(|(_, es)| es.len() != 2) {
        return Err(Error::CoverInput(format!("vertex {v} has degree {} in a cycle set", es.len())));
    }
    let mut left = edges.clone();
    let mut out = Vec::new();
    while let Some(&start) = left.iter().next() {
        let e0 = g.edge(start).expect("checked");
        let mut cycle = vec![start];
        left.remove(&start);
        let mut cur = e0.b;
        let mut prev = start;
        loop {
            let next = at[&cur].iter().copied().find(|&x| x != prev || at[&cur][0] == at[&cur][1]);
            let Some(next) = next.filter(|x| left.contains(x)) else { break };
            left.remove(&next);
            cycle.push(next);
            cur = g.edge(next).expect("checked").other(cur);
            prev = next;
        }
        out.push(cycle);
    }
    Ok(out)
}

/// Cycle cover of `C ∪ M` using every `C` edge once and every `M` edge twice,
/// split into two classes of pairwise edge-disjoint cycles.
///
/// Attachment points (ends of `M` edges) are 2-colored alternately around
/// each cycle of `C`, starting at the smallest attachment and walking toward
/// its smaller neighbor; class a follows the segments after even-numbered
/// attachments. Cycles without attachments go to class a.
pub fn two_cycle_cover_even(
    g: &Multigraph,
    c_edges: &BTreeSet<EdgeId>,
    m_edges: &BTreeSet<EdgeId>,
) -> Result<(Vec<Vec<EdgeId>>, Vec<Vec<EdgeId>>)> {
    let c = g.spanning_subgraph(c_edges);
    let mut attach: BTreeSet<VertexId> = BTreeSet::new();
    for &id in m_edges {
        let e = g.edge(id).ok_or(Error::UnknownEdge(id))?;
        if e.is_loop() || c_edges.contains(&id) {
            return Err(Error::CoverInput(format!("matching edge {id} is a loop or lies on a cycle")));
        }
        for v in [e.a, e.b] {
            if c.degree(v) != 2 {
                return Err(Error::CoverInput(format!("matching edge {id} ends at {v}, which is not on a cycle")));
            }
            if !attach.insert(v) {
                return Err(Error::CoverInput(format!("vertex {v} meets two matching edges")));
            }
        }
    }
    let mut class_a_edges: BTreeSet<EdgeId> = m_edges.clone();
    let mut class_b_edges: BTreeSet<EdgeId> = m_edges.clone();
    let mut lone = Vec::new();
    for comp in components(&c) {
        if comp.len() == 1 && c.degree(comp[0]) == 0 {
            continue;
        }
        if comp.iter().any(|&v| c.degree(v) != 2) {
            return Err(Error::CoverInput(format!("cycle set is not 2-regular at vertex {}", comp[0])));
        }
        let points: Vec<VertexId> = comp.iter().copied().filter(|v| attach.contains(v)).collect();
        let comp_edges: BTreeSet<EdgeId> = comp.iter().flat_map(|&v| c.incident(v).map(|e| e.id)).collect();
        if points.is_empty() {
            lone.extend(trace_cycles(g, &comp_edges)?);
            continue;
        }
        if points.len() % 2 == 1 {
            return Err(Error::CoverInput(format!(
                "cycle through vertex {} has {} attachments",
                comp[0],
                points.len()
            )));
        }
        // walk the cycle from the smallest attachment toward its smaller neighbor
        let start = points[0];
        let mut first: Vec<(VertexId, EdgeId)> = c.incident(start).map(|e| (e.other(start), e.id)).collect();
        first.sort();
        let (mut cur, mut via) = first[0];
        let mut segment = 0usize;
        let mut walked = BTreeSet::new();
        loop {
            walked.insert(via);
            if segment % 2 == 0 {
                class_a_edges.insert(via);
            } else {
                class_b_edges.insert(via);
            }
            if cur == start {
                break;
            }
            if attach.contains(&cur) {
                segment += 1;
            }
            let next = c
                .incident(cur)
                .find(|e| e.id != via && !walked.contains(&e.id))
                .expect("cycle continues");
            via = next.id;
            cur = next.other(cur);
        }
        if walked.len() != comp_edges.len() {
            return Err(Error::CoverInput(format!("component at vertex {} is not a single cycle", comp[0])));
        }
    }
    let mut a = trace_cycles(g, &class_a_edges)?;
    a.extend(lone);
    let b = trace_cycles(g, &class_b_edges)?;
    Ok((a, b))
}

/// The three subgraphs `J_i = H_i ∪ E_i ∪ X_i` (index 0 is color 1).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct JDecomposition {
    pub h: [BTreeSet<EdgeId>; 3],
    pub e: [BTreeSet<EdgeId>; 3],
    pub x: [BTreeSet<EdgeId>; 3],
}

impl JDecomposition {
    pub fn j(&self, i: usize) -> BTreeSet<EdgeId> {
        self.h[i].iter().chain(&self.e[i]).chain(&self.x[i]).copied().collect()
    }
}

/// Recolors each component by its column's vertex colors so that the
/// amiable coloring has `f(v_ij) = i`.
pub fn fold_vertex_colors(f: &Frame, alpha: &PerfectColoring, a: &AmiableColoring) -> PerfectColoring {
    let mut out = PerfectColoring::default();
    for (j, comp) in f.components().iter().enumerate() {
        let sigma = |c: Color| a.f[j][c as usize - 1];
        for &v in &comp.vertices {
            if let Some(&c) = alpha.vertex.get(&v) {
                out.vertex.insert(v, sigma(c));
            }
        }
        for &e in &comp.edges {
            if let Some(&c) = alpha.edge.get(&e) {
                out.edge.insert(e, sigma(c));
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct CdcConstruction {
    pub certificate: CdcCertificate,
    pub decomposition: JDecomposition,
    /// The perfect coloring after folding in the vertex colors.
    pub alpha: PerfectColoring,
}

/// Builds the 6-CDC from an amiable coloring of `R(G,F,alpha)`.
pub fn construct_6cdc(f: &Frame, alpha: &PerfectColoring, a: &AmiableColoring) -> Result<CdcConstruction> {
    let r = build_row_graph(f, alpha)?;
    check_amiable(&r, a).map_err(Error::NotAmiable)?;
    let folded = fold_vertex_colors(f, alpha, a);
    let g = f.host();
    let mut d = JDecomposition {
        x: partition_chords(f, &folded),
        ..Default::default()
    };
    for e in r.edges() {
        let host = e.origin.unwrap_or(e.id);
        let c = a.g[&e.id];
        d.e[c as usize - 1].insert(host);
    }
    for &id in f.frame_edges() {
        let c = folded.edge[&id];
        for i in COLORS.iter().filter(|&&i| i != c) {
            d.h[*i as usize - 1].insert(id);
        }
    }
    let mut cert = CdcCertificate::default();
    for i in 0..3 {
        let matching: BTreeSet<EdgeId> = d.e[i].union(&d.x[i]).copied().collect();
        let (ca, cb) = two_cycle_cover_even(g, &d.h[i], &matching).map_err(|err| Error::ConstructionInvariant {
            stage: "two-cycle cover",
            detail: format!("color {}: {err}", i + 1),
        })?;
        cert.classes.insert(CLASS_LABELS[2 * i].to_string(), ca);
        cert.classes.insert(CLASS_LABELS[2 * i + 1].to_string(), cb);
    }
    let report = verify_cdc(g, &cert);
    if !report.valid {
        return Err(Error::ConstructionInvariant {
            stage: "certificate",
            detail: report.violations.join("; "),
        });
    }
    Ok(CdcConstruction {
        certificate: cert,
        decomposition: d,
        alpha: folded,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CdcReport {
    pub valid: bool,
    pub violations: Vec<String>,
    pub under_covered: Vec<EdgeId>,
    pub over_covered: Vec<EdgeId>,
    pub cycles: usize,
    pub classes: usize,
}

/// Checks every certificate condition from scratch: known labels (at most
/// six classes), each cycle connected and 2-regular, cycles within a class
/// edge-disjoint, and every host edge covered exactly twice.
pub fn verify_cdc(g: &Multigraph, cert: &CdcCertificate) -> CdcReport {
    let mut rep = CdcReport {
        cycles: cert.cycle_count(),
        classes: cert.classes.len(),
        ..Default::default()
    };
    let mut cover: BTreeMap<EdgeId, usize> = g.edge_ids().map(|id| (id, 0)).collect();
    for (label, cycles) in &cert.classes {
        if !CLASS_LABELS.contains(&label.as_str()) {
            rep.violations.push(format!("unknown class label {label:?}"));
        }
        let mut used: BTreeSet<EdgeId> = BTreeSet::new();
        for (k, cyc) in cycles.iter().enumerate() {
            let name = format!("class {label} cycle {k}");
            if cyc.is_empty() {
                rep.violations.push(format!("{name} is empty"));
                continue;
            }
            let set: BTreeSet<EdgeId> = cyc.iter().copied().collect();
            if set.len() != cyc.len() {
                rep.violations.push(format!("{name} repeats an edge"));
            }
            if let Some(bad) = set.iter().find(|id| g.edge(**id).is_none()) {
                rep.violations.push(format!("{name} uses unknown edge {bad}"));
                continue;
            }
            let sub = g.spanning_subgraph(&set);
            let touched: Vec<VertexId> = g.vertices().iter().copied().filter(|&v| sub.degree(v) > 0).collect();
            if let Some(v) = touched.iter().find(|&&v| sub.degree(v) != 2) {
                rep.violations.push(format!("{name} has degree {} at vertex {v}", sub.degree(*v)));
            }
            let keep: BTreeSet<VertexId> = touched.iter().copied().collect();
            if components(&sub.induced_subgraph(&keep)).len() != 1 {
                rep.violations.push(format!("{name} is not connected"));
            }
            for &id in &set {
                if !used.insert(id) {
                    rep.violations.push(format!("class {label} uses edge {id} twice"));
                }
                *cover.entry(id).or_insert(0) += 1;
            }
        }
    }
    for (&id, &n) in &cover {
        if n < 2 {
            rep.under_covered.push(id);
        } else if n > 2 {
            rep.over_covered.push(id);
        }
    }
    if !rep.under_covered.is_empty() {
        rep.violations.push(format!("edges covered fewer than twice: {:?}", rep.under_covered));
    }
    if !rep.over_covered.is_empty() {
        rep.violations.push(format!("edges covered more than twice: {:?}", rep.over_covered));
    }
    rep.valid = rep.violations.is_empty();
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::{find_well_connected_frame_coloring, validate_frame, ComponentKind};
    use crate::graph::suppress_degree2;
    use crate::named;
    use crate::rowgraph::{brute_force_amiable, OracleGuard};

    fn whole_graph_frame(g: &Multigraph) -> CdcConstruction {
        let f = validate_frame(g, &g.edge_ids().collect()).unwrap();
        let (alpha, _) = find_well_connected_frame_coloring(&f).unwrap();
        let r = build_row_graph(&f, &alpha).unwrap();
        let a = brute_force_amiable(&r, OracleGuard::default()).unwrap().unwrap();
        construct_6cdc(&f, &alpha, &a).unwrap()
    }

    #[test]
    fn theta_gives_three_digons() {
        let t = named::theta();
        let c = whole_graph_frame(&t);
        assert!(verify_cdc(&t, &c.certificate).valid);
        assert_eq!(c.certificate.cycle_count(), 3);
        assert!(c.certificate.cycles().all(|(_, cyc)| cyc.len() == 2));
    }

    #[test]
    fn k4_gives_three_bicolored_squares() {
        let k4 = named::k4();
        let c = whole_graph_frame(&k4);
        assert_eq!(c.certificate.cycle_count(), 3);
        for (_, cyc) in c.certificate.cycles() {
            assert_eq!(cyc.len(), 4);
            let colors: BTreeSet<Color> = cyc.iter().map(|e| c.alpha.edge[e]).collect();
            assert_eq!(colors.len(), 2);
        }
    }

    #[test]
    fn chord_classes() {
        // prism with a hamiltonian cycle: all three chords join color-1 vertices
        let p = named::prism();
        let f = validate_frame(&p, &[0, 1, 8, 4, 3, 6].into_iter().collect()).unwrap();
        let mut alpha = PerfectColoring::default();
        alpha.vertex.extend(p.vertices().iter().map(|&v| (v, 1)));
        alpha.edge.extend(f.frame_edges().iter().map(|&e| (e, 1)));
        let x = partition_chords(&f, &alpha);
        assert_eq!(x[1].len(), 3);
        assert!(x[0].is_empty() && x[2].is_empty());
        // a chord between colors 1 and 2 is forced into class 3
        let mut mixed = alpha.clone();
        let chord = *f.chords().iter().next().unwrap();
        let e = *p.edge(chord).unwrap();
        mixed.vertex.insert(e.b, 2);
        assert!(partition_chords(&f, &mixed)[2].contains(&chord));
        let k4 = named::k4();
        let fk = validate_frame(&k4, &k4.edge_ids().collect()).unwrap();
        assert!(partition_chords(&fk, &PerfectColoring::default()).iter().all(BTreeSet::is_empty));
    }

    #[test]
    fn two_cycle_cover_examples() {
        // 4-cycle 0-1-2-3 with chord 0-2
        let g = Multigraph::from_pairs(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap();
        let (a, b) = two_cycle_cover_even(&g, &[0, 1, 2, 3].into_iter().collect(), &BTreeSet::from([4])).unwrap();
        assert_eq!((a.len(), b.len()), (1, 1));
        assert_eq!(a[0].len(), 3);
        assert_eq!(b[0].len(), 3);
        // no attachments
        let (a, b) = two_cycle_cover_even(&g, &[0, 1, 2, 3].into_iter().collect(), &BTreeSet::new()).unwrap();
        assert_eq!((a.len(), b.len()), (1, 0));
        // odd attachments rejected
        let h = Multigraph::from_pairs(6, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (4, 5), (5, 4)]).unwrap();
        assert!(two_cycle_cover_even(&h, &[0, 1, 2, 3].into_iter().collect(), &BTreeSet::from([4])).is_err());
    }

    #[test]
    fn petersen_theta_frame_cover() {
        let pet = named::petersen();
        let f = crate::frame::search_frames(&pet, &crate::frame::FrameStrategy::Exhaustive { max_edges: 30 })
            .unwrap()
            .find(|f| f.len() == 1)
            .expect("one-component frame");
        let (alpha, _) = find_well_connected_frame_coloring(&f).unwrap();
        let r = build_row_graph(&f, &alpha).unwrap();
        let a = brute_force_amiable(&r, OracleGuard::default()).unwrap().unwrap();
        let c = construct_6cdc(&f, &alpha, &a).unwrap();
        assert!(verify_cdc(&pet, &c.certificate).valid);
        // each H_i restricted to the K-component is one cycle through every branch vertex
        let comp = &f.components()[0];
        assert_eq!(comp.kind, ComponentKind::K);
        let branch: BTreeSet<VertexId> = suppress_degree2(&comp.subgraph).unwrap().base.vertices().iter().copied().collect();
        for i in 0..3 {
            let sub = pet.spanning_subgraph(&c.decomposition.h[i]);
            let touched: BTreeSet<VertexId> = pet.vertices().iter().copied().filter(|&v| sub.degree(v) > 0).collect();
            assert!(branch.is_subset(&touched));
            assert_eq!(components(&sub.induced_subgraph(&touched)).len(), 1);
        }
    }

    #[test]
    fn verify_rejects_tampering() {
        let t = named::theta();
        let good = whole_graph_frame(&t).certificate;
        let mut missing = good.clone();
        let label = missing.classes.keys().find(|k| !missing.classes[*k].is_empty()).unwrap().clone();
        missing.classes.get_mut(&label).unwrap().pop();
        let rep = verify_cdc(&t, &missing);
        assert!(!rep.valid);
        assert_eq!(rep.under_covered.len(), 2);
        let mut dup = good.clone();
        let cyc = dup.classes[&label][0].clone();
        dup.classes.get_mut(&label).unwrap().push(cyc);
        let rep = verify_cdc(&t, &dup);
        assert!(rep.violations.iter().any(|v| v.contains("twice")));
        let mut junk = good;
        junk.classes.insert("7z".into(), vec![vec![0, 0]]);
        assert!(!verify_cdc(&t, &junk).valid);
    }
}
