//! End-to-end run: frame search, well-connected coloring, row graph,
//! amiable coloring, 6-CDC, and a cold re-verification. Stage failures end
//! up in the report; only malformed input is an error.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::cdc::{construct_6cdc, verify_cdc, CdcCertificate, CdcReport};
use crate::coloring::{construct_amiable_main, normalize_for_construction, ConstructionTrace};
use crate::error::{Error, Result};
use crate::frame::{find_well_connected_frame_coloring, search_frames, FrameJson, FrameStrategy, Witness};
use crate::graph::Multigraph;
use crate::kotzig::PerfectColoring;
use crate::rowgraph::{brute_force_amiable, build_row_graph, OracleGuard, RowGraphJson};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Verified,
    /// The strategy produced no frame at all.
    NoFrame,
    /// Frames exist but none has a well-connected perfect coloring.
    NoWitness,
    NoAmiable,
    /// A construction or verification step failed.
    Failed,
}

impl Outcome {
    /// Process exit status for this outcome.
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Verified => 0,
            Outcome::NoFrame | Outcome::NoWitness => 2,
            Outcome::NoAmiable | Outcome::Failed => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageRecord {
    pub stage: String,
    pub ok: bool,
    pub detail: String,
    pub micros: u128,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PipelineOptions {
    #[serde(skip)]
    pub strategy: Option<FrameStrategy>,
    /// Bounds for the brute-force fallback when the construction fails.
    #[serde(skip)]
    pub oracle: OracleGuard,
    /// Stop after this many frames without a witness.
    pub max_frames: Option<usize>,
    pub keep_trace: bool,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            strategy: None,
            oracle: OracleGuard::default(),
            max_frames: None,
            keep_trace: true,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunReport {
    pub name: String,
    pub vertices: usize,
    pub edges: usize,
    pub outcome: Outcome,
    pub frame_found: bool,
    pub well_connected: bool,
    pub amiable_constructed: bool,
    pub cdc_verified: bool,
    pub frames_tried: usize,
    /// Set when the constructive route failed on an input where it should
    /// not, so the instance deserves a closer look.
    pub counterexample_candidate: bool,
    /// "construction" or "oracle".
    pub amiable_method: Option<String>,
    pub frame: Option<FrameJson>,
    pub alpha: Option<PerfectColoring>,
    pub witness: Option<Witness>,
    pub row_graph: Option<RowGraphJson>,
    pub trace: Option<ConstructionTrace>,
    pub certificate: Option<CdcCertificate>,
    pub verification: Option<CdcReport>,
    pub warnings: Vec<String>,
    pub stages: Vec<StageRecord>,
}

impl RunReport {
    fn new(name: &str, g: &Multigraph) -> Self {
        RunReport {
            name: name.to_string(),
            vertices: g.vertex_count(),
            edges: g.edge_count(),
            outcome: Outcome::Failed,
            frame_found: false,
            well_connected: false,
            amiable_constructed: false,
            cdc_verified: false,
            frames_tried: 0,
            counterexample_candidate: false,
            amiable_method: None,
            frame: None,
            alpha: None,
            witness: None,
            row_graph: None,
            trace: None,
            certificate: None,
            verification: None,
            warnings: Vec::new(),
            stages: Vec::new(),
        }
    }

    fn stage(&mut self, stage: &str, ok: bool, detail: impl Into<String>, t: Instant) {
        self.stages.push(StageRecord {
            stage: stage.to_string(),
            ok,
            detail: detail.into(),
            micros: t.elapsed().as_micros(),
        });
    }

    fn finish(mut self, outcome: Outcome) -> Self {
        self.outcome = outcome;
        self
    }
}

pub fn run_pipeline(name: &str, g: &Multigraph, opts: &PipelineOptions) -> Result<RunReport> {
    g.require_cubic()?;
    let mut rep = RunReport::new(name, g);
    let strategy = opts.strategy.clone().unwrap_or(FrameStrategy::TwoFactor);

    let t = Instant::now();
    let frames = match search_frames(g, &strategy) {
        Ok(it) => it,
        Err(e) => {
            rep.stage("frame-search", false, e.to_string(), t);
            return Ok(rep.finish(Outcome::NoFrame));
        }
    };
    let mut found = None;
    for f in frames {
        rep.frames_tried += 1;
        if let Some((alpha, w)) = find_well_connected_frame_coloring(&f) {
            found = Some((f, alpha, w));
            break;
        }
        if opts.max_frames.is_some_and(|m| rep.frames_tried >= m) {
            break;
        }
    }
    rep.frame_found = rep.frames_tried > 0;
    let Some((f, alpha, w)) = found else {
        if rep.frame_found {
            rep.stage("witness", false, format!("none of {} frames is well connected", rep.frames_tried), t);
            return Ok(rep.finish(Outcome::NoWitness));
        }
        rep.stage("frame-search", false, "no frame found by strategy", t);
        return Ok(rep.finish(Outcome::NoFrame));
    };
    rep.well_connected = true;
    rep.warnings.extend(f.warnings().iter().cloned());
    rep.frame = Some(f.to_json());
    rep.stage(
        "frame-search",
        true,
        format!("{} components ({} of kind K) after {} frames", f.len(), f.k_count(), rep.frames_tried),
        t,
    );

    let t = Instant::now();
    let (alpha, w, notes) = match normalize_for_construction(&f, &alpha, &w) {
        Ok(x) => x,
        Err(e) => {
            rep.counterexample_candidate = true;
            rep.stage("normalize", false, e.to_string(), t);
            return Ok(rep.finish(Outcome::Failed));
        }
    };
    rep.alpha = Some(alpha.clone());
    rep.witness = Some(w.clone());
    rep.stage("normalize", true, notes.join("; "), t);

    let t = Instant::now();
    let r = match build_row_graph(&f, &alpha) {
        Ok(r) => r,
        Err(e) => {
            rep.stage("row-graph", false, e.to_string(), t);
            return Ok(rep.finish(Outcome::Failed));
        }
    };
    rep.row_graph = Some(r.to_json());
    rep.stage("row-graph", true, format!("{} columns, {} edges", r.s(), r.edges().len()), t);

    let t = Instant::now();
    let amiable = match construct_amiable_main(&r, &w, f.k_count()) {
        Ok(c) => {
            rep.amiable_method = Some("construction".into());
            if opts.keep_trace {
                rep.trace = Some(c.trace);
            }
            rep.stage("amiable", true, "main construction", t);
            c.coloring
        }
        Err(e) => {
            rep.counterexample_candidate = true;
            rep.stage("amiable", false, e.to_string(), t);
            let t = Instant::now();
            match brute_force_amiable(&r, opts.oracle) {
                Ok(Some(a)) => {
                    rep.amiable_method = Some("oracle".into());
                    rep.stage("amiable-oracle", true, "found by exhaustive search", t);
                    a
                }
                Ok(None) => {
                    rep.stage("amiable-oracle", false, "no amiable coloring exists", t);
                    return Ok(rep.finish(Outcome::NoAmiable));
                }
                Err(e) => {
                    rep.stage("amiable-oracle", false, e.to_string(), t);
                    return Ok(rep.finish(Outcome::NoAmiable));
                }
            }
        }
    };
    rep.amiable_constructed = true;

    let t = Instant::now();
    let cdc = match construct_6cdc(&f, &alpha, &amiable) {
        Ok(c) => c,
        Err(e) => {
            rep.counterexample_candidate = matches!(e, Error::ConstructionInvariant { .. });
            rep.stage("cdc", false, e.to_string(), t);
            return Ok(rep.finish(Outcome::Failed));
        }
    };
    rep.stage("cdc", true, format!("{} cycles", cdc.certificate.cycle_count()), t);

    let t = Instant::now();
    let report = verify_cdc(g, &cdc.certificate);
    rep.cdc_verified = report.valid;
    rep.stage("verify", report.valid, report.violations.join("; "), t);
    rep.verification = Some(report);
    rep.certificate = Some(cdc.certificate);
    let outcome = if rep.cdc_verified { Outcome::Verified } else { Outcome::Failed };
    Ok(rep.finish(outcome))
}

/// Totals over many runs. Merging is associative and commutative.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Aggregate {
    pub instances: usize,
    pub frames_found: usize,
    pub well_connected: usize,
    pub amiable: usize,
    pub verified: usize,
    pub via_oracle: usize,
    pub counterexample_candidates: usize,
    pub failed: Vec<String>,
}

impl Aggregate {
    pub fn add(&mut self, r: &RunReport) {
        self.instances += 1;
        self.frames_found += r.frame_found as usize;
        self.well_connected += r.well_connected as usize;
        self.amiable += r.amiable_constructed as usize;
        self.verified += r.cdc_verified as usize;
        self.via_oracle += (r.amiable_method.as_deref() == Some("oracle")) as usize;
        self.counterexample_candidates += r.counterexample_candidate as usize;
        if r.outcome == Outcome::Failed {
            self.failed.push(r.name.clone());
        }
    }

    pub fn merge(mut self, other: Aggregate) -> Aggregate {
        self.instances += other.instances;
        self.frames_found += other.frames_found;
        self.well_connected += other.well_connected;
        self.amiable += other.amiable;
        self.verified += other.verified;
        self.via_oracle += other.via_oracle;
        self.counterexample_candidates += other.counterexample_candidates;
        self.failed.extend(other.failed);
        self.failed.sort();
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::named;

    fn run(g: &Multigraph, strategy: FrameStrategy) -> RunReport {
        let opts = PipelineOptions {
            strategy: Some(strategy),
            ..Default::default()
        };
        run_pipeline("t", g, &opts).unwrap()
    }

    #[test]
    fn named_graphs() {
        for g in [named::theta(), named::k4(), named::prism(), named::cube(), named::k33()] {
            let rep = run(&g, FrameStrategy::Exhaustive { max_edges: 30 });
            assert_eq!(rep.outcome, Outcome::Verified, "{:?}", rep.stages);
            assert_eq!(rep.amiable_method.as_deref(), Some("construction"));
            assert!(verify_cdc(&g, rep.certificate.as_ref().unwrap()).valid);
        }
    }

    #[test]
    fn petersen_needs_exhaustive_search() {
        let p = named::petersen();
        let rep = run(&p, FrameStrategy::TwoFactor);
        assert_eq!(rep.outcome, Outcome::NoFrame);
        assert!(rep.stages.iter().any(|s| s.detail.contains("no frame found by strategy")));
        let rep = run(&p, FrameStrategy::Exhaustive { max_edges: 30 });
        assert_eq!(rep.outcome, Outcome::Verified);
    }

    #[test]
    fn non_cubic_input_is_an_error() {
        let g = Multigraph::from_pairs(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(run_pipeline("p", &g, &PipelineOptions::default()).is_err());
    }

    #[test]
    fn aggregate_merge_is_associative() {
        let g = named::theta();
        let r = run(&g, FrameStrategy::TwoFactor);
        let mut a = Aggregate::default();
        a.add(&r);
        let b = a.clone();
        let mut c = Aggregate::default();
        c.add(&run(&named::petersen(), FrameStrategy::TwoFactor));
        assert_eq!(a.clone().merge(b.clone()).merge(c.clone()), a.merge(b.merge(c)));
    }
}
