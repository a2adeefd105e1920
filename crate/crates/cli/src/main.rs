//! kcdc: build and check 6-cycle double covers of cubic graphs from
//! well-connected Kotzig-frames.
//!
//! Exit codes: 0 verified, 1 verification failure, 2 no frame or witness,
//! 3 input error.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use kotzig_cdc::cdc::{verify_cdc, CdcCertificate};
use kotzig_cdc::enumerate::{cubic_corpus, scan_amiability};
use kotzig_cdc::frame::{FrameJson, FrameStrategy};
use kotzig_cdc::io::{graph_from_json, graph_to_json, parse_graph6_file, to_graph6};
use kotzig_cdc::pipeline::{run_pipeline, Aggregate, Outcome, PipelineOptions, RunReport};
use kotzig_cdc::rowgraph::OracleGuard;
use kotzig_cdc::{named, Multigraph};
use rayon::prelude::*;
use serde::Serialize;

const EXIT_INPUT: i32 = 3;

#[derive(Parser)]
#[command(
    name = "kcdc",
    about = "6-cycle double covers of cubic graphs via well-connected Kotzig-frames",
    after_help = "EXAMPLES:\n\
                  \n  kcdc pipeline named:petersen --frame-strategy exhaustive\
                  \n  kcdc pipeline graph.g6 --certificate cdc.json --trace trace.json\
                  \n  kcdc verify graph.json cdc.json\
                  \n  kcdc enumerate-cubic --max-n 10 --out corpus/\
                  \n  kcdc corpus corpus/ --jobs 4\
                  \n  kcdc scan-amiable --s-max 2 --edge-max 6 --archive found/"
)]
struct Cli {
    #[command(subcommand)]
    command: Commands,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    TwoFactor,
    Exhaustive,
    File,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Graph6,
    Json,
}

#[derive(clap::Args, Clone)]
struct RunOpts {
    /// How frames are found
    #[arg(long, value_enum, default_value = "two-factor")]
    frame_strategy: StrategyArg,
    /// Frame JSON file, required with --frame-strategy file
    #[arg(long)]
    frame_file: Option<PathBuf>,
    /// Edge bound for the exhaustive searches (frames and amiable fallback)
    #[arg(long, default_value_t = 30)]
    oracle_limit: usize,
    /// Give up after this many frames without a well-connected coloring
    #[arg(long)]
    max_frames: Option<usize>,
}

#[derive(Subcommand)]
enum Commands {
    /// Run frame search, construction and verification on one graph
    Pipeline {
        /// Graph file (graph6/sparse6 or JSON), or named:<theta|k4|k33|prism|cube|petersen>
        graph: String,
        /// Input format (default: guess from the content)
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
        #[command(flatten)]
        run: RunOpts,
        /// Write the construction trace, row graph and coloring here
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Write the certificate here
        #[arg(long)]
        certificate: Option<PathBuf>,
        /// Write the full JSON report here ("-" for stdout)
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Check a certificate against a graph (exit 0 valid, 1 invalid)
    Verify {
        graph: String,
        certificate: PathBuf,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
    },
    /// Run the pipeline on every graph file in a directory
    Corpus {
        dir: PathBuf,
        #[command(flatten)]
        run: RunOpts,
        /// Worker threads
        #[arg(long, env = "KCDC_JOBS")]
        jobs: Option<usize>,
        /// Write per-instance reports and totals here
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Look for 3-row graphs with eulerian column contraction and no amiable coloring
    ScanAmiable {
        #[arg(long, default_value_t = 2)]
        s_max: usize,
        #[arg(long, default_value_t = 6)]
        edge_max: usize,
        /// Edge bound for the exhaustive search
        #[arg(long, default_value_t = 24)]
        oracle_limit: usize,
        /// Directory receiving each candidate as soon as it is found
        #[arg(long)]
        archive: Option<PathBuf>,
        #[arg(long, env = "KCDC_JOBS")]
        jobs: Option<usize>,
    },
    /// Write the θ-graph and all connected simple cubic graphs up to N vertices
    EnumerateCubic {
        #[arg(long, default_value_t = 10)]
        max_n: usize,
        /// Output directory (one file per graph); prints graph6 lines if omitted
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
    },
}

fn parse_graphs(text: &str, format: Option<FormatArg>) -> Result<Vec<Multigraph>> {
    let json = match format {
        Some(f) => f == FormatArg::Json,
        None => text.trim_start().starts_with('{'),
    };
    if json {
        Ok(vec![graph_from_json(text)?])
    } else {
        Ok(parse_graph6_file(text)?)
    }
}

fn load_graph(spec: &str, format: Option<FormatArg>) -> Result<Multigraph> {
    if let Some(name) = spec.strip_prefix("named:") {
        return named::by_name(name).ok_or_else(|| anyhow!("unknown named graph {name:?}"));
    }
    let text = fs::read_to_string(spec).with_context(|| format!("reading {spec}"))?;
    let mut graphs = parse_graphs(&text, format).with_context(|| format!("parsing {spec}"))?;
    match graphs.len() {
        1 => Ok(graphs.remove(0)),
        0 => bail!("{spec} contains no graph"),
        n => bail!("{spec} contains {n} graphs; use `kcdc corpus` for batches"),
    }
}

fn options(run: &RunOpts, g: &Multigraph) -> Result<PipelineOptions> {
    let strategy = match run.frame_strategy {
        StrategyArg::TwoFactor => FrameStrategy::TwoFactor,
        StrategyArg::Exhaustive => FrameStrategy::Exhaustive {
            max_edges: run.oracle_limit,
        },
        StrategyArg::File => {
            let path = run.frame_file.as_ref().ok_or_else(|| anyhow!("--frame-strategy file needs --frame-file"))?;
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let fj: FrameJson = serde_json::from_str(&text).context("parsing frame file")?;
            // validated against the graph here so bad input is an input error
            fj.into_frame(g)?;
            FrameStrategy::UserSupplied(fj.frame_edges.iter().copied().collect::<BTreeSet<_>>())
        }
    };
    Ok(PipelineOptions {
        strategy: Some(strategy),
        oracle: OracleGuard {
            max_edges: run.oracle_limit,
            ..OracleGuard::default()
        },
        max_frames: run.max_frames,
        keep_trace: true,
    })
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    if path == Path::new("-") {
        println!("{text}");
        return Ok(());
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn summary(rep: &RunReport) -> String {
    let last = rep.stages.last().map(|s| s.detail.as_str()).unwrap_or("");
    let mut line = format!(
        "{}: {:?} (frame {}, well connected {}, amiable {}, verified {})",
        rep.name,
        rep.outcome,
        rep.frame_found,
        rep.well_connected,
        rep.amiable_constructed,
        rep.cdc_verified
    );
    if rep.outcome != Outcome::Verified && !last.is_empty() {
        line.push_str(&format!(": {last}"));
    }
    line
}

#[derive(Serialize)]
struct TraceFile<'a> {
    frame: &'a Option<FrameJson>,
    alpha: &'a Option<kotzig_cdc::kotzig::PerfectColoring>,
    witness: &'a Option<kotzig_cdc::frame::Witness>,
    row_graph: &'a Option<kotzig_cdc::rowgraph::RowGraphJson>,
    amiable_method: &'a Option<String>,
    trace: &'a Option<kotzig_cdc::coloring::ConstructionTrace>,
    stages: &'a [kotzig_cdc::pipeline::StageRecord],
}

fn cmd_pipeline(
    graph: &str,
    format: Option<FormatArg>,
    run: &RunOpts,
    trace: Option<&Path>,
    certificate: Option<&Path>,
    report: Option<&Path>,
) -> Result<i32> {
    let g = load_graph(graph, format)?;
    let rep = run_pipeline(graph, &g, &options(run, &g)?)?;
    println!("{}", summary(&rep));
    for w in &rep.warnings {
        println!("warning: {w}");
    }
    if let Some(path) = trace {
        write_json(
            path,
            &TraceFile {
                frame: &rep.frame,
                alpha: &rep.alpha,
                witness: &rep.witness,
                row_graph: &rep.row_graph,
                amiable_method: &rep.amiable_method,
                trace: &rep.trace,
                stages: &rep.stages,
            },
        )?;
    }
    if let (Some(path), Some(cert)) = (certificate, &rep.certificate) {
        write_json(path, cert)?;
    }
    if let Some(path) = report {
        write_json(path, &rep)?;
    }
    Ok(rep.outcome.exit_code())
}

fn cmd_verify(graph: &str, cert: &Path, format: Option<FormatArg>) -> Result<i32> {
    let g = load_graph(graph, format)?;
    let text = fs::read_to_string(cert).with_context(|| format!("reading {}", cert.display()))?;
    let cert: CdcCertificate = serde_json::from_str(&text).context("parsing certificate")?;
    let rep = verify_cdc(&g, &cert);
    if rep.valid {
        println!("valid: {} cycles in {} classes cover every edge twice", rep.cycles, rep.classes);
        return Ok(0);
    }
    println!("invalid:");
    for v in &rep.violations {
        println!("  {v}");
    }
    Ok(1)
}

fn pool(jobs: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = jobs {
        b = b.num_threads(n);
    }
    Ok(b.build()?)
}

#[derive(Serialize)]
struct CorpusReport {
    totals: Aggregate,
    runs: Vec<RunReport>,
}

fn corpus_inputs(dir: &Path) -> Result<Vec<(String, Multigraph)>> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<_>>()?;
    paths.retain(|p| p.is_file());
    paths.sort();
    let mut out = Vec::new();
    for p in paths {
        let text = fs::read_to_string(&p).with_context(|| format!("reading {}", p.display()))?;
        let graphs = parse_graphs(&text, None).with_context(|| format!("parsing {}", p.display()))?;
        let stem = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        let many = graphs.len() > 1;
        for (k, g) in graphs.into_iter().enumerate() {
            out.push((if many { format!("{stem}#{k}") } else { stem.clone() }, g));
        }
    }
    Ok(out)
}

fn cmd_corpus(dir: &Path, run: &RunOpts, jobs: Option<usize>, report: Option<&Path>) -> Result<i32> {
    let inputs = corpus_inputs(dir)?;
    let opts: Vec<PipelineOptions> = inputs.iter().map(|(_, g)| options(run, g)).collect::<Result<_>>()?;
    let runs: Vec<RunReport> = pool(jobs)?.install(|| {
        inputs
            .par_iter()
            .zip(opts.par_iter())
            .map(|((name, g), o)| run_pipeline(name, g, o).map_err(anyhow::Error::from))
            .collect::<Result<Vec<_>>>()
    })?;
    let totals = runs
        .iter()
        .map(|r| {
            let mut a = Aggregate::default();
            a.add(r);
            a
        })
        .fold(Aggregate::default(), Aggregate::merge);
    for r in &runs {
        println!("{}", summary(r));
    }
    println!(
        "{} graphs: {} with frames, {} well connected, {} verified, {} failed",
        totals.instances,
        totals.frames_found,
        totals.well_connected,
        totals.verified,
        totals.failed.len()
    );
    let code = if totals.failed.is_empty() { 0 } else { 1 };
    if let Some(path) = report {
        write_json(path, &CorpusReport { totals, runs })?;
    }
    Ok(code)
}

fn cmd_scan(s_max: usize, edge_max: usize, limit: usize, archive: Option<&Path>, jobs: Option<usize>) -> Result<i32> {
    if let Some(dir) = archive {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let guard = OracleGuard {
        max_edges: limit,
        ..OracleGuard::default()
    };
    let counter = Mutex::new(0usize);
    let rep = pool(jobs)?.install(|| {
        scan_amiability(s_max, edge_max, guard, |r| {
            let Some(dir) = archive else { return };
            let mut k = counter.lock().expect("counter lock");
            let text = serde_json::to_string(&r.to_json()).expect("row graph serializes");
            // persisted before anything else touches the candidate
            if let Err(e) = fs::write(dir.join(format!("candidate-{}.json", *k)), text) {
                eprintln!("could not archive candidate {}: {e}", *k);
            }
            *k += 1;
        })
    })?;
    println!(
        "s <= {s_max}, edges <= {edge_max}: {} instances up to rearrangement, {} non-eulerian skipped, {} counterexample candidates",
        rep.instances,
        rep.skipped_non_eulerian,
        rep.counterexamples.len()
    );
    for c in &rep.counterexamples {
        println!("candidate: {}", serde_json::to_string(c)?);
    }
    Ok(0)
}

fn cmd_enumerate(max_n: usize, out: Option<&Path>, format: FormatArg) -> Result<i32> {
    let corpus = cubic_corpus(max_n);
    let Some(dir) = out else {
        for (name, g) in &corpus {
            match to_graph6(g) {
                Ok(line) => println!("{line}"),
                Err(_) => eprintln!("skipping {name}: graph6 cannot hold parallel edges"),
            }
        }
        return Ok(0);
    };
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut written = 0;
    for (name, g) in &corpus {
        let (text, ext) = match format {
            FormatArg::Json => (graph_to_json(g), "json"),
            FormatArg::Graph6 => match to_graph6(g) {
                Ok(line) => (line + "\n", "g6"),
                Err(_) => (graph_to_json(g), "json"),
            },
        };
        fs::write(dir.join(format!("{name}.{ext}")), text)?;
        written += 1;
    }
    println!("wrote {written} graphs to {}", dir.display());
    Ok(0)
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Commands::Pipeline {
            graph,
            format,
            run,
            trace,
            certificate,
            report,
        } => cmd_pipeline(&graph, format, &run, trace.as_deref(), certificate.as_deref(), report.as_deref()),
        Commands::Verify {
            graph,
            certificate,
            format,
        } => cmd_verify(&graph, &certificate, format),
        Commands::Corpus { dir, run, jobs, report } => cmd_corpus(&dir, &run, jobs, report.as_deref()),
        Commands::ScanAmiable {
            s_max,
            edge_max,
            oracle_limit,
            archive,
            jobs,
        } => cmd_scan(s_max, edge_max, oracle_limit, archive.as_deref(), jobs),
        Commands::EnumerateCubic { max_n, out, format } => cmd_enumerate(max_n, out.as_deref(), format),
    }
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_INPUT
        }
    };
    std::process::exit(code);
}
