//! `ftc`: build, query, and inspect fault-tolerant connectivity label
//! stores.
//!
//! Exit codes: 0 success (including a "disconnected" verdict), 1 usage or
//! configuration error, 2 input validation error (graph, store, query, or
//! I/O), 3 internal invariant violation.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use ftc_core::audit::{sample_queries, verify_against_oracle};
use ftc_core::graph::load_graph;
use ftc_core::scheme::{build_labels, query_basic, query_fast, BuildConfig, LabelSet};
use ftc_core::sparsify::HierarchyMode;
use ftc_core::store::{load_labels, save_labels};
use ftc_core::Error;

#[derive(Parser)]
#[command(
    name = "ftc",
    version,
    about = "Fault-tolerant connectivity labels over sparsified syndrome sketches"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Deterministic,
    Randomized,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Engine {
    Basic,
    Fast,
}

#[derive(Subcommand)]
enum Command {
    /// Build a label store from a graph file.
    Build {
        /// Graph file: first line the vertex count, then one `u v` edge
        /// per line; `#` starts a comment.
        graph: PathBuf,
        /// Fault budget the labels must support.
        #[arg(long)]
        f: u32,
        /// Hierarchy construction mode.
        #[arg(long, value_enum, default_value_t = Mode::Deterministic)]
        mode: Mode,
        /// Net constant of the deterministic construction.
        #[arg(long, default_value_t = 32)]
        c_net: u64,
        /// Sampling seed (randomized mode; drawn automatically if omitted).
        #[arg(long)]
        seed: Option<u64>,
        /// Output path for the label store.
        #[arg(long)]
        out: PathBuf,
    },
    /// Answer one connectivity query from a label store.
    Query {
        store: PathBuf,
        /// Source vertex.
        s: usize,
        /// Target vertex.
        t: usize,
        /// Fault edges as comma-separated `u-v` pairs.
        #[arg(long, value_delimiter = ',')]
        faults: Vec<String>,
        /// Query engine.
        #[arg(long, value_enum, default_value_t = Engine::Fast)]
        engine: Engine,
    },
    /// Cross-check a store against direct search on its graph.
    Verify {
        graph: PathBuf,
        store: PathBuf,
        /// Number of sampled queries.
        #[arg(long, default_value_t = 200)]
        trials: usize,
        /// Sampling seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print scheme parameters and size quantities of a store.
    Stats { store: PathBuf },
    /// Print the hierarchy levels of a store.
    HierarchyDump { store: PathBuf },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Clap renders its own message (help/version go to stdout).
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_class(&e))
        }
    }
}

/// Exit taxonomy: usage 1, validation 2, internal 3.
fn exit_class(e: &Error) -> u8 {
    match e {
        Error::Config(_) => 1,
        Error::Parse { .. }
        | Error::Validation(_)
        | Error::Query(_)
        | Error::Store(_)
        | Error::Io(_) => 2,
        Error::Argument(_) | Error::Internal(_) => 3,
    }
}

fn run(command: Command) -> ftc_core::Result<()> {
    match command {
        Command::Build {
            graph,
            f,
            mode,
            c_net,
            seed,
            out,
        } => cmd_build(&graph, f, mode, c_net, seed, &out),
        Command::Query {
            store,
            s,
            t,
            faults,
            engine,
        } => cmd_query(&store, s, t, &faults, engine),
        Command::Verify {
            graph,
            store,
            trials,
            seed,
        } => cmd_verify(&graph, &store, trials, seed),
        Command::Stats { store } => cmd_stats(&store),
        Command::HierarchyDump { store } => cmd_hierarchy_dump(&store),
    }
}

fn cmd_build(
    graph: &PathBuf,
    f: u32,
    mode: Mode,
    c_net: u64,
    seed: Option<u64>,
    out: &PathBuf,
) -> ftc_core::Result<()> {
    let text = std::fs::read_to_string(graph)?;
    let g = load_graph(&text)?;
    let (mode, seed) = match mode {
        Mode::Deterministic => (HierarchyMode::Deterministic, seed),
        Mode::Randomized => {
            let seed = seed.unwrap_or_else(rand::random::<u64>);
            (HierarchyMode::Randomized, Some(seed))
        }
    };
    let config = BuildConfig {
        mode,
        c_net,
        seed,
        ..BuildConfig::default()
    };
    let labels = build_labels(&g, f, &config)?;
    save_labels(out, &labels)?;
    let p = labels.params();
    println!("store: {}", out.display());
    println!("vertices: {}  edges: {}  f: {}", p.n, p.m, p.f);
    match p.mode {
        HierarchyMode::Deterministic => println!("mode: deterministic"),
        HierarchyMode::Randomized => {
            println!("mode: randomized  seed: {}", p.seed.expect("seed fixed"))
        }
    }
    println!("hierarchy depth: {}", p.h);
    println!("threshold K: {}", p.threshold);
    println!("per-vertex bits: {}", p.vertex_bits());
    println!("per-edge bits: {}", p.edge_bits());
    Ok(())
}

fn parse_fault(labels: &LabelSet, text: &str) -> ftc_core::Result<usize> {
    let (a, b) = text
        .split_once('-')
        .ok_or_else(|| Error::Validation(format!("fault '{text}' is not of the form u-v")))?;
    let parse = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| Error::Validation(format!("fault '{text}' has a non-numeric endpoint")))
    };
    let (u, v) = (parse(a)?, parse(b)?);
    labels
        .edge_index(u, v)
        .ok_or_else(|| Error::Validation(format!("graph has no edge {u}-{v}")))
}

fn cmd_query(
    store: &PathBuf,
    s: usize,
    t: usize,
    faults: &[String],
    engine: Engine,
) -> ftc_core::Result<()> {
    let labels = load_labels(store)?;
    let p = labels.params();
    for (name, v) in [("s", s), ("t", t)] {
        if v >= p.n {
            return Err(Error::Validation(format!(
                "{name} = {v} is out of range for {} vertices",
                p.n
            )));
        }
    }
    let fault_indices: Vec<usize> = faults
        .iter()
        .map(|text| parse_fault(&labels, text))
        .collect::<ftc_core::Result<_>>()?;
    let fault_labels = labels.fault_labels(&fault_indices)?;
    let (sl, tl) = (labels.vertex_label(s), labels.vertex_label(t));
    let connected = match engine {
        Engine::Basic => query_basic(p, sl, tl, &fault_labels)?,
        Engine::Fast => query_fast(p, sl, tl, &fault_labels)?,
    };
    println!("{}", if connected { "connected" } else { "disconnected" });
    Ok(())
}

fn cmd_verify(graph: &PathBuf, store: &PathBuf, trials: usize, seed: u64) -> ftc_core::Result<()> {
    let text = std::fs::read_to_string(graph)?;
    let g = load_graph(&text)?;
    let labels = load_labels(store)?;
    let queries = sample_queries(&g, labels.params().f, trials, seed);
    let report = verify_against_oracle(&g, &labels, &queries)?;
    println!("trials: {}", report.trials);
    println!("mismatches: {}", report.mismatches);
    println!("engine disagreements: {}", report.disagreements);
    println!("failures: {}", report.failures);
    for line in &report.examples {
        println!("  {line}");
    }
    println!(
        "query micros: p50 {}  p90 {}  max {}",
        report.p50_micros, report.p90_micros, report.max_micros
    );
    Ok(())
}

fn cmd_stats(store: &PathBuf) -> ftc_core::Result<()> {
    let labels = load_labels(store)?;
    let p = labels.params();
    println!("vertices: {}  edges: {}  f: {}", p.n, p.m, p.f);
    match p.mode {
        HierarchyMode::Deterministic => println!("mode: deterministic  c_net: {}", p.c_net),
        HierarchyMode::Randomized => println!(
            "mode: randomized  c_net: {}  seed: {}",
            p.c_net,
            p.seed.expect("randomized stores carry a seed")
        ),
    }
    println!("ancestry bits q: {}", p.q);
    println!("field bits w: {}", p.w);
    println!("threshold K: {}", p.threshold);
    println!("hierarchy depth h: {}", p.h);
    println!("per-vertex bits: {}", p.vertex_bits());
    println!("per-edge bits: {}", p.edge_bits());
    let sizes: Vec<String> = labels
        .levels()
        .iter()
        .map(|level| level.len().to_string())
        .collect();
    println!("level sizes: {}", sizes.join(" "));
    Ok(())
}

fn cmd_hierarchy_dump(store: &PathBuf) -> ftc_core::Result<()> {
    let labels = load_labels(store)?;
    for (i, level) in labels.levels().iter().enumerate() {
        let members: Vec<String> = level.iter().map(|e| e.to_string()).collect();
        println!("level {i} ({}): {}", level.len(), members.join(" "));
    }
    Ok(())
}
