//! `ghzcert`: generate, inspect and certify sets of GHZ-like states.
//!
//! Exit codes: 0 strongest nonlocal (or all cuts trivial), 1 not strongest
//! nonlocal (or some cut nontrivial), 2 inconclusive, hypotheses violated or
//! oracle refused, 3 invalid input.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use ghzcert::arith::FLOAT_TOLERANCE;
use ghzcert::oracle::{build_constraints_with, decide, mode_name, OracleError, OracleOutcome};
use ghzcert::state_model::{parse_state_set, write_state_set};
use ghzcert::{
    build_graph, build_path_graph, certify_with, connected_components, to_dot, Arithmetic, ArithmeticMode,
    CertifyOptions, Construction, Method, OracleOptions, Partition, StateSet, Verdict,
};
use sha2::{Digest, Sha256};

#[derive(Parser)]
#[command(name = "ghzcert", version, about = "Certify strongest nonlocality of GHZ-like state sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a state-set document for a named construction.
    Generate {
        #[command(flatten)]
        construction: ConstructionArgs,
        /// Output file; stdout if absent.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Certify a set and write the full report.
    Certify {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value_t = MethodArg::Graph)]
        method: MethodArg,
        #[command(flatten)]
        oracle: OracleArgs,
        /// Report file; stdout if absent.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Write partition graphs as DOT files.
    Graph {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value = "all")]
        partition: PartitionArg,
        /// Emit the path subgraph instead of the full graph.
        #[arg(long)]
        path_subgraph: bool,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Solve the POVM constraint system per partition.
    Oracle {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value = "all")]
        partition: PartitionArg,
        #[command(flatten)]
        oracle: OracleArgs,
        /// Directory for sparse-triplet dumps of each system.
        #[arg(long)]
        dump_system: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ConstructionArgs {
    /// One of c333, c345, odd, even, c444w4.
    #[arg(long)]
    construction: String,
    /// Local dimension for the odd and even families.
    #[arg(long)]
    d: Option<usize>,
}

#[derive(Args)]
struct Source {
    /// State-set document.
    #[arg(long, short, required_unless_present = "construction", conflicts_with = "construction")]
    input: Option<PathBuf>,
    /// Named construction instead of a document.
    #[arg(long)]
    construction: Option<String>,
    /// Local dimension for the odd and even families.
    #[arg(long, requires = "construction")]
    d: Option<usize>,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long, value_enum, default_value_t = ArithmeticArg::Auto)]
    arithmetic: ArithmeticArg,
    /// Lift the limit on the number of unknowns.
    #[arg(long)]
    allow_large: bool,
}

impl OracleArgs {
    fn options(&self) -> OracleOptions {
        let arithmetic = match self.arithmetic {
            ArithmeticArg::Auto => Arithmetic::Auto,
            ArithmeticArg::Exact => Arithmetic::Exact,
            ArithmeticArg::Float => Arithmetic::Float,
        };
        OracleOptions { arithmetic, allow_large: self.allow_large, ..Default::default() }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ArithmeticArg {
    Auto,
    Exact,
    Float,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Graph,
    Oracle,
    Both,
}

#[derive(Clone, Copy)]
struct PartitionArg(Option<Partition>);

impl std::str::FromStr for PartitionArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s.eq_ignore_ascii_case("all") {
            Ok(PartitionArg(None))
        } else {
            s.parse().map(|p| PartitionArg(Some(p)))
        }
    }
}

impl PartitionArg {
    fn selected(self) -> Vec<Partition> {
        self.0.map_or_else(|| Partition::ALL.to_vec(), |p| vec![p])
    }
}

const INVALID: u8 = 3;

/// An error with the exit code it maps to.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

fn invalid(error: impl Into<anyhow::Error>) -> Failure {
    Failure { code: INVALID, error: error.into() }
}

type Outcome = Result<u8, Failure>;

/// A loaded set plus the bytes it came from and a name for output files.
struct Loaded {
    set: StateSet,
    document: String,
    stem: String,
}

fn build_construction(name: &str, d: Option<usize>) -> Result<StateSet, Failure> {
    Construction::from_name(name, d).and_then(Construction::build).map_err(invalid)
}

fn load(source: &Source) -> Result<Loaded, Failure> {
    if let Some(path) = &source.input {
        let document = fs::read_to_string(path)
            .with_context(|| format!("cannot read {}", path.display()))
            .map_err(invalid)?;
        let set = parse_state_set(&document)
            .with_context(|| format!("invalid document {}", path.display()))
            .map_err(invalid)?;
        let stem = path.file_stem().map_or("set".into(), |s| s.to_string_lossy().into_owned());
        return Ok(Loaded { set, document, stem });
    }
    let name = source.construction.as_deref().expect("clap enforces a source");
    let set = build_construction(name, source.d)?;
    let stem = match source.d {
        Some(d) => format!("{name}{d}"),
        None => name.to_owned(),
    };
    Ok(Loaded { document: write_state_set(&set), set, stem })
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => io::stdout().write_all(text.as_bytes()).context("cannot write to stdout"),
    }
    .map_err(invalid)
}

fn log_arithmetic(mode: ArithmeticMode) {
    match mode {
        ArithmeticMode::Exact => eprintln!("arithmetic: exact"),
        ArithmeticMode::Float => eprintln!("arithmetic: float (tolerance {FLOAT_TOLERANCE:e})"),
    }
}

fn cmd_generate(args: &ConstructionArgs, output: Option<&Path>) -> Outcome {
    let set = build_construction(&args.construction, args.d)?;
    write_output(output, &write_state_set(&set))?;
    eprintln!("{} states in dims {}", set.state_count(), set.dims());
    Ok(0)
}

fn cmd_certify(source: &Source, method: MethodArg, oracle: &OracleArgs, output: Option<&Path>) -> Outcome {
    let loaded = load(source)?;
    let opts = CertifyOptions {
        method: match method {
            MethodArg::Graph => Method::Graph,
            MethodArg::Oracle => Method::Oracle,
            MethodArg::Both => Method::Both,
        },
        oracle: oracle.options(),
    };
    let mut report = certify_with(&loaded.set, &opts);
    report.input_sha256 = Some(hex::encode(Sha256::digest(loaded.document.as_bytes())));
    log_arithmetic(report.arithmetic);
    let mut text = serde_json::to_string_pretty(&report).map_err(invalid)?;
    text.push('\n');
    write_output(output, &text)?;
    eprintln!("verdict: {} ({})", report.verdict.as_str(), report.reason);
    Ok(match report.verdict {
        Verdict::StrongestNonlocal => 0,
        Verdict::NotStrongestNonlocal => 1,
        Verdict::Inconclusive | Verdict::HypothesesViolated => 2,
    })
}

fn cmd_graph(source: &Source, partition: PartitionArg, path_subgraph: bool, out_dir: &Path) -> Outcome {
    let loaded = load(source)?;
    fs::create_dir_all(out_dir)
        .with_context(|| format!("cannot create {}", out_dir.display()))
        .map_err(invalid)?;
    let name = if path_subgraph { "Ghat" } else { "G" };
    for p in partition.selected() {
        let g = if path_subgraph { build_path_graph(&loaded.set, p) } else { build_graph(&loaded.set, p) };
        // Edges contributed per tuple, before loops and duplicates are dropped.
        let raw: usize =
            loaded.set.weights().map(|w| if path_subgraph { w - 1 } else { w * (w - 1) / 2 }).sum();
        let components = connected_components(&g).count();
        let file = out_dir.join(format!("{}_{}_{}.dot", loaded.stem, name, p.letter()));
        fs::write(&file, to_dot(&g))
            .with_context(|| format!("cannot write {}", file.display()))
            .map_err(invalid)?;
        println!(
            "partition {}: nodes={} edges={} tuple-edges={} components={} {} -> {}",
            p.name(),
            g.vertex_count(),
            g.edge_count(),
            raw,
            components,
            if components <= 1 { "connected" } else { "disconnected" },
            file.display()
        );
    }
    Ok(0)
}

fn cmd_oracle(source: &Source, partition: PartitionArg, args: &OracleArgs, dump: Option<&Path>) -> Outcome {
    let loaded = load(source)?;
    let opts = args.options();
    if let Some(dir) = dump {
        fs::create_dir_all(dir)
            .with_context(|| format!("cannot create {}", dir.display()))
            .map_err(invalid)?;
    }
    let mut logged = false;
    let mut code = 0;
    for p in partition.selected() {
        let cs = build_constraints_with(&loaded.set, p, &opts).map_err(|e| match e {
            OracleError::TooLarge { .. } => Failure { code: 2, error: anyhow!(e) },
            other => invalid(other),
        })?;
        if !logged {
            log_arithmetic(cs.mode());
            logged = true;
        }
        if let Some(dir) = dump {
            let file = dir.join(format!("{}_{}.triplets", loaded.stem, p.letter()));
            let write = fs::File::create(&file).and_then(|f| cs.write_triplets(io::BufWriter::new(f)));
            write.with_context(|| format!("cannot write {}", file.display())).map_err(invalid)?;
        }
        let v = decide(&cs);
        println!(
            "partition {}: dim={} {} ({}){}",
            p.name(),
            v.dimension,
            v.outcome.as_str(),
            mode_name(v.arithmetic),
            if v.unstable { " unstable" } else { "" }
        );
        if v.outcome == OracleOutcome::NontrivialExists {
            code = 1;
        }
    }
    Ok(code)
}

fn run(cli: Cli) -> Outcome {
    match &cli.command {
        Command::Generate { construction, output } => cmd_generate(construction, output.as_deref()),
        Command::Certify { source, method, oracle, output } => {
            cmd_certify(source, *method, oracle, output.as_deref())
        }
        Command::Graph { source, partition, path_subgraph, out_dir } => {
            cmd_graph(source, *partition, *path_subgraph, out_dir)
        }
        Command::Oracle { source, partition, oracle, dump_system } => {
            cmd_oracle(source, *partition, oracle, dump_system.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { INVALID } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure { code, error }) => {
            eprintln!("error: {error:#}");
            ExitCode::from(code)
        }
    }
}
