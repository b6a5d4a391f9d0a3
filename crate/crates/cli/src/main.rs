use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use besk::{Budget, Error, HyperGraph, DEFAULT_BUDGET};

mod commands;
mod selftest;

#[derive(Parser, Debug)]
#[command(
    name = "besk",
    version,
    about = "Sparse hypergraph configurations, clusters and weight certificates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Node budget for each exhaustive query.
    #[arg(long, global = true, env = "BESK_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: u64,

    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Args, Debug)]
struct GraphArgs {
    /// Hypergraph in .hg format.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    k: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide G_k-freeness.
    CheckFree(GraphArgs),
    /// Print the 1-cluster and 2-cluster partitions with the merge log.
    Merge {
        #[command(flatten)]
        graph: GraphArgs,
        /// Merge in a random order drawn from this seed instead of the
        /// deterministic tie-break.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Claim sets of the listed pairs with respect to the whole graph.
    Claims {
        #[arg(long)]
        input: PathBuf,
        /// A pair `u,v`; repeatable.
        #[arg(long = "pair", required = true, value_parser = parse_pair)]
        pairs: Vec<(u32, u32)>,
        /// Largest claim index computed.
        #[arg(long = "max-claim", default_value_t = besk::claims::DEFAULT_CLAIM_CAP)]
        max_claim: usize,
    },
    /// Freeness, both merge stages, weights and the edge bound.
    Certify(GraphArgs),
    /// Exact f(n; s, k) for r-graphs; `--n-max` sweeps n.
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        k: usize,
        /// Write the results table here as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Write the last witness here in .hg format.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Greedy packing, G_k repair and density report.
    Construct {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the graph here in .hg format.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run the fixed-seed invariant suites and print a digest of the report.
    Selftest,
}

fn parse_pair(s: &str) -> Result<(u32, u32), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected u,v but got {s:?}"))?;
    let u = a.trim().parse().map_err(|e| format!("{a:?}: {e}"))?;
    let v = b.trim().parse().map_err(|e| format!("{b:?}: {e}"))?;
    Ok((u, v))
}

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    Finding = 1,
    Usage = 2,
    Budget = 3,
}

pub fn status_of(err: &Error) -> Status {
    match err {
        Error::BudgetExceeded(_) => Status::Budget,
        Error::NotFree(_) | Error::StructureViolation(_) | Error::CertMismatch(_) => {
            Status::Finding
        }
        _ => Status::Usage,
    }
}

pub fn read_graph(path: &PathBuf) -> Result<HyperGraph, (Status, String)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| (Status::Usage, format!("{}: {e}", path.display())))?;
    HyperGraph::parse(&text).map_err(|e| (Status::Usage, format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<Status, (Status, String)> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err((Status::Usage, "--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| (Status::Usage, e.to_string()))?;
    }
    let budget = Budget::new(cli.budget);
    let fmt = cli.format;
    let out = match cli.command {
        Command::CheckFree(a) => commands::check_free(&read_graph(&a.input)?, a.k, &budget)?,
        Command::Merge { graph, seed } => {
            commands::merge(&read_graph(&graph.input)?, graph.k, seed, &budget)?
        }
        Command::Claims {
            input,
            pairs,
            max_claim,
        } => commands::claims(&read_graph(&input)?, &pairs, max_claim, &budget)?,
        Command::Certify(a) => commands::certify(&read_graph(&a.input)?, a.k, &budget)?,
        Command::Search {
            n,
            n_max,
            r,
            s,
            k,
            csv,
            witness,
        } => commands::search(n, n_max.unwrap_or(n), r, s, k, csv, witness, &budget)?,
        Command::Construct {
            n,
            r,
            k,
            seed,
            output,
        } => commands::construct(n, r, k, seed, output, &budget)?,
        Command::Selftest => selftest::run(),
    };
    match fmt {
        Format::Text => print!("{}", out.text),
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&out.json).expect("reports serialize")
        ),
    }
    Ok(out.status)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                Status::Usage
            } else {
                Status::Ok
            };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(s) => ExitCode::from(s as u8),
        Err((s, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(s as u8)
        }
    }
}
