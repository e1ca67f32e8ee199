//! `partx`: exact combinatorics of cross t-intersecting families of set
//! partitions.
//!
//! Exit status: 0 success, 1 a check failed, 2 budget refusal, 3 invalid
//! input.

mod commands;
mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use partx_core::{Error, Parallelism};
use serde::Serialize;
use serde_json::json;

use output::{Format, Sink};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(
    name = "partx",
    version,
    about = "Exact combinatorics for cross t-intersecting families of set partitions"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Serialize)]
struct Global {
    /// Maximum number of partitions any single enumeration may produce.
    #[arg(long, global = true, env = "PARTX_BUDGET", default_value_t = 10_000_000,
          value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    #[serde(skip)]
    out: Option<PathBuf>,
    /// Worker threads (0 = one per core). Output does not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    #[serde(skip)]
    threads: usize,
}

#[derive(Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
enum Command {
    /// Stirling number of the second kind S(n, k).
    Stirling(StirlingArgs),
    /// Least n with n >= L(k, t) (or 2L with --double).
    Threshold(ThresholdArgs),
    /// All k-partitions of [n] in restricted-growth order.
    Enumerate(EnumerateArgs),
    /// t-covering number of a family file.
    Tau(TauArgs),
    /// Enumerate one of the standard constructions.
    Construct(ConstructArgs),
    /// Closed-form sizes r1, r2, r, h and phi.
    Sizes(SizesArgs),
    /// Exact audit of the technical inequalities.
    Audit(AuditArgs),
    /// Search for cross t-intersecting pairs or tuples of maximum product.
    Search(SearchArgs),
    /// Tiered verification of one theorem at given parameters.
    Verify(VerifyArgs),
    /// r1 versus r2 at k = l = 2t+1 across a range of n.
    CompareRegimes(CompareArgs),
}

#[derive(Args, Serialize)]
struct StirlingArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    k: u32,
    /// Use the alternating-sum formula instead of the recurrence.
    #[arg(long)]
    closed_form: bool,
}

#[derive(Args, Serialize)]
struct ThresholdArgs {
    #[arg(long)]
    k: u32,
    #[arg(long)]
    t: u32,
    /// Threshold for n >= 2L(k, t).
    #[arg(long)]
    double: bool,
}

#[derive(Args, Serialize)]
struct EnumerateArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
}

#[derive(Args, Serialize)]
struct TauArgs {
    /// Family file: header `n=<n> k=<k>`, then one partition per line.
    #[arg(long)]
    family: PathBuf,
    #[arg(long)]
    t: usize,
    /// List every minimum cover.
    #[arg(long)]
    witnesses: bool,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
enum Kind {
    A,
    B,
    C,
    D,
    #[value(name = "HM1", alias = "hm1")]
    Hm1,
    #[value(name = "HM2", alias = "hm2")]
    Hm2,
    #[value(name = "P28i", alias = "p28i")]
    P28i,
    #[value(name = "P28ii", alias = "p28ii")]
    P28ii,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
enum SideArg {
    F,
    G,
}

#[derive(Args, Serialize)]
struct ConstructArgs {
    #[arg(long, value_enum, ignore_case = true)]
    kind: Kind,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    l: Option<usize>,
    #[arg(long)]
    t: usize,
    /// Anchor partitions replacing the defaults: `X;M` for A and B, `T` for
    /// C and D, `G` for P28i, `M` for P28ii.
    #[arg(long)]
    anchors: Option<String>,
    /// Which family of a P28 pair to emit.
    #[arg(long, value_enum, default_value_t = SideArg::F)]
    side: SideArg,
}

#[derive(Args, Serialize)]
struct SizesArgs {
    #[arg(long)]
    n: i64,
    #[arg(long, required_unless_present = "ks")]
    k: Option<i64>,
    #[arg(long, required_unless_present = "ks")]
    l: Option<i64>,
    #[arg(long)]
    t: i64,
    /// Uniformities k_1,...,k_r (r >= 3) for phi rows.
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["k", "l"])]
    ks: Option<Vec<i64>>,
}

#[derive(Args, Serialize)]
struct AuditArgs {
    /// Lemma id, or `all`.
    #[arg(long, default_value = "all")]
    lemma: String,
    #[arg(long, default_value_t = 3)]
    t_max: i64,
    #[arg(long, default_value_t = 8)]
    k_max: i64,
    #[arg(long, default_value_t = 10)]
    n_extra: i64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Mode {
    Exhaustive,
    Seeded,
}

#[derive(Args, Serialize)]
struct SearchArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, required_unless_present = "ks")]
    k: Option<usize>,
    #[arg(long, required_unless_present = "ks")]
    l: Option<usize>,
    #[arg(long, default_value_t = 1)]
    t: usize,
    /// Uniformities of an r-tuple; r = 2 is the same as --k/--l.
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["k", "l"])]
    ks: Option<Vec<usize>>,
    /// Only consider tuples with fewer than t blocks common to every member.
    #[arg(long)]
    nontrivial: bool,
    #[arg(long, value_enum, default_value_t = Mode::Seeded)]
    mode: Mode,
    #[arg(long, default_value_t = 2)]
    gen_max: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random generator sets per side (pairs) or in total (tuples).
    #[arg(long, default_value_t = 10_000)]
    draws: usize,
    /// Resume from and save progress to this JSON file.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Stop after this many generators; resume with the same checkpoint.
    #[arg(long)]
    stop_after: Option<u64>,
}

#[derive(Args, Serialize)]
struct VerifyArgs {
    /// 1.3, 1.4, 1.5, 1.6, P2.8, P3.5 or P4.1.
    #[arg(long)]
    theorem: String,
    /// e.g. `n=10 ks=3,3 t=1` or `n=6 k=3 l=2 t=1`.
    #[arg(long)]
    params: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 2)]
    gen_max: usize,
    #[arg(long, default_value_t = 10_000)]
    draws: usize,
    #[arg(long, default_value_t = 300)]
    tuple_draws: usize,
}

#[derive(Args, Serialize)]
struct CompareArgs {
    #[arg(long)]
    k: i64,
    #[arg(long)]
    t: i64,
    #[arg(long)]
    n_min: i64,
    #[arg(long)]
    n_max: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Status {
    Ok = 0,
    Failed = 1,
    Budget = 2,
    Invalid = 3,
}

#[derive(Debug)]
enum CliError {
    Core(Error),
    Io(io::Error),
    Usage(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

type CliResult = Result<Status, CliError>;

fn header(cli: &Cli) -> serde_json::Value {
    let mut config = serde_json::to_value(&cli.command).expect("config serializes");
    let global = serde_json::to_value(&cli.global).expect("config serializes");
    if let (Some(c), Some(g)) = (config.as_object_mut(), global.as_object()) {
        c.extend(g.clone());
    }
    json!({ "partx": VERSION, "config": config })
}

fn open_output(path: &Option<PathBuf>) -> io::Result<Box<dyn Write + Send>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn run(cli: &Cli) -> CliResult {
    let pool = Parallelism::new(cli.global.threads)?;
    let mut sink = Sink::new(
        cli.global.format,
        open_output(&cli.global.out)?,
        &header(cli),
    )?;
    let budget = cli.global.budget;
    let result = pool.install(|| match &cli.command {
        Command::Stirling(a) => commands::stirling(&mut sink, a),
        Command::Threshold(a) => commands::threshold(&mut sink, a),
        Command::Enumerate(a) => commands::enumerate(&mut sink, a, budget),
        Command::Tau(a) => commands::tau(&mut sink, a),
        Command::Construct(a) => commands::construct(&mut sink, a, budget),
        Command::Sizes(a) => commands::sizes(&mut sink, a),
        Command::Audit(a) => commands::audit(&mut sink, a),
        Command::Search(a) => commands::search(&mut sink, a, budget),
        Command::Verify(a) => commands::verify(&mut sink, a, budget),
        Command::CompareRegimes(a) => commands::compare_regimes(&mut sink, a),
    });
    let status = match result {
        Err(CliError::Core(Error::BudgetExceeded { count, budget })) => {
            sink.table(&["refused", "count", "budget"])?;
            sink.row(
                &json!({ "refused": "budget", "count": count.to_string(), "budget": budget }),
            )?;
            eprintln!("error: budget exceeded: {count} items requested, budget is {budget}");
            Ok(Status::Budget)
        }
        other => other,
    };
    sink.finish()?;
    status
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(Status::Invalid as u8),
            };
        }
    };
    let status = match run(&cli) {
        Ok(s) => s,
        Err(CliError::Core(e)) => {
            eprintln!("error: {e}");
            match e {
                Error::BudgetExceeded { .. } | Error::SearchTooLarge(_) => Status::Budget,
                Error::Internal(_) => Status::Failed,
                _ => Status::Invalid,
            }
        }
        Err(CliError::Io(e)) => {
            eprintln!("error: {e}");
            Status::Invalid
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            Status::Invalid
        }
    };
    ExitCode::from(status as u8)
}
