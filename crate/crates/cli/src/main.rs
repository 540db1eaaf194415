mod commands;
mod input;
mod report;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use rhoshift::classify::SearchConfig;
use rhoshift::contraction::DEFAULT_SUBSET_BUDGET;
use rhoshift::extension::DEFAULT_PERSISTENT_BUDGET;

use commands::{Ctx, Outcome};
use report::Report;

/// Canonical forms and isomorphism certificates for rho-uniform Markov shifts.
#[derive(Parser, Debug)]
#[command(name = "rhoshift", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Emit only `key=value` lines.
    #[arg(long, global = true)]
    report: bool,
    /// Largest stringing order searched for the minimal index.
    #[arg(long, global = true, default_value_t = 8, value_parser = positive)]
    n_max: usize,
    /// Colorings tried per stringing.
    #[arg(long, global = true, default_value_t = 1_000_000, value_parser = positive)]
    coloring_budget: usize,
    #[arg(long, global = true, default_value_t = DEFAULT_SUBSET_BUDGET, value_parser = positive)]
    subset_budget: usize,
    #[arg(long, global = true, default_value_t = DEFAULT_PERSISTENT_BUDGET, value_parser = positive)]
    persistent_budget: usize,
    /// Largest fiber size accepted for a canonical form.
    #[arg(long, global = true, default_value_t = 6, value_parser = positive)]
    d_max: usize,
    /// Worker threads for the coloring search (0: all cores).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Accept an exhaustive search up to --n-max as proof of minimality.
    #[arg(long, global = true)]
    accept_budgeted: bool,
    /// Time limit per stringing for coloring enumeration.
    #[arg(long, global = true, value_parser = positive)]
    time_limit_ms: Option<usize>,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and check a graph or extension file.
    Validate { file: PathBuf },
    /// Stationary vector, period and counts.
    Info { file: PathBuf },
    /// Degree of the file's coloring (the first coloring when unlabeled).
    Degree { file: PathBuf },
    /// Canonical extension, written to a sidecar file.
    Canon {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide isomorphism of the two shifts; YES writes a certificate.
    Iso {
        file1: PathBuf,
        file2: PathBuf,
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// A graph with degree-1 maps onto both inputs.
    CommonExt {
        file1: PathBuf,
        file2: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample a trajectory; edge ids one per line in traversal order.
    Sample {
        file: PathBuf,
        #[arg(long, default_value_t = 1000)]
        length: usize,
    },
    /// Re-check a certificate, optionally against the original graphs.
    VerifyCert {
        cert: PathBuf,
        #[arg(long, requires = "graph2")]
        graph1: Option<PathBuf>,
        #[arg(long, requires = "graph1")]
        graph2: Option<PathBuf>,
    },
}

fn config(g: &Global) -> SearchConfig {
    SearchConfig {
        n_max: g.n_max,
        coloring_budget: g.coloring_budget,
        subset_budget: g.subset_budget,
        persistent_budget: g.persistent_budget,
        d_max: g.d_max,
        jobs: g.jobs,
        accept_budgeted_minimality: g.accept_budgeted,
        time_limit: g.time_limit_ms.map(|ms| Duration::from_millis(ms as u64)),
    }
}

/// Input problems exit 2; budget exhaustion is UNKNOWN; anything else is internal.
fn error_code(e: &anyhow::Error) -> u8 {
    use rhoshift::Error as E;
    match e.downcast_ref::<E>() {
        Some(E::BudgetExceeded { .. }) | Some(E::Unsupported(_)) => Outcome::Unknown.code(),
        Some(E::Invariant(_)) | None => 1,
        Some(_) => Outcome::Invalid.code(),
    }
}

fn run(cli: &Cli, ctx: &Ctx, out: &mut impl Write) -> anyhow::Result<Outcome> {
    let machine = cli.global.report;
    let (report, outcome) = match &cli.command {
        Command::Validate { file } => commands::validate(ctx, file)?,
        Command::Info { file } => commands::info(ctx, file)?,
        Command::Degree { file } => commands::degree_cmd(ctx, file)?,
        Command::Canon { file, out } => commands::canon(ctx, file, out.as_deref())?,
        Command::Iso { file1, file2, cert } => commands::iso(ctx, file1, file2, cert.as_deref())?,
        Command::CommonExt { file1, file2, out } => commands::common_ext(ctx, file1, file2, out.as_deref())?,
        Command::Sample { file, length } => return commands::sample_cmd(ctx, file, *length, machine, out),
        Command::VerifyCert { cert, graph1, graph2 } => {
            let graphs = graph1.as_deref().zip(graph2.as_deref());
            commands::verify_cert(ctx, cert, graphs)?
        }
    };
    report.write(machine, out)?;
    Ok(outcome)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let machine = cli.global.report;
    let ctx = Ctx {
        config: config(&cli.global),
        seed: cli.global.seed,
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run(&cli, &ctx, &mut out) {
        Ok(outcome) => ExitCode::from(outcome.code()),
        Err(e) => {
            let code = error_code(&e);
            if machine {
                let mut r = Report::new();
                r.echo_config(&ctx.config, ctx.seed);
                if let Some(rhoshift::Error::Parse { line, .. }) = e.downcast_ref::<rhoshift::Error>() {
                    r.put("line", line);
                }
                r.put("error", format!("{e:#}"));
                let _ = r.write(true, &mut out);
            }
            eprintln!("error: {e:#}");
            ExitCode::from(code)
        }
    }
}
