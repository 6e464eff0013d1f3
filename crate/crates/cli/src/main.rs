use std::path::PathBuf;
use std::process::ExitCode;

use clap::{error::ErrorKind, Args, Parser, Subcommand};
use cubelab_cli::config::{ExperimentConfig, Resolved};
use cubelab_cli::{error_json, experiments, Mode, Source};
use cubelab_core::instances::Kind;
use cubelab_core::testers::PlanStrategy;
use cubelab_core::{Error, Result};

/// Hard instances, distance oracles and testers for hypercube properties.
#[derive(Parser)]
#[command(name = "cubelab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a hard instance and write it as JSON.
    Sample {
        /// mono, junta, intersect or uc.
        #[arg(long)]
        family: String,
        #[arg(long, default_value = "yes")]
        kind: Kind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate an instance or a table at one point.
    Eval {
        #[command(flatten)]
        source: SourceArgs,
        /// Overrides the kind stored in the instance file.
        #[arg(long, requires = "instance")]
        kind: Option<Kind>,
        /// A 0/1 string, leftmost character first coordinate.
        #[arg(long)]
        point: String,
    },
    /// Tabulate an instance into an HCUB file.
    Materialize {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        kind: Option<Kind>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Distance of a table to a property, as a certified JSON report.
    Dist {
        /// monotone, unate, junta:K, intersecting or union-closed.
        #[arg(long)]
        metric: String,
        #[arg(long)]
        table: PathBuf,
        /// Fail unless the exact distance is available.
        #[arg(long, conflicts_with = "bounds")]
        exact: bool,
        /// Accept certified bounds; skips the exhaustive intersecting search.
        #[arg(long)]
        bounds: bool,
    },
    /// Run a one-sided tester on a table.
    Tester {
        /// uc or intersecting.
        #[arg(long)]
        alg: String,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        table: PathBuf,
        /// Leave the query transcript out of the verdict.
        #[arg(long)]
        no_transcript: bool,
    },
    /// Run a registered experiment and write a CSV report.
    Experiment(ExperimentArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct SourceArgs {
    #[arg(long)]
    instance: Option<PathBuf>,
    #[arg(long)]
    table: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    /// prop32, lemma41, indist, bad-event, junta-far, unate-far or sensitivity.
    #[arg(long)]
    name: Option<String>,
    /// JSON configuration; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, visible_alias = "m")]
    n: Option<usize>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, visible_alias = "samples")]
    trials: Option<u64>,
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    k: Option<usize>,
    /// Query plan recipe as JSON, e.g. '{"strategy":"uniform","q":64}'.
    #[arg(long)]
    plan: Option<String>,
    #[arg(long)]
    threads: Option<usize>,
}

impl ExperimentArgs {
    fn into_config(self) -> Result<ExperimentConfig> {
        let file = match &self.config {
            Some(path) => ExperimentConfig::from_file(path)?,
            None => ExperimentConfig::default(),
        };
        let plan = match &self.plan {
            Some(text) => Some(
                serde_json::from_str::<PlanStrategy>(text).map_err(|e| Error::Format(format!("--plan: {e}")))?,
            ),
            None => None,
        };
        Ok(file.overlay(ExperimentConfig {
            name: self.name,
            n: self.n,
            eps: self.eps,
            seed: self.seed,
            trials: self.trials,
            family: self.family,
            k: self.k,
            plan,
            out: self.out,
            threads: self.threads,
        }))
    }
}

/// `LAB_THREADS` beats the flag, which beats the config file.
fn thread_count(configured: Option<usize>) -> Result<Option<usize>> {
    match std::env::var("LAB_THREADS") {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::InvalidParameter(format!("LAB_THREADS must be a positive integer, got {v:?}"))),
        Err(_) => Ok(configured),
    }
}

fn experiment(args: ExperimentArgs) -> Result<()> {
    let cfg = args.into_config()?;
    let resolved = Resolved::new(&cfg)?;
    if let Some(threads) = thread_count(cfg.threads)? {
        if threads == 0 {
            return Err(Error::InvalidParameter("thread count must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    }
    experiments::run(&resolved, cubelab_cli::output(cfg.out.as_deref())?)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Sample { family, kind, n, eps, seed, out } => {
            cubelab_cli::sample(&family, kind, n, eps, seed, out.as_deref())
        }
        Command::Eval { source, kind, point } => {
            let source = match (source.instance, source.table) {
                (Some(path), _) => Source::Instance { path, kind },
                (None, Some(path)) => Source::Table(path),
                (None, None) => unreachable!("clap requires one source"),
            };
            cubelab_cli::eval(&source, &point)
        }
        Command::Materialize { instance, kind, out } => cubelab_cli::materialize(&instance, kind, &out),
        Command::Dist { metric, table, exact, bounds } => {
            let mode = match (exact, bounds) {
                (true, _) => Mode::Exact,
                (_, true) => Mode::Bounds,
                _ => Mode::Auto,
            };
            cubelab_cli::dist(&table, &metric, mode)
        }
        Command::Tester { alg, eps, seed, table, no_transcript } => {
            cubelab_cli::tester(&table, &alg, eps, seed, !no_transcript)
        }
        Command::Experiment(args) => experiment(args),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => e.exit(),
        Err(e) => {
            eprintln!("{}", error_json("usage", e.to_string().trim()));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", error_json(e.kind(), &e.to_string()));
            ExitCode::FAILURE
        }
    }
}
