use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use multistable_poisson::cli::{self, RunConfig, SimulateKind, TableKind};
use multistable_poisson::harness::{exit_code, Suite};

/// Simulation and evaluation of multistable Poisson processes.
#[derive(Parser)]
#[command(name = "msp", version)]
struct Args {
    /// Run configuration (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the configured seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Overrides the configured output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads; all available cores by default.
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample paths, one CSV file per stream.
    Simulate {
        kind: Kind,
        /// Overrides simulate.n_paths.
        #[arg(long)]
        n_paths: Option<usize>,
    },
    /// SMPP state probabilities from time 0.
    Pmf,
    /// SMPP transition probabilities from evaluate.tau.
    Transition,
    /// Densities of the SMPP jump epochs.
    Epochs,
    /// Upcrossing survival probabilities by both formulas.
    Upcrossing,
    /// TMPP state probabilities by Laplace inversion.
    TmppPmf,
    /// Laplace transforms of the TMPP waiting times.
    WaitingLt,
    /// Monte Carlo comparison suites; exit 2 when a comparison fails.
    Validate { suite: SuiteArg },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    HPath,
    LPath,
    Smpp,
    Tmpp,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Smpp,
    Tmpp,
    Localizability,
    All,
}

fn run(args: Args) -> anyhow::Result<i32> {
    let path = args.config.context("--config <file> is required")?;
    let mut cfg = RunConfig::from_file(&path)?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    let out = args.out.unwrap_or_else(|| cfg.output.dir.clone());
    if let Some(n) = args.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the worker pool")?;
    }
    let table = |kind: TableKind| -> anyhow::Result<i32> {
        let file = cli::write_table_file(&cfg, kind, &out)?;
        println!("{}", file.display());
        Ok(0)
    };
    match args.command {
        Command::Simulate { kind, n_paths } => {
            let kind = match kind {
                Kind::HPath => SimulateKind::HPath,
                Kind::LPath => SimulateKind::LPath,
                Kind::Smpp => SimulateKind::Smpp,
                Kind::Tmpp => SimulateKind::Tmpp,
            };
            let files = cli::simulate(&cfg, kind, n_paths.unwrap_or(cfg.simulate.n_paths), &out)?;
            log::info!("wrote {} path files to {}", files.len(), out.display());
            Ok(0)
        }
        Command::Pmf => table(TableKind::Pmf),
        Command::Transition => table(TableKind::Transition),
        Command::Epochs => table(TableKind::Epochs),
        Command::Upcrossing => table(TableKind::Upcrossing),
        Command::TmppPmf => table(TableKind::TmppPmf),
        Command::WaitingLt => table(TableKind::WaitingLt),
        Command::Validate { suite } => {
            let suite = match suite {
                SuiteArg::Smpp => Suite::Smpp,
                SuiteArg::Tmpp => Suite::Tmpp,
                SuiteArg::Localizability => Suite::Localizability,
                SuiteArg::All => Suite::All,
            };
            let reports = cli::validate(&cfg, suite, &out)?;
            for r in &reports {
                print!("{r}");
            }
            Ok(exit_code(&reports))
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(args) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = e
                .downcast_ref::<multistable_poisson::Error>()
                .map_or(1, |e| e.exit_code());
            ExitCode::from(code as u8)
        }
    }
}
