use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use kernelbench_cli::config::{ExperimentConfig, Overrides};
use kernelbench_cli::{run, CliError};
use kernelbench_verify::{Options, Outcome};

/// Graph kernel node-clustering benchmarks.
///
/// Dataset files are read from $KERNELBENCH_DATA (default ./data).
#[derive(Parser)]
#[command(name = "kernelbench", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Base RNG seed [config default: 1]
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads, 0 for one per core [default: 0]
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Output directory [default: runs/<config name>]
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Grid size [config default: 50, or 55 for datasets]
    #[arg(long, global = true)]
    grid: Option<usize>,
    /// Graphs per generated task [config default: 50]
    #[arg(long, global = true)]
    graphs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment config.
    ///
    /// Config keys: kind (sweep | tournament | reject | datasets), families
    /// ("all" or a list), grid, graphs, statistic ("max" or "p<q>"), seed,
    /// workers, out, [scaling] (family = c), [reject] params (family = p),
    /// and [[tasks]] of type block, two-class, six-class, custom or dataset.
    Run {
        config: PathBuf,
    },
    /// Run the acceptance criteria and print one line per criterion.
    Verify {
        /// Suite (montecarlo, datasets, properties) or criterion id (A1..A7).
        #[arg(long)]
        only: Option<String>,
    },
}

fn run_config(path: &Path, common: &Common) -> Result<(), CliError> {
    let mut config = ExperimentConfig::load(path)?;
    config.apply(&Overrides {
        seed: common.seed,
        workers: common.workers,
        out: common.out.clone(),
        grid: common.grid,
        graphs: common.graphs,
    });
    let resolved = config.resolve()?;
    let stem = path.file_stem().map_or_else(|| "run".into(), |s| s.to_string_lossy().into_owned());
    let dir = run::run(&resolved, &PathBuf::from("runs").join(stem), |line| eprintln!("{line}"))?;
    eprintln!("wrote {}", dir.display());
    Ok(())
}

fn verify(only: Option<&str>, common: &Common) -> ExitCode {
    let mut options = Options::default();
    if let Some(s) = common.seed {
        options.seed = s;
    }
    if let Some(w) = common.workers {
        options.workers = w;
    }
    if let Some(o) = only {
        let known = o.parse::<kernelbench_verify::Suite>().is_ok()
            || kernelbench_verify::all().iter().any(|(id, ..)| id.eq_ignore_ascii_case(o));
        if !known {
            eprintln!("error: unknown suite or criterion {o:?}");
            return ExitCode::from(2);
        }
    }
    let reports = kernelbench_verify::run(&options, only, |r| println!("{r}"));
    if reports.iter().any(|r| r.outcome == Outcome::Fail) {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Run { config } => match run_config(config, &cli.common) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(e.exit_code())
            }
        },
        Command::Verify { only } => verify(only.as_deref(), &cli.common),
    }
}
