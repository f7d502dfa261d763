use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use stability_anneal::dominating::{QuantileEstimator, WRecursion};
use stability_anneal::experiment::{emit_outputs, quantile_seed, run_replications, ExperimentConfig, RunOptions};
use stability_anneal::models::{ModelSpec, MODEL_IDS};
use stability_anneal::Error;

const EXIT_CONFIG: u8 = 2;
const EXIT_RUNTIME: u8 = 3;

#[derive(Parser)]
#[command(name = "stability-anneal", version, about = "Annealing-based instability tests for Markov chain families")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every replication of an experiment and write CSV results.
    Run {
        config: PathBuf,
        #[arg(long, default_value = "results")]
        out: PathBuf,
        /// Worker threads (default: one per core).
        #[arg(long, default_value_t = 0)]
        workers: usize,
        /// Override the root seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the number of replications per sweep point.
        #[arg(long)]
        replications: Option<usize>,
        /// Override the simulation budget k*.
        #[arg(long)]
        k_star: Option<u64>,
        /// Write one trajectory CSV per replication.
        #[arg(long)]
        emit_trajectories: bool,
    },
    /// Print the quantile table q_0..q_K of the dominating chain.
    Quantiles {
        config: PathBuf,
        #[arg(long)]
        k_max: u64,
        /// Write to this file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the model gallery.
    Models,
}

enum Failure {
    Config(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_config() {
            Failure::Config(e.to_string())
        } else {
            Failure::Runtime(e.to_string())
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

#[derive(Default)]
struct Overrides {
    seed: Option<u64>,
    replications: Option<usize>,
    k_star: Option<u64>,
}

fn load(path: &Path, overrides: Overrides) -> Result<ExperimentConfig, Failure> {
    let cfg = ExperimentConfig::load(path).map_err(|e| match e {
        Error::Io(io) => Failure::Config(format!("{}: {io}", path.display())),
        other => Failure::from(other),
    })?;
    let cfg = cfg.amended(|c| {
        if let Some(s) = overrides.seed {
            c.seed = s;
        }
        if let Some(r) = overrides.replications {
            c.replications = r;
        }
        if let Some(k) = overrides.k_star {
            c.engine.k_star = k;
        }
    })?;
    for w in cfg.warnings() {
        eprintln!("warning: {w}");
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Run {
            config,
            out,
            workers,
            seed,
            replications,
            k_star,
            emit_trajectories,
        } => {
            let overrides = Overrides {
                seed,
                replications,
                k_star,
            };
            let cfg = load(&config, overrides)?;
            std::fs::create_dir_all(&out)?;
            let options = RunOptions {
                workers,
                trajectory_dir: emit_trajectories.then(|| out.clone()),
            };
            let report = run_replications(&cfg, &options)?;
            emit_outputs(&report, &out)?;
            let failures: usize = report.summary.iter().map(|s| s.failures).sum();
            if failures > 0 {
                eprintln!("warning: {failures} replication(s) failed; see replications.csv");
            }
            let mut stdout = io::stdout().lock();
            stability_anneal::experiment::write_summary(&report.summary, &mut stdout)?;
        }
        Command::Quantiles { config, k_max, out } => {
            let cfg = load(&config, Overrides::default())?;
            let scenario = cfg.scenarios()?.remove(0);
            let w0 = scenario.w0.unwrap_or_else(|| scenario.model.initial_lyapunov());
            let estimator = QuantileEstimator::new(
                scenario.dominating,
                WRecursion::from(scenario.engine.algorithm),
                scenario.n_reps,
                quantile_seed(cfg.seed),
            )?;
            let table = estimator.table(w0, k_max);
            match out {
                Some(path) => table.write_csv(io::BufWriter::new(std::fs::File::create(path)?))?,
                None => table.write_csv(io::BufWriter::new(io::stdout().lock()))?,
            }
        }
        Command::Models => {
            let mut stdout = io::stdout().lock();
            writeln!(stdout, "id\tparameters\tphi\tdescription")?;
            for id in MODEL_IDS {
                let m = ModelSpec::from_id(id, None).expect("gallery ids resolve");
                writeln!(
                    stdout,
                    "{id}\t{}\t{}\t{}",
                    m.param_names().join(","),
                    m.increment_bound(),
                    m.describe()
                )?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("config error: {msg}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_RUNTIME)
        }
    }
}
