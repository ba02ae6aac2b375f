use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mpemba_cli::{run, CliError, CliResult, Experiment, RunConfig};

#[derive(Parser)]
#[command(
    name = "mpemba",
    version,
    about = "Quantum Mpemba experiments in the dissipative Dicke model"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// l1-coherence difference over rotation angle and time, plus one pair.
    Fig1Heatmap(RunArgs),
    /// Coherence role reversal between two qubit setups.
    CoherenceRr(RunArgs),
    /// Log-negativity role reversal for two coupled ensembles.
    EntanglementRr(RunArgs),
    /// Trace-distance role reversal with slowest-mode elimination.
    TraceRr(RunArgs),
    /// Closed-form sign scan over coupling and angle.
    TheoremScan(RunArgs),
    /// Eigenvalues and steady state of one model.
    SpectrumDump(RunArgs),
    /// Print the default config of an experiment as JSON.
    DefaultConfig { experiment: String },
}

#[derive(Args)]
struct RunArgs {
    /// JSON config; the built-in default is used when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; results do not depend on this.
    #[arg(long, env = "MPEMBA_THREADS")]
    threads: Option<usize>,
    /// Run and print the checks without writing files.
    #[arg(long)]
    check: bool,
}

fn parse_experiment(name: &str) -> CliResult<Experiment> {
    Experiment::ALL
        .into_iter()
        .find(|e| e.name() == name)
        .ok_or_else(|| CliError::Config(format!("unknown experiment {name:?}")))
}

fn execute(experiment: Experiment, args: RunArgs) -> CliResult<bool> {
    if let Some(n) = args.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    }
    let mut cfg = match &args.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default_for(experiment),
    };
    if cfg.experiment.experiment() != experiment {
        return Err(CliError::Config(format!(
            "config describes {} but the subcommand is {}",
            cfg.experiment.experiment().name(),
            experiment.name()
        )));
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    cfg.validate()?;
    let artifacts = run(&cfg)?;
    print!("{}", artifacts.report.render());
    if !args.check {
        for path in artifacts.write(&args.out, &cfg)? {
            println!("wrote {}", path.display());
        }
    }
    Ok(artifacts.report.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (experiment, args) = match cli.command {
        Command::DefaultConfig { experiment } => {
            return match parse_experiment(&experiment) {
                Ok(e) => {
                    println!("{}", RunConfig::default_for(e).to_json());
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(e.exit_code())
                }
            };
        }
        Command::Fig1Heatmap(a) => (Experiment::Fig1Heatmap, a),
        Command::CoherenceRr(a) => (Experiment::CoherenceRr, a),
        Command::EntanglementRr(a) => (Experiment::EntanglementRr, a),
        Command::TraceRr(a) => (Experiment::TraceRr, a),
        Command::TheoremScan(a) => (Experiment::TheoremScan, a),
        Command::SpectrumDump(a) => (Experiment::SpectrumDump, a),
    };
    match execute(experiment, args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("one or more checks failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
