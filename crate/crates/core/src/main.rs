use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use bell_gamma::cli::{
    cmd_conjecture, cmd_measure, cmd_povm_check, cmd_simulate, read_phases, CommandOutput,
    OutputFormat,
};
use bell_gamma::local_unitary::OptimizerOptions;
use bell_gamma::measures::{MeasureConfig, Preset};
use bell_gamma::phase_povm::DEFAULT_GRID;
use bell_gamma::tensor::BipartiteDims;
use bell_gamma::{Error, Result};

#[derive(Parser)]
#[command(name = "bell-gamma", version, about = "Local-unitary entanglement measure Γ")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Normalization preset: paper-2x3, concurrence-matched or unnormalized
    #[arg(long, default_value = "concurrence-matched")]
    n2_preset: Preset,
    /// Explicit normalization constant; overrides --n2-preset
    #[arg(long)]
    n2: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: available processors)
    #[arg(long)]
    threads: Option<usize>,
    /// csv or json
    #[arg(long, default_value = "csv")]
    output: OutputFormat,
}

impl Common {
    fn config(&self) -> Result<MeasureConfig> {
        match self.n2 {
            Some(n2) => MeasureConfig::custom(n2),
            None => Ok(MeasureConfig::preset(self.n2_preset)),
        }
    }

    fn optimizer(&self) -> OptimizerOptions {
        OptimizerOptions {
            seed: self.seed,
            ..OptimizerOptions::default()
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Every measure for one state file
    Measure {
        state: PathBuf,
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
        /// Rescale unnormalized pure data instead of rejecting it
        #[arg(long)]
        renormalize: bool,
    },
    /// Optimized Γ against concurrence over random pure states
    Conjecture {
        /// Subsystem dimensions, e.g. 2x3 (repeatable)
        #[arg(long = "dims", required = true)]
        dims: Vec<BipartiteDims>,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        /// Largest accepted deviation
        #[arg(long, default_value_t = 1e-4)]
        threshold: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Γ from coefficients against Γ from phase-operator Fourier components
    PovmCheck {
        state: PathBuf,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        renormalize: bool,
    },
    /// Finite-shot Bell-projection estimates of Γ
    Simulate {
        state: PathBuf,
        /// Shots per projector (repeatable)
        #[arg(long = "shots", required = true)]
        shots: Vec<u64>,
        #[arg(long, default_value_t = 100)]
        reps: usize,
        /// JSON array with one phase per plan target; required for density input
        #[arg(long)]
        phase_rotation: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        renormalize: bool,
    },
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Measure { common, .. }
            | Command::Conjecture { common, .. }
            | Command::PovmCheck { common, .. }
            | Command::Simulate { common, .. } => common,
        }
    }
}

fn run(cmd: &Command) -> Result<CommandOutput> {
    let common = cmd.common();
    if let Some(n) = common.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::InvalidArgument(format!("threads: {e}")))?;
    }
    let cfg = common.config()?;
    match cmd {
        Command::Measure {
            state,
            grid,
            renormalize,
            ..
        } => cmd_measure(state, &cfg, &common.optimizer(), *grid, *renormalize, common.output),
        Command::Conjecture {
            dims,
            trials,
            threshold,
            ..
        } => cmd_conjecture(
            dims,
            *trials,
            common.seed,
            *threshold,
            &cfg,
            &common.optimizer(),
            common.output,
        ),
        Command::PovmCheck {
            state,
            grid,
            renormalize,
            ..
        } => cmd_povm_check(state, &cfg, *grid, *renormalize, common.output),
        Command::Simulate {
            state,
            shots,
            reps,
            phase_rotation,
            renormalize,
            ..
        } => {
            let phases = phase_rotation.as_deref().map(read_phases).transpose()?;
            cmd_simulate(
                state,
                &cfg,
                shots,
                *reps,
                common.seed,
                phases.as_deref(),
                *renormalize,
                common.output,
            )
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(out) => {
            print!("{}", out.report);
            if !out.summary.is_empty() {
                eprintln!("{}", out.summary);
            }
            ExitCode::from(out.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
