use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qspsim::config::{CommandKind, RunConfig};
use qspsim::dispatch;

/// Hamiltonian simulation by quantum signal processing, checked against
/// exact evolution.
///
/// Every flag can also come from a JSON file given with `--config`, using
/// the flag name with `_` in place of `-`; flags win over the file. Exit
/// status is 0 when every checked bound holds, 1 when one fails and 2 on
/// errors.
#[derive(Debug, Parser)]
#[command(name = "qspsim", version)]
struct Cli {
    /// JSON file with default values for any flag.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads for sweeps [default: $QSPSIM_JOBS, else all cores].
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Output file [default: stdout].
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for random instances.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Phase sequence for exp(-i tau sin(theta)) to accuracy eps.
    Phases {
        #[arg(long)]
        tau: Option<f64>,
        #[arg(long)]
        eps: Option<f64>,
    },
    /// Simulate exp(-iHt) for a Hamiltonian file and report the errors.
    Simulate {
        #[arg(long)]
        hamiltonian: Option<PathBuf>,
        #[arg(long)]
        time: Option<f64>,
        #[arg(long)]
        eps: Option<f64>,
    },
    /// Simulate random instances over a (tau, eps) grid; writes CSV.
    Sweep {
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        tau_list: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        eps_list: Option<Vec<f64>>,
        /// Random instances per grid point [default: 1].
        #[arg(long)]
        trials: Option<usize>,
        /// Qubits per instance [default: 2].
        #[arg(long)]
        qubits: Option<usize>,
        /// Nonzeros per row [default: 2].
        #[arg(long)]
        sparsity: Option<usize>,
    },
    /// Compare walk eigenphases with the Hamiltonian spectrum.
    WalkCheck {
        #[arg(long)]
        hamiltonian: Option<PathBuf>,
    },
    /// Bessel values J_0(tau) ..= J_kmax(tau).
    Bessel {
        #[arg(long)]
        tau: Option<f64>,
        /// [default: 40]
        #[arg(long)]
        kmax: Option<usize>,
    },
}

impl Cli {
    fn flags(self) -> RunConfig {
        let mut cfg = RunConfig {
            out: self.out,
            seed: self.seed,
            jobs: self.jobs,
            ..Default::default()
        };
        match self.command {
            None => {}
            Some(Command::Phases { tau, eps }) => {
                cfg.command = Some(CommandKind::Phases);
                cfg.tau = tau;
                cfg.eps = eps;
            }
            Some(Command::Simulate { hamiltonian, time, eps }) => {
                cfg.command = Some(CommandKind::Simulate);
                cfg.hamiltonian = hamiltonian;
                cfg.time = time;
                cfg.eps = eps;
            }
            Some(Command::Sweep {
                tau_list,
                eps_list,
                trials,
                qubits,
                sparsity,
            }) => {
                cfg.command = Some(CommandKind::Sweep);
                cfg.tau_list = tau_list;
                cfg.eps_list = eps_list;
                cfg.trials = trials;
                cfg.qubits = qubits;
                cfg.sparsity = sparsity;
            }
            Some(Command::WalkCheck { hamiltonian }) => {
                cfg.command = Some(CommandKind::WalkCheck);
                cfg.hamiltonian = hamiltonian;
            }
            Some(Command::Bessel { tau, kmax }) => {
                cfg.command = Some(CommandKind::Bessel);
                cfg.tau = tau;
                cfg.kmax = kmax;
            }
        }
        cfg
    }
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    let base = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let config = base.overlay(cli.flags()).with_env_jobs()?;
    let output = dispatch(&config)?;
    let passed = output.passed();
    eprintln!(
        "{} [{}]",
        output.summary(),
        if passed { "ok" } else { "BOUND VIOLATED" }
    );
    Ok(passed)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
