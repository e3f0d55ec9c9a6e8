//! Run configuration: a JSON file and command-line flags with the same
//! field names, flags taking precedence.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

/// Environment variable holding the default for `jobs`.
pub const JOBS_ENV: &str = "QSPSIM_JOBS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Phases,
    Simulate,
    Sweep,
    WalkCheck,
    Bessel,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<CommandKind>,
    /// Hamiltonian file, relative to the working directory.
    pub hamiltonian: Option<PathBuf>,
    pub tau: Option<f64>,
    pub time: Option<f64>,
    pub eps: Option<f64>,
    pub tau_list: Option<Vec<f64>>,
    pub eps_list: Option<Vec<f64>>,
    pub trials: Option<usize>,
    /// Qubit count of random sweep instances.
    pub qubits: Option<usize>,
    /// Sparsity of random sweep instances.
    pub sparsity: Option<usize>,
    pub kmax: Option<usize>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub jobs: Option<usize>,
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("parse error in config {path}: {source}")]
    Parse { path: String, source: serde_json::Error },
    #[error("no command given")]
    NoCommand,
    #[error("{command} requires {field}")]
    Missing { command: &'static str, field: &'static str },
    #[error("invalid {field}: {reason}")]
    Invalid { field: &'static str, reason: String },
}

/// A validated request.
#[derive(Debug, Clone, PartialEq)]
pub enum Task {
    Phases { tau: f64, eps: f64 },
    Simulate { hamiltonian: PathBuf, time: f64, eps: f64 },
    Sweep(SweepSpec),
    WalkCheck { hamiltonian: PathBuf },
    Bessel { tau: f64, kmax: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub tau_list: Vec<f64>,
    pub eps_list: Vec<f64>,
    pub trials: usize,
    pub qubits: usize,
    pub sparsity: usize,
    pub seed: u64,
}

macro_rules! overlay {
    ($base:expr, $top:expr, $($field:ident),+) => {
        RunConfig { $($field: $top.$field.or($base.$field)),+ }
    };
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| ConfigError::Parse {
            path: path.display().to_string(),
            source,
        })
    }

    /// Fields set in `top` win over those in `self`.
    pub fn overlay(self, top: RunConfig) -> RunConfig {
        overlay!(
            self,
            top,
            command,
            hamiltonian,
            tau,
            time,
            eps,
            tau_list,
            eps_list,
            trials,
            qubits,
            sparsity,
            kmax,
            out,
            seed,
            jobs
        )
    }

    /// Fill `jobs` from [`JOBS_ENV`] when neither file nor flags set it.
    pub fn with_env_jobs(mut self) -> Result<Self, ConfigError> {
        if self.jobs.is_none() {
            if let Ok(v) = std::env::var(JOBS_ENV) {
                let jobs = v.trim().parse().map_err(|_| ConfigError::Invalid {
                    field: "jobs",
                    reason: format!("{JOBS_ENV}={v:?} is not a count"),
                })?;
                self.jobs = Some(jobs);
            }
        }
        Ok(self)
    }

    pub fn task(&self) -> Result<Task, ConfigError> {
        let command = self.command.ok_or(ConfigError::NoCommand)?;
        let need = |field: &'static str, name: &'static str| ConfigError::Missing { command: name, field };
        let task = match command {
            CommandKind::Phases => Task::Phases {
                tau: self.tau.ok_or(need("tau", "phases"))?,
                eps: self.eps.ok_or(need("eps", "phases"))?,
            },
            CommandKind::Simulate => Task::Simulate {
                hamiltonian: self.hamiltonian.clone().ok_or(need("hamiltonian", "simulate"))?,
                time: self.time.ok_or(need("time", "simulate"))?,
                eps: self.eps.ok_or(need("eps", "simulate"))?,
            },
            CommandKind::Sweep => Task::Sweep(SweepSpec {
                tau_list: self.tau_list.clone().ok_or(need("tau_list", "sweep"))?,
                eps_list: self.eps_list.clone().ok_or(need("eps_list", "sweep"))?,
                trials: self.trials.unwrap_or(1),
                qubits: self.qubits.unwrap_or(2),
                sparsity: self.sparsity.unwrap_or(2),
                seed: self.seed.unwrap_or(0),
            }),
            CommandKind::WalkCheck => Task::WalkCheck {
                hamiltonian: self.hamiltonian.clone().ok_or(need("hamiltonian", "walk-check"))?,
            },
            CommandKind::Bessel => Task::Bessel {
                tau: self.tau.ok_or(need("tau", "bessel"))?,
                kmax: self.kmax.unwrap_or(40),
            },
        };
        validate(&task)?;
        Ok(task)
    }
}

fn check_eps(eps: f64) -> Result<(), ConfigError> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(ConfigError::Invalid {
            field: "eps",
            reason: format!("{eps} is not in (0, 1)"),
        })
    }
}

fn check_nonneg(field: &'static str, x: f64) -> Result<(), ConfigError> {
    if x >= 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(ConfigError::Invalid {
            field,
            reason: format!("{x} is not a finite nonnegative number"),
        })
    }
}

fn validate(task: &Task) -> Result<(), ConfigError> {
    match task {
        Task::Phases { tau, eps } => {
            check_nonneg("tau", *tau)?;
            check_eps(*eps)
        }
        Task::Simulate { time, eps, .. } => {
            check_nonneg("time", *time)?;
            check_eps(*eps)
        }
        Task::Sweep(spec) => {
            spec.tau_list.iter().try_for_each(|&t| check_nonneg("tau_list", t))?;
            spec.eps_list.iter().try_for_each(|&e| check_eps(e))?;
            if spec.qubits == 0 || spec.qubits > 6 {
                return Err(ConfigError::Invalid {
                    field: "qubits",
                    reason: format!("{} is outside 1..=6", spec.qubits),
                });
            }
            if spec.sparsity == 0 {
                return Err(ConfigError::Invalid {
                    field: "sparsity",
                    reason: "must be positive".into(),
                });
            }
            Ok(())
        }
        Task::WalkCheck { .. } => Ok(()),
        Task::Bessel { tau, .. } => check_nonneg("tau", *tau),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let file: RunConfig =
            serde_json::from_str(r#"{"command": "phases", "tau": 2.0, "eps": 1e-3, "seed": 5}"#).unwrap();
        let flags = RunConfig {
            tau: Some(1.0),
            ..Default::default()
        };
        let merged = file.overlay(flags);
        assert_eq!(merged.tau, Some(1.0));
        assert_eq!(merged.eps, Some(1e-3));
        assert_eq!(merged.seed, Some(5));
        assert_eq!(merged.task().unwrap(), Task::Phases { tau: 1.0, eps: 1e-3 });
    }

    #[test]
    fn required_fields() {
        let cfg = RunConfig {
            command: Some(CommandKind::Simulate),
            time: Some(1.0),
            eps: Some(0.1),
            ..Default::default()
        };
        assert!(matches!(
            cfg.task(),
            Err(ConfigError::Missing {
                field: "hamiltonian",
                ..
            })
        ));
        assert!(matches!(RunConfig::default().task(), Err(ConfigError::NoCommand)));
    }

    #[test]
    fn rejects_bad_eps_and_unknown_fields() {
        let cfg = RunConfig {
            command: Some(CommandKind::Phases),
            tau: Some(1.0),
            eps: Some(1.5),
            ..Default::default()
        };
        assert!(matches!(cfg.task(), Err(ConfigError::Invalid { field: "eps", .. })));
        assert!(serde_json::from_str::<RunConfig>(r#"{"taus": [1]}"#).is_err());
    }

    #[test]
    fn sweep_defaults() {
        let cfg: RunConfig =
            serde_json::from_str(r#"{"command": "sweep", "tau_list": [1], "eps_list": [0.01]}"#).unwrap();
        let Task::Sweep(spec) = cfg.task().unwrap() else {
            panic!()
        };
        assert_eq!((spec.trials, spec.qubits, spec.sparsity, spec.seed), (1, 2, 2, 0));
    }
}
