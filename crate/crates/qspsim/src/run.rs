//! Command dispatch and report emission.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use anyhow::Context;
use qspsim_core::jacobi_anger::{bessel_j, choose_truncation, target_phase, target_series};
use qspsim_core::phasefind::synthesize;
use qspsim_core::qsp::simulate;
use qspsim_core::walk::{build_walk, eigenphase_check};
use qspsim_core::{EigenphaseReport, PhaseSequence, SimulationReport, SynthesisDiagnostics, TruncationPlan};
use serde::Serialize;

use crate::config::{RunConfig, Task};
use crate::hamfile::read_hamiltonian;
use crate::sweep::{run_sweep, write_csv, SweepRow};

/// Eigenphase tolerance asserted by `walk-check`.
pub const WALK_PHASE_TOL: f64 = 1e-10;
/// Isometry and unitarity tolerance asserted by `walk-check`.
pub const WALK_RESIDUAL_TOL: f64 = 1e-12;
/// Normalization tolerance asserted by `bessel`.
pub const BESSEL_NORM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Serialize)]
pub struct PhasesOutput {
    pub plan: TruncationPlan,
    pub phases: PhaseSequence,
    pub diagnostics: SynthesisDiagnostics,
}

#[derive(Debug, Clone, Serialize)]
pub struct BesselOutput {
    pub tau: f64,
    pub kmax: usize,
    /// `J_0(tau) ..= J_kmax(tau)`.
    pub values: Vec<f64>,
    /// `|J_0 + 2 sum_{k even} J_k - 1|`.
    pub normalization_residual: f64,
}

/// Result of one command. `passed` is false when a checked bound fails.
#[derive(Debug, Clone)]
pub enum Output {
    Phases(PhasesOutput),
    Simulate(SimulationReport),
    Sweep(Vec<SweepRow>),
    WalkCheck(EigenphaseReport),
    Bessel(BesselOutput),
}

impl Output {
    pub fn passed(&self) -> bool {
        match self {
            Output::Phases(p) => p.diagnostics.bounds_hold(),
            Output::Simulate(r) => r.bounds_hold(),
            Output::Sweep(rows) => rows.iter().all(SweepRow::bounds_hold),
            Output::WalkCheck(r) => {
                r.passes(WALK_PHASE_TOL)
                    && r.isometry_residual <= WALK_RESIDUAL_TOL
                    && r.unitarity_residual <= WALK_RESIDUAL_TOL
            }
            Output::Bessel(b) => b.normalization_residual <= BESSEL_NORM_TOL,
        }
    }

    /// JSON for everything but sweeps, which are CSV.
    pub fn write<W: Write>(&self, mut out: W) -> anyhow::Result<()> {
        match self {
            Output::Phases(p) => serde_json::to_writer_pretty(&mut out, p)?,
            Output::Simulate(r) => serde_json::to_writer_pretty(&mut out, r)?,
            Output::Sweep(rows) => return write_csv(rows, out),
            Output::WalkCheck(r) => serde_json::to_writer_pretty(&mut out, r)?,
            Output::Bessel(b) => serde_json::to_writer_pretty(&mut out, b)?,
        }
        writeln!(out)?;
        Ok(())
    }

    pub fn summary(&self) -> String {
        match self {
            Output::Phases(p) => format!(
                "N = {}, q = {}, gap = {:.3e}, min success = {:.6}",
                p.phases.len(),
                p.plan.q,
                p.diagnostics.gap_final,
                p.diagnostics.min_success_prob
            ),
            Output::Simulate(r) => format!(
                "tau = {}, N = {}, trace distance = {:.3e} (bound {:.1e}), min success = {:.6}",
                r.tau,
                r.n,
                r.trace_distance,
                8.0 * r.eps_target,
                r.success_prob_min
            ),
            Output::Sweep(rows) => {
                let failing = rows.iter().filter(|r| !r.bounds_hold()).count();
                format!("{} rows, {} violating a bound", rows.len(), failing)
            }
            Output::WalkCheck(r) => format!(
                "max eigenphase deviation = {:.3e}, isometry = {:.3e}, unitarity = {:.3e}",
                r.max_deviation, r.isometry_residual, r.unitarity_residual
            ),
            Output::Bessel(b) => format!("normalization residual = {:.3e}", b.normalization_residual),
        }
    }
}

pub fn phases(tau: f64, eps: f64) -> anyhow::Result<PhasesOutput> {
    let plan = choose_truncation(tau, eps);
    let (a, c) = target_series(&plan);
    let (phases, diagnostics) = synthesize(&a, &c, target_phase(tau), eps)?;
    Ok(PhasesOutput {
        plan,
        phases,
        diagnostics,
    })
}

pub fn bessel(tau: f64, kmax: usize) -> BesselOutput {
    // The identity needs the tail too, so sum over a longer table.
    let long = bessel_j(kmax.max(tau.ceil() as usize + 60), tau);
    let norm = long[0] + 2.0 * long.iter().skip(2).step_by(2).sum::<f64>();
    BesselOutput {
        tau,
        kmax,
        values: long[..=kmax].to_vec(),
        normalization_residual: (norm - 1.0).abs(),
    }
}

pub fn execute(task: &Task, jobs: Option<usize>) -> anyhow::Result<Output> {
    Ok(match task {
        Task::Phases { tau, eps } => Output::Phases(phases(*tau, *eps)?),
        Task::Simulate { hamiltonian, time, eps } => {
            let h = read_hamiltonian(hamiltonian)?;
            let start = Instant::now();
            let mut report = simulate(&h, *time, *eps)?;
            report.wall_time_s = start.elapsed().as_secs_f64();
            Output::Simulate(report)
        }
        Task::Sweep(spec) => Output::Sweep(run_sweep(spec, jobs)?),
        Task::WalkCheck { hamiltonian } => {
            let h = read_hamiltonian(hamiltonian)?;
            let walk = build_walk(&h)?;
            Output::WalkCheck(eigenphase_check(&h, &walk)?)
        }
        Task::Bessel { tau, kmax } => Output::Bessel(bessel(*tau, *kmax)),
    })
}

/// Run a merged configuration and write its artifact to `out` (or stdout).
pub fn dispatch(config: &RunConfig) -> anyhow::Result<Output> {
    let task = config.task()?;
    let output = execute(&task, config.jobs)?;
    emit(&output, config.out.as_deref())?;
    Ok(output)
}

fn emit(output: &Output, out: Option<&Path>) -> anyhow::Result<()> {
    match out {
        Some(path) => {
            let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
            let mut w = BufWriter::new(file);
            output.write(&mut w)?;
            w.flush()?;
        }
        None => output.write(io::stdout().lock())?,
    }
    Ok(())
}
