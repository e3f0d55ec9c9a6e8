//! Hamiltonian simulation by quantum signal processing, carried out with
//! explicit dense matrices so every guarantee can be checked numerically.
//!
//! The crate is `no_std` and only needs `alloc`. The pipeline is:
//!
//! 1. [`jacobi_anger`] builds a truncated Fourier approximation of
//!    `exp(-i tau sin(theta))` and picks the truncation order.
//! 2. [`phasefind`] turns the `(A, C)` pair into a phase sequence
//!    (rescaling, sum-of-squares completion, anchor correction and layer
//!    stripping).
//! 3. [`walk`] builds the quantum walk `W = iS(2TT' - 1)` of a sparse
//!    Hermitian matrix.
//! 4. [`qsp`] assembles the signal-processing circuit around `W`, projects
//!    the ancilla and compares against exact evolution.
//!
//! [`su2`] evaluates single-qubit rotation sequences directly and is the
//! reference everything else is tested against; [`trigpoly`] holds the
//! trigonometric and Laurent polynomial arithmetic.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;
pub mod jacobi_anger;
pub mod linalg;
pub mod phasefind;
pub mod qsp;
pub mod su2;
pub mod trigpoly;
pub mod walk;

pub use error::{Error, Result};
pub use jacobi_anger::TruncationPlan;
pub use phasefind::{AchievabilityReport, CompletionResult, SynthesisDiagnostics};
pub use qsp::SimulationReport;
pub use su2::{PhaseSequence, ResponseABCD};
pub use trigpoly::{LaurentPoly, TrigSeries};
pub use walk::{EigenphaseReport, SparseHamiltonian, WalkOperator};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;

/// Dense complex matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;
