//! File formats, random instances, sweeps and command dispatch on top of
//! [`qspsim_core`].

pub mod config;
pub mod hamfile;
pub mod instances;
pub mod run;
pub mod sweep;

pub use config::{CommandKind, RunConfig, SweepSpec, Task};
pub use hamfile::{parse_hamiltonian, read_hamiltonian, HamiltonianFile, HamiltonianFileError};
pub use instances::{random_hamiltonian, seeded_instance};
pub use run::{dispatch, execute, Output};
pub use sweep::{run_sweep, SweepRow};
