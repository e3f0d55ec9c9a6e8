//! Hamiltonian files: `{"n": 2, "d": 2, "entries": [[j, k, re, im], ...], "hermitize": true}`.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use qspsim_core::SparseHamiltonian;
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum HamiltonianFileError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },

    /// Malformed JSON or a field of the wrong shape.
    #[error("parse error: {0}")]
    Parse(String),

    #[error("parse error: index out of range: entry {entry} = ({row}, {col}) but the dimension is {dim}")]
    IndexOutOfRange {
        entry: usize,
        row: usize,
        col: usize,
        dim: usize,
    },

    #[error(transparent)]
    Invalid(#[from] qspsim_core::Error),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HamiltonianFile {
    pub n: usize,
    pub d: usize,
    pub entries: Vec<(usize, usize, f64, f64)>,
    #[serde(default)]
    pub hermitize: bool,
}

impl HamiltonianFile {
    pub fn from_json(text: &str) -> Result<Self, HamiltonianFileError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            if path == "." {
                HamiltonianFileError::Parse(inner.to_string())
            } else {
                HamiltonianFileError::Parse(format!("field `{path}`: {inner}"))
            }
        })
    }

    pub fn to_hamiltonian(&self) -> Result<SparseHamiltonian, HamiltonianFileError> {
        let dim = 1usize
            .checked_shl(self.n as u32)
            .filter(|_| self.n < 32)
            .ok_or_else(|| HamiltonianFileError::Parse(format!("field `n`: {} qubits is too many", self.n)))?;
        let mut entries = Vec::with_capacity(self.entries.len());
        for (idx, &(row, col, re, im)) in self.entries.iter().enumerate() {
            if row >= dim || col >= dim {
                return Err(HamiltonianFileError::IndexOutOfRange {
                    entry: idx,
                    row,
                    col,
                    dim,
                });
            }
            entries.push((row, col, Complex64::new(re, im)));
        }
        Ok(SparseHamiltonian::from_entries(
            self.n,
            self.d,
            &entries,
            self.hermitize,
        )?)
    }

    /// Every stored entry, both triangles, with `hermitize` off.
    pub fn from_hamiltonian(h: &SparseHamiltonian) -> Self {
        Self {
            n: h.n(),
            d: h.d(),
            entries: h.entries().map(|(j, k, v)| (j, k, v.re, v.im)).collect(),
            hermitize: false,
        }
    }
}

pub fn parse_hamiltonian(text: &str) -> Result<SparseHamiltonian, HamiltonianFileError> {
    HamiltonianFile::from_json(text)?.to_hamiltonian()
}

pub fn read_hamiltonian(path: &Path) -> Result<SparseHamiltonian, HamiltonianFileError> {
    let text = fs::read_to_string(path).map_err(|source| HamiltonianFileError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_hamiltonian(&text)
}
