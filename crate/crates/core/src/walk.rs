//! Sparse Hermitian matrices behind an oracle interface, and the quantum
//! walk `W = iS(2TT' - 1)` built from them.
//!
//! Register layout: each of the two registers holds an `n`-qubit index `j`
//! and one flag qubit `b`, stored as `r = 2j + b`. The full basis index is
//! `r1 * 2^(n+1) + r2`, so the first register is the more significant one.
//!
//! `T|j> = |j,0> (x) d^{-1/2} sum_l [ a_{j,f} |f,0> + sqrt(1 - |H_jf| / H_max) |f,1> ]`
//! with `f = f(j, l)`. The amplitudes satisfy `a_{k,j} conj(a_{j,k}) = H_jk / H_max`,
//! which gives `T' S T = H / X` with `X = d H_max`. Such amplitudes exist
//! only for a nonnegative diagonal, so a Hamiltonian with negative diagonal
//! entries is walked as `H + c 1` with the smallest `c` that makes the
//! diagonal nonnegative; [`WalkOperator::shift`] records `c`.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::linalg::{
    angle_distance, hermitian_eigen, isometry_residual, max_abs, orthonormal_basis, schur_eigen, unitarity_residual,
    wrap_angle,
};
use crate::{CMatrix, Error, Result, C64};

/// Entries whose mirror differs by more than this are rejected.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Walk eigenphases further than this from every prediction are an error.
pub const EIGENPHASE_MATCH_TOL: f64 = 1e-6;

/// Sparse Hermitian matrix on `n` qubits with at most `d` nonzeros per row.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseHamiltonian {
    n: usize,
    d: usize,
    /// Per row, `(column, value)` in ascending column order; no zeros stored.
    rows: Vec<Vec<(usize, C64)>>,
    h_max: f64,
}

impl SparseHamiltonian {
    /// Validate and store a list of `(row, col, value)` entries.
    ///
    /// With `hermitize` set, an entry whose mirror is absent gets the mirror
    /// `conj(value)` and diagonal entries keep only their real part.
    /// Otherwise every entry must match its mirror within [`HERMITIAN_TOL`]
    /// (an absent mirror counts as zero). Mirrors present on both sides must
    /// agree in either mode. Exact zeros are dropped.
    pub fn from_entries(n: usize, d: usize, entries: &[(usize, usize, C64)], hermitize: bool) -> Result<Self> {
        if n >= usize::BITS as usize / 2 {
            return Err(Error::InvalidArgument("qubit count too large"));
        }
        let dim = 1usize << n;
        if d == 0 || d > dim {
            return Err(Error::InvalidSparsity { d, dim });
        }
        let mut given: Vec<Vec<(usize, C64)>> = vec![Vec::new(); dim];
        for &(j, k, v) in entries {
            if j >= dim || k >= dim {
                return Err(Error::IndexOutOfRange { row: j, col: k, dim });
            }
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::InvalidArgument("matrix entries must be finite"));
            }
            if given[j].iter().any(|&(c, _)| c == k) {
                return Err(Error::DuplicateEntry { row: j, col: k });
            }
            given[j].push((k, v));
        }
        let lookup = |j: usize, k: usize| given[j].iter().find(|&&(c, _)| c == k).map(|&(_, v)| v);

        let mut rows: Vec<Vec<(usize, C64)>> = vec![Vec::new(); dim];
        for j in 0..dim {
            for &(k, v) in &given[j] {
                if j == k {
                    if v.im.abs() > HERMITIAN_TOL && !hermitize {
                        return Err(Error::NotHermitian { row: j, col: k });
                    }
                    rows[j].push((j, C64::new(v.re, 0.0)));
                    continue;
                }
                match lookup(k, j) {
                    Some(w) => {
                        if (v - w.conj()).norm() > HERMITIAN_TOL {
                            return Err(Error::NotHermitian { row: j, col: k });
                        }
                        // Store the upper-triangle value and its exact conjugate.
                        let upper = if j < k { v } else { w };
                        rows[j].push((k, if j < k { upper } else { upper.conj() }));
                    }
                    None => {
                        if !hermitize && v.norm() > HERMITIAN_TOL {
                            return Err(Error::NotHermitian { row: j, col: k });
                        }
                        rows[j].push((k, v));
                        rows[k].push((j, v.conj()));
                    }
                }
            }
        }
        let mut h_max: f64 = 0.0;
        for (j, row) in rows.iter_mut().enumerate() {
            row.retain(|&(_, v)| v != C64::zero());
            row.sort_by_key(|&(c, _)| c);
            row.dedup_by_key(|&mut (c, _)| c);
            if row.len() > d {
                return Err(Error::SparsityExceeded {
                    row: j,
                    count: row.len(),
                    d,
                });
            }
            for &(_, v) in row.iter() {
                h_max = h_max.max(v.norm());
            }
        }
        Ok(Self { n, d, rows, h_max })
    }

    /// Validate a dense Hermitian matrix (used for tests and generators).
    pub fn from_dense(n: usize, d: usize, m: &CMatrix) -> Result<Self> {
        let dim = 1usize << n;
        if m.nrows() != dim || m.ncols() != dim {
            return Err(Error::DimensionMismatch {
                left: (m.nrows(), m.ncols()),
                right: (dim, dim),
            });
        }
        let entries: Vec<_> = (0..dim)
            .flat_map(|j| (0..dim).map(move |k| (j, k)))
            .filter(|&(j, k)| m[(j, k)] != C64::zero())
            .map(|(j, k)| (j, k, m[(j, k)]))
            .collect();
        Self::from_entries(n, d, &entries, false)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Largest entry magnitude.
    pub fn h_max(&self) -> f64 {
        self.h_max
    }

    pub fn is_zero(&self) -> bool {
        self.h_max == 0.0
    }

    /// Nonzeros of row `j` in ascending column order.
    pub fn row(&self, j: usize) -> &[(usize, C64)] {
        &self.rows[j]
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// All stored entries as `(row, col, value)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(j, row)| row.iter().map(move |&(k, v)| (j, k, v)))
    }

    /// Element oracle: `H_jk`.
    pub fn oracle_h(&self, j: usize, k: usize) -> C64 {
        self.rows[j]
            .iter()
            .find(|&&(c, _)| c == k)
            .map(|&(_, v)| v)
            .unwrap_or_else(C64::zero)
    }

    /// Column oracle: the `l`-th nonzero column of row `j`, ascending. Slots
    /// past the last nonzero are padded with `j` itself if it is not already
    /// a nonzero column, then with the unused columns in ascending order, so
    /// the `d` slots of a row are always distinct.
    pub fn oracle_f(&self, j: usize, l: usize) -> usize {
        assert!(l < self.d, "slot index out of range");
        column_slot(&self.rows[j], j, l)
    }

    pub fn to_dense(&self) -> CMatrix {
        let dim = self.dim();
        let mut m = CMatrix::zeros(dim, dim);
        for (j, k, v) in self.entries() {
            m[(j, k)] = v;
        }
        m
    }

    /// Smallest `c >= 0` making every diagonal entry of `H + c 1` nonnegative.
    pub fn diagonal_shift(&self) -> f64 {
        (0..self.dim()).map(|j| -self.oracle_h(j, j).re).fold(0.0, f64::max)
    }

    /// `H + c 1` with `d` enlarged if a new diagonal entry overfills a row.
    fn shifted(&self, c: f64) -> Self {
        if c == 0.0 {
            return self.clone();
        }
        let mut rows = self.rows.clone();
        for (j, row) in rows.iter_mut().enumerate() {
            match row.iter_mut().find(|(k, _)| *k == j) {
                Some((_, v)) => *v += c,
                None => row.push((j, C64::new(c, 0.0))),
            }
            row.retain(|&(_, v)| v != C64::zero());
            row.sort_by_key(|&(k, _)| k);
        }
        let d = rows.iter().map(Vec::len).max().unwrap_or(0).max(self.d);
        let h_max = rows.iter().flatten().map(|&(_, v)| v.norm()).fold(0.0, f64::max);
        Self {
            n: self.n,
            d,
            rows,
            h_max,
        }
    }
}

fn column_slot(row: &[(usize, C64)], j: usize, l: usize) -> usize {
    if l < row.len() {
        return row[l].0;
    }
    let used = |c: usize| row.iter().any(|&(k, _)| k == c);
    let mut pad = l - row.len();
    if !used(j) {
        if pad == 0 {
            return j;
        }
        pad -= 1;
    }
    (0..)
        .filter(|&c| c != j && !used(c))
        .nth(pad)
        .expect("slot beyond dimension")
}

/// The walk operator and its ingredients as dense matrices.
#[derive(Debug, Clone)]
pub struct WalkOperator {
    n: usize,
    w: CMatrix,
    t: CMatrix,
    swap: Vec<usize>,
    x: f64,
    shift: f64,
    d_eff: usize,
    h_max_eff: f64,
    walked: SparseHamiltonian,
}

impl WalkOperator {
    /// Number of system qubits.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Dimension `2^(2n+2)` of the walk space.
    pub fn dim(&self) -> usize {
        self.w.nrows()
    }

    pub fn w(&self) -> &CMatrix {
        &self.w
    }

    /// Isometry `T`, of shape `2^(2n+2) x 2^n`.
    pub fn t(&self) -> &CMatrix {
        &self.t
    }

    /// Dense swap `S`.
    pub fn s(&self) -> CMatrix {
        let dim = self.dim();
        let mut s = CMatrix::zeros(dim, dim);
        for (i, &j) in self.swap.iter().enumerate() {
            s[(j, i)] = C64::new(1.0, 0.0);
        }
        s
    }

    /// Spectral rescaling `X = d H_max` of the walked matrix.
    pub fn x(&self) -> f64 {
        self.x
    }

    /// Diagonal shift `c`; the walk encodes `H + c 1`.
    pub fn shift(&self) -> f64 {
        self.shift
    }

    pub fn d_eff(&self) -> usize {
        self.d_eff
    }

    pub fn h_max_eff(&self) -> f64 {
        self.h_max_eff
    }

    /// The matrix actually walked, `H + c 1`.
    pub fn walked_hamiltonian(&self) -> &SparseHamiltonian {
        &self.walked
    }

    /// Eigenvalues of `H + c 1`, ascending.
    pub fn walked_eigenvalues(&self) -> Vec<f64> {
        hermitian_eigen(&self.walked.to_dense()).0
    }

    /// Predicted eigenphase pairs `(arcsin(l/X), pi - arcsin(l/X))` for each
    /// eigenvalue `l` of `H + c 1`, wrapped to `(-pi, pi]`.
    pub fn predicted_eigenphases(&self) -> Vec<(f64, f64)> {
        self.walked_eigenvalues()
            .iter()
            .map(|&l| predicted_pair(l / self.x))
            .collect()
    }

    /// `max |T'T - 1|`.
    pub fn isometry_residual(&self) -> f64 {
        isometry_residual(&self.t)
    }

    /// `max |W'W - 1|`.
    pub fn unitarity_residual(&self) -> f64 {
        unitarity_residual(&self.w)
    }

    /// `max |(T'ST)_jk - (H + c 1)_jk / X|`.
    pub fn reconstruction_error(&self) -> f64 {
        let st = permute_rows(&self.t, &self.swap);
        let tst = self.t.adjoint() * st;
        let target = self.walked.to_dense() / C64::new(self.x, 0.0);
        max_abs(&(tst - target))
    }

    /// Apply `S` to the columns of `m`.
    pub fn apply_s(&self, m: &CMatrix) -> CMatrix {
        permute_rows(m, &self.swap)
    }
}

fn permute_rows(m: &CMatrix, perm: &[usize]) -> CMatrix {
    let mut out = CMatrix::zeros(m.nrows(), m.ncols());
    for (i, &j) in perm.iter().enumerate() {
        out.set_row(j, &m.row(i));
    }
    out
}

fn predicted_pair(ratio: f64) -> (f64, f64) {
    // Snap rounding noise at the edges, where arcsin is ill-conditioned.
    let r = if (1.0 - ratio.abs()) <= 1e-12 {
        ratio.signum()
    } else {
        ratio.clamp(-1.0, 1.0)
    };
    let a = libm::asin(r);
    (a, wrap_angle(core::f64::consts::PI - a))
}

/// Amplitude `a_{j,k}` with `a_{k,j} conj(a_{j,k}) = H_jk / H_max`.
fn walk_amplitude(j: usize, k: usize, h: C64, h_max: f64) -> C64 {
    let z = h / h_max;
    if j < k {
        z.conj().sqrt()
    } else if j > k {
        z.sqrt().conj()
    } else {
        C64::new(z.re.max(0.0).sqrt(), 0.0)
    }
}

/// Build `T`, `S` and `W = iS(2TT' - 1)` for `h`.
pub fn build_walk(h: &SparseHamiltonian) -> Result<WalkOperator> {
    if h.is_zero() {
        return Err(Error::ZeroHamiltonian);
    }
    let shift = h.diagonal_shift();
    let walked = h.shifted(shift);
    let n = h.n();
    let dim = h.dim();
    let reg = 2 * dim;
    let full = reg * reg;
    let d = walked.d;
    let h_max = walked.h_max;
    let x = d as f64 * h_max;

    let norm = 1.0 / (d as f64).sqrt();
    let mut t = CMatrix::zeros(full, dim);
    for j in 0..dim {
        let r1 = 2 * j;
        for l in 0..d {
            let f = column_slot(walked.row(j), j, l);
            let v = walked.oracle_h(j, f);
            let a = walk_amplitude(j, f, v, h_max);
            let b = (1.0 - v.norm() / h_max).max(0.0).sqrt();
            t[(r1 * reg + 2 * f, j)] = a * norm;
            t[(r1 * reg + 2 * f + 1, j)] = C64::new(b * norm, 0.0);
        }
    }

    // swap[i] is the image of basis index i.
    let swap: Vec<usize> = (0..full).map(|i| (i % reg) * reg + i / reg).collect();

    let i_unit = C64::new(0.0, 1.0);
    let refl = {
        let mut r = &t * t.adjoint() * C64::new(2.0, 0.0);
        for k in 0..full {
            r[(k, k)] -= C64::new(1.0, 0.0);
        }
        r
    };
    let w = permute_rows(&refl, &swap) * i_unit;

    Ok(WalkOperator {
        n,
        w,
        t,
        swap,
        x,
        shift,
        d_eff: d,
        h_max_eff: h_max,
        walked,
    })
}

/// Outcome of comparing the walk spectrum against `theta = arcsin(l/X)` and
/// `pi - arcsin(l/X)`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EigenphaseReport {
    /// `X` used for the prediction.
    pub x: f64,
    /// Diagonal shift `c` (eigenvalues below are of `H + c 1`).
    pub shift: f64,
    pub eigenvalues: Vec<f64>,
    pub predicted: Vec<(f64, f64)>,
    pub measured: Vec<(f64, f64)>,
    pub max_deviation: f64,
    /// `max |T'ST - (H + c 1)/X|`.
    pub reconstruction_error: f64,
    pub isometry_residual: f64,
    pub unitarity_residual: f64,
    /// `max |WQ - QM|` over the per-eigenvalue invariant subspaces.
    pub invariance_residual: f64,
}

impl EigenphaseReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_deviation <= tol
    }
}

/// Compare the eigenphases of `W` with the prediction from the spectrum of
/// `H + c 1`.
///
/// For each eigenpair `(l, v)` the plane spanned by `Tv` and `STv` is
/// invariant under `W`; the eigenvalues of `W` restricted to it are the
/// measured phases. When `Tv` and `STv` are parallel (`|l| = X`) the plane
/// degenerates to a line and its single phase serves for both predictions.
pub fn eigenphase_check(h: &SparseHamiltonian, walk: &WalkOperator) -> Result<EigenphaseReport> {
    let walked = h.shifted(walk.shift);
    let (values, vectors) = hermitian_eigen(&walked.to_dense());
    let mut predicted = Vec::with_capacity(values.len());
    let mut measured = Vec::with_capacity(values.len());
    let mut max_deviation: f64 = 0.0;
    let mut invariance_residual: f64 = 0.0;
    for (idx, &lambda) in values.iter().enumerate() {
        let pred = predicted_pair(lambda / walk.x);
        let tv = &walk.t * vectors.column(idx);
        let stv = walk.apply_s(&CMatrix::from_column_slice(tv.nrows(), 1, tv.as_slice()));
        let mut pair = CMatrix::zeros(tv.nrows(), 2);
        pair.set_column(0, &tv);
        pair.set_column(1, &stv.column(0));
        let q = orthonormal_basis(&pair, 1e-7);
        let m = q.adjoint() * &walk.w * &q;
        invariance_residual = invariance_residual.max(max_abs(&(&walk.w * &q - &q * &m)));
        let (mu, _) = schur_eigen(&m);
        let phases: Vec<f64> = mu.iter().map(|z| z.arg()).collect();
        let got = match phases.as_slice() {
            [p] => (*p, *p),
            [p0, p1] => {
                let direct = angle_distance(*p0, pred.0).max(angle_distance(*p1, pred.1));
                let crossed = angle_distance(*p1, pred.0).max(angle_distance(*p0, pred.1));
                if direct <= crossed {
                    (*p0, *p1)
                } else {
                    (*p1, *p0)
                }
            }
            _ => {
                return Err(Error::UnmatchedEigenphase {
                    predicted: pred.0,
                    deviation: f64::INFINITY,
                })
            }
        };
        let dev = angle_distance(got.0, pred.0).max(angle_distance(got.1, pred.1));
        if dev > EIGENPHASE_MATCH_TOL {
            let predicted = if angle_distance(got.0, pred.0) >= angle_distance(got.1, pred.1) {
                pred.0
            } else {
                pred.1
            };
            return Err(Error::UnmatchedEigenphase {
                predicted,
                deviation: dev,
            });
        }
        max_deviation = max_deviation.max(dev);
        predicted.push(pred);
        measured.push(got);
    }
    Ok(EigenphaseReport {
        x: walk.x,
        shift: walk.shift,
        eigenvalues: values,
        predicted,
        measured,
        max_deviation,
        reconstruction_error: walk.reconstruction_error(),
        isometry_residual: walk.isometry_residual(),
        unitarity_residual: walk.unitarity_residual(),
        invariance_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    /// Random Hermitian matrix with at most `d` nonzeros per row, built by
    /// placing mirrored pairs while both rows have room.
    pub(crate) fn random_sparse(rng: &mut ChaCha8Rng, n: usize, d: usize, real: bool) -> SparseHamiltonian {
        let dim = 1 << n;
        let mut count = vec![0usize; dim];
        let mut entries = Vec::new();
        for j in 0..dim {
            for k in j..dim {
                if count[j] >= d || count[k] >= d || rng.random::<f64>() < 0.3 {
                    continue;
                }
                let re = rng.random_range(-1.0..1.0);
                let im = if real || j == k {
                    0.0
                } else {
                    rng.random_range(-1.0..1.0)
                };
                entries.push((j, k, c(re, im)));
                count[j] += 1;
                if j != k {
                    count[k] += 1;
                }
            }
        }
        if entries.is_empty() {
            entries.push((0, 0, c(0.5, 0.0)));
        }
        SparseHamiltonian::from_entries(n, d, &entries, true).unwrap()
    }

    #[test]
    fn from_entries_examples() {
        let h = SparseHamiltonian::from_entries(1, 1, &[(0, 0, c(1.0, 0.0)), (1, 1, c(-1.0, 0.0))], false).unwrap();
        assert_eq!(h.d(), 1);
        assert_eq!(h.h_max(), 1.0);

        let err = SparseHamiltonian::from_entries(1, 2, &[(0, 1, c(0.0, 1.0))], false).unwrap_err();
        assert!(matches!(err, Error::NotHermitian { .. }));
        let ok = SparseHamiltonian::from_entries(1, 2, &[(0, 1, c(0.0, 1.0)), (1, 0, c(0.0, -1.0))], false).unwrap();
        assert_eq!(ok.oracle_h(1, 0), c(0.0, -1.0));
        let sym = SparseHamiltonian::from_entries(1, 2, &[(0, 1, c(0.0, 1.0))], true).unwrap();
        assert_eq!(sym, ok);

        let err = SparseHamiltonian::from_entries(1, 1, &[(0, 4, c(1.0, 0.0))], false).unwrap_err();
        assert!(matches!(err, Error::IndexOutOfRange { .. }));
        let err = SparseHamiltonian::from_entries(1, 1, &[(0, 0, c(1.0, 0.0)), (0, 1, c(1.0, 0.0))], true).unwrap_err();
        assert!(matches!(err, Error::SparsityExceeded { row: 0, .. }));
        let err = SparseHamiltonian::from_entries(1, 3, &[], false).unwrap_err();
        assert!(matches!(err, Error::InvalidSparsity { .. }));
    }

    #[test]
    fn h_max_is_max_entry() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let h = random_sparse(&mut rng, 2, 3, false);
        let dense = h.to_dense();
        let scan = dense.iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert_eq!(h.h_max(), scan);
    }

    #[test]
    fn oracle_f_conventions() {
        let h = SparseHamiltonian::from_entries(1, 1, &[(0, 0, c(1.0, 0.0)), (1, 1, c(2.0, 0.0))], false).unwrap();
        assert_eq!(h.oracle_f(0, 0), 0);
        assert_eq!(h.oracle_f(1, 0), 1);

        let h = SparseHamiltonian::from_entries(2, 3, &[(0, 1, c(1.0, 0.0)), (0, 3, c(2.0, 0.0))], true).unwrap();
        assert_eq!((0..3).map(|l| h.oracle_f(0, l)).collect::<Vec<_>>(), vec![1, 3, 0]);
        // Row 1 holds only column 0: pad with 1, then the smallest unused column.
        assert_eq!((0..3).map(|l| h.oracle_f(1, l)).collect::<Vec<_>>(), vec![0, 1, 2]);

        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let h = random_sparse(&mut rng, 3, 3, false);
        for j in 0..h.dim() {
            let via_oracle: f64 = (0..h.d()).map(|l| h.oracle_h(j, h.oracle_f(j, l)).norm()).sum();
            let row_norm: f64 = h.row(j).iter().map(|(_, v)| v.norm()).sum();
            assert!((via_oracle - row_norm).abs() < 1e-15);
        }
    }

    #[test]
    fn walk_structure() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..=3 {
            for d in [1, 2, 3] {
                if d > 1 << n {
                    continue;
                }
                let h = random_sparse(&mut rng, n, d, false);
                let walk = build_walk(&h).unwrap();
                assert_eq!(walk.dim(), 1 << (2 * n + 2));
                assert!(walk.isometry_residual() < 1e-12);
                assert!(walk.unitarity_residual() < 1e-12);
                assert!(walk.reconstruction_error() < 1e-12);
                let s = walk.s();
                let s2 = &s * &s;
                assert_eq!(s2, CMatrix::identity(walk.dim(), walk.dim()));
                for l in walk.walked_eigenvalues() {
                    assert!(l.abs() <= walk.x() * (1.0 + 1e-12));
                }
            }
        }
    }

    #[test]
    fn shift_only_for_negative_diagonal() {
        let h = SparseHamiltonian::from_entries(1, 1, &[(0, 1, c(1.0, 0.0))], true).unwrap();
        let walk = build_walk(&h).unwrap();
        assert_eq!(walk.shift(), 0.0);
        assert_eq!(walk.x(), 1.0);

        let h = SparseHamiltonian::from_entries(1, 1, &[(0, 0, c(1.0, 0.0)), (1, 1, c(-1.0, 0.0))], false).unwrap();
        let walk = build_walk(&h).unwrap();
        assert_eq!(walk.shift(), 1.0);
        assert_eq!(walk.x(), 2.0);
        assert!(walk.reconstruction_error() < 1e-15);
    }

    #[test]
    fn zero_hamiltonian_is_rejected() {
        let h = SparseHamiltonian::from_entries(1, 1, &[], false).unwrap();
        assert!(matches!(build_walk(&h), Err(Error::ZeroHamiltonian)));
    }

    #[test]
    fn sigma_x_phases_are_half_pi() {
        let h = SparseHamiltonian::from_entries(1, 1, &[(0, 1, c(0.7, 0.0))], true).unwrap();
        let walk = build_walk(&h).unwrap();
        let report = eigenphase_check(&h, &walk).unwrap();
        assert!((report.x - 0.7).abs() < 1e-15);
        let mut phases: Vec<f64> = report.measured.iter().flat_map(|&(a, b)| [a, b]).collect();
        phases.sort_by(f64::total_cmp);
        for (p, want) in phases.iter().zip([-PI / 2.0, -PI / 2.0, PI / 2.0, PI / 2.0]) {
            assert!((p - want).abs() < 1e-12);
        }
    }

    #[test]
    fn shifted_diagonal_phases() {
        // diag(h, -h) is walked as diag(2h, 0): phases pi/2 for 2h and {0, pi} for 0.
        let h = SparseHamiltonian::from_entries(1, 1, &[(0, 0, c(0.5, 0.0)), (1, 1, c(-0.5, 0.0))], false).unwrap();
        let walk = build_walk(&h).unwrap();
        let report = eigenphase_check(&h, &walk).unwrap();
        assert!(report.max_deviation < 1e-14);
        assert_eq!(report.eigenvalues, vec![0.0, 1.0]);
        assert!(angle_distance(report.measured[0].0, 0.0) < 1e-14);
        assert!(angle_distance(report.measured[0].1, PI) < 1e-14);
        assert!((report.measured[1].0 - PI / 2.0).abs() < 1e-14);
    }

    #[test]
    fn scaled_identity_phases() {
        let entries: Vec<_> = (0..4).map(|j| (j, j, c(0.3, 0.0))).collect();
        let h = SparseHamiltonian::from_entries(2, 2, &entries, false).unwrap();
        let walk = build_walk(&h).unwrap();
        let report = eigenphase_check(&h, &walk).unwrap();
        let a = libm::asin(0.5);
        assert_eq!(report.measured.len(), 4);
        for &(p, m) in &report.measured {
            assert!((p - a).abs() < 1e-12);
            assert!((m - (PI - a)).abs() < 1e-12);
        }
    }

    #[test]
    fn random_instances_match_prediction() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for trial in 0..8 {
            let h = random_sparse(&mut rng, 2, 2, trial % 2 == 0);
            let walk = build_walk(&h).unwrap();
            let report = eigenphase_check(&h, &walk).unwrap();
            assert!(report.max_deviation < 1e-10, "{}", report.max_deviation);
            assert!(report.invariance_residual < 1e-12);
        }
    }

    #[test]
    fn walk_is_swap_times_reflection() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let h = random_sparse(&mut rng, 1, 2, false);
        let walk = build_walk(&h).unwrap();
        let dim = walk.dim();
        let refl = walk.t() * walk.t().adjoint() * c(2.0, 0.0) - CMatrix::identity(dim, dim);
        let want = walk.s() * refl * c(0.0, 1.0);
        assert!(max_abs(&(want - walk.w())) < 1e-15);
    }
}
