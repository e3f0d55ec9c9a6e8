//! Small dense linear-algebra helpers: 2x2 complex matrices, polynomial
//! roots through balanced companion matrices, and residual measures for
//! unitaries and isometries.

use alloc::vec::Vec;
use core::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num_traits::Zero;

use crate::{CMatrix, Error, Result, C64};

/// 2x2 complex matrix stored row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[C64; 2]; 2]);

impl Mat2 {
    pub const ZERO: Mat2 = Mat2([[C64::new(0.0, 0.0); 2]; 2]);
    pub const IDENTITY: Mat2 = Mat2([
        [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
        [C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
    ]);

    pub fn new(m00: C64, m01: C64, m10: C64, m11: C64) -> Self {
        Mat2([[m00, m01], [m10, m11]])
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.0[row][col]
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Mat2::new(m[0][0].conj(), m[1][0].conj(), m[0][1].conj(), m[1][1].conj())
    }

    pub fn det(&self) -> C64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn scale(&self, s: C64) -> Self {
        let m = &self.0;
        Mat2::new(m[0][0] * s, m[0][1] * s, m[1][0] * s, m[1][1] * s)
    }

    /// Frobenius norm.
    pub fn frobenius(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest singular value, in closed form.
    pub fn op_norm(&self) -> f64 {
        let f2 = self.0.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>();
        let d = self.det().norm();
        // sigma_max^2 = (f2 + sqrt(f2^2 - 4 |det|^2)) / 2
        let disc = (f2 * f2 - 4.0 * d * d).max(0.0);
        ((f2 + disc.sqrt()) / 2.0).sqrt()
    }

    /// Pauli decomposition `A 1 + iB Z + iC X + iD Y` of an SU(2) matrix.
    /// Returns `(A, B, C, D)` taken from the Hermitian-symmetric parts, so the
    /// values are real for exact SU(2) input.
    pub fn pauli_components(&self) -> (f64, f64, f64, f64) {
        let m = &self.0;
        let a = (m[0][0] + m[1][1]) * 0.5;
        let b = (m[0][0] - m[1][1]) * C64::new(0.0, -0.5);
        let c = (m[0][1] + m[1][0]) * C64::new(0.0, -0.5);
        let d = (m[0][1] - m[1][0]) * 0.5;
        (a.re, b.re, c.re, d.re)
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        let a = &self.0;
        let b = &rhs.0;
        let mut out = Mat2::ZERO;
        for i in 0..2 {
            for j in 0..2 {
                out.0[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        out
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        let mut out = self;
        for i in 0..2 {
            for j in 0..2 {
                out.0[i][j] += rhs.0[i][j];
            }
        }
        out
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: Mat2) -> Mat2 {
        let mut out = self;
        for i in 0..2 {
            for j in 0..2 {
                out.0[i][j] -= rhs.0[i][j];
            }
        }
        out
    }
}

/// Parlett-Reinsch balancing with radix 2. Scales rows and columns by powers
/// of two, so the eigenvalues are unchanged up to rounding.
pub fn balance(m: &mut CMatrix) {
    let n = m.nrows();
    let mut converged = false;
    while !converged {
        converged = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += m[(j, i)].l1_norm();
                    r += m[(i, j)].l1_norm();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / 2.0;
            while c < g {
                f *= 2.0;
                c *= 4.0;
            }
            g = r * 2.0;
            while c >= g {
                f /= 2.0;
                c /= 4.0;
            }
            if (c + r) / f < 0.95 * s {
                converged = false;
                let inv = 1.0 / f;
                for j in 0..n {
                    m[(i, j)] *= inv;
                    m[(j, i)] *= f;
                }
            }
        }
    }
}

/// Horner evaluation of `sum coeffs[i] z^i` and its derivative.
pub fn horner(coeffs: &[C64], z: C64) -> (C64, C64) {
    let mut p = C64::zero();
    let mut dp = C64::zero();
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// All roots of the ordinary polynomial `sum coeffs[i] z^i` (ascending
/// order), computed as eigenvalues of the balanced companion matrix and then
/// polished with a few guarded Newton steps.
///
/// Leading coefficients below `1e-14` of the largest coefficient are treated
/// as zero and reduce the degree.
pub fn poly_roots(coeffs: &[C64]) -> Result<Vec<C64>> {
    roots_above(coeffs, 1e-14, true)
}

/// [`poly_roots`] keeping every nonzero leading coefficient. For graded
/// polynomials whose tiny leading coefficients are accurate, such as
/// self-reciprocal ones.
pub fn poly_roots_full(coeffs: &[C64]) -> Result<Vec<C64>> {
    roots_above(coeffs, 0.0, false)
}

fn roots_above(coeffs: &[C64], rel_cutoff: f64, polish: bool) -> Result<Vec<C64>> {
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Err(Error::ZeroPolynomial);
    }
    let mut deg = coeffs.len() - 1;
    while coeffs[deg].norm() <= rel_cutoff * scale {
        deg -= 1;
    }
    let coeffs = &coeffs[..=deg];
    match deg {
        0 => return Ok(Vec::new()),
        1 => return Ok(alloc::vec![-coeffs[0] / coeffs[1]]),
        _ => {}
    }

    let lead = coeffs[deg];
    let mut companion = CMatrix::zeros(deg, deg);
    for i in 1..deg {
        companion[(i, i - 1)] = C64::new(1.0, 0.0);
    }
    for i in 0..deg {
        companion[(i, deg - 1)] = -coeffs[i] / lead;
    }
    balance(&mut companion);
    let mut roots = match schur_with_retries(&companion) {
        Some((_, t)) => (0..deg).map(|i| t[(i, i)]).collect(),
        None => aberth(coeffs),
    };
    if polish {
        for r in roots.iter_mut() {
            polish_root(coeffs, r);
        }
    }
    Ok(roots)
}

fn polish_root(coeffs: &[C64], root: &mut C64) {
    let (mut value, _) = horner(coeffs, *root);
    for _ in 0..3 {
        let (p, dp) = horner(coeffs, *root);
        if dp.norm() == 0.0 {
            return;
        }
        let candidate = *root - p / dp;
        let (pc, _) = horner(coeffs, candidate);
        if pc.norm() < value.norm() {
            *root = candidate;
            value = pc;
        } else {
            return;
        }
    }
}

/// Relative residual `|p(r)| / sum |p_i| |r|^i` of a root.
pub fn relative_root_residual(coeffs: &[C64], root: C64) -> f64 {
    let (p, _) = horner(coeffs, root);
    let r = root.norm();
    let mut scale = 0.0;
    let mut pow = 1.0;
    for c in coeffs {
        scale += c.norm() * pow;
        pow *= r;
    }
    if scale == 0.0 {
        0.0
    } else {
        p.norm() / scale
    }
}

/// Largest entry magnitude of `M' M - 1`.
pub fn isometry_residual(m: &CMatrix) -> f64 {
    let gram = m.adjoint() * m;
    max_abs_deviation_from_identity(&gram)
}

/// Largest entry magnitude of `U' U - 1` for a square matrix.
pub fn unitarity_residual(u: &CMatrix) -> f64 {
    isometry_residual(u)
}

fn max_abs_deviation_from_identity(m: &CMatrix) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((m[(i, j)] - C64::new(target, 0.0)).norm());
        }
    }
    worst
}

/// Largest singular value.
pub fn spectral_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().singular_values().max()
}

/// Largest entry magnitude.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Eigenvalues and orthonormal eigenvectors of a Hermitian matrix, sorted
/// by ascending eigenvalue.
pub fn hermitian_eigen(h: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = h.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(h.nrows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Schur vectors and eigenvalues of a square complex matrix. For a normal
/// matrix (e.g. a unitary) the Schur vectors are eigenvectors.
///
/// Panics if the QR iteration fails to converge even after the scrambled
/// retries of `schur_with_retries`.
pub fn schur_eigen(m: &CMatrix) -> (Vec<C64>, CMatrix) {
    let (q, t) = schur_with_retries(m).expect("Schur iteration did not converge");
    let values = (0..t.nrows()).map(|i| t[(i, i)]).collect();
    (values, q)
}

/// Complex Schur decomposition `(Q, T)` with a bounded iteration count.
///
/// Shifted QR can cycle on matrices with a rotational structure (the
/// companion matrix of `z^n - 1` is the classic case). On failure the
/// matrix is conjugated by a fixed Householder reflection, which breaks the
/// structure without changing the spectrum, and the iteration is retried.
fn schur_with_retries(m: &CMatrix) -> Option<(CMatrix, CMatrix)> {
    let n = m.nrows();
    let max_iter = 100 * n.max(1) + 100;
    if let Some(s) = m.clone().try_schur(f64::EPSILON, max_iter) {
        return Some(s.unpack());
    }
    for attempt in 1..=3 {
        let h = householder(n, attempt);
        if let Some(s) = (&h * m * &h).try_schur(f64::EPSILON, max_iter) {
            let (q, t) = s.unpack();
            return Some((h * q, t));
        }
    }
    None
}

/// Householder reflection `1 - 2 v v'` for a fixed pseudo-random unit `v`.
fn householder(n: usize, seed: usize) -> CMatrix {
    let v: Vec<C64> = (0..n)
        .map(|i| {
            let x = (i + 1) as f64 * (0.618_033_988_75 + seed as f64 * 0.414_213_562_37);
            C64::from_polar(1.0 + 0.5 * libm::sin(3.0 * x), 7.0 * x)
        })
        .collect();
    let norm = libm::sqrt(v.iter().map(|z| z.norm_sqr()).sum::<f64>());
    DMatrix::from_fn(n, n, |r, c| {
        let id = if r == c { 1.0 } else { 0.0 };
        C64::new(id, 0.0) - v[r] * v[c].conj() * (2.0 / (norm * norm))
    })
}

/// Simultaneous Aberth-Ehrlich iteration, used when the companion
/// eigenvalue route fails.
fn aberth(coeffs: &[C64]) -> Vec<C64> {
    let deg = coeffs.len() - 1;
    let lead = coeffs[deg].norm();
    let radius = coeffs[..deg]
        .iter()
        .map(|c| c.norm() / lead)
        .fold(0.0, f64::max)
        .max(1e-3);
    let mut z: Vec<C64> = (0..deg)
        .map(|k| C64::from_polar(radius, 2.0 * core::f64::consts::PI * (k as f64 + 0.25) / deg as f64))
        .collect();
    for _ in 0..500 {
        let mut moved: f64 = 0.0;
        for i in 0..deg {
            let (p, dp) = horner(coeffs, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: C64 = (0..deg)
                .filter(|&j| j != i)
                .map(|j| C64::new(1.0, 0.0) / (z[i] - z[j]))
                .sum();
            let step = ratio / (C64::new(1.0, 0.0) - ratio * repulsion);
            z[i] -= step;
            moved = moved.max(step.norm() / z[i].norm().max(1.0));
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

/// Orthonormal basis of the column span of `m`, by modified Gram-Schmidt with
/// one reorthogonalization pass. Columns whose remaining norm falls below
/// `tol` are dropped.
pub fn orthonormal_basis(m: &CMatrix, tol: f64) -> CMatrix {
    let rows = m.nrows();
    let mut basis: Vec<nalgebra::DVector<C64>> = Vec::new();
    for j in 0..m.ncols() {
        let mut v = m.column(j).into_owned();
        for _ in 0..2 {
            for b in &basis {
                let proj = b.dotc(&v);
                v -= b * proj;
            }
        }
        let norm = v.norm();
        if norm > tol {
            basis.push(v / C64::new(norm, 0.0));
        }
    }
    DMatrix::from_fn(rows, basis.len(), |r, c| basis[c][r])
}

/// Wrap an angle into `(-pi, pi]`.
pub fn wrap_angle(x: f64) -> f64 {
    use core::f64::consts::PI;
    let two_pi = 2.0 * PI;
    let mut y = x % two_pi;
    if y <= -PI {
        y += two_pi;
    } else if y > PI {
        y -= two_pi;
    }
    y
}

/// Distance between two angles on the circle.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    wrap_angle(a - b).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn roots_of_linear_and_quadratic() {
        let r = poly_roots(&[c(-1.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r[0] - c(1.0, 0.0)).norm() < 1e-15);

        let mut r = poly_roots(&[c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        r.sort_by(|a, b| a.im.total_cmp(&b.im));
        assert!((r[0] - c(0.0, -1.0)).norm() < 1e-12);
        assert!((r[1] - c(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn zero_polynomial_is_an_error() {
        assert_eq!(poly_roots(&[C64::zero(), C64::zero()]), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn negligible_leading_coefficient_reduces_degree() {
        let r = poly_roots(&[c(-2.0, 0.0), c(1.0, 0.0), c(1e-17, 0.0)]).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r[0] - c(2.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn roots_of_unity_with_badly_scaled_coefficients() {
        // 1e6 (z^12 - 1): balancing keeps the companion well scaled.
        let mut coeffs = alloc::vec![C64::zero(); 13];
        coeffs[0] = c(-1e6, 0.0);
        coeffs[12] = c(1e6, 0.0);
        let roots = poly_roots(&coeffs).unwrap();
        assert_eq!(roots.len(), 12);
        for r in &roots {
            assert!((r.norm() - 1.0).abs() < 1e-12);
            assert!(relative_root_residual(&coeffs, *r) < 1e-14);
        }
    }

    #[test]
    fn mat2_op_norm_matches_svd() {
        let m = Mat2::new(c(1.0, 2.0), c(-0.5, 0.0), c(0.3, -1.0), c(2.0, 0.5));
        let dense = CMatrix::from_row_slice(2, 2, &[m.0[0][0], m.0[0][1], m.0[1][0], m.0[1][1]]);
        assert!((m.op_norm() - spectral_norm(&dense)).abs() < 1e-12);
    }

    #[test]
    fn wrap_angle_range() {
        assert_eq!(wrap_angle(PI), PI);
        assert!((wrap_angle(-PI) - PI).abs() < 1e-15);
        assert!((wrap_angle(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
        assert!((wrap_angle(7.0) - (7.0 - 2.0 * PI)).abs() < 1e-15);
        assert!(angle_distance(PI - 1e-3, -PI + 1e-3) < 2.1e-3);
    }

    #[test]
    fn orthonormal_basis_drops_dependent_columns() {
        let m = CMatrix::from_row_slice(
            3,
            3,
            &[
                c(1.0, 0.0),
                c(2.0, 0.0),
                c(0.0, 1.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(1.0, 0.0),
                c(1.0, 0.0),
                c(2.0, 0.0),
                c(0.0, 0.0),
            ],
        );
        let q = orthonormal_basis(&m, 1e-10);
        assert_eq!(q.ncols(), 2);
        assert!(isometry_residual(&q) < 1e-14);
    }
}
