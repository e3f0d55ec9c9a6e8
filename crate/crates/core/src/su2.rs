//! Single-qubit rotation sequences and their response functions.
//!
//! A phase sequence `phi_1..phi_N` defines
//! `V(theta) = R_{phi_N}(theta) ... R_{phi_1}(theta)` with
//! `R_phi(theta) = exp(-i theta/2 (X cos phi + Y sin phi))`, and the
//! response `V = A 1 + iB Z + iC X + iD Y`.
//!
//! With `w = exp(i theta / 2)` each rotation is the Laurent polynomial
//! `R_phi = w P_phi^- + w^-1 P_phi^+`, where `P^{+-} = (1 +- n.sigma) / 2`
//! project onto the eigenvectors of `n.sigma = X cos phi + Y sin phi`. That
//! form drives both the symbolic expansion here and layer stripping in
//! [`crate::phasefind`].

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::{wrap_angle, Mat2};
use crate::trigpoly::{default_grid_size, uniform_grid, LaurentPoly, TrigSeries};
use crate::{Error, Result, C64};

/// Ordered rotation phases, normalized to `(-pi, pi]`. Index 0 acts first.
#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct PhaseSequence {
    phases: Vec<f64>,
}

impl PhaseSequence {
    /// Panics on non-finite phases.
    pub fn new(phases: Vec<f64>) -> Self {
        assert!(phases.iter().all(|p| p.is_finite()), "phases must be finite");
        Self {
            phases: phases.into_iter().map(wrap_angle).collect(),
        }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }

    pub fn is_even(&self) -> bool {
        self.phases.len().is_multiple_of(2)
    }
}

/// The four real response functions of a rotation sequence.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ResponseABCD {
    pub a: TrigSeries,
    pub b: TrigSeries,
    pub c: TrigSeries,
    pub d: TrigSeries,
}

impl ResponseABCD {
    pub fn identity() -> Self {
        Self {
            a: TrigSeries::constant(1.0),
            b: TrigSeries::zero(),
            c: TrigSeries::zero(),
            d: TrigSeries::zero(),
        }
    }

    pub fn half_degree(&self) -> usize {
        [&self.a, &self.b, &self.c, &self.d]
            .iter()
            .map(|s| s.half_degree())
            .max()
            .unwrap_or(0)
    }

    /// `A 1 + iB Z + iC X + iD Y` at `theta`.
    pub fn matrix(&self, theta: f64) -> Mat2 {
        let (a, b, c, d) = (
            self.a.eval(theta),
            self.b.eval(theta),
            self.c.eval(theta),
            self.d.eval(theta),
        );
        Mat2::new(C64::new(a, b), C64::new(d, c), C64::new(-d, c), C64::new(a, -b))
    }

    /// `max |A^2 + B^2 + C^2 + D^2 - 1|` on a uniform grid.
    pub fn unitarity_residual(&self, grid_size: usize) -> f64 {
        uniform_grid(grid_size)
            .map(|t| {
                let s: f64 = [&self.a, &self.b, &self.c, &self.d]
                    .iter()
                    .map(|f| f.eval(t).powi(2))
                    .sum();
                (s - 1.0).abs()
            })
            .fold(0.0, f64::max)
    }

    /// The response as a matrix Laurent polynomial in `w = exp(i theta / 2)`.
    pub(crate) fn to_matrix_laurent(&self) -> MatLaurent {
        let k = self.half_degree();
        let pad = |s: &TrigSeries| s.padded(k).to_laurent();
        let (a, b, c, d) = (pad(&self.a), pad(&self.b), pad(&self.c), pad(&self.d));
        let i = C64::new(0.0, 1.0);
        // Exponent j of exp(i theta) is exponent 2j of w.
        let n = 2 * k;
        let mut coeffs = vec![Mat2::ZERO; 2 * n + 1];
        for j in -(k as i64)..=(k as i64) {
            let (aj, bj, cj, dj) = (a.coeff(j), b.coeff(j), c.coeff(j), d.coeff(j));
            coeffs[(2 * j + n as i64) as usize] = Mat2::new(aj + i * bj, dj + i * cj, -dj + i * cj, aj - i * bj);
        }
        MatLaurent {
            low: -(n as i64),
            coeffs,
        }
    }
}

/// 2x2 matrix-valued Laurent polynomial in `w = exp(i theta / 2)`.
#[derive(Debug, Clone)]
pub(crate) struct MatLaurent {
    pub low: i64,
    pub coeffs: Vec<Mat2>,
}

impl MatLaurent {
    pub fn identity() -> Self {
        Self {
            low: 0,
            coeffs: vec![Mat2::IDENTITY],
        }
    }

    pub fn high(&self) -> i64 {
        self.low + self.coeffs.len() as i64 - 1
    }

    pub fn coeff(&self, k: i64) -> Mat2 {
        if k < self.low || k > self.high() {
            Mat2::ZERO
        } else {
            self.coeffs[(k - self.low) as usize]
        }
    }

    /// Left-multiply by `w * up + w^-1 * down`.
    pub fn left_mul_linear(&self, up: Mat2, down: Mat2) -> Self {
        let low = self.low - 1;
        let high = self.high() + 1;
        let coeffs = (low..=high)
            .map(|k| up * self.coeff(k - 1) + down * self.coeff(k + 1))
            .collect();
        Self { low, coeffs }
    }

    pub fn entry(&self, row: usize, col: usize) -> LaurentPoly {
        LaurentPoly::new(self.low, self.coeffs.iter().map(|m| m.get(row, col)).collect(), true)
    }
}

/// Projectors `(P^+, P^-) = ((1 + n.sigma) / 2, (1 - n.sigma) / 2)` for the
/// rotation axis at angle `phi`.
pub(crate) fn axis_projectors(phi: f64) -> (Mat2, Mat2) {
    let half = C64::new(0.5, 0.0);
    let e = C64::from_polar(0.5, phi);
    let plus = Mat2::new(half, e.conj(), e, half);
    let minus = Mat2::new(half, -e.conj(), -e, half);
    (plus, minus)
}

/// `R_phi(theta) = exp(-i theta/2 (X cos phi + Y sin phi))`.
pub fn rot_matrix(phi: f64, theta: f64) -> Mat2 {
    let (s, c) = libm::sincos(theta / 2.0);
    let minus_i_s = C64::new(0.0, -s);
    Mat2::new(
        C64::new(c, 0.0),
        minus_i_s * C64::from_polar(1.0, -phi),
        minus_i_s * C64::from_polar(1.0, phi),
        C64::new(c, 0.0),
    )
}

/// `R_{phi_N}(theta) ... R_{phi_1}(theta)`.
pub fn response_eval(p: &PhaseSequence, theta: f64) -> Mat2 {
    p.phases()
        .iter()
        .fold(Mat2::IDENTITY, |acc, &phi| rot_matrix(phi, theta) * acc)
}

/// Expand a sequence into its response functions. Requires even length.
pub fn response_series(p: &PhaseSequence) -> Result<ResponseABCD> {
    if !p.is_even() {
        return Err(Error::UnsupportedParity(p.len()));
    }
    let mut poly = MatLaurent::identity();
    for &phi in p.phases() {
        let (plus, minus) = axis_projectors(phi);
        poly = poly.left_mul_linear(minus, plus);
    }
    let half = C64::new(0.5, 0.0);
    let e00 = poly.entry(0, 0);
    let e01 = poly.entry(0, 1);
    let e10 = poly.entry(1, 0);
    let e11 = poly.entry(1, 1);
    let combine = |x: &LaurentPoly, y: &LaurentPoly, sy: C64, s: C64| {
        let coeffs = x
            .coeffs()
            .iter()
            .zip(y.coeffs())
            .map(|(&u, &v)| (u + sy * v) * s)
            .collect();
        LaurentPoly::new(x.low(), coeffs, true)
    };
    // A = (V00 + V11)/2, B = (V00 - V11)/(2i), C = (V01 + V10)/(2i), D = (V01 - V10)/2
    let one = C64::new(1.0, 0.0);
    let minus_half_i = C64::new(0.0, -0.5);
    let a = combine(&e00, &e11, one, half).to_trig()?.0;
    let b = combine(&e00, &e11, -one, minus_half_i).to_trig()?.0;
    let c = combine(&e01, &e10, one, minus_half_i).to_trig()?.0;
    let d = combine(&e01, &e10, -one, half).to_trig()?.0;
    // Parity of the product is exact: A, B are even and C, D odd in theta.
    let k = p.len() / 2;
    Ok(ResponseABCD {
        a: TrigSeries::cosine(a.cos_coeffs().to_vec()).padded(k),
        b: TrigSeries::cosine(b.cos_coeffs().to_vec()).padded(k),
        c: TrigSeries::sine(c.sin_coeffs().to_vec()).padded(k),
        d: TrigSeries::sine(d.sin_coeffs().to_vec()).padded(k),
    })
}

/// `max_theta ||response_eval(p, theta) - resp.matrix(theta)||` on a grid.
pub fn response_distance(p: &PhaseSequence, resp: &ResponseABCD, grid_size: usize) -> f64 {
    uniform_grid(grid_size)
        .map(|t| (response_eval(p, t) - resp.matrix(t)).op_norm())
        .fold(0.0, f64::max)
}

/// Default verification grid for a sequence of length `n`.
pub fn verification_grid(n: usize) -> usize {
    default_grid_size(n)
}
