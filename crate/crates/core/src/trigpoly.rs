//! Real trigonometric series and the Laurent-polynomial form used for
//! products, root finding and spectral factorization.
//!
//! A [`TrigSeries`] of half-degree `K` is
//!
//! ```text
//! f(theta) = sum_{k=0}^{K} a_k cos(k theta) + sum_{k=1}^{K} c_k sin(k theta)
//! ```
//!
//! and corresponds to the Laurent polynomial `sum_{k=-K}^{K} b_k w^k` with
//! `w = exp(i theta)`, `b_0 = a_0`, `b_k = (a_k - i c_k) / 2` and
//! `b_{-k} = (a_k + i c_k) / 2`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::Zero;

use crate::linalg::poly_roots;
use crate::{Error, Result, C64};

/// Real Fourier series with cosine coefficients `a_0..a_K` and sine
/// coefficients `c_1..c_K`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TrigSeries {
    cos: Vec<f64>,
    /// `sin[0]` is always zero; `sin[k]` is `c_k`.
    sin: Vec<f64>,
}

impl TrigSeries {
    /// Build from `a_0..` and `c_1..`. The shorter list is zero-padded.
    ///
    /// Panics if any coefficient is not finite.
    pub fn new(cos_coeffs: Vec<f64>, sin_coeffs: Vec<f64>) -> Self {
        assert!(
            cos_coeffs.iter().chain(&sin_coeffs).all(|x| x.is_finite()),
            "trigonometric coefficients must be finite"
        );
        let k = cos_coeffs.len().saturating_sub(1).max(sin_coeffs.len());
        let mut cos = cos_coeffs;
        cos.resize(k + 1, 0.0);
        let mut sin = Vec::with_capacity(k + 1);
        sin.push(0.0);
        sin.extend(sin_coeffs);
        sin.resize(k + 1, 0.0);
        Self { cos, sin }
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn constant(a0: f64) -> Self {
        Self::new(vec![a0], Vec::new())
    }

    /// Pure cosine series `sum a_k cos(k theta)`.
    pub fn cosine(cos_coeffs: Vec<f64>) -> Self {
        Self::new(cos_coeffs, Vec::new())
    }

    /// Pure sine series `sum_{k>=1} c_k sin(k theta)`.
    pub fn sine(sin_coeffs: Vec<f64>) -> Self {
        Self::new(Vec::new(), sin_coeffs)
    }

    /// Largest frequency index `K` allowed by the stored coefficient lists.
    /// Trailing zeros count; use [`TrigSeries::effective_degree`] for the
    /// degree of the function itself.
    pub fn half_degree(&self) -> usize {
        self.cos.len() - 1
    }

    /// Largest `k` with a coefficient above `tol` in magnitude.
    pub fn effective_degree(&self, tol: f64) -> usize {
        (0..self.cos.len())
            .rev()
            .find(|&k| self.cos[k].abs() > tol || self.sin[k].abs() > tol)
            .unwrap_or(0)
    }

    /// `a_0..a_K`.
    pub fn cos_coeffs(&self) -> &[f64] {
        &self.cos
    }

    /// `c_1..c_K`.
    pub fn sin_coeffs(&self) -> &[f64] {
        &self.sin[1..]
    }

    /// `a_k`, zero beyond the stored degree.
    pub fn cos_coeff(&self, k: usize) -> f64 {
        self.cos.get(k).copied().unwrap_or(0.0)
    }

    /// `c_k`, zero for `k = 0` and beyond the stored degree.
    pub fn sin_coeff(&self, k: usize) -> f64 {
        self.sin.get(k).copied().unwrap_or(0.0)
    }

    pub fn eval(&self, theta: f64) -> f64 {
        let mut acc = self.cos[0];
        for k in 1..self.cos.len() {
            let (s, c) = libm::sincos(k as f64 * theta);
            acc += self.cos[k] * c + self.sin[k] * s;
        }
        acc
    }

    /// True when every sine coefficient is at most `tol` in magnitude.
    pub fn is_cosine_type(&self, tol: f64) -> bool {
        self.sin.iter().all(|c| c.abs() <= tol)
    }

    /// True when every cosine coefficient (including `a_0`) is at most `tol`.
    pub fn is_sine_type(&self, tol: f64) -> bool {
        self.cos.iter().all(|a| a.abs() <= tol)
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            cos: self.cos.iter().map(|a| a * factor).collect(),
            sin: self.sin.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, 1.0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, -1.0)
    }

    fn combine(&self, other: &Self, sign: f64) -> Self {
        let len = self.cos.len().max(other.cos.len());
        let cos = (0..len)
            .map(|k| self.cos_coeff(k) + sign * other.cos_coeff(k))
            .collect();
        let sin = (0..len)
            .map(|k| self.sin_coeff(k) + sign * other.sin_coeff(k))
            .collect();
        Self { cos, sin }
    }

    /// Pointwise product; the half-degree of the result is `K1 + K2`.
    pub fn multiply(&self, other: &Self) -> Self {
        let (series, _) = self.to_laurent().mul(&other.to_laurent()).to_trig_lossy();
        series
    }

    /// Drop trailing coefficient pairs whose magnitudes are at most `tol`.
    pub fn trimmed(&self, tol: f64) -> Self {
        let k = self.effective_degree(tol);
        Self {
            cos: self.cos[..=k].to_vec(),
            sin: self.sin[..=k].to_vec(),
        }
    }

    /// Zero-pad to half-degree `k` (no-op if already at least `k`).
    pub fn padded(&self, k: usize) -> Self {
        let mut out = self.clone();
        if out.cos.len() < k + 1 {
            out.cos.resize(k + 1, 0.0);
            out.sin.resize(k + 1, 0.0);
        }
        out
    }

    pub fn to_laurent(&self) -> LaurentPoly {
        let k = self.half_degree();
        let mut coeffs = vec![C64::zero(); 2 * k + 1];
        coeffs[k] = C64::new(self.cos[0], 0.0);
        for j in 1..=k {
            coeffs[k + j] = C64::new(self.cos[j] / 2.0, -self.sin[j] / 2.0);
            coeffs[k - j] = C64::new(self.cos[j] / 2.0, self.sin[j] / 2.0);
        }
        LaurentPoly::new(-(k as i64), coeffs, false)
    }
}

/// Laurent polynomial `sum_k b_k w^k` over a contiguous exponent range.
///
/// With `half_angle` set the variable is `w = exp(i theta / 2)`, otherwise
/// `w = exp(i theta)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentPoly {
    low: i64,
    coeffs: Vec<C64>,
    half_angle: bool,
}

impl LaurentPoly {
    /// `coeffs[i]` multiplies `w^(low + i)`. An empty list is the zero
    /// polynomial.
    pub fn new(low: i64, coeffs: Vec<C64>, half_angle: bool) -> Self {
        let coeffs = if coeffs.is_empty() { vec![C64::zero()] } else { coeffs };
        Self {
            low,
            coeffs,
            half_angle,
        }
    }

    pub fn low(&self) -> i64 {
        self.low
    }

    pub fn high(&self) -> i64 {
        self.low + self.coeffs.len() as i64 - 1
    }

    pub fn half_angle(&self) -> bool {
        self.half_angle
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// Coefficient of `w^k`, zero outside the stored range.
    pub fn coeff(&self, k: i64) -> C64 {
        if k < self.low || k > self.high() {
            C64::zero()
        } else {
            self.coeffs[(k - self.low) as usize]
        }
    }

    pub fn eval_at(&self, w: C64) -> C64 {
        let mut acc = C64::zero();
        for &c in self.coeffs.iter().rev() {
            acc = acc * w + c;
        }
        acc * w.powi(self.low as i32)
    }

    pub fn eval_theta(&self, theta: f64) -> C64 {
        let angle = if self.half_angle { theta / 2.0 } else { theta };
        let mut acc = C64::zero();
        for (i, &c) in self.coeffs.iter().enumerate() {
            let k = self.low + i as i64;
            let (s, co) = libm::sincos(k as f64 * angle);
            acc += c * C64::new(co, s);
        }
        acc
    }

    /// Product. Both factors must use the same variable.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(
            self.half_angle, other.half_angle,
            "Laurent product needs a common variable"
        );
        let mut coeffs = vec![C64::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Self::new(self.low + other.low, coeffs, self.half_angle)
    }

    /// Largest coefficient magnitude.
    pub fn max_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Remove leading and trailing coefficients below `tol` in magnitude.
    pub fn trimmed(&self, tol: f64) -> Self {
        let first = self.coeffs.iter().position(|c| c.norm() > tol);
        let Some(first) = first else {
            return Self::new(0, vec![C64::zero()], self.half_angle);
        };
        let last = self.coeffs.iter().rposition(|c| c.norm() > tol).unwrap();
        Self::new(
            self.low + first as i64,
            self.coeffs[first..=last].to_vec(),
            self.half_angle,
        )
    }

    /// Convert to a real trigonometric series in `theta`. Returns the series
    /// together with the largest deviation from conjugate symmetry
    /// (`|b_{-k} - conj(b_k)|`, including `|Im b_0|`), which is what gets
    /// discarded when taking the real part.
    ///
    /// Half-angle polynomials must only carry even exponents.
    pub fn to_trig(&self) -> Result<(TrigSeries, f64)> {
        let (step, low, high) = if self.half_angle {
            for k in self.low..=self.high() {
                if k % 2 != 0 && !self.coeff(k).is_zero() {
                    return Err(Error::HalfAngleExponent(k));
                }
            }
            (2, self.low.div_euclid(2), self.high().div_euclid(2))
        } else {
            (1, self.low, self.high())
        };
        let coeff = |k: i64| self.coeff(k * step);
        let k_max = low.abs().max(high.abs()) as usize;
        let mut cos = vec![0.0; k_max + 1];
        let mut sin = vec![0.0; k_max];
        let b0 = coeff(0);
        cos[0] = b0.re;
        let mut asym = b0.im.abs();
        for k in 1..=k_max as i64 {
            let plus = coeff(k);
            let minus = coeff(-k);
            // a_k = b_k + b_{-k}, c_k = i (b_k - b_{-k}); real parts kept.
            cos[k as usize] = (plus + minus).re;
            sin[k as usize - 1] = -(plus - minus).im;
            asym = asym.max((minus - plus.conj()).norm());
        }
        Ok((TrigSeries::new(cos, sin), asym))
    }

    fn to_trig_lossy(&self) -> (TrigSeries, f64) {
        self.to_trig().expect("full-angle Laurent polynomials always convert")
    }

    /// All roots of `w^(-low) p(w)` as an ordinary polynomial, with
    /// multiplicity. For a symmetric range `[-K, K]` these are the `2K`
    /// roots of `w^K p(w)`.
    ///
    /// A negligible leading coefficient (below `1e-14` of the largest)
    /// lowers the degree instead of producing spurious huge roots.
    pub fn roots(&self) -> Result<Vec<C64>> {
        poly_roots(&self.coeffs)
    }
}

/// Grid size used for sup-norm estimates of a series of half-degree `k`:
/// `max(1024, 8 * k)`.
pub fn default_grid_size(half_degree: usize) -> usize {
    1024.max(8 * half_degree)
}

/// Uniform grid `theta_j = 2 pi j / m` on `[0, 2 pi)`.
pub fn uniform_grid(m: usize) -> impl Iterator<Item = f64> + Clone {
    (0..m).map(move |j| 2.0 * PI * j as f64 / m as f64)
}

/// Grid estimate of `max_theta |A(theta) + i C(theta) - exp(i h(theta))|`.
///
/// This is a lower estimate of the true supremum. The grid is enlarged to
/// at least `4 (K + 1)` points, where `K` is the larger half-degree of `A`
/// and `C`; with the default grid of [`default_grid_size`] the oversampling
/// relative to the `2K + 1` Nyquist count is reported by
/// [`grid_oversampling`].
pub fn sup_norm_gap<H>(a: &TrigSeries, c: &TrigSeries, h: H, grid_size: usize) -> f64
where
    H: Fn(f64) -> f64,
{
    let k = a.half_degree().max(c.half_degree());
    let m = grid_size.max(4 * (k + 1));
    uniform_grid(m)
        .map(|theta| {
            let target = C64::from_polar(1.0, h(theta));
            (C64::new(a.eval(theta), c.eval(theta)) - target).norm()
        })
        .fold(0.0, f64::max)
}

/// Ratio of grid points to the `2K + 1` samples that determine a series of
/// half-degree `K`.
pub fn grid_oversampling(grid_size: usize, half_degree: usize) -> f64 {
    grid_size as f64 / (2 * half_degree + 1) as f64
}

/// Minimum over the grid of `1 - A^2 - C^2`.
pub fn subunitary_margin(a: &TrigSeries, c: &TrigSeries, grid_size: usize) -> f64 {
    uniform_grid(grid_size)
        .map(|t| {
            let (x, y) = (a.eval(t), c.eval(t));
            1.0 - x * x - y * y
        })
        .fold(f64::INFINITY, f64::min)
}
