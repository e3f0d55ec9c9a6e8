//! From a target `(A, C)` pair to a phase sequence.
//!
//! The synthesis pipeline is
//!
//! 1. [`rescale`] by `1 / (1 + eps)` so that `A^2 + C^2 <= 1`;
//! 2. [`complete`] the pair with `B` (cosine type) and `D` (sine type) such
//!    that `A^2 + B^2 + C^2 + D^2 = 1`, by spectral factorization of the
//!    nonnegative polynomial `1 - A^2 - C^2`;
//! 3. [`anchor_correct`] rotates the `(A, B)` plane by
//!    `delta = atan2(B(0), A(0))` so that the new `A` equals 1 at `theta = 0`;
//! 4. [`layer_strip`] peels one rotation at a time off the resulting
//!    unitary-valued Laurent polynomial.
//!
//! [`synthesize`] runs all of it and certifies the result by direct
//! evaluation of the recovered sequence.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_traits::Zero;

use crate::linalg::{poly_roots_full, Mat2};
use crate::su2::{axis_projectors, response_eval, MatLaurent, PhaseSequence, ResponseABCD};
use crate::trigpoly::{default_grid_size, subunitary_margin, sup_norm_gap, uniform_grid, TrigSeries};
use crate::{Error, Result, C64};

/// Tolerance used for the achievability verdict.
pub const ACHIEVABILITY_TOL: f64 = 1e-10;

/// Completions whose unitarity residual exceeds this are rejected.
pub const COMPLETION_FAILURE_TOL: f64 = 1e-6;

/// Target unitarity residual of a completion. Results between this and
/// [`COMPLETION_FAILURE_TOL`] are returned but flagged by
/// [`CompletionResult::is_certified`].
pub const COMPLETION_TOL: f64 = 1e-8;

/// Longest sequence synthesized in double precision.
pub const MAX_SEQUENCE_LENGTH: usize = 64;

/// `1 - A^2 - C^2` with all coefficients at or below this is treated as zero.
const FACTOR_ZERO_TOL: f64 = 1e-14;

/// Trailing coefficients of `1 - A^2 - C^2` below this fraction of the
/// largest one are dropped before factoring. Long sequences have top
/// coefficients near `2^-N`, which squared fall below rounding level.
const FACTOR_TRIM_REL: f64 = 1e-30;

/// Coefficient blocks at or below this (Frobenius norm) are treated as zero
/// during stripping.
const STRIP_ZERO_TOL: f64 = 1e-11;

/// Largest mass a stripping step may discard. The polynomial has unit
/// scale, so this is absolute: the leading block of a polynomial that is
/// unitary up to `eta` is rank one only up to `eta / ||C_top||`, which is
/// large relative to `||C_top||` when the leading block is tiny.
const STRIP_RANK_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AchievabilityReport {
    /// Grid minimum of `1 - A^2 - C^2`.
    pub condition1_margin: f64,
    /// `|A(0) - 1|`.
    pub condition2_residual: f64,
    pub degree_ok: bool,
    pub parity_ok: bool,
    pub verdict: bool,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CompletionResult {
    /// Cosine-type completion.
    pub b: TrigSeries,
    /// Sine-type completion.
    pub d: TrigSeries,
    /// Grid maximum of `|A^2 + B^2 + C^2 + D^2 - 1|`.
    pub unitarity_residual: f64,
    /// `atan2(B(0), A(0))`.
    pub delta: f64,
}

impl CompletionResult {
    pub fn is_certified(&self) -> bool {
        self.unitarity_residual <= COMPLETION_TOL
    }
}

/// Measurements taken along [`synthesize`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SynthesisDiagnostics {
    pub eps_in: f64,
    /// Measured `max |A + iC - e^{ih}|` of the input.
    pub gap_in: f64,
    pub gap_after_rescale: f64,
    pub delta: f64,
    pub unitarity_residual: f64,
    /// Measured gap of the anchor-corrected pair `A_2 + i C_1`.
    pub gap_after_anchor: f64,
    /// Measured gap of `<+|V|+>` computed from the returned phases.
    pub gap_final: f64,
    pub min_success_prob: f64,
    #[cfg_attr(feature = "serde", serde(rename = "N"))]
    pub n: usize,
}

impl SynthesisDiagnostics {
    /// Both guarantees of the construction: final gap within `8 eps` and
    /// success probability at least `1 - 16 eps`.
    pub fn bounds_hold(&self) -> bool {
        self.gap_final <= 8.0 * self.eps_in && self.min_success_prob >= 1.0 - 16.0 * self.eps_in
    }
}

/// Check whether `(A, C)` can be produced by an `n`-step sequence.
pub fn validate_achievable(a: &TrigSeries, c: &TrigSeries, n: usize) -> AchievabilityReport {
    let k = a.half_degree().max(c.half_degree());
    let grid = default_grid_size(k);
    let condition1_margin = subunitary_margin(a, c, grid);
    let condition2_residual = (a.eval(0.0) - 1.0).abs();
    let degree_tol = 1e-14;
    let degree_ok =
        n.is_multiple_of(2) && a.effective_degree(degree_tol) <= n / 2 && c.effective_degree(degree_tol) <= n / 2;
    let parity_ok = a.is_cosine_type(ACHIEVABILITY_TOL) && c.is_sine_type(ACHIEVABILITY_TOL);
    let verdict =
        condition1_margin >= -ACHIEVABILITY_TOL && condition2_residual <= ACHIEVABILITY_TOL && degree_ok && parity_ok;
    AchievabilityReport {
        condition1_margin,
        condition2_residual,
        degree_ok,
        parity_ok,
        verdict,
    }
}

/// `(A / (1 + eps), C / (1 + eps))`.
pub fn rescale(a: &TrigSeries, c: &TrigSeries, eps: f64) -> (TrigSeries, TrigSeries) {
    assert!(eps >= 0.0, "eps must be nonnegative");
    let f = 1.0 / (1.0 + eps);
    (a.scale(f), c.scale(f))
}

/// Complete `(A, C)` with `B` (cosine type) and `D` (sine type) so that
/// `A^2 + B^2 + C^2 + D^2 = 1`.
///
/// `1 - A^2 - C^2` is factored as `|G(e^{i theta})|^2` with `G` a real
/// polynomial built from one root of each conjugate-reciprocal pair (the one
/// inside the unit disk; pairs on the circle are merged into a double root).
/// `B` and `D` are the even and odd parts of `e^{-i s theta} G`. The overall
/// sign makes the first nonzero sine coefficient of `D` positive (or `B(0)`
/// nonnegative when `D` vanishes).
pub fn complete(a: &TrigSeries, c: &TrigSeries) -> Result<CompletionResult> {
    let k = a.half_degree().max(c.half_degree());
    let grid = default_grid_size(k);
    let margin = subunitary_margin(a, c, grid);
    if margin < -ACHIEVABILITY_TOL {
        return Err(Error::NotSubunitary { margin });
    }

    let p = TrigSeries::constant(1.0).sub(&a.multiply(a)).sub(&c.multiply(c));
    // The product of two even or two odd series is even; drop rounding noise
    // in the sine part.
    let p_cos: Vec<f64> = p.cos_coeffs().to_vec();
    let p_max = p_cos.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let (mut b, mut d) = if p_max <= FACTOR_ZERO_TOL {
        (TrigSeries::zero(), TrigSeries::zero())
    } else {
        let m = (0..p_cos.len())
            .rev()
            .find(|&j| p_cos[j].abs() > FACTOR_TRIM_REL * p_max)
            .unwrap_or(0);
        spectral_factor(&p_cos[..=m], p_cos.iter().sum::<f64>().abs() <= PIN_TOL)?
    };

    let sign = d
        .sin_coeffs()
        .iter()
        .copied()
        .find(|x| x.abs() > FACTOR_ZERO_TOL)
        .map(|x| x.signum())
        .unwrap_or_else(|| if b.eval(0.0) < 0.0 { -1.0 } else { 1.0 });
    if sign < 0.0 {
        b = b.scale(-1.0);
        d = d.scale(-1.0);
    }
    let (b, d) = polish_completion(a, c, &b.padded(k), &d.padded(k));

    let resp = ResponseABCD {
        a: a.clone(),
        b: b.clone(),
        c: c.clone(),
        d: d.clone(),
    };
    let unitarity_residual = resp.unitarity_residual(grid);
    if unitarity_residual > COMPLETION_FAILURE_TOL {
        return Err(Error::IllConditionedCompletion {
            residual: unitarity_residual,
        });
    }
    let delta = libm::atan2(b.eval(0.0), a.eval(0.0));
    Ok(CompletionResult {
        b,
        d,
        unitarity_residual,
        delta,
    })
}

/// Gauss-Newton on the coefficients of `A^2 + B^2 + C^2 + D^2 - 1`.
///
/// The factor from root finding is only as good as the roots, and when the
/// leading coefficients of `(A, C)` are tiny the top of `1 - A^2 - C^2`
/// drops below rounding level and is lost. The leading block of the
/// completed response is then far from rank one relative to its own size,
/// which layer stripping cannot absorb. Solving the coefficient identity
/// directly restores it to rounding level.
fn polish_completion(a: &TrigSeries, c: &TrigSeries, b: &TrigSeries, d: &TrigSeries) -> (TrigSeries, TrigSeries) {
    let k = b.half_degree().max(d.half_degree());
    if k == 0 {
        return (b.clone(), d.clone());
    }
    // Where `A^2 + C^2` touches 1, `B` and `D` must vanish, but root finding
    // only resolves the double root there to about sqrt(eps). `D(0) = 0`
    // holds by parity; pin `B(0)` explicitly.
    let pin_origin = (1.0 - a.eval(0.0).powi(2) - c.eval(0.0).powi(2)).abs() <= PIN_TOL;
    let rows = 2 * k + 1 + usize::from(pin_origin);
    // Each coefficient equation is weighted by the size of the products
    // entering it, so that the high frequencies, built from tiny
    // coefficients, are solved to relative rather than absolute accuracy.
    let magnitude = |t: &TrigSeries| {
        let cos = t.cos_coeffs().iter().map(|x| x.abs());
        let sin = t.sin_coeffs().iter().map(|x| x.abs());
        let n = t.cos_coeffs().len().max(t.sin_coeffs().len() + 1);
        let mut v = vec![0.0; n];
        for (i, x) in cos.enumerate() {
            v[i] += x;
        }
        for (i, x) in sin.enumerate() {
            v[i + 1] += x;
        }
        TrigSeries::cosine(v)
    };
    let scale = [a, b, c, d]
        .iter()
        .map(|t| {
            let m = magnitude(t);
            m.multiply(&m)
        })
        .fold(TrigSeries::zero(), |acc, t| acc.add(&t));
    let weights: Vec<f64> = (0..rows)
        .map(|j| {
            if j <= 2 * k {
                1.0 / scale.cos_coeff(j).max(f64::MIN_POSITIVE)
            } else {
                1.0
            }
        })
        .collect();
    let ac = a.multiply(a).add(&c.multiply(c));
    let defect = |b: &TrigSeries, d: &TrigSeries| -> DVector<f64> {
        let f = ac.add(&b.multiply(b)).add(&d.multiply(d));
        let mut out = DVector::zeros(rows);
        for j in 0..=2 * k {
            out[j] = f.cos_coeff(j) - if j == 0 { 1.0 } else { 0.0 };
        }
        if pin_origin {
            out[2 * k + 1] = b.eval(0.0);
        }
        out.component_mul_assign(&DVector::from_column_slice(&weights));
        out
    };
    let unknowns = 2 * k + 1;
    let mut b = b.clone();
    let mut d = d.clone();
    let mut f = defect(&b, &d);
    for _ in 0..POLISH_MAX_ITER {
        let mut jac = DMatrix::zeros(rows, unknowns);
        for i in 0..=k {
            let mut basis = vec![0.0; i + 1];
            basis[i] = 2.0;
            let col = b.multiply(&TrigSeries::cosine(basis));
            for j in 0..=2 * k {
                jac[(j, i)] = col.cos_coeff(j);
            }
            if pin_origin {
                jac[(2 * k + 1, i)] = 1.0;
            }
        }
        for i in 1..=k {
            let mut basis = vec![0.0; i];
            basis[i - 1] = 2.0;
            let col = d.multiply(&TrigSeries::sine(basis));
            for j in 0..=2 * k {
                jac[(j, k + i)] = col.cos_coeff(j);
            }
        }
        for (j, w) in weights.iter().enumerate() {
            jac.row_mut(j).scale_mut(*w);
        }
        let svd = jac.svd(true, true);
        let Ok(step) = svd.solve(&f, 1e-13 * svd.singular_values.max()) else {
            break;
        };
        // Near a double root the full step can overshoot; halve until the
        // defect decreases.
        let mut t = 1.0;
        let accepted = loop {
            let b_new = TrigSeries::cosine((0..=k).map(|i| b.cos_coeff(i) - t * step[i]).collect());
            let d_new = TrigSeries::sine((1..=k).map(|i| d.sin_coeff(i) - t * step[k + i]).collect());
            let f_new = defect(&b_new, &d_new);
            if f_new.norm() < f.norm() {
                break Some((b_new, d_new, f_new));
            }
            t *= 0.5;
            if t < 1e-6 {
                break None;
            }
        };
        let Some((b_new, d_new, f_new)) = accepted else {
            break;
        };
        b = b_new;
        d = d_new;
        f = f_new;
    }
    (b, d)
}

const POLISH_MAX_ITER: usize = 30;

/// `1 - A(0)^2 - C(0)^2` at or below this pins `B(0) = 0` while polishing.
const PIN_TOL: f64 = 1e-12;

/// Fejer-Riesz factor of the nonnegative cosine series with coefficients
/// `p[0..=m]` (`p[m] != 0`), returned as the even/odd pair `(B, D)` with
/// `B^2 + D^2 = P`.
fn spectral_factor(p: &[f64], zero_at_origin: bool) -> Result<(TrigSeries, TrigSeries)> {
    let m = p.len() - 1;
    if m == 0 {
        return Ok((TrigSeries::constant(p[0].max(0.0).sqrt()), TrigSeries::zero()));
    }
    // z^m P(z) as an ordinary polynomial, ascending powers.
    let laurent: Vec<C64> = (0..=2 * m)
        .map(|i| {
            let e = i.abs_diff(m);
            C64::new(if e == 0 { p[0] } else { p[e] / 2.0 }, 0.0)
        })
        .collect();
    let mut selected = select_inner_roots(&poly_roots_full(&laurent)?);
    if zero_at_origin {
        // The double root at z = 1 splits by about sqrt(eps) in root finding.
        // Deflating it instead is unstable when the other roots span many
        // decades in modulus.
        let one = C64::new(1.0, 0.0);
        if let Some(r) = selected
            .iter_mut()
            .min_by(|x, y| (**x - one).norm().total_cmp(&(**y - one).norm()))
        {
            *r = one;
        }
    }

    // Monic product, ascending coefficients.
    let mut monic = vec![C64::new(1.0, 0.0)];
    for r in &selected {
        let mut next = vec![C64::zero(); monic.len() + 1];
        for (i, &c) in monic.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c * r;
        }
        monic = next;
    }
    // Parseval: mean of |G|^2 over the circle is sum |g_i|^2 and must equal p_0.
    let energy: f64 = monic.iter().map(|c| c.norm_sqr()).sum();
    let gain = (p[0] / energy).sqrt();
    let g: Vec<f64> = monic.iter().map(|c| c.re * gain).collect();

    // Q(theta) = e^{-i s theta} G(e^{i theta}); real coefficients q_j = g_{j+s}.
    let deg = g.len() - 1;
    let shift = deg.div_ceil(2);
    let q = |j: isize| -> f64 {
        let idx = j + shift as isize;
        if idx < 0 || idx as usize > deg {
            0.0
        } else {
            g[idx as usize]
        }
    };
    let k = shift.max(deg - shift);
    let mut b = vec![0.0; k + 1];
    let mut d = vec![0.0; k];
    b[0] = q(0);
    for j in 1..=k as isize {
        b[j as usize] = q(j) + q(-j);
        d[j as usize - 1] = q(j) - q(-j);
    }
    Ok((TrigSeries::cosine(b), TrigSeries::sine(d)))
}

/// Pick one root from each conjugate-reciprocal pair `(r, 1/conj(r))`.
///
/// Roots are visited by increasing modulus; each is matched with the unused
/// root nearest its mirror image, and the pair is replaced by the average
/// of `r` and the mirror of its partner. Inside the disk this is the inner
/// root; on the unit circle it merges the two halves of a double root.
fn select_inner_roots(roots: &[C64]) -> Vec<C64> {
    let half = roots.len() / 2;
    let mut order: Vec<usize> = (0..roots.len()).collect();
    order.sort_by(|&i, &j| roots[i].norm().total_cmp(&roots[j].norm()));
    let near_circle = |r: C64| (r.norm() - 1.0).abs() <= CIRCLE_TOL;
    let mut selected: Vec<C64> = order
        .iter()
        .map(|&i| roots[i])
        .filter(|&r| r.norm() < 1.0 && !near_circle(r))
        .collect();

    // Roots on the circle come in (nearly) double pairs that root finding
    // splits either radially or along the circle; average each pair.
    let circle: Vec<C64> = roots.iter().copied().filter(|&r| near_circle(r)).collect();
    let one = C64::new(1.0, 0.0);
    let mut used = vec![false; circle.len()];
    for i in 0..circle.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let mirror = one / circle[i].conj();
        let partner = (0..circle.len())
            .filter(|&j| !used[j])
            .min_by(|&a, &b| (circle[a] - mirror).norm().total_cmp(&(circle[b] - mirror).norm()));
        match partner {
            Some(j) => {
                used[j] = true;
                selected.push((circle[i] + one / circle[j].conj()) * 0.5);
            }
            None => selected.push(circle[i]),
        }
    }
    if selected.len() != half {
        return order[..half].iter().map(|&i| roots[i]).collect();
    }
    selected
}

/// Roots this close to the unit circle (in modulus) are treated as lying on it.
const CIRCLE_TOL: f64 = 1e-6;

/// `A_2 = A_1 cos(delta) + B sin(delta)`, which equals 1 at `theta = 0`.
pub fn anchor_correct(a1: &TrigSeries, comp: &CompletionResult) -> TrigSeries {
    let (s, c) = libm::sincos(comp.delta);
    a1.scale(c).add(&comp.b.scale(s))
}

/// Completion of the anchor-corrected pair `(A_2, C_1)`.
///
/// Rotating `(A_1, B)` by `delta` preserves `A_1^2 + B^2`, so the rotated
/// partner `B_2 = B cos(delta) - A_1 sin(delta)` together with the original
/// `D` completes `(A_2, C_1)` exactly. This sidesteps factoring
/// `1 - A_2^2 - C_1^2`, which always has a double root at `theta = 0`.
pub fn anchor_completion(a1: &TrigSeries, comp: &CompletionResult) -> (TrigSeries, TrigSeries) {
    let (s, c) = libm::sincos(comp.delta);
    (comp.b.scale(c).sub(&a1.scale(s)), comp.d.clone())
}

/// Recover a phase sequence whose response matrix equals `resp`.
///
/// The response is written as a matrix Laurent polynomial in
/// `w = exp(i theta / 2)`. Its leading coefficient is rank one with column
/// space spanned by `(1, -e^{i phi_N})`; that fixes `phi_N`, after which
/// `R_{phi_N}^dagger` is multiplied in on the left and the degree drops by
/// one. Index 0 of the result acts first. Leading and trailing blocks that
/// both vanish drop the degree by two without producing phases, so the
/// result can be shorter than the degree of `resp`.
///
/// Each step is only as exact as the rank-one structure of the leading
/// block, which is why `resp` should be unitary to rounding level (see
/// [`complete`]). The result is accepted only if it reproduces `resp` on a
/// sample grid within [`STRIP_ACCEPT_TOL`]; otherwise the error names the
/// first degree whose rank test exceeded [`STRIP_RANK_TOL`].
pub fn layer_strip(resp: &ResponseABCD) -> Result<PhaseSequence> {
    strip_checked(resp, SampleCheck::matrix(resp))
}

fn strip_checked(resp: &ResponseABCD, check: SampleCheck) -> Result<PhaseSequence> {
    let (phases, stall) = strip_layers(resp);
    let seq = PhaseSequence::new(phases);
    let dist = check.distance(seq.phases());
    if dist > STRIP_ACCEPT_TOL {
        return Err(Error::StrippingStalled {
            degree: stall.unwrap_or(0),
            residual: dist,
        });
    }
    Ok(seq)
}

/// Largest accepted sample mismatch of a stripped sequence.
pub const STRIP_ACCEPT_TOL: f64 = 1e-9;

/// Plain layer stripping. Returns the phases (index 0 first) and the first
/// degree whose rank residual exceeded [`STRIP_RANK_TOL`], if any.
fn strip_layers(resp: &ResponseABCD) -> (Vec<f64>, Option<usize>) {
    let mut poly = resp.to_matrix_laurent();
    let mut deg = poly.high();
    let mut phases = Vec::with_capacity(deg.max(0) as usize);
    let mut stall = None;
    while deg > 0 {
        let top = poly.coeff(deg);
        let bottom = poly.coeff(-deg);
        if deg >= 2 && top.frobenius() <= STRIP_ZERO_TOL && bottom.frobenius() <= STRIP_ZERO_TOL {
            deg -= 2;
            poly = truncate(&poly, deg);
            continue;
        }
        // The top block has range along (1, -e^{i phi}), the bottom block
        // along (1, e^{i phi}); use both.
        let s: C64 = (0..2)
            .map(|j| bottom.get(1, j) * bottom.get(0, j).conj() - top.get(1, j) * top.get(0, j).conj())
            .sum();
        let phi = s.arg();
        let (plus, minus) = axis_projectors(phi);
        let residual = (plus * top).frobenius().max((minus * bottom).frobenius());
        if residual > STRIP_RANK_TOL && stall.is_none() {
            stall = Some(deg as usize);
        }
        // R_phi^dagger = w P^+ + w^-1 P^-
        poly = truncate(&poly.left_mul_linear(plus, minus), deg - 1);
        phases.push(phi);
        deg -= 1;
    }
    if (poly.coeff(0) - Mat2::IDENTITY).op_norm() > STRIP_RANK_TOL && stall.is_none() {
        stall = Some(0);
    }
    phases.reverse();
    (phases, stall)
}

/// Sampled target: either the whole matrix or only the `(A, C)` components.
struct SampleCheck {
    samples: Vec<(f64, Mat2)>,
    /// Indices into the `(A, B, C, D)` coordinates that are compared.
    comps: &'static [usize],
}

impl SampleCheck {
    fn grid(half_degree: usize) -> impl Iterator<Item = f64> {
        uniform_grid(4 * (2 * half_degree + 4))
    }

    fn matrix(resp: &ResponseABCD) -> Self {
        Self {
            samples: Self::grid(resp.half_degree()).map(|t| (t, resp.matrix(t))).collect(),
            comps: &[0, 1, 2, 3],
        }
    }

    fn projection(a: &TrigSeries, c: &TrigSeries) -> Self {
        let k = a.half_degree().max(c.half_degree());
        let samples = Self::grid(k)
            .map(|t| {
                let (av, cv) = (a.eval(t), c.eval(t));
                (
                    t,
                    Mat2::new(
                        C64::new(av, 0.0),
                        C64::new(0.0, cv),
                        C64::new(0.0, cv),
                        C64::new(av, 0.0),
                    ),
                )
            })
            .collect();
        Self {
            samples,
            comps: &[0, 2],
        }
    }

    /// Largest Euclidean mismatch over the samples (the operator norm when
    /// all four components are compared).
    fn distance(&self, phases: &[f64]) -> f64 {
        let p = PhaseSequence::new(phases.to_vec());
        self.samples
            .iter()
            .map(|(t, target)| {
                let diff = su2_coords(&(response_eval(&p, *t) - *target));
                self.comps.iter().map(|&k| diff[k] * diff[k]).sum::<f64>().sqrt()
            })
            .fold(0.0, f64::max)
    }
}

/// Real coordinates `(a, b, c, d)` of `a + i(bZ + cX + dY)`. For the
/// difference of SU(2)-valued functions these are exact, and the operator
/// norm is the Euclidean norm of the coordinates.
fn su2_coords(m: &Mat2) -> [f64; 4] {
    let (a, b, c, d) = m.pauli_components();
    [a, b, c, d]
}

fn truncate(poly: &MatLaurent, deg: i64) -> MatLaurent {
    MatLaurent {
        low: -deg,
        coeffs: (-deg..=deg).map(|k| poly.coeff(k)).collect(),
    }
}

/// Phases reproducing the full response `resp` (alias of [`layer_strip`]).
pub fn extract_phases(resp: &ResponseABCD) -> Result<PhaseSequence> {
    layer_strip(resp)
}

/// Phases whose `<+|V|+>` equals `A + iC`, for a pair that is already
/// achievable (`A(0) = 1`, `A^2 + C^2 <= 1`). `B` and `D` come from
/// [`complete`], so the full response matrix is one member of the family
/// sharing this `(A, C)`.
pub fn phases_for_pair(a: &TrigSeries, c: &TrigSeries) -> Result<(PhaseSequence, CompletionResult)> {
    let comp = complete(a, c)?;
    let resp = ResponseABCD {
        a: a.clone(),
        b: comp.b.clone(),
        c: c.clone(),
        d: comp.d.clone(),
    };
    Ok((strip_checked(&resp, SampleCheck::projection(a, c))?, comp))
}

/// Full synthesis: phases whose projected response approximates `e^{ih}`.
///
/// `(a, c)` must approximate `e^{i h(theta)}` within `eps` in sup norm; the
/// measured gap may exceed `eps` by at most 10% before the input is
/// rejected.
pub fn synthesize<H>(a: &TrigSeries, c: &TrigSeries, h: H, eps: f64) -> Result<(PhaseSequence, SynthesisDiagnostics)>
where
    H: Fn(f64) -> f64,
{
    if eps.is_nan() || eps < 0.0 {
        return Err(Error::InvalidArgument("eps must be nonnegative"));
    }
    let k = a.half_degree().max(c.half_degree());
    if 2 * a.effective_degree(0.0).max(c.effective_degree(0.0)) > MAX_SEQUENCE_LENGTH {
        return Err(Error::SequenceTooLong {
            required: 2 * k,
            cap: MAX_SEQUENCE_LENGTH,
        });
    }
    let grid = default_grid_size(2 * k);
    let gap_in = sup_norm_gap(a, c, &h, grid);
    if gap_in > 1.1 * eps + 1e-13 {
        return Err(Error::TargetNotClose { gap: gap_in, eps });
    }

    let (a1, c1) = rescale(a, c, eps);
    let gap_after_rescale = sup_norm_gap(&a1, &c1, &h, grid);
    let comp = complete(&a1, &c1)?;
    let a2 = anchor_correct(&a1, &comp);
    let gap_after_anchor = sup_norm_gap(&a2, &c1, &h, grid);
    let (b2, d2) = anchor_completion(&a1, &comp);
    let check = SampleCheck::projection(&a2, &c1);
    let resp = ResponseABCD {
        a: a2,
        b: b2,
        c: c1,
        d: d2,
    };
    let phases = strip_checked(&resp, check)?;

    let mut gap_final: f64 = 0.0;
    let mut min_success = f64::INFINITY;
    for theta in uniform_grid(grid) {
        let proj = plus_projection(&response_eval(&phases, theta));
        gap_final = gap_final.max((proj - C64::from_polar(1.0, h(theta))).norm());
        min_success = min_success.min(proj.norm_sqr());
    }
    let diagnostics = SynthesisDiagnostics {
        eps_in: eps,
        gap_in,
        gap_after_rescale,
        delta: comp.delta,
        unitarity_residual: comp.unitarity_residual,
        gap_after_anchor,
        gap_final,
        min_success_prob: min_success,
        n: phases.len(),
    };
    Ok((phases, diagnostics))
}

/// `<+|V|+>` for a single-qubit operator.
pub fn plus_projection(v: &Mat2) -> C64 {
    (v.get(0, 0) + v.get(0, 1) + v.get(1, 0) + v.get(1, 1)) * 0.5
}
