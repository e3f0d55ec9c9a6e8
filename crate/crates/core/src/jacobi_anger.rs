//! Truncated Jacobi-Anger expansion of `exp(-i tau sin(theta))`.
//!
//! `cos(tau sin t) = J_0 + 2 sum_{k even} J_k cos(k t)` and
//! `sin(tau sin t) = 2 sum_{k odd} J_k sin(k t)`. Keeping `k <= q - 1` gives
//! a pair of half-degree `q - 1`, i.e. a sequence of length `N = 2(q - 1)`,
//! with sup-norm error at most `4 tau^q / (2^q q!)` for `tau <= q - 1`.

use alloc::vec;
use alloc::vec::Vec;

use crate::trigpoly::TrigSeries;

/// Truncation order and associated figures for one `(tau, eps)` request.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TruncationPlan {
    pub tau: f64,
    pub q: usize,
    #[cfg_attr(feature = "serde", serde(rename = "N"))]
    pub n: usize,
    pub eps_target: f64,
    /// `4 tau^q / (2^q q!)` at the chosen `q`.
    pub eps_bound: f64,
    /// See [`lower_bound_q`].
    pub q_lower: usize,
}

/// Bessel functions `J_0(tau) ..= J_{k_max}(tau)` by Miller's backward
/// recurrence, normalized with `J_0 + 2 sum_{k even >= 2} J_k = 1`.
pub fn bessel_j(k_max: usize, tau: f64) -> Vec<f64> {
    assert!(tau >= 0.0 && tau.is_finite(), "tau must be finite and nonnegative");
    let mut out = vec![0.0; k_max + 1];
    if tau == 0.0 {
        out[0] = 1.0;
        return out;
    }
    let ceil_tau = libm::ceil(tau) as usize;
    let mut start = k_max + 20 + ceil_tau;
    if start % 2 == 1 {
        start += 1;
    }
    let two_over_tau = 2.0 / tau;
    // j_next = J_{k+1}, j_cur = J_k, walking k downwards.
    let mut j_next = 0.0_f64;
    let mut j_cur = 1e-300_f64;
    let mut even_sum = 0.0_f64;
    for k in (0..=start).rev() {
        if k <= k_max {
            out[k] = j_cur;
        }
        if k % 2 == 0 {
            even_sum += if k == 0 { j_cur } else { 2.0 * j_cur };
        }
        if k == 0 {
            break;
        }
        let j_prev = k as f64 * two_over_tau * j_cur - j_next;
        j_next = j_cur;
        j_cur = j_prev;
        if j_cur.abs() > 1e250 {
            j_cur *= 1e-250;
            j_next *= 1e-250;
            even_sum *= 1e-250;
            for v in out.iter_mut() {
                *v *= 1e-250;
            }
        }
    }
    for v in out.iter_mut() {
        *v /= even_sum;
    }
    out
}

/// `4 tau^q / (2^q q!)`, evaluated in log space.
pub fn truncation_bound(tau: f64, q: usize) -> f64 {
    if tau == 0.0 {
        return if q == 0 { 4.0 } else { 0.0 };
    }
    let q_f = q as f64;
    let log = libm::log(4.0) + q_f * libm::log(tau / 2.0) - libm::lgamma(q_f + 1.0);
    libm::exp(log)
}

/// Smallest `q >= max(1, ceil(tau) + 1)` with `truncation_bound(tau, q) <= eps`.
pub fn choose_truncation(tau: f64, eps: f64) -> TruncationPlan {
    assert!(tau >= 0.0 && tau.is_finite(), "tau must be finite and nonnegative");
    assert!(eps > 0.0 && eps < 1.0, "eps must lie in (0, 1)");
    let mut q = (libm::ceil(tau) as usize + 1).max(1);
    while truncation_bound(tau, q) > eps {
        q += 1;
    }
    TruncationPlan {
        tau,
        q,
        n: 2 * (q - 1),
        eps_target: eps,
        eps_bound: truncation_bound(tau, q),
        q_lower: lower_bound_q(tau, eps),
    }
}

/// Largest `q` with `eps < |sin(tau / q)|^q / 2`, or 0 if there is none.
///
/// Since `|sin x| <= x` and `(tau / q)^q` decreases for `q > tau`, the scan
/// stops once `q > tau` and `(tau / q)^q / 2 <= eps`.
pub fn lower_bound_q(tau: f64, eps: f64) -> usize {
    if !(eps > 0.0 && eps < 0.5) || tau <= 0.0 {
        return 0;
    }
    let mut best = 0;
    let mut q = 1usize;
    loop {
        let q_f = q as f64;
        let lhs = 0.5 * libm::pow(libm::sin(tau / q_f).abs(), q_f);
        if eps < lhs {
            best = q;
        }
        if q_f > tau && 0.5 * libm::pow(tau / q_f, q_f) <= eps {
            break;
        }
        q += 1;
    }
    best
}

/// The truncated pair `(A, C)` with `A + iC ~ exp(-i tau sin(theta))`.
pub fn target_series(plan: &TruncationPlan) -> (TrigSeries, TrigSeries) {
    let k_max = plan.q.saturating_sub(1);
    let j = bessel_j(k_max, plan.tau);
    let mut cos = vec![0.0; k_max + 1];
    let mut sin = vec![0.0; k_max];
    cos[0] = j[0];
    for k in 1..=k_max {
        if k % 2 == 0 {
            cos[k] = 2.0 * j[k];
        } else {
            sin[k - 1] = -2.0 * j[k];
        }
    }
    (TrigSeries::cosine(cos), TrigSeries::sine(sin))
}

/// Target phase `h(theta) = -tau sin(theta)`.
pub fn target_phase(tau: f64) -> impl Fn(f64) -> f64 + Clone {
    move |theta| -tau * libm::sin(theta)
}
