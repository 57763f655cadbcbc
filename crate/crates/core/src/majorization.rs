//! Eigenvalue envelopes for the indicator operator.
//!
//! Everything here is a numerical restatement of classical majorization
//! facts (Ky Fan partial sums, Schur–Horn between diagonal and spectrum)
//! specialized to A_p(E). The check functions return booleans so they can be
//! used as self-test oracles: they hold as theorems, and a `false` signals an
//! implementation bug rather than an interesting input.

use crate::channel::collapse_indicator_operator;
use crate::error::Error;
use crate::operator::{Effect, HermitianOperator};
use crate::params::CollapseParams;
use crate::Result;

/// Inequality slack: 1e-10 absolute, widened by the spectral scale for large
/// dimensions where eigensolver backward error grows.
pub(crate) fn check_tol(d: usize, scale: f64) -> f64 {
    if d > 16 {
        1e-10 * scale.max(1.0)
    } else {
        1e-10
    }
}

/// Envelopes for the spectrum of A_p(E): hard bounds on the extreme
/// eigenvalues and on the positive/negative eigenvalue sums.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralBounds {
    pub lambda_max_bound: f64,
    pub lambda_min_bound: f64,
    pub alpha_sum_bound: f64,
    pub beta_sum_bound: f64,
}

/// Ky Fan: the m largest eigenvalues of B+C are dominated by the sums of the
/// m largest eigenvalues of B and of C, with equality at m = d.
pub fn ky_fan_check(b: &HermitianOperator, c: &HermitianOperator, m: usize) -> Result<bool> {
    b.check_dim(c.d())?;
    let d = b.d();
    if m == 0 || m > d {
        return Err(Error::InvalidGrid(format!("m must lie in 1..=d, got {m}")));
    }
    let sum = b.add(c)?;
    let scale = b.spectral_norm() + c.spectral_norm();
    let tol = check_tol(d, scale);
    let lhs: f64 = sum.eigenvalues().iter().take(m).sum();
    let rhs: f64 = b.eigenvalues().iter().take(m).sum::<f64>() + c.eigenvalues().iter().take(m).sum::<f64>();
    Ok(lhs <= rhs + tol)
}

/// Schur–Horn for an effect: the m largest diagonal entries are dominated by
/// the m largest eigenvalues, plus the sandwich
/// 0 ≤ μ_d ≤ d_d ≤ d_1 ≤ μ_1 ≤ 1.
pub fn schur_horn_check(effect: &Effect, m: usize) -> Result<bool> {
    let d = effect.d();
    if m == 0 || m > d {
        return Err(Error::InvalidGrid(format!("m must lie in 1..=d, got {m}")));
    }
    let tol = check_tol(d, 1.0);
    let mut diag = effect.operator().diagonal();
    diag.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let evs = effect.eigenvalues();
    let diag_sum: f64 = diag.iter().take(m).sum();
    let ev_sum: f64 = evs.iter().take(m).sum();
    let majorized = diag_sum <= ev_sum + tol;
    let sandwich = -tol <= evs[d - 1]
        && evs[d - 1] <= diag[d - 1] + tol
        && diag[d - 1] <= diag[0] + tol
        && diag[0] <= evs[0] + tol
        && evs[0] <= 1.0 + tol;
    Ok(majorized && sandwich)
}

/// Upper bound on the m leading eigenvalues of A_p(E) in terms of the sorted
/// diagonal d_i and spectrum μ_i of E:
///
///   p ≤ 1/2:  Σ_{i≤m} λ_i ≤ p·Σ_{i≤m} d_i − (1−p)·Σ_{i>d−m} μ_i
///   p > 1/2:  Σ_{i≤m} λ_i ≤ (1−p)·Σ_{i>d−m}(1−μ_i) − p·Σ_{i≤m}(1−d_i)
///
/// At m = d both reduce to the trace law.
pub fn indicator_partial_sum_bound(effect: &Effect, params: CollapseParams, m: usize) -> Result<f64> {
    params.check_dim(effect.d())?;
    let d = effect.d();
    if m == 0 || m > d {
        return Err(Error::InvalidGrid(format!("m must lie in 1..=d, got {m}")));
    }
    let p = params.p();
    let mut diag = effect.operator().diagonal();
    diag.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let evs = effect.eigenvalues();
    let bound = if !params.collapse_favored() {
        let top_diag: f64 = diag.iter().take(m).sum();
        let bottom_evs: f64 = evs[d - m..].iter().sum();
        p * top_diag - (1.0 - p) * bottom_evs
    } else {
        let bottom_complement: f64 = evs[d - m..].iter().map(|mu| 1.0 - mu).sum();
        let top_diag_complement: f64 = diag.iter().take(m).map(|di| 1.0 - di).sum();
        (1.0 - p) * bottom_complement - p * top_diag_complement
    };
    Ok(bound)
}

/// Hard bounds on the spectrum of A_p(E) from the effect's trace alone:
///
///   p ≤ 1/2:  −min(1, tr E)(1−p) ≤ λ_d ≤ λ_1 ≤ min(1, tr E)·p
///             −(1−p)·tr E ≤ β ≤ 0 ≤ α ≤ p·tr E
///   p > 1/2:  the same with tr(I−E) and the two prior weights swapped.
pub fn indicator_spectral_bounds(effect: &Effect, params: CollapseParams) -> Result<SpectralBounds> {
    params.check_dim(effect.d())?;
    let p = params.p();
    if p <= 0.0 || p >= 1.0 {
        return Err(Error::InvalidProbability(p));
    }
    let bounds = if !params.collapse_favored() {
        let t = effect.trace();
        SpectralBounds {
            lambda_max_bound: t.min(1.0) * p,
            lambda_min_bound: -t.min(1.0) * (1.0 - p),
            alpha_sum_bound: p * t,
            beta_sum_bound: -(1.0 - p) * t,
        }
    } else {
        let t = effect.d() as f64 - effect.trace();
        SpectralBounds {
            lambda_max_bound: t.min(1.0) * (1.0 - p),
            lambda_min_bound: -t.min(1.0) * p,
            alpha_sum_bound: (1.0 - p) * t,
            beta_sum_bound: -p * t,
        }
    };
    Ok(bounds)
}

/// Bounds on the eigenvalue sums of A_p(E) expressed through its own trace:
///
///   p < 1/2:  ((1−p)/(1−2p))·tr A ≤ β,  α ≤ −(p/(1−2p))·tr A
///   p > 1/2:  (p/(2p−1))·tr A ≤ β,  α ≤ −((1−p)/(2p−1))·tr A
///
/// Undefined at p = 1/2 where the trace vanishes identically. Returns
/// (β lower bound, α upper bound).
pub fn trace_normalized_bounds(effect: &Effect, params: CollapseParams) -> Result<(f64, f64)> {
    params.check_dim(effect.d())?;
    let p = params.p();
    if p == 0.5 {
        return Err(Error::InvalidGrid("trace-normalized bounds are undefined at p = 1/2".into()));
    }
    if p <= 0.0 || p >= 1.0 {
        return Err(Error::InvalidProbability(p));
    }
    let a = collapse_indicator_operator(effect, params)?;
    let trace = a.trace();
    let (beta_low, alpha_high) = if p < 0.5 {
        let gap = 1.0 - 2.0 * p;
        (((1.0 - p) / gap) * trace, -(p / gap) * trace)
    } else {
        let gap = 2.0 * p - 1.0;
        ((p / gap) * trace, -((1.0 - p) / gap) * trace)
    };
    Ok((beta_low, alpha_high))
}

/// Positive and negative eigenvalue sums of an operator.
pub fn signed_eigenvalue_sums(op: &HermitianOperator) -> (f64, f64) {
    let mut alpha = 0.0;
    let mut beta = 0.0;
    for ev in op.eigenvalues() {
        if ev > 0.0 {
            alpha += ev;
        } else {
            beta += ev;
        }
    }
    (alpha, beta)
}
