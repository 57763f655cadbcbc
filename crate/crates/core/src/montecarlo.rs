//! Brute-force oracles: everything the closed forms claim, re-derived by
//! sampling or quadrature.
//!
//! Estimators chunk their sample loop into fixed blocks of 8192 trials. Block
//! i runs on its own ChaCha12 stream (`seed_from_u64(seed)` then
//! `set_stream(i)`), and the per-block hit counts are integers, so the final
//! estimate is a deterministic function of (inputs, seed, n) no matter how
//! the blocks are scheduled across threads.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::collapse_indicator_operator;
use crate::error::Error;
use crate::operator::{quadratic_form_raw, Effect, HermitianOperator};
use crate::params::CollapseParams;
use crate::state::PureState;
use crate::sum::Neumaier;
use crate::Result;

const CHUNK: u64 = 8192;

/// A Bernoulli estimate with its binomial standard error
/// sqrt(mean·(1−mean)/n).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateWithCI {
    pub mean: f64,
    pub std_error: f64,
    pub n: u64,
    pub seed: u64,
}

impl EstimateWithCI {
    fn from_hits(hits: u64, n: u64, seed: u64) -> Self {
        let mean = hits as f64 / n as f64;
        let std_error = (mean * (1.0 - mean) / n as f64).sqrt();
        Self { mean, std_error, n, seed }
    }
}

/// Runs `n` Bernoulli trials in fixed-size blocks, one RNG stream per block,
/// and reduces the integer hit counts. Deterministic in (seed, n) regardless
/// of thread scheduling.
fn bernoulli_estimate<F>(n: u64, seed: u64, trial: F) -> Result<EstimateWithCI>
where
    F: Fn(&mut ChaCha12Rng) -> bool + Sync,
{
    if n == 0 {
        return Err(Error::EmptySample);
    }
    let blocks = n.div_ceil(CHUNK);
    let hits: u64 = (0..blocks)
        .into_par_iter()
        .map(|block| {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            rng.set_stream(block);
            let lo = block * CHUNK;
            let hi = ((block + 1) * CHUNK).min(n);
            let mut count = 0u64;
            for _ in lo..hi {
                if trial(&mut rng) {
                    count += 1;
                }
            }
            count
        })
        .sum();
    Ok(EstimateWithCI::from_hits(hits, n, seed))
}

/// A uniformly distributed state: i.i.d. complex-Gaussian amplitudes (real
/// and imaginary parts of variance 1/2), normalized. Deterministic in the
/// seed; resamples on the measure-zero zero-vector event.
pub fn sample_uniform_state(d: usize, seed: u64) -> Result<PureState> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    Ok(crate::random::random_pure_state(d, &mut rng))
}

/// Fraction of the sphere where ⟨ψ|A|ψ⟩ > 0, by direct sampling. The sign of
/// the form is scale invariant, so the Gaussian draw is used unnormalized.
pub fn estimate_positive_measure(a: &HermitianOperator, n: u64, seed: u64) -> Result<EstimateWithCI> {
    let d = a.d();
    let mat = a.matrix();
    bernoulli_estimate(n, seed, |rng| {
        let g = DVector::from_fn(d, |_, _| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im)
        });
        quadratic_form_raw(mat, &g) > 0.0
    })
}

/// Monte Carlo Λ_p(E): the sampled fraction of states on which E beats blind
/// guessing.
pub fn estimate_lambda(effect: &Effect, params: CollapseParams, n: u64, seed: u64) -> Result<EstimateWithCI> {
    let p = params.p();
    if p <= 0.0 || p >= 1.0 {
        return Err(Error::InvalidProbability(p));
    }
    let a = collapse_indicator_operator(effect, params)?;
    estimate_positive_measure(&a, n, seed)
}

/// Simulates the whole experiment end to end: collapse branch, then a "yes"
/// outcome with probability ⟨ψ′|E|ψ′⟩, scored correct when the answer matches
/// whether collapse actually happened. Converges to `reliability_pure`.
pub fn estimate_reliability(
    psi: &PureState,
    params: CollapseParams,
    effect: &Effect,
    n: u64,
    seed: u64,
) -> Result<EstimateWithCI> {
    params.check_dim(psi.d())?;
    effect.operator().check_dim(psi.d())?;
    let p = params.p();
    let weights = psi.born_weights();
    // cumulative branch thresholds: [1-p, 1-p + p*w_1, ...]
    let mut cumulative = Vec::with_capacity(weights.len());
    let mut acc = 1.0 - p;
    for w in &weights {
        acc += p * w;
        cumulative.push(acc);
    }
    let diag: Vec<f64> = effect.operator().diagonal().iter().map(|e| e.clamp(0.0, 1.0)).collect();
    let yes_intact = quadratic_form_raw(effect.matrix(), psi.amplitudes()).clamp(0.0, 1.0);
    bernoulli_estimate(n, seed, |rng| {
        let u: f64 = rng.random();
        let collapsed_onto = if u < 1.0 - p {
            None
        } else {
            let k = cumulative.iter().position(|&c| u < c).unwrap_or(weights.len() - 1);
            Some(k)
        };
        let yes_prob = match collapsed_onto {
            Some(k) => diag[k],
            None => yes_intact,
        };
        let said_yes = rng.random::<f64>() < yes_prob;
        said_yes == collapsed_onto.is_some()
    })
}

/// Density at `c` of Σ λ_i X_i with X_i i.i.d. exponential of mean 2
/// (MGF 1/(1−2t)) and distinct positive weights λ_i:
///
///   f(c) = Σ_i e^{−c/(2λ_i)} λ_i^{n−2} / [ 2 Π_{j≠i} (λ_i − λ_j) ] .
///
/// The terms alternate in sign, so they are combined in log space with
/// compensated summation; for n > 20 the closed form is abandoned for the
/// convolution recursion on a quadrature grid, which is slower but free of
/// cancellation.
pub fn hypoexp_density(lams: &[f64], c: f64) -> Result<f64> {
    validate_rates(lams)?;
    if c < 0.0 || c.is_nan() {
        return Err(Error::InvalidGrid(format!("evaluation point must be ≥ 0, got {c}")));
    }
    if lams.len() > 20 {
        return hypoexp_density_recursion(lams, c, 4096);
    }
    Ok(hypoexp_closed_form(lams, c))
}

fn validate_rates(lams: &[f64]) -> Result<()> {
    if lams.is_empty() {
        return Err(Error::EmptySpectrum);
    }
    let mut scale = 0.0f64;
    for &l in lams {
        if l <= 0.0 || !l.is_finite() {
            return Err(Error::InvalidRate(l));
        }
        scale = scale.max(l);
    }
    for i in 0..lams.len() {
        for j in (i + 1)..lams.len() {
            if (lams[i] - lams[j]).abs() <= 1e-7 * scale {
                return Err(Error::CoincidentRates { first: i, second: j });
            }
        }
    }
    Ok(())
}

fn hypoexp_closed_form(lams: &[f64], c: f64) -> f64 {
    let n = lams.len();
    if n == 1 {
        return (-c / (2.0 * lams[0])).exp() / (2.0 * lams[0]);
    }
    let mut sorted: Vec<f64> = lams.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut logs = Vec::with_capacity(n);
    let mut signs = Vec::with_capacity(n);
    for (i, &li) in sorted.iter().enumerate() {
        let mut log_term = (n as f64 - 2.0) * li.ln() - (2.0f64).ln() - c / (2.0 * li);
        for (j, &lj) in sorted.iter().enumerate() {
            if j != i {
                log_term -= (li - lj).abs().ln();
            }
        }
        logs.push(log_term);
        // i factors (li - lj) with lj > li are negative
        signs.push(if i % 2 == 0 { 1.0 } else { -1.0 });
    }
    let peak = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut acc = Neumaier::default();
    for (log_term, sign) in logs.iter().zip(&signs) {
        acc.add(sign * (log_term - peak).exp());
    }
    (acc.value() * peak.exp()).max(0.0)
}

/// The same density through the convolution recursion
/// f_{i+1}(c) = e^{−c/(2λ)}/(2λ) · ∫₀^c f_i(s) e^{s/(2λ)} ds, discretized by
/// cumulative Simpson on a uniform grid with the given interval count.
pub fn hypoexp_density_recursion(lams: &[f64], c: f64, intervals: usize) -> Result<f64> {
    validate_rates(lams)?;
    if c < 0.0 || c.is_nan() {
        return Err(Error::InvalidGrid(format!("evaluation point must be ≥ 0, got {c}")));
    }
    if intervals < 2 {
        return Err(Error::InvalidGrid("need at least 2 grid intervals".into()));
    }
    if c == 0.0 {
        return Ok(if lams.len() == 1 { 1.0 / (2.0 * lams[0]) } else { 0.0 });
    }
    let h = c / intervals as f64;
    let grid: Vec<f64> = (0..=intervals).map(|j| j as f64 * h).collect();
    let mut f: Vec<f64> = grid.iter().map(|&x| (-x / (2.0 * lams[0])).exp() / (2.0 * lams[0])).collect();
    for &lam in &lams[1..] {
        let weighted: Vec<f64> = grid.iter().zip(&f).map(|(&x, &fx)| fx * (x / (2.0 * lam)).exp()).collect();
        let integral = cumulative_simpson(&weighted, h);
        f = grid
            .iter()
            .zip(&integral)
            .map(|(&x, &int)| (-x / (2.0 * lam)).exp() * int / (2.0 * lam))
            .collect();
    }
    Ok(*f.last().unwrap())
}

/// Running integral of sampled values on a uniform grid: Simpson pairs for
/// even indices, a three-point Newton–Cotes tail for odd ones. O(h⁴) per
/// step.
fn cumulative_simpson(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len();
    let mut out = vec![0.0; n];
    if n >= 3 {
        out[1] = h / 12.0 * (5.0 * values[0] + 8.0 * values[1] - values[2]);
    } else if n == 2 {
        out[1] = h / 2.0 * (values[0] + values[1]);
        return out;
    }
    for j in 2..n {
        if j % 2 == 0 {
            out[j] = out[j - 2] + h / 3.0 * (values[j - 2] + 4.0 * values[j - 1] + values[j]);
        } else {
            out[j] = out[j - 1] + h / 12.0 * (-values[j - 2] + 8.0 * values[j - 1] + 5.0 * values[j]);
        }
    }
    out
}

/// Composite Simpson integral of `f` over [a, b] with the given (even) panel
/// count.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let panels = if panels % 2 == 0 { panels } else { panels + 1 };
    let h = (b - a) / panels as f64;
    let mut acc = Neumaier::default();
    acc.add(f(a));
    acc.add(f(b));
    for j in 1..panels {
        let weight = if j % 2 == 1 { 4.0 } else { 2.0 };
        acc.add(weight * f(a + j as f64 * h));
    }
    acc.value() * h / 3.0
}

/// P(Σ α_i |⟨u_i|φ⟩|² > Σ (−β_h) |⟨v_h|φ⟩|²) for exponential squared
/// overlaps: the double sum
///
///   Σ_i Σ_h α_i^k (−β_h)^{m−1} / [ (α_i−β_h) Π_{j≠i}(α_i−α_j) Π_{ℓ≠h}(β_ℓ−β_h) ]
///
/// when the βs are distinct, cross-checked against its single-sum
/// simplification
///
///   Σ_i α_i^{k+m−1} / [ Π_{j≠i}(α_i−α_j) Π_ℓ(α_i−β_ℓ) ] ,
///
/// which must agree to 1e-9 (they are equal by Lagrange interpolation).
/// Returns the single-sum value alone when βs coincide. Both routes are
/// evaluated naively, independent of the log-space machinery used elsewhere.
pub fn prob_positive_combination(alphas: &[f64], betas: &[f64]) -> Result<f64> {
    let scale = alphas
        .iter()
        .chain(betas.iter())
        .fold(0.0f64, |acc, &v| acc.max(v.abs()));
    for (i, &a) in alphas.iter().enumerate() {
        if a <= 0.0 || !a.is_finite() {
            return Err(Error::SpectrumNotOrdered { what: format!("alpha {i} = {a} is not strictly positive") });
        }
        for (j, &a2) in alphas.iter().enumerate().skip(i + 1) {
            if (a - a2).abs() <= 1e-9 * scale {
                return Err(Error::DegenerateAlphas { first: i, second: j });
            }
        }
    }
    for (h, &b) in betas.iter().enumerate() {
        if b > 0.0 || !b.is_finite() {
            return Err(Error::SpectrumNotOrdered { what: format!("beta {h} = {b} is not non-positive") });
        }
    }
    if alphas.is_empty() {
        return Ok(0.0);
    }
    let single = single_sum(alphas, betas);
    // the double sum divides by beta gaps, so only cross-check when every
    // gap is wide enough that its rounding stays below the mismatch bound
    let betas_distinct = betas
        .iter()
        .enumerate()
        .all(|(h, &b)| betas.iter().skip(h + 1).all(|&b2| (b - b2).abs() > 1e-6 * scale.max(1e-300)));
    if betas.is_empty() || !betas_distinct {
        return clamp_probability(single);
    }
    let double = double_sum(alphas, betas);
    if (double - single).abs() > 1e-9 {
        return Err(Error::RouteMismatch { left: double, right: single });
    }
    clamp_probability(double)
}

fn clamp_probability(raw: f64) -> Result<f64> {
    let excess = (-raw).max(raw - 1.0);
    if excess > crate::tolerance::MEASURE_CLAMP_TOL {
        return Err(Error::MeasureOutOfRange { excess });
    }
    Ok(raw.clamp(0.0, 1.0))
}

fn single_sum(alphas: &[f64], betas: &[f64]) -> f64 {
    let d = alphas.len() + betas.len();
    let mut acc = Neumaier::default();
    for (i, &ai) in alphas.iter().enumerate() {
        let mut term = ai.powi(d as i32 - 1);
        for (j, &aj) in alphas.iter().enumerate() {
            if j != i {
                term /= ai - aj;
            }
        }
        for &b in betas {
            term /= ai - b;
        }
        acc.add(term);
    }
    acc.value()
}

fn double_sum(alphas: &[f64], betas: &[f64]) -> f64 {
    let k = alphas.len() as i32;
    let m = betas.len() as i32;
    let mut acc = Neumaier::default();
    for (i, &ai) in alphas.iter().enumerate() {
        let mut alpha_part = ai.powi(k);
        for (j, &aj) in alphas.iter().enumerate() {
            if j != i {
                alpha_part /= ai - aj;
            }
        }
        for (h, &bh) in betas.iter().enumerate() {
            let mut term = alpha_part * (-bh).powi(m - 1) / (ai - bh);
            for (l, &bl) in betas.iter().enumerate() {
                if l != h {
                    term /= bl - bh;
                }
            }
            acc.add(term);
        }
    }
    acc.value()
}
