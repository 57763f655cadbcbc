//! The exact sphere measure Λ_p(E) and its analytic bounds.
//!
//! Λ_p(E) is the fraction of the unit sphere (uniform measure) on which the
//! experiment E beats blind guessing, equivalently where the quadratic form
//! of the indicator operator A_p(E) is positive. For a spectrum with distinct
//! positive eigenvalues α₁ > … > α_k > 0 and non-positive β₁ ≥ … ≥ β_m,
//!
//!   Λ = Σ_i α_i^{d−1} / [ Π_h (α_i − β_h) · Π_{j≠i} (α_i − α_j) ] .
//!
//! The terms alternate in sign and can be individually huge, so each is
//! evaluated in log space with its sign tracked, scaled by the largest
//! exponent, and combined by compensated summation. The result is exact up to
//! that cancellation; d ≤ 64 keeps it well conditioned. Degenerate positive
//! eigenvalues are handled by the complement identity Λ(A) = 1 − Λ(−A) when
//! the negative side is distinct, and by a deterministic relative
//! perturbation otherwise.

use serde::{Deserialize, Serialize};

use crate::channel::collapse_indicator_operator;
use crate::error::Error;
use crate::operator::Effect;
use crate::params::CollapseParams;
use crate::spectrum::SignedSpectrum;
use crate::sum::Neumaier;
use crate::tolerance::{GAP_TOL, MEASURE_CLAMP_TOL, PERTURB_REL};
use crate::Result;

/// How the measure was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasureMethod {
    /// Direct evaluation of the alternating sum.
    Exact,
    /// One minus the measure of the negated spectrum.
    Complemented,
    /// Coalesced positive eigenvalues were spread apart first.
    Perturbed,
}

impl std::fmt::Display for MeasureMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            MeasureMethod::Exact => "exact",
            MeasureMethod::Complemented => "complemented",
            MeasureMethod::Perturbed => "perturbed",
        };
        f.write_str(name)
    }
}

/// The measure value together with the route that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LambdaResult {
    pub value: f64,
    pub method: MeasureMethod,
    /// Largest absolute shift applied to any eigenvalue (zero unless
    /// method is `Perturbed`).
    pub perturbation_applied: f64,
}

impl LambdaResult {
    fn exact(value: f64) -> Self {
        Self { value, method: MeasureMethod::Exact, perturbation_applied: 0.0 }
    }
}

/// Measure of {ψ : ⟨ψ|A|ψ⟩ > 0} for an operator with the given signed
/// spectrum.
pub fn measure_positive_form(spectrum: &SignedSpectrum) -> Result<LambdaResult> {
    if spectrum.k() == 0 {
        return Ok(LambdaResult::exact(0.0));
    }
    if spectrum.m() == 0 {
        return Ok(LambdaResult::exact(1.0));
    }
    let scale = spectrum.max_abs();
    let direct = if distinct(spectrum.alphas(), scale) {
        Some(alternating_sum(spectrum.alphas(), spectrum.betas()))
    } else {
        None
    };
    // Λ(A) + Λ(−A) = 1 because the boundary {⟨ψ|A|ψ⟩ = 0} has measure zero,
    // so the mirrored spectrum gives a second route whenever its positive
    // side (the strictly negative βs, negated) is distinct.
    let strict_negatives: Vec<f64> = spectrum.betas().iter().copied().filter(|&b| b < 0.0).collect();
    let mirror = if distinct(&strict_negatives, scale) {
        let negated = spectrum.negated();
        Some(if negated.k() == 0 {
            (0.0, 0.0)
        } else {
            alternating_sum(negated.alphas(), negated.betas())
        })
    } else {
        None
    };
    match (direct, mirror) {
        (Some((raw, err)), mirror) => {
            // barely-split eigenvalues pass the distinctness gate while the
            // direct sum cancels catastrophically; take the mirror when it is
            // conditioned better
            if err > ROUTE_ERR_TARGET {
                if let Some((inner, mirror_err)) = mirror {
                    if mirror_err < err {
                        return Ok(LambdaResult {
                            value: clamp_measure(1.0 - inner)?,
                            method: MeasureMethod::Complemented,
                            perturbation_applied: 0.0,
                        });
                    }
                }
            }
            Ok(LambdaResult::exact(clamp_measure(raw)?))
        }
        (None, Some((inner, _))) => Ok(LambdaResult {
            value: clamp_measure(1.0 - inner)?,
            method: MeasureMethod::Complemented,
            perturbation_applied: 0.0,
        }),
        (None, None) => {
            let (alphas, applied) = spread_degenerate(spectrum.alphas(), scale)?;
            let (raw, _) = alternating_sum(&alphas, spectrum.betas());
            Ok(LambdaResult {
                value: clamp_measure(raw)?,
                method: MeasureMethod::Perturbed,
                perturbation_applied: applied,
            })
        }
    }
}

/// Λ_p(E): spectrum of the indicator operator fed through
/// `measure_positive_form`. Degenerate channel strengths p ∈ {0, 1} are
/// rejected; blind guessing is then always optimal and the measure is not
/// informative.
pub fn lambda_p(effect: &Effect, params: CollapseParams) -> Result<LambdaResult> {
    let p = params.p();
    if p <= 0.0 || p >= 1.0 {
        return Err(Error::InvalidProbability(p));
    }
    let a = collapse_indicator_operator(effect, params)?;
    let spectrum = SignedSpectrum::from_operator(&a)?;
    measure_positive_form(&spectrum)
}

/// Markov-inequality bound on Λ_p(E):
/// [(1−p) + (2p−1)·tr E/d] / [(1−p) + max(0, 2p−1)]. Uninformative (≥ 1) at
/// p = 1/2.
pub fn markov_bound(effect: &Effect, params: CollapseParams) -> f64 {
    let p = params.p();
    let d = effect.d() as f64;
    let numerator = (1.0 - p) + (2.0 * p - 1.0) * effect.trace() / d;
    let denominator = (1.0 - p) + (2.0 * p - 1.0).max(0.0);
    numerator / denominator
}

/// Dimension-free bound Λ_p(E) ≤ 4p(1−p).
pub fn chernoff_bound(params: CollapseParams) -> f64 {
    let p = params.p();
    4.0 * p * (1.0 - p)
}

/// The conjectured maximum of Λ_p(E) over all effects:
/// 1 − (1 − 1/d)^{d−1}, increasing in d toward 1 − 1/e.
pub fn conjecture_bound(d: usize) -> Result<f64> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let df = d as f64;
    Ok(1.0 - (1.0 - 1.0 / df).powi(d as i32 - 1))
}

/// The collapse probability above which the uniform-superposition projector
/// beats blind guessing on more than half the sphere:
/// 1 − 1/(1 + d(1 − 2^{−1/(d−1)})). Defined for d ≥ 3; decreasing in d with
/// limit ln2/(1+ln2) ≈ 0.409.
pub fn good_p_threshold(d: usize) -> Result<f64> {
    if d < 3 {
        return Err(Error::InvalidDimension(d));
    }
    let df = d as f64;
    let root = 0.5f64.powf(1.0 / (df - 1.0));
    Ok(1.0 - 1.0 / (1.0 + df * (1.0 - root)))
}

/// Whether p lies in the regime where every effect whose indicator operator
/// has a single negative eigenvalue obeys Λ ≤ 1/2:
/// p < ln2/(1+ln2) or p > 1/(1+ln2).
pub fn single_negative_regime(p: f64) -> bool {
    let ln2 = std::f64::consts::LN_2;
    p < ln2 / (1.0 + ln2) || p > 1.0 / (1.0 + ln2)
}

/// Strict distinctness relative to the spectral scale: every adjacent gap in
/// the (descending) list exceeds GAP_TOL × scale.
fn distinct(values: &[f64], scale: f64) -> bool {
    values.windows(2).all(|w| w[0] - w[1] > GAP_TOL * scale)
}

/// Accuracy the direct alternating sum must promise before the dispatch stops
/// considering the mirrored route.
const ROUTE_ERR_TARGET: f64 = 1e-10;

/// The alternating sum over positive eigenvalues, in log space, returned with
/// an estimate of its absolute rounding error. The i-th term (descending αs,
/// 1-based) carries sign (−1)^{i−1} because exactly i−1 of the α differences
/// are negative. Terms as large as exp(peak) cancel down to a value in [0, 1],
/// so the result cannot be more accurate than exp(peak) times roundoff.
fn alternating_sum(alphas: &[f64], betas: &[f64]) -> (f64, f64) {
    let d = alphas.len() + betas.len();
    let mut logs = Vec::with_capacity(alphas.len());
    let mut signs = Vec::with_capacity(alphas.len());
    for (i, &ai) in alphas.iter().enumerate() {
        let mut log_term = (d as f64 - 1.0) * ai.ln();
        for &b in betas {
            log_term -= (ai - b).ln();
        }
        for (j, &aj) in alphas.iter().enumerate() {
            if j != i {
                log_term -= (ai - aj).abs().ln();
            }
        }
        logs.push(log_term);
        signs.push(if i % 2 == 0 { 1.0 } else { -1.0 });
    }
    let peak = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if peak == f64::NEG_INFINITY {
        return (0.0, 0.0);
    }
    let mut acc = Neumaier::default();
    for (log_term, sign) in logs.iter().zip(&signs) {
        acc.add(sign * (log_term - peak).exp());
    }
    let err = peak.exp() * d as f64 * 1e-15;
    (acc.value() * peak.exp(), err)
}

fn clamp_measure(raw: f64) -> Result<f64> {
    let excess = (-raw).max(raw - 1.0);
    if excess > MEASURE_CLAMP_TOL {
        return Err(Error::MeasureOutOfRange { excess });
    }
    Ok(raw.clamp(0.0, 1.0))
}

/// Spreads each cluster of coalesced αs symmetrically about its mean by
/// relative steps of PERTURB_REL, preserving descending order. Returns the
/// new list and the largest absolute shift.
fn spread_degenerate(alphas: &[f64], scale: f64) -> Result<(Vec<f64>, f64)> {
    let join = 10.0 * PERTURB_REL * scale;
    let mut out = Vec::with_capacity(alphas.len());
    let mut applied = 0.0f64;
    let mut start = 0;
    while start < alphas.len() {
        let mut end = start + 1;
        while end < alphas.len() && alphas[end - 1] - alphas[end] <= join {
            end += 1;
        }
        let cluster = &alphas[start..end];
        if cluster.len() == 1 {
            out.push(cluster[0]);
        } else {
            let mean = cluster.iter().sum::<f64>() / cluster.len() as f64;
            let center = (cluster.len() as f64 - 1.0) / 2.0;
            for (t, &orig) in cluster.iter().enumerate() {
                let shifted = mean * (1.0 + (center - t as f64) * PERTURB_REL);
                applied = applied.max((shifted - orig).abs());
                out.push(shifted);
            }
        }
        start = end;
    }
    for w in out.windows(2) {
        if w[0] <= w[1] {
            return Err(Error::DegenerateAlphas { first: 0, second: 1 });
        }
    }
    if out.iter().any(|&a| a <= 0.0) {
        return Err(Error::DegenerateAlphas { first: 0, second: 0 });
    }
    Ok((out, applied))
}
