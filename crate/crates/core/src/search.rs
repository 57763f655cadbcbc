//! Searching for experiments that maximize the beat-blind-guessing measure.
//!
//! Every candidate draw gets its own counter-indexed RNG stream, so a search
//! is a deterministic function of (dimension, p, budget, strategy, seed) and
//! enlarging the budget can only improve the result: the first candidates are
//! identical run to run.

use std::fmt;
use std::str::FromStr;

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::Error;
use crate::lambda::{conjecture_bound, lambda_p};
use crate::operator::{CMatrix, Effect};
use crate::params::CollapseParams;
use crate::random::{haar_unitary, random_effect, random_rank_k_projector};
use crate::state::PureState;
use crate::Result;

/// Improvements below this are treated as ties; the earliest candidate wins.
const TIE_TOL: f64 = 1e-12;
/// Evaluations granted to each local-search restart.
const RESTART_LEN: u64 = 200;
/// Margin above the conjectured ceiling before a search flags a violation.
const VIOLATION_SLACK: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchStrategy {
    /// The single candidate conjectured optimal: the projector onto the
    /// uniform-amplitude state.
    UniformProjector,
    /// Haar-random rank-k projectors, cycling k through 1..d.
    RankKProjectors,
    /// Haar-random basis with independent uniform eigenvalues.
    SpectrumParametrized,
    /// Hill climbing over (eigenvalues, basis) from random starting points;
    /// the first restart starts at the uniform projector.
    RandomRestartLocal,
}

impl SearchStrategy {
    fn name(self) -> &'static str {
        match self {
            Self::UniformProjector => "uniform_projector",
            Self::RankKProjectors => "rank_k_projectors",
            Self::SpectrumParametrized => "spectrum_parametrized",
            Self::RandomRestartLocal => "random_restart_local",
        }
    }
}

impl fmt::Display for SearchStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SearchStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform_projector" => Ok(Self::UniformProjector),
            "rank_k_projectors" => Ok(Self::RankKProjectors),
            "spectrum_parametrized" => Ok(Self::SpectrumParametrized),
            "random_restart_local" => Ok(Self::RandomRestartLocal),
            other => Err(Error::UnknownStrategy(other.to_string())),
        }
    }
}

/// Outcome of a search: the best effect found, its measure, and whether that
/// measure exceeds the conjectured dimension ceiling.
#[derive(Debug, Clone)]
pub struct SearchReport {
    pub best_effect: Effect,
    pub best_lambda: f64,
    pub p: f64,
    pub d: usize,
    pub evaluations: u64,
    pub strategy: SearchStrategy,
    pub violated_conjecture: bool,
}

/// Projector onto the uniform-amplitude state (1, …, 1)/√d.
pub fn uniform_projector_effect(d: usize) -> Result<Effect> {
    Ok(Effect::rank_one(&PureState::uniform(d)?))
}

/// Closed-form measure of the uniform projector for p ≤ 1/2:
/// 1 − (1 − p/(d(1−p)))^{d−1}. At p = 1/2 this equals the conjectured
/// ceiling 1 − (1 − 1/d)^{d−1}.
pub fn uniform_projector_lambda(d: usize, p: f64) -> Result<f64> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    if !(p > 0.0 && p <= 0.5) {
        return Err(Error::InvalidProbability(p));
    }
    let base = 1.0 - p / (d as f64 * (1.0 - p));
    Ok(1.0 - base.powi(d as i32 - 1))
}

/// Maximizes Λ_p over effects on C^d with the given evaluation budget.
/// Deterministic in the seed; a larger budget extends the same candidate
/// sequence, so the result is monotone in the budget.
pub fn maximize_lambda(
    d: usize,
    p: f64,
    budget: u64,
    strategy: SearchStrategy,
    seed: u64,
) -> Result<SearchReport> {
    let params = CollapseParams::new(p, d)?;
    if p <= 0.0 || p >= 1.0 {
        return Err(Error::InvalidProbability(p));
    }
    if budget == 0 {
        return Err(Error::EmptyBudget);
    }
    let (best_effect, tracked, evaluations) = match strategy {
        SearchStrategy::UniformProjector => {
            let e = uniform_projector_effect(d)?;
            let v = lambda_p(&e, params)?.value;
            (e, v, 1)
        }
        SearchStrategy::RankKProjectors => scan_candidates(params, budget, seed, |d, i, rng| {
            random_rank_k_projector(d, 1 + (i as usize % (d - 1).max(1)), rng)
        })?,
        SearchStrategy::SpectrumParametrized => {
            scan_candidates(params, budget, seed, |d, _, rng| random_effect(d, rng))?
        }
        SearchStrategy::RandomRestartLocal => restart_local(params, budget, seed)?,
    };
    let best_lambda = lambda_p(&best_effect, params)?.value;
    debug_assert!((best_lambda - tracked).abs() <= 1e-9, "search bookkeeping drifted from re-evaluation");
    let violated_conjecture = best_lambda > conjecture_bound(d)? + VIOLATION_SLACK;
    Ok(SearchReport { best_effect, best_lambda, p, d, evaluations, strategy, violated_conjecture })
}

/// Measure of one effect across a p grid, returned as (p, Λ_p) pairs. The
/// grid must be strictly ascending inside (0, 1).
pub fn p_sweep(effect: &Effect, p_grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    if p_grid.is_empty() {
        return Err(Error::InvalidGrid("empty p grid".into()));
    }
    for pair in p_grid.windows(2) {
        if pair[1] <= pair[0] || pair[1].is_nan() || pair[0].is_nan() {
            return Err(Error::InvalidGrid(format!("grid not strictly ascending at {} -> {}", pair[0], pair[1])));
        }
    }
    let mut out = Vec::with_capacity(p_grid.len());
    for &p in p_grid {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidGrid(format!("grid point {p} outside (0, 1)")));
        }
        let params = CollapseParams::new(p, effect.d())?;
        out.push((p, lambda_p(effect, params)?.value));
    }
    Ok(out)
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Evaluates `budget` independent candidates, one RNG stream each, and
/// regenerates the winner. The argmax scan is serial with
/// earliest-index-wins ties, so thread scheduling cannot change the result.
fn scan_candidates<F>(params: CollapseParams, budget: u64, seed: u64, candidate: F) -> Result<(Effect, f64, u64)>
where
    F: Fn(usize, u64, &mut ChaCha12Rng) -> Result<Effect> + Sync,
{
    let d = params.d();
    let values: Vec<f64> = (0..budget as usize)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i as u64);
            let e = candidate(d, i as u64, &mut rng)?;
            lambda_p(&e, params).map(|r| r.value)
        })
        .collect::<Result<Vec<f64>>>()?;
    let mut best = 0usize;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] + TIE_TOL {
            best = i;
        }
    }
    let mut rng = stream_rng(seed, best as u64);
    let winner = candidate(d, best as u64, &mut rng)?;
    Ok((winner, values[best], budget))
}

fn restart_local(params: CollapseParams, budget: u64, seed: u64) -> Result<(Effect, f64, u64)> {
    let restarts = budget.div_ceil(RESTART_LEN);
    let bests: Vec<(f64, u64, Effect)> = (0..restarts as usize)
        .into_par_iter()
        .map(|r| {
            let allotted = RESTART_LEN.min(budget - r as u64 * RESTART_LEN);
            run_restart(params, r as u64, allotted, seed)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut best = 0usize;
    for (i, entry) in bests.iter().enumerate().skip(1) {
        if entry.0 > bests[best].0 + TIE_TOL {
            best = i;
        }
    }
    let (value, _, effect) = bests.into_iter().nth(best).expect("at least one restart");
    Ok((effect, value, budget))
}

/// One hill climb over (eigenvalues in [0,1], unitary basis). Moves perturb a
/// single eigenvalue or rotate one column pair; only strict improvements are
/// accepted, and the step halves after every 50 rejections.
fn run_restart(params: CollapseParams, r: u64, allotted: u64, seed: u64) -> Result<(f64, u64, Effect)> {
    let d = params.d();
    let mut rng = stream_rng(seed, r);
    let (mut mu, mut basis) = if r == 0 {
        let e = uniform_projector_effect(d)?;
        let (evs, vecs) = e.operator().eigen_pairs();
        (evs.iter().map(|v| v.clamp(0.0, 1.0)).collect::<Vec<f64>>(), vecs)
    } else {
        let mu: Vec<f64> = (0..d).map(|_| rng.random::<f64>()).collect();
        (mu, haar_unitary(d, &mut rng))
    };
    let mut current = assemble_effect(&mu, &basis)?;
    let mut value = lambda_p(&current, params)?.value;
    let mut used = 1u64;
    let mut best = (value, r * RESTART_LEN, current.clone());
    let mut step = 0.1f64;
    let mut rejections = 0u32;
    while used < allotted {
        let mut mu_next = mu.clone();
        let mut basis_next = basis.clone();
        if rng.random::<f64>() < 0.5 {
            let i = rng.random_range(0..d);
            let delta: f64 = rng.sample(StandardNormal);
            mu_next[i] = (mu_next[i] + step * delta).clamp(0.0, 1.0);
        } else {
            let i = rng.random_range(0..d);
            let mut j = rng.random_range(0..d - 1);
            if j >= i {
                j += 1;
            }
            let theta: f64 = step * rng.sample::<f64, _>(StandardNormal);
            let phi = std::f64::consts::TAU * rng.random::<f64>();
            rotate_columns(&mut basis_next, i, j, theta, phi);
        }
        let candidate = assemble_effect(&mu_next, &basis_next)?;
        let candidate_value = lambda_p(&candidate, params)?.value;
        used += 1;
        if candidate_value > value + TIE_TOL {
            mu = mu_next;
            basis = basis_next;
            current = candidate;
            value = candidate_value;
            rejections = 0;
            if value > best.0 + TIE_TOL {
                best = (value, r * RESTART_LEN + used - 1, current.clone());
            }
        } else {
            rejections += 1;
            if rejections % 50 == 0 {
                step *= 0.5;
            }
        }
    }
    Ok(best)
}

fn assemble_effect(mu: &[f64], basis: &CMatrix) -> Result<Effect> {
    let d = mu.len();
    let diag = CMatrix::from_diagonal(&DVector::from_iterator(
        d,
        mu.iter().map(|&m| Complex64::new(m, 0.0)),
    ));
    Effect::from_matrix(basis * diag * basis.adjoint())
}

/// In-place unitary mix of columns i and j:
/// (c_i, c_j) ← (cosθ·c_i + e^{iφ}sinθ·c_j, −e^{−iφ}sinθ·c_i + cosθ·c_j).
fn rotate_columns(m: &mut CMatrix, i: usize, j: usize, theta: f64, phi: f64) {
    let (cos, sin) = (theta.cos(), theta.sin());
    let phase = Complex64::from_polar(1.0, phi);
    for row in 0..m.nrows() {
        let a = m[(row, i)];
        let b = m[(row, j)];
        m[(row, i)] = a * cos + b * phase * sin;
        m[(row, j)] = -a * phase.conj() * sin + b * cos;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::collapse_indicator_operator;
    use approx::assert_abs_diff_eq;

    #[test]
    fn strategy_names_round_trip() {
        for s in [
            SearchStrategy::UniformProjector,
            SearchStrategy::RankKProjectors,
            SearchStrategy::SpectrumParametrized,
            SearchStrategy::RandomRestartLocal,
        ] {
            assert_eq!(s.to_string().parse::<SearchStrategy>().unwrap(), s);
        }
        assert!(matches!("gradient".parse::<SearchStrategy>(), Err(Error::UnknownStrategy(_))));
    }

    #[test]
    fn uniform_projector_indicator_spectrum() {
        let d = 3;
        let p = 0.47;
        let params = CollapseParams::new(p, d).unwrap();
        let e = uniform_projector_effect(d).unwrap();
        let a = collapse_indicator_operator(&e, params).unwrap();
        let evs = a.eigenvalues();
        let dd = d as f64;
        assert_abs_diff_eq!(evs[0], p / dd, epsilon = 1e-12);
        assert_abs_diff_eq!(evs[1], p / dd, epsilon = 1e-12);
        assert_abs_diff_eq!(evs[2], p / dd - (1.0 - p), epsilon = 1e-12);
    }

    #[test]
    fn closed_form_value_for_three_levels() {
        let v = uniform_projector_lambda(3, 0.47).unwrap();
        let oracle = 1.0 - (1.0_f64 - 0.47 / (3.0 * 0.53)).powi(2);
        assert_abs_diff_eq!(v, oracle, epsilon = 1e-15);
        assert_abs_diff_eq!(v, 0.503_817_1, epsilon = 1e-7);
        let params = CollapseParams::new(0.47, 3).unwrap();
        let measured = lambda_p(&uniform_projector_effect(3).unwrap(), params).unwrap().value;
        assert_abs_diff_eq!(measured, v, epsilon = 1e-12);
    }

    #[test]
    fn closed_form_matches_measure_across_dimensions() {
        for d in [2usize, 3, 4, 8, 16, 32] {
            for &p in &[0.05, 0.2, 0.35, 0.5] {
                let params = CollapseParams::new(p, d).unwrap();
                let measured = lambda_p(&uniform_projector_effect(d).unwrap(), params).unwrap().value;
                let closed = uniform_projector_lambda(d, p).unwrap();
                assert!(
                    (measured - closed).abs() <= 1e-9,
                    "d={d} p={p}: measured {measured} vs closed form {closed}"
                );
            }
        }
    }

    #[test]
    fn conjectured_ceiling_attained_at_half() {
        for d in 2..=6 {
            let params = CollapseParams::new(0.5, d).unwrap();
            let v = lambda_p(&uniform_projector_effect(d).unwrap(), params).unwrap().value;
            assert_abs_diff_eq!(v, conjecture_bound(d).unwrap(), epsilon = 1e-12);
        }
    }

    #[test]
    fn local_search_reaches_conjectured_ceiling() {
        let report = maximize_lambda(3, 0.5, 10_000, SearchStrategy::RandomRestartLocal, 7).unwrap();
        let floor = conjecture_bound(3).unwrap();
        assert!(report.best_lambda >= floor - 1e-6, "best {} below {floor}", report.best_lambda);
        if report.violated_conjecture {
            println!("search exceeded the conjectured ceiling: {} > {floor}", report.best_lambda);
        }
    }

    #[test]
    fn searches_are_reproducible() {
        for strategy in [SearchStrategy::SpectrumParametrized, SearchStrategy::RandomRestartLocal] {
            let a = maximize_lambda(3, 0.45, 400, strategy, 11).unwrap();
            let b = maximize_lambda(3, 0.45, 400, strategy, 11).unwrap();
            assert_eq!(a.best_lambda, b.best_lambda);
            assert_eq!(a.evaluations, b.evaluations);
            assert_eq!(a.best_effect.matrix(), b.best_effect.matrix());
            assert_eq!(a.violated_conjecture, b.violated_conjecture);
        }
    }

    #[test]
    fn larger_budgets_never_lose_ground() {
        for strategy in [SearchStrategy::SpectrumParametrized, SearchStrategy::RandomRestartLocal] {
            let small = maximize_lambda(3, 0.4, 100, strategy, 3).unwrap();
            let large = maximize_lambda(3, 0.4, 1000, strategy, 3).unwrap();
            assert!(
                large.best_lambda >= small.best_lambda - TIE_TOL,
                "{strategy}: budget 1000 found {} vs {} at 100",
                large.best_lambda,
                small.best_lambda
            );
        }
    }

    #[test]
    fn weak_collapse_stays_under_concentration_bound() {
        let report = maximize_lambda(3, 0.1, 300, SearchStrategy::SpectrumParametrized, 5).unwrap();
        let params = CollapseParams::new(0.1, 3).unwrap();
        assert!(report.best_lambda <= crate::lambda::chernoff_bound(params) + 1e-9);
    }

    #[test]
    fn rejects_empty_budget_and_degenerate_p() {
        assert!(matches!(
            maximize_lambda(3, 0.4, 0, SearchStrategy::UniformProjector, 1),
            Err(Error::EmptyBudget)
        ));
        assert!(maximize_lambda(3, 0.0, 10, SearchStrategy::UniformProjector, 1).is_err());
        assert!(maximize_lambda(3, 1.0, 10, SearchStrategy::UniformProjector, 1).is_err());
    }

    #[test]
    fn sweep_peaks_at_half_for_uniform_projector() {
        let e = uniform_projector_effect(3).unwrap();
        let grid: Vec<f64> = (30..=70).map(|i| i as f64 / 100.0).collect();
        let sweep = p_sweep(&e, &grid).unwrap();
        let (p_best, v_best) = sweep
            .iter()
            .copied()
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .unwrap();
        assert_abs_diff_eq!(p_best, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(v_best, 5.0 / 9.0, epsilon = 1e-12);
    }

    #[test]
    fn sweep_rejects_bad_grids() {
        let e = uniform_projector_effect(2).unwrap();
        assert!(p_sweep(&e, &[]).is_err());
        assert!(p_sweep(&e, &[0.4, 0.3]).is_err());
        assert!(p_sweep(&e, &[0.4, 0.4]).is_err());
        assert!(p_sweep(&e, &[0.0, 0.5]).is_err());
    }

    #[test]
    fn uniform_projector_is_locally_maximal_at_half() {
        let d = 4;
        let params = CollapseParams::new(0.5, d).unwrap();
        let ceiling = conjecture_bound(d).unwrap();
        let e = uniform_projector_effect(d).unwrap();
        let (evs, vecs) = e.operator().eigen_pairs();
        let mu: Vec<f64> = evs.iter().map(|v| v.clamp(0.0, 1.0)).collect();
        let mut rng = stream_rng(99, 0);
        for _ in 0..200 {
            let mut mu_next = mu.clone();
            let mut basis_next = vecs.clone();
            if rng.random::<f64>() < 0.5 {
                let i = rng.random_range(0..d);
                let delta: f64 = rng.sample(StandardNormal);
                mu_next[i] = (mu_next[i] + 0.01 * delta).clamp(0.0, 1.0);
            } else {
                let i = rng.random_range(0..d);
                let mut j = rng.random_range(0..d - 1);
                if j >= i {
                    j += 1;
                }
                let theta: f64 = 0.01 * rng.sample::<f64, _>(StandardNormal);
                rotate_columns(&mut basis_next, i, j, theta, std::f64::consts::TAU * rng.random::<f64>());
            }
            let nearby = assemble_effect(&mu_next, &basis_next).unwrap();
            let v = lambda_p(&nearby, params).unwrap().value;
            assert!(v <= ceiling + 1e-6, "nearby effect reached {v}, above ceiling {ceiling}");
        }
    }
}
