//! The `verify` subcommand: every documented invariant of the reliability,
//! measure, spectrum, and estimator modules, re-checked on fresh random
//! instances and printed as a pass/fail table. Deterministic for a fixed
//! seed.

use collapse_gauge::channel::{collapse_indicator_operator, reliability_density, reliability_pure};
use collapse_gauge::helstrom::{
    discrimination_operator, discrimination_reliability, helstrom_optimal, optimal_reliability_pair,
};
use collapse_gauge::lambda::{lambda_p, measure_positive_form};
use collapse_gauge::montecarlo::{estimate_lambda, estimate_positive_measure, simpson};
use collapse_gauge::majorization::{indicator_partial_sum_bound, ky_fan_check, schur_horn_check};
use collapse_gauge::random::{random_density, random_effect, random_hermitian, random_pure_state};
use collapse_gauge::search::uniform_projector_effect;
use collapse_gauge::{CollapseParams, DensityMatrix, SignedSpectrum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

type CheckResult = Result<(), String>;

struct Check {
    name: &'static str,
    run: fn(u64) -> CheckResult,
}

const CHECKS: &[Check] = &[
    Check { name: "core/reliability-range", run: reliability_range },
    Check { name: "core/sphere-average-identity", run: sphere_average_identity },
    Check { name: "core/helstrom-consistency", run: helstrom_consistency },
    Check { name: "core/helstrom-optimality", run: helstrom_optimality },
    Check { name: "core/criterion-equivalence", run: criterion_equivalence },
    Check { name: "core/indicator-trace-law", run: indicator_trace_law },
    Check { name: "lambda/complement-identity", run: complement_identity },
    Check { name: "lambda/one-positive-cap", run: one_positive_cap },
    Check { name: "lambda/two-level-cap", run: two_level_cap },
    Check { name: "lambda/unimodality", run: unimodality },
    Check { name: "lambda/scale-invariance", run: scale_invariance },
    Check { name: "lambda/beta-continuity", run: beta_continuity },
    Check { name: "spectrum/ky-fan-schur-horn", run: ky_fan_schur_horn },
    Check { name: "spectrum/partial-sum-bounds", run: partial_sum_bounds },
    Check { name: "spectrum/full-rank-trace", run: full_rank_trace },
    Check { name: "montecarlo/estimator-determinism", run: estimator_determinism },
    Check { name: "montecarlo/std-error-rate", run: std_error_rate },
    Check { name: "montecarlo/estimator-complement", run: estimator_complement },
    Check { name: "montecarlo/exponential-mgf", run: exponential_mgf },
];

pub fn run(seed: u64) -> bool {
    let mut passed = 0usize;
    println!("{:<36} result", "check");
    println!("{:-<36} ------", "");
    for (i, check) in CHECKS.iter().enumerate() {
        match (check.run)(seed.wrapping_add(1_000_003 * i as u64)) {
            Ok(()) => {
                passed += 1;
                println!("{:<36} PASS", check.name);
            }
            Err(msg) => println!("{:<36} FAIL  {msg}", check.name),
        }
    }
    println!();
    println!("{passed}/{} checks passed", CHECKS.len());
    passed == CHECKS.len()
}

fn rng_for(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// Reliability is a probability for every state, effect, and p, endpoints
/// included.
fn reliability_range(seed: u64) -> CheckResult {
    let mut rng = rng_for(seed);
    for trial in 0..2000 {
        let d = rng.random_range(2..=6);
        let p = match trial % 10 {
            0 => 0.0,
            1 => 1.0,
            _ => rng.random::<f64>(),
        };
        let params = CollapseParams::new(p, d).map_err(err)?;
        let e = random_effect(d, &mut rng).map_err(err)?;
        let psi = random_pure_state(d, &mut rng);
        let r = reliability_pure(&psi, params, &e).map_err(err)?;
        if !(0.0..=1.0).contains(&r) {
            return Err(format!("reliability {r} outside [0,1] at d={d}, p={p}"));
        }
    }
    Ok(())
}

/// Averaging the pure-state reliability over the sphere reproduces the
/// maximally mixed density value, within 3 standard errors at 10^5 states.
fn sphere_average_identity(seed: u64) -> CheckResult {
    let d = 3;
    let params = CollapseParams::new(0.37, d).map_err(err)?;
    let mut rng = rng_for(seed);
    let e = random_effect(d, &mut rng).map_err(err)?;
    let n = 100_000u64;
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for i in 0..n {
        let psi = random_pure_state(d, &mut rng);
        let r = reliability_pure(&psi, params, &e).map_err(err)?;
        let delta = r - mean;
        mean += delta / (i + 1) as f64;
        m2 += delta * (r - mean);
    }
    let se = (m2 / (n - 1) as f64 / n as f64).sqrt();
    let mixed = DensityMatrix::maximally_mixed(d).map_err(err)?;
    let target = reliability_density(&mixed, params, &e).map_err(err)?;
    if (mean - target).abs() > 3.0 * se.max(1e-12) {
        return Err(format!("sphere mean {mean} vs density value {target}, se {se}"));
    }
    Ok(())
}

/// Both closed forms of the optimal reliability agree on every instance.
fn helstrom_consistency(seed: u64) -> CheckResult {
    let mut rng = rng_for(seed);
    for _ in 0..500 {
        let d = rng.random_range(2..=6);
        let p = rng.random::<f64>();
        let rho1 = random_density(d, &mut rng).map_err(err)?;
        let rho2 = random_density(d, &mut rng).map_err(err)?;
        let a = discrimination_operator(&rho1, &rho2, p).map_err(err)?;
        let (via_plus, via_minus) = optimal_reliability_pair(&a, p);
        if (via_plus - via_minus).abs() > 1e-10 {
            return Err(format!("expressions disagree: {via_plus} vs {via_minus}"));
        }
    }
    Ok(())
}

/// No effect beats the optimal discrimination reliability.
fn helstrom_optimality(seed: u64) -> CheckResult {
    let mut rng = rng_for(seed);
    for _ in 0..100 {
        let d = rng.random_range(2..=5);
        let p = rng.random::<f64>();
        let rho1 = random_density(d, &mut rng).map_err(err)?;
        let rho2 = random_density(d, &mut rng).map_err(err)?;
        let optimum = helstrom_optimal(&rho1, &rho2, p).map_err(err)?;
        let a = discrimination_operator(&rho1, &rho2, p).map_err(err)?;
        for _ in 0..100 {
            let e = random_effect(d, &mut rng).map_err(err)?;
            let r = discrimination_reliability(&a, &e, p).map_err(err)?;
            if r > optimum.reliability + 1e-10 {
                return Err(format!("effect at {r} beats optimum {}", optimum.reliability));
            }
        }
    }
    Ok(())
}

/// A positive indicator form and beating blind guessing are the same event;
/// the two quantities also agree numerically. States in the 1e-13 dead band
/// around zero are skipped, since there the sign is round-off.
fn criterion_equivalence(seed: u64) -> CheckResult {
    let mut rng = rng_for(seed);
    for _ in 0..500 {
        let d = rng.random_range(2..=5);
        let p = 0.01 + 0.98 * rng.random::<f64>();
        let params = CollapseParams::new(p, d).map_err(err)?;
        let e = random_effect(d, &mut rng).map_err(err)?;
        let a = collapse_indicator_operator(&e, params).map_err(err)?;
        for _ in 0..4 {
            let psi = random_pure_state(d, &mut rng);
            let form = a.quadratic_form(&psi).map_err(err)?;
            let margin = reliability_pure(&psi, params, &e).map_err(err)? - params.blind_reliability();
            if (form - margin).abs() > 1e-12 {
                return Err(format!("indicator form {form} vs reliability margin {margin}"));
            }
            if form.abs() > 1e-13 && margin.abs() > 1e-13 && (form > 0.0) != (margin > 0.0) {
                return Err(format!("sign mismatch: form {form}, margin {margin}"));
            }
        }
    }
    Ok(())
}

/// The indicator trace equals its closed form in both p branches.
fn indicator_trace_law(seed: u64) -> CheckResult {
    let mut rng = rng_for(seed);
    for _ in 0..1000 {
        let d = rng.random_range(2..=6);
        let p = 0.01 + 0.98 * rng.random::<f64>();
        let params = CollapseParams::new(p, d).map_err(err)?;
        let e = random_effect(d, &mut rng).map_err(err)?;
        let a = collapse_indicator_operator(&e, params).map_err(err)?;
        let expected = if p <= 0.5 {
            -(1.0 - 2.0 * p) * e.trace()
        } else {
            -(2.0 * p - 1.0) * (d as f64 - e.trace())
        };
        if (a.trace() - expected).abs() > 1e-12 * d as f64 {
            return Err(format!("trace {} vs closed form {expected}", a.trace()));
        }
    }
    Ok(())
}

/// A spectrum and its negation split the sphere: the measures sum to one
/// whenever no eigenvalue sits exactly at zero.
fn complement_identity(seed: u64) -> CheckResult {
    let mut rng = rng_for(seed);
    for _ in 0..500 {
        let d = rng.random_range(2..=8);
        let s = SignedSpectrum::from_operator(&random_hermitian(d, &mut rng)).map_err(err)?;
        let direct = measure_positive_form(&s).map_err(err)?.value;
        let negated = measure_positive_form(&s.negated()).map_err(err)?.value;
        if (direct + negated - 1.0).abs() > 1e-8 {
            return Err(format!("measures sum to {}", direct + negated));
        }
    }
    Ok(())
}

/// One positive eigenvalue plus non-positive trace caps the measure at 1/2.
fn one_positive_cap(seed: u64) -> CheckResult {
    let mut rng = rng_for(seed);
    for trial in 0..500 {
        let m = rng.random_range(1..=5);
        let mut mags: Vec<f64> = (0..m).map(|_| 0.1 + 0.9 * rng.random::<f64>()).collect();
        mags.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let betas: Vec<f64> = mags.iter().map(|&v| -v).collect();
        let total: f64 = mags.iter().sum();
        let t = if trial % 10 == 0 { 1.0 } else { rng.random::<f64>().max(1e-6) };
        let s = SignedSpectrum::new(vec![t * total], betas).map_err(err)?;
        let value = measure_positive_form(&s).map_err(err)?.value;
        if value > 0.5 + 1e-10 {
            return Err(format!("measure {value} above 1/2 with trace {}", s.trace()));
        }
    }
    Ok(())
}

/// In dimension two no experiment beats blind guessing on a majority of the
/// sphere.
fn two_level_cap(seed: u64) -> CheckResult {
    let mut rng = rng_for(seed);
    for _ in 0..300 {
        let e = random_effect(2, &mut rng).map_err(err)?;
        for k in 1..20 {
            let p = k as f64 / 20.0;
            let params = CollapseParams::new(p, 2).map_err(err)?;
            let v = lambda_p(&e, params).map_err(err)?.value;
            if v > 0.5 + 1e-9 {
                return Err(format!("measure {v} above 1/2 at p={p}"));
            }
        }
    }
    Ok(())
}

/// The measure rises toward p = 1/2 and falls after it.
fn unimodality(seed: u64) -> CheckResult {
    let mut rng = rng_for(seed);
    for _ in 0..20 {
        let d = rng.random_range(2..=4);
        let e = random_effect(d, &mut rng).map_err(err)?;
        let values: Vec<f64> = (1..20)
            .map(|k| {
                let params = CollapseParams::new(k as f64 / 20.0, d)?;
                Ok(lambda_p(&e, params)?.value)
            })
            .collect::<collapse_gauge::Result<_>>()
            .map_err(err)?;
        let peak = 9;
        for i in 0..peak {
            if values[i + 1] < values[i] - 1e-9 {
                return Err(format!("dip before 1/2: {} after {}", values[i + 1], values[i]));
            }
        }
        for i in peak..values.len() - 1 {
            if values[i + 1] > values[i] + 1e-9 {
                return Err(format!("rise after 1/2: {} after {}", values[i + 1], values[i]));
            }
        }
    }
    Ok(())
}

/// The measure depends only on eigenvalue ratios.
fn scale_invariance(seed: u64) -> CheckResult {
    let mut rng = rng_for(seed);
    for _ in 0..200 {
        let d = rng.random_range(2..=6);
        let s = SignedSpectrum::from_operator(&random_hermitian(d, &mut rng)).map_err(err)?;
        let base = measure_positive_form(&s).map_err(err)?.value;
        for &c in &[1e-6, 1e-3, 1e3, 1e8] {
            let scaled = measure_positive_form(&s.scaled(c).map_err(err)?).map_err(err)?.value;
            if (scaled - base).abs() > 1e-12 {
                return Err(format!("scaling by {c} moved {base} to {scaled}"));
            }
        }
    }
    Ok(())
}

/// Splitting a coincident pair of negative eigenvalues by 1e-9 moves the
/// measure by at most 1e-6.
fn beta_continuity(seed: u64) -> CheckResult {
    let mut rng = rng_for(seed);
    for _ in 0..100 {
        let x1 = 0.1 + 0.2 * rng.random::<f64>();
        let x2 = x1 + 0.05 + 0.3 * rng.random::<f64>();
        let x3 = x2 + 0.05 + 0.3 * rng.random::<f64>();
        let a2 = 0.1 + 0.2 * rng.random::<f64>();
        let a1 = a2 + 0.1 + 0.5 * rng.random::<f64>();
        let alphas = vec![a1, a2];
        let base = SignedSpectrum::new(alphas.clone(), vec![-x1, -x2, -x2, -x3]).map_err(err)?;
        let split =
            SignedSpectrum::new(alphas, vec![-x1, -x2 + 1e-9, -x2 - 1e-9, -x3]).map_err(err)?;
        let v0 = measure_positive_form(&base).map_err(err)?.value;
        let v1 = measure_positive_form(&split).map_err(err)?.value;
        if (v0 - v1).abs() > 1e-6 {
            return Err(format!("split moved the measure from {v0} to {v1}"));
        }
    }
    Ok(())
}

/// The eigenvalue-sum and diagonal-majorization inequalities hold on every
/// random instance; a counterexample would be an implementation bug.
fn ky_fan_schur_horn(seed: u64) -> CheckResult {
    let mut rng = rng_for(seed);
    for _ in 0..500 {
        let d = rng.random_range(2..=6);
        let b = random_hermitian(d, &mut rng);
        let c = random_hermitian(d, &mut rng);
        let e = random_effect(d, &mut rng).map_err(err)?;
        for m in 1..=d {
            if !ky_fan_check(&b, &c, m).map_err(err)? {
                return Err(format!("eigenvalue-sum inequality failed at d={d}, m={m}"));
            }
            if !schur_horn_check(&e, m).map_err(err)? {
                return Err(format!("diagonal majorization failed at d={d}, m={m}"));
            }
        }
    }
    Ok(())
}

/// Leading eigenvalue sums of the indicator stay under their two-sided
/// spectral bounds in both p branches.
fn partial_sum_bounds(seed: u64) -> CheckResult {
    let mut rng = rng_for(seed);
    for trial in 0..300 {
        let d = rng.random_range(2..=6);
        let p = if trial % 2 == 0 {
            0.05 + 0.4 * rng.random::<f64>()
        } else {
            0.55 + 0.4 * rng.random::<f64>()
        };
        let params = CollapseParams::new(p, d).map_err(err)?;
        let e = random_effect(d, &mut rng).map_err(err)?;
        let a = collapse_indicator_operator(&e, params).map_err(err)?;
        let evs = a.eigenvalues();
        let mut partial = 0.0;
        for m in 1..=d {
            partial += evs[m - 1];
            let bound = indicator_partial_sum_bound(&e, params, m).map_err(err)?;
            if partial > bound + 1e-10 {
                return Err(format!("partial sum {partial} above bound {bound} at m={m}, p={p}"));
            }
        }
    }
    Ok(())
}

/// At m = d the partial-sum bound collapses to the exact trace law.
fn full_rank_trace(seed: u64) -> CheckResult {
    let mut rng = rng_for(seed);
    for _ in 0..300 {
        let d = rng.random_range(2..=6);
        let p = 0.01 + 0.98 * rng.random::<f64>();
        let params = CollapseParams::new(p, d).map_err(err)?;
        let e = random_effect(d, &mut rng).map_err(err)?;
        let a = collapse_indicator_operator(&e, params).map_err(err)?;
        let expected = if p <= 0.5 {
            -(1.0 - 2.0 * p) * e.trace()
        } else {
            -(2.0 * p - 1.0) * (d as f64 - e.trace())
        };
        let bound = indicator_partial_sum_bound(&e, params, d).map_err(err)?;
        if (bound - expected).abs() > 1e-12 * d as f64 {
            return Err(format!("full-rank bound {bound} vs trace law {expected}"));
        }
        if (a.trace() - expected).abs() > 1e-12 * d as f64 {
            return Err(format!("trace {} vs trace law {expected}", a.trace()));
        }
    }
    Ok(())
}

/// Identical seeds give bit-identical estimates no matter how the sample
/// blocks are spread over threads.
fn estimator_determinism(seed: u64) -> CheckResult {
    let mut rng = rng_for(seed);
    let e = random_effect(3, &mut rng).map_err(err)?;
    let params = CollapseParams::new(0.43, 3).map_err(err)?;
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().map_err(err)?;
    let quad = rayon::ThreadPoolBuilder::new().num_threads(4).build().map_err(err)?;
    let a = single.install(|| estimate_lambda(&e, params, 50_000, seed)).map_err(err)?;
    let b = quad.install(|| estimate_lambda(&e, params, 50_000, seed)).map_err(err)?;
    if a != b {
        return Err(format!("1-thread run {:?} differs from 4-thread run {:?}", a, b));
    }
    Ok(())
}

/// Standard errors shrink like 1/sqrt(n): four times the samples halves the
/// standard error, within 20%.
fn std_error_rate(seed: u64) -> CheckResult {
    let e = uniform_projector_effect(3).map_err(err)?;
    let params = CollapseParams::new(0.45, 3).map_err(err)?;
    let small = estimate_lambda(&e, params, 100_000, seed).map_err(err)?;
    let large = estimate_lambda(&e, params, 400_000, seed.wrapping_add(1)).map_err(err)?;
    let ratio = large.std_error / small.std_error;
    if (ratio - 0.5).abs() > 0.1 {
        return Err(format!("se ratio {ratio} far from 1/2"));
    }
    Ok(())
}

/// Estimated measures of an operator and its negation sum to one within
/// joint sampling error.
fn estimator_complement(seed: u64) -> CheckResult {
    let mut rng = rng_for(seed);
    let a = random_hermitian(4, &mut rng);
    let pos = estimate_positive_measure(&a, 200_000, seed.wrapping_add(1)).map_err(err)?;
    let neg = estimate_positive_measure(&a.scaled(-1.0), 200_000, seed.wrapping_add(2)).map_err(err)?;
    let joint_se = pos.std_error.hypot(neg.std_error);
    if (pos.mean + neg.mean - 1.0).abs() > 4.0 * joint_se + 1e-9 {
        return Err(format!("complements sum to {}", pos.mean + neg.mean));
    }
    Ok(())
}

/// Quadrature confirms the moment generating function behind the
/// concentration bound: E[exp(λXt)] = 1/(1−2λt) for a mean-2 exponential X.
fn exponential_mgf(_seed: u64) -> CheckResult {
    for &(lam, t) in &[(1.0, 0.2), (0.7, 0.3), (2.0, 0.12)] {
        let decay = 0.5 - lam * t;
        let upper = 50.0 / decay;
        let integral = simpson(|x| (lam * t * x).exp() * (-x / 2.0).exp() / 2.0, 0.0, upper, 200_000);
        let closed = 1.0 / (1.0 - 2.0 * lam * t);
        if (integral - closed).abs() > 1e-8 {
            return Err(format!("quadrature {integral} vs closed form {closed} at λ={lam}, t={t}"));
        }
    }
    Ok(())
}
