//! Optimal discrimination between two state distributions.
//!
//! For hypotheses ρ₁ (prior p) and ρ₂ (prior 1−p), every effect E₁ answering
//! "hypothesis 1" achieves reliability R(E₁) = 1−p + tr[A·E₁] with
//! A = p·ρ₁ − (1−p)·ρ₂. The optimum is the projector onto A's positive
//! spectral subspace and achieves R_max = 1−p + λ⁺ = p − λ⁻, where λ± are the
//! sums of A's positive and negative eigenvalues. Any E between P⁺ and
//! P⁺ + P⁰ (adding any part of the kernel) is equally optimal; this module
//! always returns the bare positive projector P⁺.

use num_complex::Complex64;

use crate::error::Error;
use crate::operator::{CMatrix, DensityMatrix, Effect, HermitianOperator};
use crate::Result;

/// The discrimination operator A = p·ρ₁ − (1−p)·ρ₂.
pub fn discrimination_operator(rho1: &DensityMatrix, rho2: &DensityMatrix, p: f64) -> Result<HermitianOperator> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    rho1.operator().check_dim(rho2.d())?;
    rho1.operator().scaled(p).sub(&rho2.operator().scaled(1.0 - p))
}

/// Reliability 1−p + tr[A·E] of answering "hypothesis 1" on effect E.
pub fn discrimination_reliability(a: &HermitianOperator, effect: &Effect, p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    a.check_dim(effect.d())?;
    let d = a.d();
    let mut tr = 0.0;
    for i in 0..d {
        for j in 0..d {
            tr += (a.matrix()[(i, j)] * effect.matrix()[(j, i)]).re;
        }
    }
    Ok((1.0 - p) + tr)
}

/// The optimal discrimination effect and its reliability.
#[derive(Debug, Clone)]
pub struct HelstromOptimum {
    pub effect: Effect,
    pub reliability: f64,
}

/// Both closed forms for the optimal reliability: (1−p+λ⁺, p−λ⁻). They agree
/// up to eigensolver round-off; exposed separately so the consistency can be
/// checked on any instance.
pub fn optimal_reliability_pair(a: &HermitianOperator, p: f64) -> (f64, f64) {
    let mut plus = 0.0;
    let mut minus = 0.0;
    for ev in a.eigenvalues() {
        if ev > 0.0 {
            plus += ev;
        } else {
            minus += ev;
        }
    }
    ((1.0 - p) + plus, p - minus)
}

/// Computes the Helstrom optimum for priors (p, 1−p) on (ρ₁, ρ₂): the effect
/// is the projector onto the positive eigenspace of A = p·ρ₁ − (1−p)·ρ₂ and
/// the reliability is 1−p + λ⁺.
pub fn helstrom_optimal(rho1: &DensityMatrix, rho2: &DensityMatrix, p: f64) -> Result<HelstromOptimum> {
    let a = discrimination_operator(rho1, rho2, p)?;
    let d = a.d();
    let (evs, vecs) = a.eigen_pairs();
    let mut proj = CMatrix::zeros(d, d);
    let mut lambda_plus = 0.0;
    for (idx, &ev) in evs.iter().enumerate() {
        if ev > 0.0 {
            lambda_plus += ev;
            let col = vecs.column(idx);
            for i in 0..d {
                for j in 0..d {
                    proj[(i, j)] += col[i] * col[j].conj();
                }
            }
        }
    }
    let effect = Effect::new(HermitianOperator::unchecked(proj))?;
    Ok(HelstromOptimum { effect, reliability: (1.0 - p) + lambda_plus })
}

/// Convenience for collapse instances: discriminates the collapsed hypothesis
/// diag(ρ) (prior p) from the intact ρ (prior 1−p).
pub fn collapse_discrimination_operator(rho: &DensityMatrix, p: f64) -> Result<HermitianOperator> {
    discrimination_operator(&rho.diagonal_part(), rho, p)
}

/// Helstrom optimum for the collapse instance of `rho`.
pub fn collapse_helstrom(rho: &DensityMatrix, p: f64) -> Result<HelstromOptimum> {
    helstrom_optimal(&rho.diagonal_part(), rho, p)
}

#[allow(dead_code)]
fn complex(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::PureState;
    use approx::assert_abs_diff_eq;

    #[test]
    fn identical_hypotheses_reduce_to_blind_guessing() {
        let rho = DensityMatrix::maximally_mixed(3).unwrap();
        for &p in &[0.2, 0.5, 0.9] {
            let opt = helstrom_optimal(&rho, &rho, p).unwrap();
            assert_abs_diff_eq!(opt.reliability, p.max(1.0 - p), epsilon = 1e-12);
        }
        let a = discrimination_operator(&rho, &rho, 0.5).unwrap();
        assert_abs_diff_eq!(a.spectral_norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn discrimination_trace_is_prior_difference() {
        let psi = PureState::uniform(4).unwrap();
        let rho1 = DensityMatrix::from_pure(&psi);
        let rho2 = DensityMatrix::maximally_mixed(4).unwrap();
        for &p in &[0.0, 0.3, 1.0] {
            let a = discrimination_operator(&rho1, &rho2, p).unwrap();
            assert_abs_diff_eq!(a.trace(), 2.0 * p - 1.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn p_one_returns_rho1() {
        let psi = PureState::uniform(3).unwrap();
        let rho1 = DensityMatrix::from_pure(&psi);
        let rho2 = DensityMatrix::maximally_mixed(3).unwrap();
        let a = discrimination_operator(&rho1, &rho2, 1.0).unwrap();
        assert_eq!(a.matrix(), rho1.matrix());
    }

    #[test]
    fn both_reliability_expressions_agree() {
        let psi = PureState::normalized(vec![complex(0.2, 0.5), complex(-0.4, 0.1), complex(0.7, 0.0)]).unwrap();
        let rho1 = DensityMatrix::from_pure(&psi);
        let rho2 = DensityMatrix::maximally_mixed(3).unwrap();
        for &p in &[0.1, 0.4, 0.6, 0.95] {
            let a = discrimination_operator(&rho1, &rho2, p).unwrap();
            let (r1, r2) = optimal_reliability_pair(&a, p);
            assert_abs_diff_eq!(r1, r2, epsilon = 1e-10);
            let opt = helstrom_optimal(&rho1, &rho2, p).unwrap();
            assert_abs_diff_eq!(opt.reliability, r1, epsilon = 1e-12);
            assert!(opt.reliability >= p.max(1.0 - p) - 1e-12);
        }
    }

    #[test]
    fn optimal_effect_is_the_maximizer_of_the_trace_functional() {
        let psi = PureState::normalized(vec![complex(1.0, 0.0), complex(0.5, 0.5), complex(0.0, -0.7)]).unwrap();
        let rho1 = DensityMatrix::from_pure(&psi);
        let rho2 = DensityMatrix::maximally_mixed(3).unwrap();
        let p = 0.42;
        let a = discrimination_operator(&rho1, &rho2, p).unwrap();
        let opt = helstrom_optimal(&rho1, &rho2, p).unwrap();
        let r_opt = discrimination_reliability(&a, &opt.effect, p).unwrap();
        assert_abs_diff_eq!(r_opt, opt.reliability, epsilon = 1e-12);
        for k in 0..=3 {
            let e = Effect::basis_projector(3, k).unwrap();
            let r = discrimination_reliability(&a, &e, p).unwrap();
            assert!(r <= opt.reliability + 1e-10);
        }
    }

    #[test]
    fn uniform_state_collapse_instance_hits_the_simple_bound() {
        for d in 2..=5usize {
            let rho = DensityMatrix::from_pure(&PureState::uniform(d).unwrap());
            for &p in &[0.1, 0.3, 0.5, 0.7, 0.9] {
                let opt = collapse_helstrom(&rho, p).unwrap();
                let expected = p.max(1.0 - p / d as f64);
                assert_abs_diff_eq!(opt.reliability, expected, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn blind_guessing_wins_for_heavy_collapse() {
        let psi = PureState::normalized(vec![complex(0.9, 0.1), complex(0.2, -0.3), complex(0.1, 0.2)]).unwrap();
        let rho = DensityMatrix::from_pure(&psi);
        let d = 3.0;
        let p = d / (d + 1.0) + 0.05;
        let opt = collapse_helstrom(&rho, p).unwrap();
        assert_abs_diff_eq!(opt.reliability, p, epsilon = 1e-10);
    }
}
