//! The collapse channel and its reliability functionals.
//!
//! The channel leaves ψ untouched with probability 1−p and otherwise replaces
//! it by the basis vector b_k (up to the phase of the overlap) with Born
//! weight p·|⟨b_k|ψ⟩|². An experiment is an effect E answered "yes" when we
//! retrodict that collapse happened; its reliability is the probability of a
//! correct retrodiction,
//!
//!   R = p·⟨ψ|diag E|ψ⟩ + (1−p)·⟨ψ|I−E|ψ⟩,
//!
//! and E beats blind guessing on ψ exactly when the quadratic form of the
//! indicator operator A_p(E) is positive there.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::operator::{quadratic_form_raw, Effect, HermitianOperator};
use crate::params::CollapseParams;
use crate::state::PureState;
use crate::DensityMatrix;
use crate::Result;

/// Which branch the channel took in one realization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Branch {
    Intact,
    Collapsed(usize),
}

/// One uniform draw decides the branch by inverse CDF over
/// [1−p, p|c_1|², …, p|c_d|²]; weight-zero branches are unreachable because
/// the running sum never moves past them.
pub(crate) fn draw_branch(psi: &PureState, params: CollapseParams, rng: &mut impl Rng) -> Branch {
    let p = params.p();
    let u: f64 = rng.random();
    if u < 1.0 - p {
        return Branch::Intact;
    }
    let mut acc = 1.0 - p;
    let weights = psi.born_weights();
    let mut last_positive = None;
    for (k, w) in weights.iter().enumerate() {
        if *w > 0.0 {
            acc += p * w;
            last_positive = Some(k);
            if u < acc {
                return Branch::Collapsed(k);
            }
        }
    }
    // u landed in the round-off sliver past the accumulated total
    match last_positive {
        Some(k) => Branch::Collapsed(k),
        None => Branch::Intact,
    }
}

pub(crate) fn branch_state(psi: &PureState, branch: Branch) -> PureState {
    match branch {
        Branch::Intact => psi.clone(),
        Branch::Collapsed(k) => {
            let d = psi.d();
            let ck = psi.amplitude(k);
            let phase = ck / Complex64::new(ck.norm(), 0.0);
            let mut amps = DVector::zeros(d);
            amps[k] = phase;
            PureState::from_normalized(amps)
        }
    }
}

/// Applies one realization of the collapse channel, deterministically in the
/// seed. Returns ψ itself with probability 1−p, otherwise the phase-adjusted
/// basis vector (⟨b_k|ψ⟩/|⟨b_k|ψ⟩|)·b_k with probability p·|⟨b_k|ψ⟩|².
pub fn simulate_collapse(psi: &PureState, params: CollapseParams, seed: u64) -> Result<PureState> {
    params.check_dim(psi.d())?;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    Ok(branch_state(psi, draw_branch(psi, params, &mut rng)))
}

/// Reliability of the experiment E on a pure state:
/// p·⟨ψ|diag E|ψ⟩ + (1−p)·⟨ψ|I−E|ψ⟩. Always in [0, 1].
pub fn reliability_pure(psi: &PureState, params: CollapseParams, effect: &Effect) -> Result<f64> {
    params.check_dim(psi.d())?;
    effect.operator().check_dim(psi.d())?;
    let p = params.p();
    let weights = psi.born_weights();
    let diag = effect.operator().diagonal();
    let yes_given_collapse: f64 = weights.iter().zip(&diag).map(|(w, e)| w * e).sum();
    let yes_given_intact = quadratic_form_raw(effect.matrix(), psi.amplitudes());
    Ok(p * yes_given_collapse + (1.0 - p) * (1.0 - yes_given_intact))
}

/// Reliability averaged over a distribution: tr[ρ(p·diag E + (1−p)(I−E))].
/// Coincides with `reliability_pure` when ρ = |ψ⟩⟨ψ|.
pub fn reliability_density(rho: &DensityMatrix, params: CollapseParams, effect: &Effect) -> Result<f64> {
    params.check_dim(rho.d())?;
    effect.operator().check_dim(rho.d())?;
    let p = params.p();
    let diag_term = effect.operator().diag_part().expectation(rho)?;
    let e_term = effect.operator().expectation(rho)?;
    Ok(p * diag_term + (1.0 - p) * (1.0 - e_term))
}

/// The indicator operator A_p(E), whose quadratic form is positive exactly on
/// the states where E beats blind guessing:
///
///   p ≤ 1/2:  A = p·diag E − (1−p)·E
///   p > 1/2:  A = (1−p)(I−E) − p·diag(I−E)
///
/// Its trace is −(1−2p)·tr E, respectively −(2p−1)·tr(I−E), never positive.
pub fn collapse_indicator_operator(effect: &Effect, params: CollapseParams) -> Result<HermitianOperator> {
    params.check_dim(effect.d())?;
    let p = params.p();
    let op = effect.operator();
    let a = if !params.collapse_favored() {
        op.diag_part().scaled(p).sub(&op.scaled(1.0 - p))?
    } else {
        let complement = HermitianOperator::identity(effect.d()).sub(op)?;
        complement.scaled(1.0 - p).sub(&complement.diag_part().scaled(p))?
    };
    Ok(a)
}

/// The coarse dimension-only ceiling max(p, 1 − p/d) on the Helstrom optimum
/// of any collapse instance; equals the blind-guess reliability p once
/// p ≥ d/(d+1).
pub fn helstrom_upper_bound(params: CollapseParams) -> f64 {
    let p = params.p();
    p.max(1.0 - p / params.d() as f64)
}
