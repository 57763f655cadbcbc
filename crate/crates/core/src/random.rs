//! Random problem instances: Haar unitaries, effects, densities, states.
//!
//! The Haar unitary comes from the QR decomposition of a complex Ginibre
//! matrix with the phases of R's diagonal divided out, which makes the
//! distribution exactly invariant rather than merely approximately so.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::operator::{CMatrix, DensityMatrix, Effect, HermitianOperator};
use crate::state::PureState;
use crate::Result;

fn ginibre(d: usize, rng: &mut impl Rng) -> CMatrix {
    CMatrix::from_fn(d, d, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im)
    })
}

/// A Haar-distributed d×d unitary.
pub fn haar_unitary(d: usize, rng: &mut impl Rng) -> CMatrix {
    let g = ginibre(d, rng);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    // fix the gauge: divide each column by the phase of the matching R_ii
    for j in 0..d {
        let rjj = r[(j, j)];
        let mag = rjj.norm();
        if mag > 0.0 {
            let phase = rjj / Complex64::new(mag, 0.0);
            for i in 0..d {
                q[(i, j)] *= phase.conj();
            }
        }
    }
    q
}

/// A random effect U·diag(u)·U† with u uniform in [0,1]^d and U Haar.
pub fn random_effect(d: usize, rng: &mut impl Rng) -> Result<Effect> {
    let u = haar_unitary(d, rng);
    let evs: Vec<f64> = (0..d).map(|_| rng.random::<f64>()).collect();
    let mut m = CMatrix::zeros(d, d);
    for (k, &ev) in evs.iter().enumerate() {
        let col = u.column(k);
        for i in 0..d {
            for j in 0..d {
                m[(i, j)] += col[i] * col[j].conj() * Complex64::new(ev, 0.0);
            }
        }
    }
    Effect::new(HermitianOperator::unchecked(m))
}

/// A random projector of the given rank, conjugated by a Haar unitary.
pub fn random_rank_k_projector(d: usize, k: usize, rng: &mut impl Rng) -> Result<Effect> {
    let u = haar_unitary(d, rng);
    let mut m = CMatrix::zeros(d, d);
    for col_idx in 0..k.min(d) {
        let col = u.column(col_idx);
        for i in 0..d {
            for j in 0..d {
                m[(i, j)] += col[i] * col[j].conj();
            }
        }
    }
    Effect::new(HermitianOperator::unchecked(m))
}

/// A random density matrix G·G†/tr(G·G†) with G Ginibre; full rank almost
/// surely.
pub fn random_density(d: usize, rng: &mut impl Rng) -> Result<DensityMatrix> {
    let g = ginibre(d, rng);
    let gram = &g * g.adjoint();
    let trace: f64 = (0..d).map(|i| gram[(i, i)].re).sum();
    DensityMatrix::new(HermitianOperator::unchecked(gram / Complex64::new(trace, 0.0)))
}

/// A random Hermitian matrix (G + G†)/2 with Ginibre G; entries O(1).
pub fn random_hermitian(d: usize, rng: &mut impl Rng) -> HermitianOperator {
    let g = ginibre(d, rng);
    let sym = (&g + g.adjoint()) * Complex64::new(0.5, 0.0);
    HermitianOperator::unchecked(sym)
}

/// A uniformly distributed pure state: complex-Gaussian vector, normalized.
/// Components have real and imaginary parts of variance 1/2 so the squared
/// overlaps with any fixed basis are exponential before normalization.
pub fn random_pure_state(d: usize, rng: &mut impl Rng) -> PureState {
    loop {
        let amps = DVector::from_fn(d, |_, _| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im) * Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0)
        });
        let norm = amps.norm();
        if norm > 0.0 {
            return PureState::from_normalized(amps / Complex64::new(norm, 0.0));
        }
    }
}
