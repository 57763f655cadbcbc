//! Seeded fixture builders shared by the benchmark targets.

use collapse_gauge::random::{random_density, random_effect};
use collapse_gauge::{CollapseParams, DensityMatrix, Effect};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

pub fn fixture_effect(d: usize, seed: u64) -> Effect {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    random_effect(d, &mut rng).expect("valid dimension")
}

pub fn fixture_density(d: usize, seed: u64) -> DensityMatrix {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    random_density(d, &mut rng).expect("valid dimension")
}

pub fn fixture_params(p: f64, d: usize) -> CollapseParams {
    CollapseParams::new(p, d).expect("valid parameters")
}
