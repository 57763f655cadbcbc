//! Detectability of wave-function collapse through yes-no experiments.
//!
//! A collapse channel leaves a pure state `ψ` untouched with probability `1 - p`
//! and otherwise projects it onto the fixed coordinate basis with Born weights.
//! This crate computes how well a two-outcome measurement (an effect `E`) can
//! tell the two hypotheses apart:
//!
//! * closed-form reliabilities and the Helstrom optimum ([`channel`], [`helstrom`]),
//! * the exact spherical measure `Λ_p(E)` of states on which an experiment beats
//!   blind guessing, with analytic bounds ([`lambda`]),
//! * eigenvalue envelopes for the indicator operator ([`majorization`]),
//! * Monte Carlo estimators that reproduce every closed form independently
//!   ([`montecarlo`]),
//! * a search over effects that probes how large `Λ_p(E)` can get ([`search`]).
//!
//! All operators act on C^d in the fixed collapse basis; dimensions up to a few
//! hundred are fine for the linear algebra, while the exact measure is documented
//! for d ≤ 64 where its alternating sum stays well conditioned.

pub mod channel;
pub mod error;
pub mod helstrom;
pub mod lambda;
pub mod majorization;
pub mod montecarlo;
pub mod operator;
pub mod params;
pub mod random;
pub mod search;
pub mod serialize;
pub mod spectrum;
pub mod state;
mod sum;
pub mod tolerance;

pub use error::Error;
pub use operator::{DensityMatrix, Effect, HermitianOperator};
pub use params::CollapseParams;
pub use spectrum::SignedSpectrum;
pub use state::PureState;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
