//! Error type shared by construction, evaluation, and serialization paths.

use thiserror::Error;

/// Everything that can go wrong while building operators or evaluating
/// measures. Validation failures carry enough context to name the offending
/// entry in a CLI message.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension must be at least 1, got {0}")]
    InvalidDimension(usize),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix is not Hermitian: max |M - M^H| entry is {deviation:.3e} at ({row}, {col})")]
    NotHermitian { row: usize, col: usize, deviation: f64 },

    #[error("effect eigenvalue {index} is {value:.12} which lies outside [0, 1] beyond tolerance")]
    EffectEigenvalueOutOfRange { index: usize, value: f64 },

    #[error("density eigenvalue {index} is {value:.3e}, negative beyond tolerance")]
    DensityNotPositive { index: usize, value: f64 },

    #[error("density trace is {trace:.12}, not 1 within tolerance")]
    DensityTraceNotOne { trace: f64 },

    #[error("state norm is {norm:.12}, not 1 within tolerance")]
    StateNotNormalized { norm: f64 },

    #[error("collapse probability must lie in [0, 1], got {0}")]
    InvalidProbability(f64),

    #[error("spectrum has no entries")]
    EmptySpectrum,

    #[error("signed spectrum is not ordered: {what}")]
    SpectrumNotOrdered { what: String },

    #[error("positive eigenvalues {first} and {second} are degenerate beyond what perturbation handles")]
    DegenerateAlphas { first: usize, second: usize },

    #[error("negative rates must be distinct for this route: entries {first} and {second} coincide")]
    DegenerateBetas { first: usize, second: usize },

    #[error("independent evaluation routes disagree: {left:.15e} vs {right:.15e}")]
    RouteMismatch { left: f64, right: f64 },

    #[error("exact measure fell outside [0, 1] by {excess:.3e}; alternating sum lost too much precision")]
    MeasureOutOfRange { excess: f64 },

    #[error("Monte Carlo sample count must be positive")]
    EmptySample,

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("unknown search strategy `{0}`")]
    UnknownStrategy(String),

    #[error("search budget must be positive")]
    EmptyBudget,

    #[error("unknown named effect `{0}` (expected zero, identity, uniform-projector, or rank-k:K)")]
    UnknownEffect(String),

    #[error("rates must be positive and finite, got {0}")]
    InvalidRate(f64),

    #[error("rates {first} and {second} coincide within tolerance; perturb them before calling")]
    CoincidentRates { first: usize, second: usize },

    #[error("serialization problem: {0}")]
    Serialization(String),
}
