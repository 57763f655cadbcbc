//! Numerical tolerances used across the crate.
//!
//! Every tolerance is named once here so tests and the verify harness agree
//! with the library about what "equal" means.

/// State vectors must be normalized to within this before acceptance.
pub const NORM_TOL: f64 = 1e-12;

/// Hermiticity check: max |M - M^H| entry allowed before construction fails.
pub const HERM_TOL: f64 = 1e-12;

/// Effect and density eigenvalues may stray this far outside their exact range
/// ([0,1], or [0,∞)) before construction fails; inside the window they are
/// clamped. Covers round-off from upstream eigendecompositions.
pub const VAL_TOL: f64 = 1e-10;

/// Density matrices must have unit trace to within this.
pub const TRACE_TOL: f64 = 1e-10;

/// Eigenvalues within `ZERO_TOL` times the spectral norm are snapped to zero
/// when a signed spectrum is extracted; zeros are grouped with the
/// non-positive part.
pub const ZERO_TOL: f64 = 1e-10;

/// Two positive eigenvalues closer than `GAP_TOL` relative to the spectral
/// norm count as degenerate for the exact measure formula, which divides by
/// their differences.
pub const GAP_TOL: f64 = 1e-7;

/// Relative size of the order-preserving perturbation applied to coalesced
/// positive eigenvalues before evaluating the exact measure.
pub const PERTURB_REL: f64 = 1e-6;

/// The exact measure may land this far outside [0,1] from cancellation before
/// it is reported as a numerical failure rather than clamped.
pub const MEASURE_CLAMP_TOL: f64 = 1e-8;
