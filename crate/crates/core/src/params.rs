//! Collapse channel parameters.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::Result;

/// Parameters of the collapse channel: the collapse probability `p` and the
/// Hilbert space dimension `d`.
///
/// With probability `p` the channel projects the state onto the fixed
/// coordinate basis with Born weights; with probability `1 - p` it leaves the
/// state untouched. Validated so that `0 <= p <= 1` and `d >= 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CollapseParams {
    p: f64,
    d: usize,
}

impl CollapseParams {
    pub fn new(p: f64, d: usize) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidProbability(p));
        }
        if d < 2 {
            return Err(Error::InvalidDimension(d));
        }
        Ok(Self { p, d })
    }

    #[inline]
    pub fn p(&self) -> f64 {
        self.p
    }

    #[inline]
    pub fn d(&self) -> usize {
        self.d
    }

    /// Reliability of guessing the more likely hypothesis without measuring:
    /// `max(p, 1 - p)`. At `p = 1/2` the convention is to answer "no".
    #[inline]
    pub fn blind_reliability(&self) -> f64 {
        self.p.max(1.0 - self.p)
    }

    /// True when collapse is the more likely hypothesis (`p > 1/2`), which
    /// flips the blind guess and the indicator operator construction.
    #[inline]
    pub fn collapse_favored(&self) -> bool {
        self.p > 0.5
    }

    pub(crate) fn check_dim(&self, other: usize) -> Result<()> {
        if self.d != other {
            return Err(Error::DimensionMismatch { left: self.d, right: other });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_unit_interval_rejects_rest() {
        assert!(CollapseParams::new(0.0, 2).is_ok());
        assert!(CollapseParams::new(1.0, 2).is_ok());
        assert!(CollapseParams::new(0.5, 17).is_ok());
        assert!(CollapseParams::new(-0.01, 2).is_err());
        assert!(CollapseParams::new(1.01, 2).is_err());
        assert!(CollapseParams::new(f64::NAN, 2).is_err());
        assert!(CollapseParams::new(0.5, 1).is_err());
        assert!(CollapseParams::new(0.5, 0).is_err());
    }

    #[test]
    fn blind_reliability_is_majority_guess() {
        assert_eq!(CollapseParams::new(0.3, 2).unwrap().blind_reliability(), 0.7);
        assert_eq!(CollapseParams::new(0.8, 2).unwrap().blind_reliability(), 0.8);
        assert_eq!(CollapseParams::new(0.5, 2).unwrap().blind_reliability(), 0.5);
    }
}
