//! Pure states on the unit sphere of C^d.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::Error;
use crate::tolerance::NORM_TOL;
use crate::Result;

/// A unit vector of probability amplitudes in the fixed collapse basis.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amps: DVector<Complex64>,
}

impl PureState {
    /// Accepts a vector already normalized to within `NORM_TOL`.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() < 2 {
            return Err(Error::InvalidDimension(amplitudes.len()));
        }
        let amps = DVector::from_vec(amplitudes);
        let norm = amps.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::StateNotNormalized { norm });
        }
        Ok(Self { amps })
    }

    /// Normalizes an arbitrary nonzero vector onto the sphere.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() < 2 {
            return Err(Error::InvalidDimension(amplitudes.len()));
        }
        let mut amps = DVector::from_vec(amplitudes);
        let norm = amps.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::StateNotNormalized { norm });
        }
        amps /= Complex64::new(norm, 0.0);
        Ok(Self { amps })
    }

    /// The k-th coordinate basis vector b_k.
    pub fn basis_state(d: usize, k: usize) -> Result<Self> {
        if d < 2 || k >= d {
            return Err(Error::InvalidDimension(d));
        }
        let mut amps = DVector::zeros(d);
        amps[k] = Complex64::new(1.0, 0.0);
        Ok(Self { amps })
    }

    /// The uniform superposition φ with φ_k = 1/√d.
    pub fn uniform(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimension(d));
        }
        let a = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
        Ok(Self { amps: DVector::from_element(d, a) })
    }

    pub(crate) fn from_normalized(amps: DVector<Complex64>) -> Self {
        debug_assert!((amps.norm() - 1.0).abs() < 1e-9);
        Self { amps }
    }

    #[inline]
    pub fn d(&self) -> usize {
        self.amps.len()
    }

    #[inline]
    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amps
    }

    #[inline]
    pub fn amplitude(&self, k: usize) -> Complex64 {
        self.amps[k]
    }

    /// Born weights |⟨b_k|ψ⟩|².
    pub fn born_weights(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// ⟨self|other⟩.
    pub fn overlap(&self, other: &PureState) -> Result<Complex64> {
        if self.d() != other.d() {
            return Err(Error::DimensionMismatch { left: self.d(), right: other.d() });
        }
        Ok(self.amps.dotc(&other.amps))
    }
}
