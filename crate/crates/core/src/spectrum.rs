//! Signed spectra: the α/β partition of a Hermitian spectrum.
//!
//! The exact sphere-measure formula consumes a Hermitian operator only through
//! its eigenvalues, split into the strictly positive part α₁ ≥ … ≥ α_k and the
//! non-positive part β₁ ≥ … ≥ β_m. Eigenvalues within `ZERO_TOL` of zero
//! (relative to the spectral norm) are snapped to exactly zero and grouped
//! with the βs, matching the convention that the positive part is strict.

use crate::error::Error;
use crate::operator::HermitianOperator;
use crate::tolerance::ZERO_TOL;
use crate::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct SignedSpectrum {
    alphas: Vec<f64>,
    betas: Vec<f64>,
}

impl SignedSpectrum {
    /// Builds from already-classified lists: `alphas` strictly positive and
    /// descending, `betas` non-positive and descending.
    pub fn new(alphas: Vec<f64>, betas: Vec<f64>) -> Result<Self> {
        if alphas.is_empty() && betas.is_empty() {
            return Err(Error::EmptySpectrum);
        }
        for (i, &a) in alphas.iter().enumerate() {
            if a <= 0.0 || !a.is_finite() {
                return Err(Error::SpectrumNotOrdered {
                    what: format!("alpha {i} = {a} is not strictly positive"),
                });
            }
            if i > 0 && alphas[i - 1] < a {
                return Err(Error::SpectrumNotOrdered {
                    what: format!("alphas not descending at index {i}"),
                });
            }
        }
        for (i, &b) in betas.iter().enumerate() {
            if b > 0.0 || !b.is_finite() {
                return Err(Error::SpectrumNotOrdered {
                    what: format!("beta {i} = {b} is not non-positive"),
                });
            }
            if i > 0 && betas[i - 1] < b {
                return Err(Error::SpectrumNotOrdered {
                    what: format!("betas not descending at index {i}"),
                });
            }
        }
        Ok(Self { alphas, betas })
    }

    /// Classifies raw eigenvalues, snapping |λ| ≤ ZERO_TOL × spectral norm
    /// to zero. Zeros land in the β part.
    pub fn from_eigenvalues(eigenvalues: &[f64]) -> Result<Self> {
        if eigenvalues.is_empty() {
            return Err(Error::EmptySpectrum);
        }
        let scale = eigenvalues.iter().fold(0.0f64, |acc, &v| acc.max(v.abs()));
        let snap = ZERO_TOL * scale;
        let mut alphas = Vec::new();
        let mut betas = Vec::new();
        for &ev in eigenvalues {
            if ev.abs() <= snap {
                betas.push(0.0);
            } else if ev > 0.0 {
                alphas.push(ev);
            } else {
                betas.push(ev);
            }
        }
        alphas.sort_by(|a, b| b.partial_cmp(a).unwrap());
        betas.sort_by(|a, b| b.partial_cmp(a).unwrap());
        Self::new(alphas, betas)
    }

    pub fn from_operator(op: &HermitianOperator) -> Result<Self> {
        Self::from_eigenvalues(&op.eigenvalues())
    }

    /// Number of strictly positive eigenvalues.
    #[inline]
    pub fn k(&self) -> usize {
        self.alphas.len()
    }

    /// Number of non-positive eigenvalues (zeros included).
    #[inline]
    pub fn m(&self) -> usize {
        self.betas.len()
    }

    #[inline]
    pub fn d(&self) -> usize {
        self.k() + self.m()
    }

    #[inline]
    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    #[inline]
    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    pub fn trace(&self) -> f64 {
        self.alphas.iter().sum::<f64>() + self.betas.iter().sum::<f64>()
    }

    /// Largest eigenvalue magnitude.
    pub fn max_abs(&self) -> f64 {
        let top = self.alphas.first().copied().unwrap_or(0.0);
        let bottom = self.betas.last().map(|b| b.abs()).unwrap_or(0.0);
        top.max(bottom)
    }

    /// The spectrum of the negated operator. Strictly negative βs become the
    /// new αs; zeros stay on the β side.
    pub fn negated(&self) -> SignedSpectrum {
        let mut alphas: Vec<f64> = self.betas.iter().filter(|&&b| b < 0.0).map(|&b| -b).collect();
        let mut betas: Vec<f64> = self.alphas.iter().map(|&a| -a).collect();
        betas.extend(self.betas.iter().filter(|&&b| b == 0.0));
        alphas.sort_by(|a, b| b.partial_cmp(a).unwrap());
        betas.sort_by(|a, b| b.partial_cmp(a).unwrap());
        SignedSpectrum { alphas, betas }
    }

    /// Multiplies every eigenvalue by c > 0.
    pub fn scaled(&self, c: f64) -> Result<SignedSpectrum> {
        if c <= 0.0 || !c.is_finite() {
            return Err(Error::InvalidRate(c));
        }
        Ok(SignedSpectrum {
            alphas: self.alphas.iter().map(|a| a * c).collect(),
            betas: self.betas.iter().map(|b| b * c).collect(),
        })
    }
}
