//! Hermitian operators, effects, and density matrices on C^d.
//!
//! Everything downstream (reliabilities, the indicator operator, Helstrom
//! discrimination, the exact measure) is built from these three types. All
//! constructors symmetrize their input, `(M + M^H)/2`, before validating, so
//! file-format round-off never leaks past this module; an input that is
//! already exactly Hermitian is stored bit-for-bit unchanged.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::Error;
use crate::state::PureState;
use crate::tolerance::{HERM_TOL, TRACE_TOL, VAL_TOL};
use crate::Result;

pub(crate) type CMatrix = DMatrix<Complex64>;

/// A d×d Hermitian matrix in the fixed collapse basis.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    mat: CMatrix,
}

impl HermitianOperator {
    /// Validates squareness and Hermiticity within `HERM_TOL`, then stores the
    /// symmetrized matrix.
    pub fn new(mat: CMatrix) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::DimensionMismatch { left: mat.nrows(), right: mat.ncols() });
        }
        if mat.nrows() == 0 {
            return Err(Error::InvalidDimension(0));
        }
        let d = mat.nrows();
        let mut worst = (0usize, 0usize, 0.0f64);
        for i in 0..d {
            for j in i..d {
                let dev = (mat[(i, j)] - mat[(j, i)].conj()).norm();
                if dev > worst.2 {
                    worst = (i, j, dev);
                }
            }
        }
        if worst.2 > HERM_TOL {
            return Err(Error::NotHermitian { row: worst.0, col: worst.1, deviation: worst.2 });
        }
        Ok(Self::symmetrized(mat))
    }

    /// Builds without the Hermiticity check; for matrices that are Hermitian
    /// by construction (real linear combinations of Hermitian terms).
    pub(crate) fn unchecked(mat: CMatrix) -> Self {
        debug_assert!(mat.is_square());
        debug_assert!({
            let m = &mat;
            (0..m.nrows()).all(|i| (i..m.ncols()).all(|j| (m[(i, j)] - m[(j, i)].conj()).norm() <= 1e-9))
        });
        Self::symmetrized(mat)
    }

    fn symmetrized(mat: CMatrix) -> Self {
        let half = Complex64::new(0.5, 0.0);
        let sym = (&mat + mat.adjoint()) * half;
        Self { mat: sym }
    }

    pub fn zeros(d: usize) -> Self {
        Self { mat: CMatrix::zeros(d, d) }
    }

    pub fn identity(d: usize) -> Self {
        Self { mat: CMatrix::identity(d, d) }
    }

    #[inline]
    pub fn d(&self) -> usize {
        self.mat.nrows()
    }

    #[inline]
    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    /// Trace; real because the matrix is Hermitian.
    pub fn trace(&self) -> f64 {
        (0..self.d()).map(|i| self.mat[(i, i)].re).sum()
    }

    /// Real diagonal entries.
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.d()).map(|i| self.mat[(i, i)].re).collect()
    }

    /// The matrix with this operator's diagonal and zeros elsewhere.
    /// Idempotent and trace-preserving.
    pub fn diag_part(&self) -> HermitianOperator {
        let d = self.d();
        let mut out = CMatrix::zeros(d, d);
        for i in 0..d {
            out[(i, i)] = Complex64::new(self.mat[(i, i)].re, 0.0);
        }
        Self { mat: out }
    }

    /// ⟨ψ|M|ψ⟩, real for Hermitian M.
    pub fn quadratic_form(&self, psi: &PureState) -> Result<f64> {
        self.check_dim(psi.d())?;
        Ok(quadratic_form_raw(&self.mat, psi.amplitudes()))
    }

    /// tr(ρ M), real for Hermitian arguments.
    pub fn expectation(&self, rho: &DensityMatrix) -> Result<f64> {
        self.check_dim(rho.d())?;
        let d = self.d();
        let mut acc = 0.0;
        for i in 0..d {
            for j in 0..d {
                acc += (rho.matrix()[(i, j)] * self.mat[(j, i)]).re;
            }
        }
        Ok(acc)
    }

    /// Eigenvalues sorted descending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut evs: Vec<f64> = self.mat.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
        evs.sort_by(|a, b| b.partial_cmp(a).unwrap());
        evs
    }

    /// Full eigendecomposition, eigenvalues descending with matching
    /// eigenvector columns.
    pub fn eigen_pairs(&self) -> (Vec<f64>, CMatrix) {
        let se = self.mat.clone().symmetric_eigen();
        let mut order: Vec<usize> = (0..self.d()).collect();
        order.sort_by(|&a, &b| se.eigenvalues[b].partial_cmp(&se.eigenvalues[a]).unwrap());
        let evs: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
        let mut vecs = CMatrix::zeros(self.d(), self.d());
        for (col, &i) in order.iter().enumerate() {
            vecs.set_column(col, &se.eigenvectors.column(i));
        }
        (evs, vecs)
    }

    /// Largest absolute eigenvalue, estimated cheaply from the Frobenius norm
    /// when only a scale is needed would be too loose; this does a full solve.
    pub fn spectral_norm(&self) -> f64 {
        self.eigenvalues().iter().fold(0.0, |acc, &v| acc.max(v.abs()))
    }

    pub fn scaled(&self, c: f64) -> HermitianOperator {
        Self { mat: &self.mat * Complex64::new(c, 0.0) }
    }

    pub fn add(&self, other: &HermitianOperator) -> Result<HermitianOperator> {
        self.check_dim(other.d())?;
        Ok(Self { mat: &self.mat + &other.mat })
    }

    pub fn sub(&self, other: &HermitianOperator) -> Result<HermitianOperator> {
        self.check_dim(other.d())?;
        Ok(Self { mat: &self.mat - &other.mat })
    }

    pub(crate) fn check_dim(&self, other: usize) -> Result<()> {
        if self.d() != other {
            return Err(Error::DimensionMismatch { left: self.d(), right: other });
        }
        Ok(())
    }
}

pub(crate) fn quadratic_form_raw(mat: &CMatrix, amps: &nalgebra::DVector<Complex64>) -> f64 {
    let d = mat.nrows();
    let mut acc = 0.0;
    for i in 0..d {
        // diagonal term is real; off-diagonal pairs (i,j),(j,i) are conjugates,
        // so twice the real part of the upper triangle suffices
        acc += mat[(i, i)].re * amps[i].norm_sqr();
        for j in (i + 1)..d {
            acc += 2.0 * (amps[i].conj() * mat[(i, j)] * amps[j]).re;
        }
    }
    acc
}

/// A yes-outcome operator: Hermitian with spectrum in [0, 1].
///
/// Eigenvalues are computed once at construction; values within `VAL_TOL`
/// outside [0, 1] are clamped, anything further out is rejected with the
/// offending eigenvalue named.
#[derive(Debug, Clone, PartialEq)]
pub struct Effect {
    op: HermitianOperator,
    eigenvalues: Vec<f64>,
}

impl Effect {
    pub fn new(op: HermitianOperator) -> Result<Self> {
        let mut eigenvalues = op.eigenvalues();
        for (index, ev) in eigenvalues.iter_mut().enumerate() {
            if *ev < -VAL_TOL || *ev > 1.0 + VAL_TOL {
                return Err(Error::EffectEigenvalueOutOfRange { index, value: *ev });
            }
            *ev = ev.clamp(0.0, 1.0);
        }
        Ok(Self { op, eigenvalues })
    }

    pub fn from_matrix(mat: CMatrix) -> Result<Self> {
        Self::new(HermitianOperator::new(mat)?)
    }

    /// The always-"no" experiment.
    pub fn zero(d: usize) -> Self {
        Self { op: HermitianOperator::zeros(d), eigenvalues: vec![0.0; d] }
    }

    /// The always-"yes" experiment.
    pub fn identity(d: usize) -> Self {
        Self { op: HermitianOperator::identity(d), eigenvalues: vec![1.0; d] }
    }

    /// Projector onto the first `k` coordinate basis vectors.
    pub fn basis_projector(d: usize, k: usize) -> Result<Self> {
        if d == 0 || k > d {
            return Err(Error::InvalidDimension(d));
        }
        let mut mat = CMatrix::zeros(d, d);
        for i in 0..k {
            mat[(i, i)] = Complex64::new(1.0, 0.0);
        }
        let mut eigenvalues = vec![1.0; k];
        eigenvalues.extend(std::iter::repeat(0.0).take(d - k));
        Ok(Self { op: HermitianOperator { mat }, eigenvalues })
    }

    /// Rank-one projector |v⟩⟨v| onto a unit vector.
    pub fn rank_one(v: &PureState) -> Self {
        let d = v.d();
        let amps = v.amplitudes();
        let mut mat = CMatrix::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                mat[(i, j)] = amps[i] * amps[j].conj();
            }
        }
        let op = HermitianOperator::unchecked(mat);
        let mut eigenvalues = vec![0.0; d];
        eigenvalues[0] = 1.0;
        Self { op, eigenvalues }
    }

    #[inline]
    pub fn d(&self) -> usize {
        self.op.d()
    }

    #[inline]
    pub fn operator(&self) -> &HermitianOperator {
        &self.op
    }

    #[inline]
    pub fn matrix(&self) -> &CMatrix {
        self.op.matrix()
    }

    /// Spectrum clamped to [0, 1], sorted descending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn trace(&self) -> f64 {
        self.op.trace()
    }

    /// I − E, the complementary "no" effect.
    pub fn complement(&self) -> Effect {
        let op = HermitianOperator::identity(self.d()).sub(&self.op).expect("same dimension");
        let mut eigenvalues: Vec<f64> = self.eigenvalues.iter().map(|ev| 1.0 - ev).collect();
        eigenvalues.reverse();
        Effect { op, eigenvalues }
    }
}

/// A state distribution: Hermitian, positive semidefinite, unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    op: HermitianOperator,
    eigenvalues: Vec<f64>,
}

impl DensityMatrix {
    pub fn new(op: HermitianOperator) -> Result<Self> {
        let trace = op.trace();
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::DensityTraceNotOne { trace });
        }
        let mut eigenvalues = op.eigenvalues();
        for (index, ev) in eigenvalues.iter_mut().enumerate() {
            if *ev < -VAL_TOL {
                return Err(Error::DensityNotPositive { index, value: *ev });
            }
            *ev = ev.max(0.0);
        }
        Ok(Self { op, eigenvalues })
    }

    pub fn from_matrix(mat: CMatrix) -> Result<Self> {
        Self::new(HermitianOperator::new(mat)?)
    }

    /// I/d, the uniform distribution over the sphere.
    pub fn maximally_mixed(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidDimension(0));
        }
        let op = HermitianOperator::identity(d).scaled(1.0 / d as f64);
        Ok(Self { op, eigenvalues: vec![1.0 / d as f64; d] })
    }

    /// |ψ⟩⟨ψ| for a pure state.
    pub fn from_pure(psi: &PureState) -> Self {
        let d = psi.d();
        let amps = psi.amplitudes();
        let mut mat = CMatrix::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                mat[(i, j)] = amps[i] * amps[j].conj();
            }
        }
        let op = HermitianOperator::unchecked(mat);
        let mut eigenvalues = vec![0.0; d];
        eigenvalues[0] = 1.0;
        Self { op, eigenvalues }
    }

    /// diag ρ: the collapsed (decohered) distribution. Shares the trace and
    /// stays positive, so no revalidation is needed.
    pub fn diagonal_part(&self) -> DensityMatrix {
        let op = self.op.diag_part();
        let mut eigenvalues = op.diagonal();
        eigenvalues.sort_by(|a, b| b.partial_cmp(a).unwrap());
        for ev in eigenvalues.iter_mut() {
            *ev = ev.max(0.0);
        }
        DensityMatrix { op, eigenvalues }
    }

    #[inline]
    pub fn d(&self) -> usize {
        self.op.d()
    }

    #[inline]
    pub fn operator(&self) -> &HermitianOperator {
        &self.op
    }

    #[inline]
    pub fn matrix(&self) -> &CMatrix {
        self.op.matrix()
    }

    /// Spectrum clamped to [0, ∞), sorted descending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }
}
