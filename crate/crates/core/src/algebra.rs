//! The C*-algebra `M_k(C)` of square complex matrices.
//!
//! Adjoint is the conjugate transpose, the norm is the largest singular value,
//! positivity is positive semidefiniteness, and the positive linear functional
//! used by the functional Schwarz forms is the trace.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::interchange::MatrixRecord;

const SOLVER_MAX_ITER: usize = 10_000;

/// Combined absolute and relative tolerance. A quantity `q` compared at
/// scale `s` passes when `|q| <= atol + rtol * s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub rtol: f64,
    pub atol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            rtol: 1e-9,
            atol: 1e-12,
        }
    }
}

impl Tolerance {
    pub fn new(rtol: f64, atol: f64) -> Result<Self> {
        if !(rtol >= 0.0 && rtol.is_finite()) || !(atol >= 0.0 && atol.is_finite()) {
            return Err(domain(format!(
                "tolerances must be finite and nonnegative (rtol = {rtol}, atol = {atol})"
            )));
        }
        Ok(Tolerance { rtol, atol })
    }

    /// Allowed deviation at the given scale.
    pub fn threshold(&self, scale: f64) -> f64 {
        self.atol + self.rtol * scale
    }
}

/// A `k x k` complex matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRecord", into = "MatrixRecord")]
pub struct AlgebraElement(DMatrix<Complex64>);

impl TryFrom<MatrixRecord> for AlgebraElement {
    type Error = Error;

    fn try_from(rec: MatrixRecord) -> Result<Self> {
        AlgebraElement::from_matrix(rec.to_matrix()?)
    }
}

impl From<AlgebraElement> for MatrixRecord {
    fn from(a: AlgebraElement) -> Self {
        MatrixRecord::from_matrix(&a.0)
    }
}

impl AlgebraElement {
    pub fn from_matrix(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(domain(format!(
                "algebra elements are nonempty square matrices, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        Ok(AlgebraElement(m))
    }

    /// Row-major entries of a `k x k` matrix.
    pub fn from_rows(k: usize, entries: &[Complex64]) -> Result<Self> {
        if entries.len() != k * k {
            return Err(domain(format!(
                "{} entries do not fill a {k}x{k} matrix",
                entries.len()
            )));
        }
        Self::from_matrix(DMatrix::from_row_slice(k, k, entries))
    }

    pub fn from_real_rows(k: usize, entries: &[f64]) -> Result<Self> {
        let z: Vec<Complex64> = entries.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_rows(k, &z)
    }

    pub fn identity(k: usize) -> Self {
        AlgebraElement(DMatrix::identity(k, k))
    }

    pub fn zeros(k: usize) -> Self {
        AlgebraElement(DMatrix::zeros(k, k))
    }

    pub fn diagonal(diag: &[Complex64]) -> Self {
        AlgebraElement(DMatrix::from_diagonal(&DVector::from_column_slice(diag)))
    }

    pub fn real_diagonal(diag: &[f64]) -> Self {
        let z: Vec<Complex64> = diag.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::diagonal(&z)
    }

    pub(crate) fn wrap(m: DMatrix<Complex64>) -> Self {
        debug_assert!(m.is_square());
        AlgebraElement(m)
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.0
    }

    pub fn scale(&self, c: Complex64) -> Self {
        AlgebraElement(&self.0 * c)
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.scale(Complex64::new(c, 0.0))
    }

    pub fn adjoint(&self) -> Self {
        AlgebraElement(self.0.adjoint())
    }

    /// `(a + a*) / 2`, the real part of an algebra element.
    pub fn hermitian_part(&self) -> Self {
        AlgebraElement(hermitize(&self.0))
    }

    /// Absolute value `|a| = (a* a)^{1/2}`.
    pub fn abs(&self) -> Result<Self> {
        abs_matrix(&self.0).map(AlgebraElement)
    }

    /// Positive square root of a Hermitian PSD element. Eigenvalues in
    /// `[-tol(scale), 0)` are treated as round-off and clamped to zero.
    pub fn sqrt_psd(&self, tol: Tolerance) -> Result<Self> {
        let scale = self.operator_norm();
        let skew = spectral_norm(&(&self.0 - self.0.adjoint()));
        if skew > tol.threshold(scale) {
            return Err(domain(format!(
                "square root needs a Hermitian element; |a - a*| = {skew:e}"
            )));
        }
        let h = hermitize(&self.0);
        let eig = hermitian_eigen(&h)?;
        let lambda_min = eig.eigenvalues.min();
        if lambda_min < -tol.threshold(scale) {
            return Err(domain(format!(
                "square root needs a PSD element; smallest eigenvalue {lambda_min:e}"
            )));
        }
        Ok(AlgebraElement(sqrt_from_eigen(eig)))
    }

    /// Largest singular value.
    pub fn operator_norm(&self) -> f64 {
        spectral_norm(&self.0)
    }

    /// Largest eigenvalue modulus.
    pub fn spectral_radius(&self) -> Result<f64> {
        let schur = self
            .0
            .clone()
            .try_schur(f64::EPSILON, SOLVER_MAX_ITER)
            .ok_or_else(|| Error::NumericalFailure("Schur decomposition did not converge".into()))?;
        let eigenvalues = schur.eigenvalues().ok_or_else(|| {
            Error::NumericalFailure("Schur form is not triangular".into())
        })?;
        Ok(eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max))
    }

    pub fn is_idempotent(&self, tol: Tolerance) -> bool {
        let defect = spectral_norm(&(&self.0 * &self.0 - &self.0));
        defect <= tol.threshold(self.operator_norm())
    }

    /// The trace, used as the canonical positive linear functional.
    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(hermitian_eigen(&hermitize(&self.0))?.eigenvalues.min())
    }

    /// Largest eigenvalue of the Hermitian part.
    pub fn max_eigenvalue(&self) -> Result<f64> {
        Ok(hermitian_eigen(&hermitize(&self.0))?.eigenvalues.max())
    }

    pub fn is_hermitian(&self, tol: Tolerance) -> bool {
        let skew = spectral_norm(&(&self.0 - self.0.adjoint()));
        skew <= tol.threshold(self.operator_norm())
    }

    /// PSD test with the same scale-aware slack as [`loewner_leq`].
    pub fn is_psd(&self, tol: Tolerance) -> Result<bool> {
        loewner_leq(&AlgebraElement::zeros(self.dim()), self, tol)
    }
}

/// `a <= b` in the Loewner order: `b - a` is PSD up to
/// `atol + rtol * |b - a|`. Both sides are Hermitized before the eigensolve.
pub fn loewner_leq(a: &AlgebraElement, b: &AlgebraElement, tol: Tolerance) -> Result<bool> {
    let slack = loewner_slack(a, b)?;
    let gap = AlgebraElement(&b.0 - &a.0);
    Ok(slack >= -tol.threshold(gap.operator_norm()))
}

/// `lambda_min((b - a + (b - a)*) / 2)`; nonnegative exactly when `a <= b`.
pub fn loewner_slack(a: &AlgebraElement, b: &AlgebraElement) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(domain(format!(
            "Loewner comparison of {0}x{0} with {1}x{1}",
            a.dim(),
            b.dim()
        )));
    }
    AlgebraElement(&b.0 - &a.0).min_eigenvalue()
}

pub(crate) fn spectral_norm(m: &DMatrix<Complex64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    // sqrt of the top Gram eigenvalue; avoids the complex SVD iteration
    let gram = if m.nrows() < m.ncols() { m * m.adjoint() } else { m.adjoint() * m };
    hermitize(&gram).symmetric_eigenvalues().max().max(0.0).sqrt()
}

pub(crate) fn hermitize(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    (m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

fn hermitian_eigen(h: &DMatrix<Complex64>) -> Result<SymmetricEigen<Complex64, nalgebra::Dyn>> {
    SymmetricEigen::try_new(h.clone(), f64::EPSILON, SOLVER_MAX_ITER)
        .ok_or_else(|| Error::NumericalFailure("Hermitian eigensolver did not converge".into()))
}

fn sqrt_from_eigen(eig: SymmetricEigen<Complex64, nalgebra::Dyn>) -> DMatrix<Complex64> {
    let roots = eig
        .eigenvalues
        .map(|l| Complex64::new(l.max(0.0).sqrt(), 0.0));
    let v = &eig.eigenvectors;
    let s = v * DMatrix::from_diagonal(&roots) * v.adjoint();
    hermitize(&s)
}

/// `(m* m)^{1/2}` as `V S V*` with `V` the eigenvectors of `m* m` and
/// `S_j = |m v_j|`. The singular values then carry round-off linearly instead
/// of through a square root of tiny eigenvalues.
pub(crate) fn abs_matrix(m: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    let eig = hermitian_eigen(&hermitize(&(m.adjoint() * m)))?;
    let v = eig.eigenvectors;
    let mv = m * &v;
    let sigma = DVector::from_iterator(
        v.ncols(),
        mv.column_iter().map(|c| Complex64::new(c.norm(), 0.0)),
    );
    Ok(hermitize(&(&v * DMatrix::from_diagonal(&sigma) * v.adjoint())))
}

impl Add for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        AlgebraElement(&self.0 + &rhs.0)
    }
}

impl Sub for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        AlgebraElement(&self.0 - &rhs.0)
    }
}

impl Mul for &AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: &AlgebraElement) -> AlgebraElement {
        AlgebraElement(&self.0 * &rhs.0)
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        AlgebraElement(-&self.0)
    }
}
