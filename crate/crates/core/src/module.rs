//! The Hilbert module of `m x k` complex matrices over `M_k` with
//! `<x, y> = x* y`, and the two Grüss functionals built on it.

use std::ops::{Add, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{spectral_norm, AlgebraElement, Tolerance};
use crate::error::{domain, Error, Result};
use crate::interchange::MatrixRecord;

/// Sum-to-one tolerance applied when validating probability vectors.
pub const PROBABILITY_SUM_TOL: f64 = 1e-12;

/// An `m x k` complex matrix, an element of the right `M_k`-module.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRecord", into = "MatrixRecord")]
pub struct ModuleElement(DMatrix<Complex64>);

impl TryFrom<MatrixRecord> for ModuleElement {
    type Error = Error;

    fn try_from(rec: MatrixRecord) -> Result<Self> {
        Ok(ModuleElement(rec.to_matrix()?))
    }
}

impl From<ModuleElement> for MatrixRecord {
    fn from(x: ModuleElement) -> Self {
        MatrixRecord::from_matrix(&x.0)
    }
}

impl ModuleElement {
    pub fn from_matrix(m: DMatrix<Complex64>) -> Result<Self> {
        if m.is_empty() {
            return Err(domain("module elements need at least one row and column"));
        }
        Ok(ModuleElement(m))
    }

    pub fn from_rows(rows: usize, alg_dim: usize, entries: &[Complex64]) -> Result<Self> {
        if entries.len() != rows * alg_dim {
            return Err(domain(format!(
                "{} entries do not fill a {rows}x{alg_dim} matrix",
                entries.len()
            )));
        }
        Self::from_matrix(DMatrix::from_row_slice(rows, alg_dim, entries))
    }

    /// A single column, i.e. a vector in the `k = 1` module `C^m`.
    pub fn column(entries: &[Complex64]) -> Result<Self> {
        Self::from_rows(entries.len(), 1, entries)
    }

    pub fn real_column(entries: &[f64]) -> Result<Self> {
        let z: Vec<Complex64> = entries.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::column(&z)
    }

    pub fn scalar(z: Complex64) -> Self {
        ModuleElement(DMatrix::from_element(1, 1, z))
    }

    pub fn zeros(rows: usize, alg_dim: usize) -> Self {
        ModuleElement(DMatrix::zeros(rows, alg_dim))
    }

    /// `M_k` viewed as a module over itself.
    pub fn from_algebra(a: &AlgebraElement) -> Self {
        ModuleElement(a.matrix().clone())
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn alg_dim(&self) -> usize {
        self.0.ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.0.shape()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn scale(&self, c: Complex64) -> Self {
        ModuleElement(&self.0 * c)
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.scale(Complex64::new(c, 0.0))
    }

    /// Reinterpret an `m = k` element as an algebra element.
    pub fn to_algebra(&self) -> Result<AlgebraElement> {
        AlgebraElement::from_matrix(self.0.clone())
    }

    /// `<self, self>`; always well formed.
    pub fn gram(&self) -> AlgebraElement {
        AlgebraElement::wrap(self.0.adjoint() * &self.0)
    }

    /// Multiply by an algebra element on the right, panicking on mismatch.
    /// Use [`right_action`] for the checked form.
    pub fn act(&self, a: &AlgebraElement) -> Self {
        ModuleElement(&self.0 * a.matrix())
    }

    pub fn norm(&self) -> f64 {
        module_norm(self)
    }
}

impl Add for &ModuleElement {
    type Output = ModuleElement;
    fn add(self, rhs: &ModuleElement) -> ModuleElement {
        ModuleElement(&self.0 + &rhs.0)
    }
}

impl Sub for &ModuleElement {
    type Output = ModuleElement;
    fn sub(self, rhs: &ModuleElement) -> ModuleElement {
        ModuleElement(&self.0 - &rhs.0)
    }
}

impl Neg for &ModuleElement {
    type Output = ModuleElement;
    fn neg(self) -> ModuleElement {
        ModuleElement(-&self.0)
    }
}

/// A nonempty list of module elements of one shape.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<ModuleElement>", into = "Vec<ModuleElement>")]
pub struct ModuleTuple(Vec<ModuleElement>);

impl TryFrom<Vec<ModuleElement>> for ModuleTuple {
    type Error = Error;

    fn try_from(items: Vec<ModuleElement>) -> Result<Self> {
        ModuleTuple::new(items)
    }
}

impl From<ModuleTuple> for Vec<ModuleElement> {
    fn from(t: ModuleTuple) -> Self {
        t.0
    }
}

impl ModuleTuple {
    pub fn new(items: Vec<ModuleElement>) -> Result<Self> {
        let first = items
            .first()
            .ok_or_else(|| domain("a module tuple needs at least one element"))?
            .shape();
        if let Some((i, x)) = items.iter().enumerate().find(|(_, x)| x.shape() != first) {
            return Err(domain(format!(
                "tuple entry {i} has shape {:?}, expected {first:?}",
                x.shape()
            )));
        }
        Ok(ModuleTuple(items))
    }

    pub fn items(&self) -> &[ModuleElement] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Shape `(rows, alg_dim)` shared by every entry.
    pub fn shape(&self) -> (usize, usize) {
        self.0[0].shape()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, ModuleElement> {
        self.0.iter()
    }

    /// Entrywise map preserving the tuple length.
    pub fn map(&self, f: impl Fn(&ModuleElement) -> ModuleElement) -> Result<Self> {
        ModuleTuple::new(self.0.iter().map(f).collect())
    }

    /// `sum_i w_i x_i`.
    pub fn combine(&self, weights: &[Complex64]) -> ModuleElement {
        assert_eq!(weights.len(), self.len(), "weight count must match tuple");
        let (m, k) = self.shape();
        let mut acc = DMatrix::zeros(m, k);
        for (x, w) in self.0.iter().zip(weights) {
            acc += &x.0 * *w;
        }
        ModuleElement(acc)
    }

    /// `sum_i p_i x_i`.
    pub fn weighted_mean(&self, p: &ProbabilityVector) -> ModuleElement {
        let w: Vec<Complex64> = p.weights().iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.combine(&w)
    }

    fn check_pair(&self, other: &ModuleTuple) -> Result<()> {
        if self.len() != other.len() {
            return Err(domain(format!(
                "tuple lengths differ ({} vs {})",
                self.len(),
                other.len()
            )));
        }
        if self.shape() != other.shape() {
            return Err(domain(format!(
                "tuple shapes differ ({:?} vs {:?})",
                self.shape(),
                other.shape()
            )));
        }
        Ok(())
    }
}

/// Nonnegative weights summing to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ProbabilityVector(Vec<f64>);

impl TryFrom<Vec<f64>> for ProbabilityVector {
    type Error = Error;

    fn try_from(w: Vec<f64>) -> Result<Self> {
        ProbabilityVector::new(w)
    }
}

impl From<ProbabilityVector> for Vec<f64> {
    fn from(p: ProbabilityVector) -> Self {
        p.0
    }
}

impl ProbabilityVector {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(domain("a probability vector needs at least one weight"));
        }
        if let Some(i) = weights.iter().position(|w| !w.is_finite() || *w < 0.0) {
            return Err(domain(format!(
                "weight {i} = {} is not a finite nonnegative number",
                weights[i]
            )));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > PROBABILITY_SUM_TOL {
            return Err(domain(format!("weights sum to {sum}, not 1")));
        }
        Ok(ProbabilityVector(weights))
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(domain("a probability vector needs at least one weight"));
        }
        ProbabilityVector::new(vec![1.0 / n as f64; n])
    }

    pub fn weights(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Complex scalars `alpha_1..alpha_n` paired with a tuple.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ScalarCoefficients(pub Vec<Complex64>);

impl ScalarCoefficients {
    pub fn values(&self) -> &[Complex64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `sum_i p_i alpha_i`.
    pub fn weighted_mean(&self, p: &ProbabilityVector) -> Complex64 {
        self.0
            .iter()
            .zip(p.weights())
            .map(|(a, w)| a * w)
            .sum()
    }
}

/// `<x, y> = x* y`.
pub fn inner_product(x: &ModuleElement, y: &ModuleElement) -> Result<AlgebraElement> {
    if x.shape() != y.shape() {
        return Err(domain(format!(
            "inner product of shapes {:?} and {:?}",
            x.shape(),
            y.shape()
        )));
    }
    Ok(AlgebraElement::wrap(x.0.adjoint() * &y.0))
}

/// `x a`.
pub fn right_action(x: &ModuleElement, a: &AlgebraElement) -> Result<ModuleElement> {
    if x.alg_dim() != a.dim() {
        return Err(domain(format!(
            "right action of a {0}x{0} element on a module over M_{1}",
            a.dim(),
            x.alg_dim()
        )));
    }
    Ok(x.act(a))
}

/// `|<x, x>|^{1/2}`, which is the largest singular value of `x`.
pub fn module_norm(x: &ModuleElement) -> f64 {
    spectral_norm(&x.0)
}

/// `G_e(x, y) = <x, y> - <x, e><e, y>`, defined when `<e, e>` is idempotent.
pub fn gruss_e(
    x: &ModuleElement,
    y: &ModuleElement,
    e: &ModuleElement,
    tol: Tolerance,
) -> Result<AlgebraElement> {
    if x.shape() != y.shape() || x.shape() != e.shape() {
        return Err(domain(format!(
            "G_e needs equal shapes, got x {:?}, y {:?}, e {:?}",
            x.shape(),
            y.shape(),
            e.shape()
        )));
    }
    let ee = e.gram();
    if !ee.is_idempotent(tol) {
        return Err(Error::Precondition("<e, e> is not idempotent".into()));
    }
    let xy = inner_product(x, y)?;
    let xe = inner_product(x, e)?;
    let ey = inner_product(e, y)?;
    Ok(&xy - &(&xe * &ey))
}

/// `G_p(x, y) = sum_i p_i <x_i, y_i> - <sum_i p_i x_i, sum_i p_i y_i>`.
pub fn gruss_p(
    xs: &ModuleTuple,
    ys: &ModuleTuple,
    p: &ProbabilityVector,
) -> Result<AlgebraElement> {
    xs.check_pair(ys)?;
    if p.len() != xs.len() {
        return Err(domain(format!(
            "{} weights for a tuple of length {}",
            p.len(),
            xs.len()
        )));
    }
    let k = xs.shape().1;
    let mut acc = AlgebraElement::zeros(k);
    for ((x, y), &w) in xs.iter().zip(ys.iter()).zip(p.weights()) {
        acc = &acc + &inner_product(x, y)?.scale_real(w);
    }
    let mx = xs.weighted_mean(p);
    let my = ys.weighted_mean(p);
    Ok(&acc - &inner_product(&mx, &my)?)
}

/// `sum_i p_i alpha_i x_i - (sum_i p_i alpha_i)(sum_i p_i x_i)`.
pub fn weighted_alpha_combination(
    alphas: &ScalarCoefficients,
    xs: &ModuleTuple,
    p: &ProbabilityVector,
) -> Result<ModuleElement> {
    if alphas.len() != xs.len() || p.len() != xs.len() {
        return Err(domain(format!(
            "lengths differ: {} coefficients, {} weights, {} elements",
            alphas.len(),
            p.len(),
            xs.len()
        )));
    }
    let pw: Vec<Complex64> = alphas
        .values()
        .iter()
        .zip(p.weights())
        .map(|(a, w)| a * w)
        .collect();
    let first = xs.combine(&pw);
    let second = xs.weighted_mean(p).scale(alphas.weighted_mean(p));
    Ok(&first - &second)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn scalars(v: &[f64]) -> ModuleTuple {
        ModuleTuple::new(v.iter().map(|&x| ModuleElement::scalar(c(x, 0.0))).collect()).unwrap()
    }

    #[test]
    fn inner_product_examples() {
        let x = ModuleElement::column(&[c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        let y = ModuleElement::column(&[c(0.0, 1.0), c(0.0, 0.0)]).unwrap();
        let g = inner_product(&x, &y).unwrap();
        assert_eq!(g.matrix()[(0, 0)], c(0.0, 1.0));

        let e1 = ModuleElement::real_column(&[1.0, 0.0, 0.0]).unwrap();
        assert_eq!(inner_product(&e1, &e1).unwrap(), AlgebraElement::identity(1));

        let x = ModuleElement::from_rows(2, 2, &[c(1.0, 2.0), c(0.5, 0.0), c(-1.0, 0.0), c(0.0, 3.0)])
            .unwrap();
        assert_eq!(
            inner_product(&x, &ModuleElement::zeros(2, 2)).unwrap(),
            AlgebraElement::zeros(2)
        );
        assert!(inner_product(&x, &ModuleElement::zeros(3, 2)).is_err());
    }

    #[test]
    fn right_action_examples() {
        let x = ModuleElement::from_rows(3, 2, &[c(1.0, 1.0); 6]).unwrap();
        assert_eq!(right_action(&x, &AlgebraElement::identity(2)).unwrap(), x);
        assert_eq!(
            right_action(&x, &AlgebraElement::zeros(2)).unwrap(),
            ModuleElement::zeros(3, 2)
        );
        assert!(right_action(&x, &AlgebraElement::identity(3)).is_err());
    }

    #[test]
    fn module_norm_examples() {
        assert_eq!(module_norm(&ModuleElement::real_column(&[1.0, 0.0]).unwrap()), 1.0);
        assert_eq!(module_norm(&ModuleElement::zeros(2, 3)), 0.0);
    }

    #[test]
    fn gruss_e_examples() {
        let tol = Tolerance::default();
        let e = ModuleElement::real_column(&[1.0, 0.0]).unwrap();
        let g = gruss_e(&e, &e, &e, tol).unwrap();
        assert_eq!(g, AlgebraElement::zeros(1));

        let x = ModuleElement::real_column(&[1.0, 1.0]).unwrap();
        let y = ModuleElement::real_column(&[1.0, -1.0]).unwrap();
        let g = gruss_e(&x, &y, &e, tol).unwrap();
        assert_eq!(g.matrix()[(0, 0)], c(-1.0, 0.0));

        // x = e a, y = e c with k = 1
        let xa = e.scale(c(2.0, -1.0));
        let yc = e.scale(c(0.5, 3.0));
        let g = gruss_e(&xa, &yc, &e, tol).unwrap();
        assert!(g.operator_norm() < 1e-14);

        let not_idem = ModuleElement::real_column(&[2.0, 0.0]).unwrap();
        assert!(matches!(
            gruss_e(&x, &y, &not_idem, tol),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn gruss_p_examples() {
        let x = ModuleElement::real_column(&[1.0, 2.0]).unwrap();
        let single = ModuleTuple::new(vec![x.clone()]).unwrap();
        let p1 = ProbabilityVector::uniform(1).unwrap();
        assert!(gruss_p(&single, &single, &p1).unwrap().operator_norm() < 1e-15);

        let xs = scalars(&[0.0, 1.0]);
        let half = ProbabilityVector::uniform(2).unwrap();
        let g = gruss_p(&xs, &xs, &half).unwrap();
        assert_eq!(g.matrix()[(0, 0)], c(0.25, 0.0));

        let constant = ModuleTuple::new(vec![x.clone(), x.clone(), x.clone()]).unwrap();
        let p = ProbabilityVector::new(vec![0.2, 0.3, 0.5]).unwrap();
        assert!(gruss_p(&constant, &constant, &p).unwrap().operator_norm() < 1e-14);

        assert!(gruss_p(&xs, &single, &half).is_err());
        assert!(gruss_p(&xs, &xs, &p1).is_err());
    }

    #[test]
    fn weighted_alpha_examples() {
        let half = ProbabilityVector::uniform(2).unwrap();
        let xs = scalars(&[0.0, 1.0]);
        let alphas = ScalarCoefficients(vec![c(0.0, 0.0), c(1.0, 0.0)]);
        let r = weighted_alpha_combination(&alphas, &xs, &half).unwrap();
        assert_eq!(r.matrix()[(0, 0)], c(0.25, 0.0));

        let flat = ScalarCoefficients(vec![c(2.0, 1.0), c(2.0, 1.0)]);
        let r = weighted_alpha_combination(&flat, &xs, &half).unwrap();
        assert!(r.norm() < 1e-15);

        let constant = scalars(&[3.0, 3.0]);
        let r = weighted_alpha_combination(&alphas, &constant, &half).unwrap();
        assert!(r.norm() < 1e-15);

        let short = ScalarCoefficients(vec![c(1.0, 0.0)]);
        assert!(weighted_alpha_combination(&short, &xs, &half).is_err());
    }

    #[test]
    fn probability_vector_validation() {
        assert!(ProbabilityVector::new(vec![]).is_err());
        assert!(ProbabilityVector::new(vec![0.5, 0.6]).is_err());
        assert!(ProbabilityVector::new(vec![1.5, -0.5]).is_err());
        assert!(ProbabilityVector::new(vec![f64::NAN, 1.0]).is_err());
        assert!(ProbabilityVector::new(vec![0.0, 1.0]).is_ok());
        let parsed: std::result::Result<ProbabilityVector, _> = serde_json::from_str("[0.5, 0.25]");
        assert!(parsed.is_err());
    }

    #[test]
    fn tuple_rejects_mixed_shapes() {
        let a = ModuleElement::zeros(2, 1);
        let b = ModuleElement::zeros(1, 2);
        assert!(ModuleTuple::new(vec![a, b]).is_err());
        assert!(ModuleTuple::new(vec![]).is_err());
    }
}
