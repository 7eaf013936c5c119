//! Certified error bounds for transforms of operator tuples.
//!
//! Differences such as `sum_k w_k A_k - (sum_k w_k) mean(A)` are evaluated in
//! coordinates translated by the first tuple entry, which leaves their value
//! unchanged (the weights of the mean sum to one) and makes them vanish
//! exactly on constant tuples.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::kernel::{TransformParams, DEFAULT_KERNEL_GUARD};
use super::power_sum::{mellin_closed_form, mellin_coefficient};
use super::{fourier_kernel_sum, mellin_weights};
use crate::algebra::{AlgebraElement, Tolerance};
use crate::engine::InequalityVerdict;
use crate::error::{domain, Result};
use crate::module::{gruss_p, ModuleElement, ModuleTuple, ProbabilityVector, ScalarCoefficients};

/// One Loewner-checked bound `|Delta|^2 <= mid <= final`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub inequality_id: String,
    /// `|Delta|^2 = Delta* Delta`.
    pub true_error_sq: AlgebraElement,
    /// The tightest right-hand side of the chain.
    pub bound_mid: AlgebraElement,
    /// Operator norm of the loosest right-hand side.
    pub bound_final: f64,
    pub loewner_holds: bool,
    /// `lambda_max(true_error_sq) / bound_final`; `None` when the bound is
    /// zero but the error is not.
    pub tightness: Option<f64>,
    pub verdict: InequalityVerdict,
}

impl BoundReport {
    fn new(
        id: &str,
        delta: &ModuleElement,
        mid: AlgebraElement,
        fin: Option<AlgebraElement>,
        extra: Vec<InequalityVerdict>,
        tol: Tolerance,
    ) -> Result<Self> {
        let err_sq = delta.gram();
        let mut links = extra;
        links.push(InequalityVerdict::loewner(
            format!("{id}.bound"),
            &err_sq,
            &mid,
            tol,
        )?);
        let bound_final = match &fin {
            Some(f) => {
                links.push(InequalityVerdict::loewner(format!("{id}.final"), &mid, f, tol)?);
                f.operator_norm()
            }
            None => mid.operator_norm(),
        };
        let verdict = InequalityVerdict::chain(id, links, tol);
        let top = err_sq.max_eigenvalue()?.max(0.0);
        let tightness = if bound_final > 0.0 {
            Some(top / bound_final)
        } else if top == 0.0 {
            Some(0.0)
        } else {
            None
        };
        Ok(BoundReport {
            inequality_id: id.to_string(),
            true_error_sq: err_sq,
            bound_mid: mid,
            bound_final,
            loewner_holds: verdict.holds,
            tightness,
            verdict,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourierBounds {
    pub params: TransformParams,
    /// Bilinear bound for `sum exp(..) A_k* B_k - mean(A)* F(B)`.
    pub chain: BoundReport,
    /// Rank-one surrogate `F(A) - K mean(A)` against the kernel variance.
    pub surrogate: BoundReport,
    pub kernel: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MellinBounds {
    pub m: usize,
    pub n: usize,
    pub chain: BoundReport,
    pub surrogate: BoundReport,
    /// Exact `n S_{2m-2}(n) - S_{m-1}(n)^2` in decimal.
    pub coefficient: String,
    /// Closed form of the coefficient for `m = 2, 3`.
    pub closed_form: Option<String>,
    pub closed_form_matches: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaBounds {
    /// Translated form with arbitrary `A`, `B`.
    pub translated: BoundReport,
    /// Centered form (`A = B = 0`): scalar variance times operator variance.
    pub centered: BoundReport,
}

fn check_tuples(a_s: &ModuleTuple, b_s: &ModuleTuple, a: &ModuleElement, b: &ModuleElement) -> Result<()> {
    if a_s.len() != b_s.len() {
        return Err(domain(format!(
            "tuple lengths differ ({} vs {})",
            a_s.len(),
            b_s.len()
        )));
    }
    let shape = a_s.shape();
    if b_s.shape() != shape || a.shape() != shape || b.shape() != shape {
        return Err(domain(format!(
            "operands must share the tuple shape {shape:?}"
        )));
    }
    Ok(())
}

/// `A_k - A_1`.
fn anchored(a_s: &ModuleTuple) -> Vec<DMatrix<Complex64>> {
    let first = a_s.items()[0].matrix();
    a_s.iter().map(|x| x.matrix() - first).collect()
}

fn gram(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    m.adjoint() * m
}

fn alg(m: DMatrix<Complex64>) -> AlgebraElement {
    AlgebraElement::from_matrix(m).expect("square Gram matrix")
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `(1/n) sum |z_k|^2 - (1/n^2) |sum z_k|^2`.
fn uniform_variance(z: &[DMatrix<Complex64>]) -> DMatrix<Complex64> {
    let n = z.len() as f64;
    let (rows, cols) = z[0].shape();
    let mut second = DMatrix::zeros(cols, cols);
    let mut total = DMatrix::zeros(rows, cols);
    for zk in z {
        second += gram(zk);
        total += zk;
    }
    second * re(1.0 / n) - gram(&total) * re(1.0 / (n * n))
}

/// Bilinear chain shared by the Fourier and Mellin examples, for weights `w`:
/// `|sum w_k A_k* B_k - mean(A)* sum w_k B_k|^2
///   <= |sum |A_k - A|^2 - |mean(A) - A|^2| (sum |w_k B_k - B|^2 - |mean(wB) - B|^2)
///   <= (sum |A_k - A|^2_norm) (sum |w_k B_k - B|^2)`.
fn bilinear_chain(
    id: &str,
    a_s: &ModuleTuple,
    b_s: &ModuleTuple,
    a: &ModuleElement,
    b: &ModuleElement,
    w: &[Complex64],
    tol: Tolerance,
) -> Result<BoundReport> {
    check_tuples(a_s, b_s, a, b)?;
    let n = a_s.len() as f64;
    let k = a_s.shape().1;
    let z = anchored(a_s);
    let wb: Vec<DMatrix<Complex64>> = b_s.iter().zip(w).map(|(bk, wk)| bk.matrix() * *wk).collect();

    let mut first = DMatrix::zeros(k, k);
    let mut z_sum = DMatrix::zeros(z[0].nrows(), k);
    let mut wb_sum = DMatrix::zeros(z[0].nrows(), k);
    for (zk, wbk) in z.iter().zip(&wb) {
        first += zk.adjoint() * wbk;
        z_sum += zk;
        wb_sum += wbk;
    }
    let delta = first - (z_sum * re(1.0 / n)).adjoint() * &wb_sum;

    let mut p_a = DMatrix::zeros(k, k);
    let mut norms_a = 0.0;
    let mut a_sum = DMatrix::zeros(z[0].nrows(), k);
    for ak in a_s.iter() {
        let d = ak.matrix() - a.matrix();
        norms_a += crate::algebra::spectral_norm(&d).powi(2);
        p_a += gram(&d);
        a_sum += ak.matrix();
    }
    let q_a = gram(&(a_sum * re(1.0 / n) - a.matrix()));

    let mut p_b = DMatrix::zeros(k, k);
    for wbk in &wb {
        p_b += gram(&(wbk - b.matrix()));
    }
    let q_b = gram(&(&wb_sum * re(1.0 / n) - b.matrix()));

    let factor_a = crate::algebra::spectral_norm(&(p_a - q_a));
    let mid = alg((&p_b - q_b) * re(factor_a));
    let fin = alg(p_b * re(norms_a));
    BoundReport::new(
        id,
        &ModuleElement::from_matrix(delta)?,
        mid,
        Some(fin),
        Vec::new(),
        tol,
    )
}

/// Bilinear Fourier chain alone; needs no kernel closed form.
pub fn fourier_chain_check(
    a_s: &ModuleTuple,
    b_s: &ModuleTuple,
    a: &ModuleElement,
    b: &ModuleElement,
    params: &TransformParams,
    tol: Tolerance,
) -> Result<BoundReport> {
    if a_s.len() != params.n {
        return Err(domain(format!(
            "params.n = {} but the tuple has {} entries",
            params.n,
            a_s.len()
        )));
    }
    bilinear_chain("eq41", a_s, b_s, a, b, &params.weights(), tol)
}

/// Rank-one surrogate bound with weights `w` and `sum_k w_k = weight_total`,
/// given the exact scalar coefficient `n sum |w|^2 - |sum w|^2`.
fn surrogate_bound(
    id: &str,
    a_s: &ModuleTuple,
    w: &[Complex64],
    weight_total: Complex64,
    coefficient: f64,
    tol: Tolerance,
) -> Result<BoundReport> {
    let n = a_s.len() as f64;
    let z = anchored(a_s);
    let mut weighted = DMatrix::zeros(z[0].nrows(), z[0].ncols());
    let mut plain = DMatrix::zeros(z[0].nrows(), z[0].ncols());
    for (zk, wk) in z.iter().zip(w) {
        weighted += zk * *wk;
        plain += zk;
    }
    let delta = weighted - plain * (weight_total * re(1.0 / n));
    let rhs = alg(uniform_variance(&z) * re(coefficient));
    BoundReport::new(id, &ModuleElement::from_matrix(delta)?, rhs, None, Vec::new(), tol)
}

/// Fourier bilinear chain plus the surrogate bound
/// `|F(A)(m) - K (1/n) sum A_k|^2 <= [n^2 - sin^2(omega m n)/sin^2(omega m)] var(A)`.
///
/// Fails with [`crate::Error::SingularKernel`] inside the kernel guard band.
pub fn fourier_bound_check(
    a_s: &ModuleTuple,
    b_s: &ModuleTuple,
    a: &ModuleElement,
    b: &ModuleElement,
    params: &TransformParams,
    tol: Tolerance,
) -> Result<FourierBounds> {
    let kernel = fourier_kernel_sum(params, DEFAULT_KERNEL_GUARD)?;
    let chain = fourier_chain_check(a_s, b_s, a, b, params, tol)?;
    let ratio = params.sin_ratio(DEFAULT_KERNEL_GUARD)?;
    let n = params.n as f64;
    let coefficient = n * n - ratio * ratio;
    let surrogate = surrogate_bound("eq45", a_s, &params.weights(), kernel, coefficient, tol)?;
    Ok(FourierBounds {
        params: *params,
        chain,
        surrogate,
        kernel,
    })
}

/// Mellin bilinear chain plus the surrogate bound with the exact coefficient
/// `n S_{2m-2}(n) - S_{m-1}(n)^2`, cross-checked against closed forms at `m = 2, 3`.
pub fn mellin_bound_check(
    a_s: &ModuleTuple,
    b_s: &ModuleTuple,
    a: &ModuleElement,
    b: &ModuleElement,
    m: usize,
    tol: Tolerance,
) -> Result<MellinBounds> {
    let n = a_s.len();
    if m == 0 || m > n {
        return Err(domain(format!("need 1 <= m <= n, got m = {m}, n = {n}")));
    }
    let w = mellin_weights(m, n);
    let chain = bilinear_chain("eq42", a_s, b_s, a, b, &w, tol)?;

    let coeff = mellin_coefficient(m as u32, n as u64)?;
    let closed = mellin_closed_form(m as u32, n as u64);
    let s_m1 = super::power_sum_big(m as u32 - 1, n as u64);
    let total = s_m1.to_f64().unwrap_or(f64::INFINITY);
    let coefficient = coeff.to_f64().unwrap_or(f64::INFINITY);
    let surrogate = surrogate_bound("eq46", a_s, &w, re(total), coefficient, tol)?;
    Ok(MellinBounds {
        m,
        n,
        chain,
        surrogate,
        coefficient: coeff.to_string(),
        closed_form_matches: closed.as_ref().map(|c| *c == coeff),
        closed_form: closed.map(|c| c.to_string()),
    })
}

/// Scalar-weighted bound in the algebra viewed as a module over itself
/// (`x_k = conj(alpha_k) I`, `y_k = A_k`), in translated form with arbitrary
/// `A, B` and in centered form.
pub fn alpha_bound_check(
    alphas: &ScalarCoefficients,
    a_s: &ModuleTuple,
    a: &ModuleElement,
    b: &ModuleElement,
    p: &ProbabilityVector,
    tol: Tolerance,
) -> Result<AlphaBounds> {
    let (rows, k) = a_s.shape();
    if rows != k {
        return Err(domain(format!(
            "the identity is only a module element when rows = alg_dim; got {rows}x{k}"
        )));
    }
    if a.shape() != (k, k) || b.shape() != (k, k) {
        return Err(domain("A and B must be square of the tuple dimension"));
    }
    if alphas.len() != a_s.len() || p.len() != a_s.len() {
        return Err(domain(format!(
            "lengths differ: {} coefficients, {} weights, {} operators",
            alphas.len(),
            p.len(),
            a_s.len()
        )));
    }
    let pw = p.weights();
    let z = anchored(a_s);
    let alpha0 = alphas.values()[0];
    let beta: Vec<Complex64> = alphas.values().iter().map(|x| x - alpha0).collect();

    // Delta = sum p beta_k z_k - (sum p beta)(sum p z)
    let mut weighted = DMatrix::zeros(k, k);
    let mut mean_z = DMatrix::zeros(k, k);
    let mut mean_beta = Complex64::new(0.0, 0.0);
    let mut second_beta = 0.0;
    let mut second_z = DMatrix::zeros(k, k);
    for ((zk, bk), &w) in z.iter().zip(&beta).zip(pw) {
        weighted += zk * (bk * w);
        mean_z += zk * re(w);
        mean_beta += bk * w;
        second_beta += w * bk.norm_sqr();
        second_z += gram(zk) * re(w);
    }
    let delta = ModuleElement::from_matrix(&weighted - &mean_z * mean_beta)?;

    // the same Delta as a Grüss functional of x_k = conj(alpha_k) I, y_k = A_k
    let id = DMatrix::<Complex64>::identity(k, k);
    let xs = ModuleTuple::new(
        alphas
            .values()
            .iter()
            .map(|al| ModuleElement::from_matrix(&id * al.conj()))
            .collect::<Result<Vec<_>>>()?,
    )?;
    let as_gruss = gruss_p(&xs, a_s, p)?;
    let identity = InequalityVerdict::identity("eq43.identity", delta.matrix(), as_gruss.matrix(), tol);

    // |sum p |conj(alpha_k) I - A|^2 - |sum p conj(alpha_k) I - A|^2|
    let mut p_x = DMatrix::zeros(k, k);
    let mut mean_x = DMatrix::zeros(k, k);
    for (x, &w) in xs.iter().zip(pw) {
        let d = x.matrix() - a.matrix();
        p_x += gram(&d) * re(w);
        mean_x += x.matrix() * re(w);
    }
    let factor_x = crate::algebra::spectral_norm(&(p_x - gram(&(mean_x - a.matrix()))));

    let mut p_y = DMatrix::zeros(k, k);
    let mut mean_y = DMatrix::zeros(k, k);
    for (ak, &w) in a_s.iter().zip(pw) {
        p_y += gram(&(ak.matrix() - b.matrix())) * re(w);
        mean_y += ak.matrix() * re(w);
    }
    let var_y = p_y - gram(&(mean_y - b.matrix()));
    let translated = BoundReport::new(
        "eq43",
        &delta,
        alg(var_y * re(factor_x)),
        None,
        vec![identity],
        tol,
    )?;

    let scalar_var = (second_beta - mean_beta.norm_sqr()).max(0.0);
    let operator_var = second_z - gram(&mean_z);
    let centered = BoundReport::new(
        "eq44",
        &delta,
        alg(operator_var * re(scalar_var)),
        None,
        Vec::new(),
        tol,
    )?;
    Ok(AlphaBounds {
        translated,
        centered,
    })
}
