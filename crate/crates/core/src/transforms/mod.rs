//! Discrete Fourier and Mellin transforms of module tuples and the
//! Grüss-type error bounds for their rank-one surrogates.

mod bounds;
mod kernel;
mod power_sum;

pub use bounds::{
    alpha_bound_check, fourier_bound_check, fourier_chain_check, mellin_bound_check, AlphaBounds,
    BoundReport, FourierBounds, MellinBounds,
};
pub use kernel::{fourier_kernel_direct, fourier_kernel_sum, TransformParams, DEFAULT_KERNEL_GUARD};
pub use power_sum::{mellin_closed_form, mellin_coefficient, power_sum, power_sum_big};

use num_complex::Complex64;

use crate::algebra::AlgebraElement;
use crate::error::{domain, Result};
use crate::module::{inner_product, ModuleElement, ModuleTuple};

fn check_len(xs: &ModuleTuple, n: usize) -> Result<()> {
    if xs.len() != n {
        return Err(domain(format!(
            "transform of length {n} applied to a tuple of length {}",
            xs.len()
        )));
    }
    Ok(())
}

/// `k^{m-1}` for `k = 1..=n`.
pub fn mellin_weights(m: usize, n: usize) -> Vec<Complex64> {
    (1..=n)
        .map(|k| Complex64::new((k as f64).powi(m as i32 - 1), 0.0))
        .collect()
}

fn weighted_gram_sum(xs: &ModuleTuple, ys: &ModuleTuple, w: &[Complex64]) -> Result<AlgebraElement> {
    if xs.len() != ys.len() {
        return Err(domain(format!(
            "tuple lengths differ ({} vs {})",
            xs.len(),
            ys.len()
        )));
    }
    let mut acc = AlgebraElement::zeros(xs.shape().1);
    for ((x, y), c) in xs.iter().zip(ys.iter()).zip(w) {
        acc = &acc + &inner_product(x, y)?.scale(*c);
    }
    Ok(acc)
}

/// `F_omega(x)(m) = sum_k exp(2 i omega m k) x_k`.
pub fn fourier_transform(xs: &ModuleTuple, params: &TransformParams) -> Result<ModuleElement> {
    check_len(xs, params.n)?;
    Ok(xs.combine(&params.weights()))
}

/// `F_omega(x, y)(m) = sum_k exp(2 i omega m k) <x_k, y_k>`.
pub fn fourier_algebra(
    xs: &ModuleTuple,
    ys: &ModuleTuple,
    params: &TransformParams,
) -> Result<AlgebraElement> {
    check_len(xs, params.n)?;
    weighted_gram_sum(xs, ys, &params.weights())
}

/// `M(x)(m) = sum_k k^{m-1} x_k`.
pub fn mellin_transform(xs: &ModuleTuple, m: usize) -> Result<ModuleElement> {
    if m == 0 {
        return Err(domain("Mellin index m starts at 1"));
    }
    Ok(xs.combine(&mellin_weights(m, xs.len())))
}

/// `M(x, y)(m) = sum_k k^{m-1} <x_k, y_k>`.
pub fn mellin_algebra(xs: &ModuleTuple, ys: &ModuleTuple, m: usize) -> Result<AlgebraElement> {
    if m == 0 {
        return Err(domain("Mellin index m starts at 1"));
    }
    weighted_gram_sum(xs, ys, &mellin_weights(m, xs.len()))
}
