//! The geometric Fourier kernel `sum_{k=1}^n exp(2 i omega m k)`.
//!
//! The kernel only depends on `omega * m` modulo `pi`, so all evaluations
//! first reduce `theta = omega * m` to `phi` in `[-pi/2, pi/2]`. This keeps the
//! arguments of `sin` and `exp` small for large `n` and `m` without changing
//! the value.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// `pi - PI` in double precision.
const PI_LO: f64 = 1.2246467991473532e-16;

/// Closed-form evaluation refuses when `|sin(omega m)|` is at or below this.
pub const DEFAULT_KERNEL_GUARD: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransformParams {
    /// Frequency in radians; not periodized.
    pub omega: f64,
    /// Frequency or moment index, `1..=n`.
    pub m: usize,
    /// Tuple length.
    pub n: usize,
}

impl TransformParams {
    pub fn new(omega: f64, m: usize, n: usize) -> Result<Self> {
        if !omega.is_finite() {
            return Err(domain(format!("omega must be finite, got {omega}")));
        }
        if n == 0 || m == 0 || m > n {
            return Err(domain(format!("need 1 <= m <= n, got m = {m}, n = {n}")));
        }
        Ok(TransformParams { omega, m, n })
    }

    /// `omega * m` reduced modulo `pi` into `[-pi/2, pi/2]`, carrying the
    /// rounding error of the product and the low word of `pi`.
    pub fn reduced_angle(&self) -> f64 {
        let m = self.m as f64;
        let theta = self.omega * m;
        let theta_err = self.omega.mul_add(m, -theta);
        let j = (theta / PI).round();
        ((-j).mul_add(PI, theta) + theta_err) - j * PI_LO
    }

    /// `|sin(omega m)|`.
    pub fn kernel_sin(&self) -> f64 {
        self.reduced_angle().sin().abs()
    }

    pub fn is_singular(&self, guard: f64) -> bool {
        self.kernel_sin() <= guard
    }

    /// `exp(2 i omega m k)` for `k = 1..=n`.
    pub fn weights(&self) -> Vec<Complex64> {
        let phi = self.reduced_angle();
        (1..=self.n)
            .map(|k| Complex64::from_polar(1.0, 2.0 * phi * k as f64))
            .collect()
    }

    /// `sin(omega m n) / sin(omega m)`; fails inside the guard band.
    pub fn sin_ratio(&self, guard: f64) -> Result<f64> {
        let phi = self.reduced_angle();
        let s = phi.sin();
        if s.abs() <= guard {
            return Err(Error::SingularKernel {
                omega: self.omega,
                m: self.m,
                sin_abs: s.abs(),
                guard,
            });
        }
        Ok((self.n as f64 * phi).sin() / s)
    }
}

/// `sin(omega m n) / sin(omega m) * exp(i omega (n + 1) m)`.
pub fn fourier_kernel_sum(params: &TransformParams, guard: f64) -> Result<Complex64> {
    let ratio = params.sin_ratio(guard)?;
    let phase = (params.n + 1) as f64 * params.reduced_angle();
    Ok(Complex64::from_polar(ratio, phase))
}

/// Term-by-term kernel sum; valid everywhere, used where the closed form refuses.
pub fn fourier_kernel_direct(params: &TransformParams) -> Complex64 {
    params.weights().into_iter().sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_pi_pair_cancels() {
        let p = TransformParams::new(PI / 2.0, 1, 2).unwrap();
        let closed = fourier_kernel_sum(&p, DEFAULT_KERNEL_GUARD).unwrap();
        let direct = fourier_kernel_direct(&p);
        assert!(closed.norm() < 1e-15);
        assert!(direct.norm() < 1e-15);
    }

    #[test]
    fn single_term() {
        let p = TransformParams::new(0.37, 1, 1).unwrap();
        let expected = Complex64::from_polar(1.0, 2.0 * 0.37);
        assert!((fourier_kernel_sum(&p, DEFAULT_KERNEL_GUARD).unwrap() - expected).norm() < 1e-15);
        assert!((fourier_kernel_direct(&p) - expected).norm() < 1e-15);
    }

    #[test]
    fn matches_direct_at_half() {
        let p = TransformParams::new(0.5, 1, 3).unwrap();
        let naive: Complex64 = (1..=3)
            .map(|k| Complex64::from_polar(1.0, 2.0 * 0.5 * k as f64))
            .sum();
        assert!((fourier_kernel_sum(&p, DEFAULT_KERNEL_GUARD).unwrap() - naive).norm() < 1e-12);
    }

    #[test]
    fn guard_band() {
        let p = TransformParams::new(0.0, 1, 5).unwrap();
        assert!(matches!(
            fourier_kernel_sum(&p, DEFAULT_KERNEL_GUARD),
            Err(Error::SingularKernel { .. })
        ));
        assert_eq!(fourier_kernel_direct(&p), Complex64::new(5.0, 0.0));
        let p = TransformParams::new(PI, 1, 4).unwrap();
        assert!(p.is_singular(DEFAULT_KERNEL_GUARD));
    }

    #[test]
    fn params_validation() {
        assert!(TransformParams::new(0.1, 0, 3).is_err());
        assert!(TransformParams::new(0.1, 4, 3).is_err());
        assert!(TransformParams::new(f64::NAN, 1, 3).is_err());
    }
}
