//! Exact power sums `S_p(n) = 1^p + 2^p + ... + n^p` and the Mellin
//! variance coefficients built from them.

use num_bigint::BigUint;

use crate::error::{Error, Result};

/// `S_p(n)` in checked 128-bit arithmetic.
pub fn power_sum(p: u32, n: u64) -> Result<u128> {
    let overflow = || Error::Range(format!("S_{p}({n}) does not fit in 128 bits"));
    (1..=u128::from(n)).try_fold(0u128, |acc, k| {
        let term = k.checked_pow(p).ok_or_else(overflow)?;
        acc.checked_add(term).ok_or_else(overflow)
    })
}

/// `S_p(n)` without a size limit.
pub fn power_sum_big(p: u32, n: u64) -> BigUint {
    (1..=n).map(|k| BigUint::from(k).pow(p)).sum()
}

/// `n S_{2m-2}(n) - S_{m-1}(n)^2`, the scalar variance factor of the
/// Mellin weights `k^{m-1}` scaled by `n^2`. Nonnegative by Cauchy-Schwarz.
pub fn mellin_coefficient(m: u32, n: u64) -> Result<BigUint> {
    if m == 0 {
        return Err(Error::Domain("Mellin index m starts at 1".into()));
    }
    let even = power_sum_big(2 * m - 2, n) * BigUint::from(n);
    let odd = power_sum_big(m - 1, n);
    let square = &odd * &odd;
    if square > even {
        // cannot happen for valid inputs; kept as a hard error rather than wrapping
        return Err(Error::Range(format!(
            "negative Mellin coefficient at m = {m}, n = {n}"
        )));
    }
    Ok(even - square)
}

/// Published closed forms of [`mellin_coefficient`] for `m = 2` and `m = 3`.
pub fn mellin_closed_form(m: u32, n: u64) -> Option<BigUint> {
    let n = BigUint::from(n);
    let one = BigUint::from(1u32);
    let base = &n * &n * (&n - &one) * (&n + &one);
    match m {
        2 => Some(base / BigUint::from(12u32)),
        3 => {
            let two_n_plus_1 = &n * BigUint::from(2u32) + &one;
            let eight_n_plus_11 = &n * BigUint::from(8u32) + BigUint::from(11u32);
            Some(base * two_n_plus_1 * eight_n_plus_11 / BigUint::from(180u32))
        }
        _ => None,
    }
}
