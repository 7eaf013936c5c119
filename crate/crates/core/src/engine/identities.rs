//! Algebraic identities and order relations behind the Grüss bounds.

use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{InequalityVerdict, Instance};
use crate::algebra::{AlgebraElement, Tolerance};
use crate::error::{domain, Error, Result};
use crate::module::{
    gruss_e, gruss_p, inner_product, weighted_alpha_combination, ModuleElement, ModuleTuple,
    ProbabilityVector,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentitySet {
    /// Facts about `G_e` for idempotent `<e,e>`.
    Lemma31,
    /// Translation identities for `G_p`.
    Lemma41,
}

impl FromStr for IdentitySet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lemma31" => Ok(IdentitySet::Lemma31),
            "lemma41" => Ok(IdentitySet::Lemma41),
            _ => Err(Error::Usage(format!("unknown identity set '{s}'"))),
        }
    }
}

fn zero_alg(k: usize) -> AlgebraElement {
    AlgebraElement::zeros(k)
}

pub fn check_identities(
    which: IdentitySet,
    instance: &Instance,
    tol: Tolerance,
) -> Result<Vec<InequalityVerdict>> {
    match (which, instance) {
        (IdentitySet::Lemma31, Instance::Lemma31 { x, y, e, a, b }) => lemma31(x, y, e, a, b, tol),
        (IdentitySet::Lemma41, Instance::Lemma41 { xs, ys, p, alphas, a, b }) => {
            lemma41(xs, ys, p, alphas, a, b, tol)
        }
        (w, inst) => Err(Error::Usage(format!(
            "identity set {w:?} cannot be checked on a '{}' instance",
            inst.kind()
        ))),
    }
}

fn lemma31(
    x: &ModuleElement,
    y: &ModuleElement,
    e: &ModuleElement,
    a: &AlgebraElement,
    b: &AlgebraElement,
    tol: Tolerance,
) -> Result<Vec<InequalityVerdict>> {
    if a.dim() != x.alg_dim() || b.dim() != x.alg_dim() {
        return Err(domain("algebra elements must act on the module"));
    }
    let gxx = gruss_e(x, x, e, tol)?;
    let gxy = gruss_e(x, y, e, tol)?;
    let k = x.alg_dim();

    let ex = inner_product(e, x)?;
    let projected = x - &e.act(&ex);
    let xa = x - &e.act(a);
    let yb = y - &e.act(b);
    let shifted = gruss_e(&xa, &yb, e, tol)?;
    let ee = e.gram();

    Ok(vec![
        InequalityVerdict::loewner("lemma31.positive", &zero_alg(k), &gxx, tol)?,
        InequalityVerdict::identity("lemma31.projection", (&ee * &ex).matrix(), ex.matrix(), tol),
        InequalityVerdict::identity(
            "lemma31.decomposition",
            gxx.matrix(),
            projected.gram().matrix(),
            tol,
        ),
        InequalityVerdict::loewner("lemma31.majorize", &gxx, &xa.gram(), tol)?,
        InequalityVerdict::identity("lemma31.translation", shifted.matrix(), gxy.matrix(), tol),
    ])
}

fn lemma41(
    xs: &ModuleTuple,
    ys: &ModuleTuple,
    p: &ProbabilityVector,
    alphas: &crate::module::ScalarCoefficients,
    a: &ModuleElement,
    b: &ModuleElement,
    tol: Tolerance,
) -> Result<Vec<InequalityVerdict>> {
    if a.shape() != xs.shape() || b.shape() != ys.shape() {
        return Err(domain("centers must have the tuple shape"));
    }
    let g = gruss_p(xs, ys, p)?;
    let gxx = gruss_p(xs, xs, p)?;
    let w = p.weights();
    let k = xs.shape().1;

    // sum p (alpha_i - mean alpha)(x_i - a)
    let lhs_alpha = weighted_alpha_combination(alphas, xs, p)?;
    let mean_alpha = alphas.weighted_mean(p);
    let (m, _) = xs.shape();
    let mut rhs_alpha = DMatrix::<Complex64>::zeros(m, k);
    for ((x, al), &wi) in xs.iter().zip(alphas.values()).zip(w) {
        rhs_alpha += (x.matrix() - a.matrix()) * ((al - mean_alpha) * wi);
    }

    let xa = xs.map(|x| x - a)?;
    let yb = ys.map(|y| y - b)?;
    let translated = gruss_p(&xa, &yb, p)?;

    // stated with sum p x_i - a in the second term
    let mut second = DMatrix::<Complex64>::zeros(k, k);
    for (x, &wi) in xa.iter().zip(w) {
        second += x.gram().matrix() * Complex64::new(wi, 0.0);
    }
    let second = AlgebraElement::from_matrix(second)?;
    let spread = &xs.weighted_mean(p) - a;
    let variance = &second - &spread.gram();

    let mut pairwise = DMatrix::<Complex64>::zeros(k, k);
    for (i, (xi, yi)) in xs.iter().zip(ys.iter()).enumerate() {
        for (j, (xj, yj)) in xs.iter().zip(ys.iter()).enumerate() {
            let d = inner_product(&(xi - xj), &(yi - yj))?;
            pairwise += d.matrix() * Complex64::new(0.5 * w[i] * w[j], 0.0);
        }
    }

    Ok(vec![
        InequalityVerdict::identity("lemma41.alpha_translation", lhs_alpha.matrix(), &rhs_alpha, tol),
        InequalityVerdict::identity("lemma41.translation", g.matrix(), translated.matrix(), tol),
        InequalityVerdict::identity("lemma41.variance", gxx.matrix(), variance.matrix(), tol),
        InequalityVerdict::identity("lemma41.pairwise", g.matrix(), &pairwise, tol),
        InequalityVerdict::loewner("lemma41.positive", &zero_alg(k), &gxx, tol)?,
        InequalityVerdict::loewner("lemma41.variance_bound", &gxx, &second, tol)?,
    ])
}
