//! Grüss-type bounds for `G_e` and `G_p`, and the two-point extremal instance.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{InequalityId, InequalityVerdict, Instance};
use crate::algebra::{abs_matrix, AlgebraElement, Tolerance};
use crate::error::{domain, Error, Result};
use crate::gen::{sharpness_pair, GenConfig};
use crate::module::{
    gruss_e, gruss_p, inner_product, module_norm, weighted_alpha_combination, ModuleElement,
    ModuleTuple, ProbabilityVector, ScalarCoefficients,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GrussVariant {
    Thm31,
    Thm42,
    Cor43,
    Rem44,
    Scalar12,
}

impl GrussVariant {
    pub const ALL: [GrussVariant; 5] = [
        GrussVariant::Thm31,
        GrussVariant::Thm42,
        GrussVariant::Cor43,
        GrussVariant::Rem44,
        GrussVariant::Scalar12,
    ];

    pub fn id(self) -> InequalityId {
        match self {
            GrussVariant::Thm31 => InequalityId::Thm31,
            GrussVariant::Thm42 => InequalityId::Thm42,
            GrussVariant::Cor43 => InequalityId::Cor43,
            GrussVariant::Rem44 => InequalityId::Rem44,
            GrussVariant::Scalar12 => InequalityId::Scalar12,
        }
    }

    pub fn from_id(id: InequalityId) -> Option<Self> {
        GrussVariant::ALL.into_iter().find(|v| v.id() == id)
    }
}

impl fmt::Display for GrussVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id().as_str())
    }
}

impl FromStr for GrussVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let id: InequalityId = s.parse()?;
        GrussVariant::from_id(id).ok_or_else(|| Error::Usage(format!("'{s}' is not a Grüss variant")))
    }
}

pub fn check_gruss(variant: GrussVariant, instance: &Instance, tol: Tolerance) -> Result<InequalityVerdict> {
    match (variant, instance) {
        (GrussVariant::Thm31, Instance::Thm31 { x, y, e, a, b, c, d }) => thm31(x, y, e, a, b, c, d, tol),
        (GrussVariant::Thm42, Instance::Pair { xs, ys, p, a, b, .. }) => thm42(xs, ys, p, a, b, tol),
        (GrussVariant::Cor43, Instance::Pair { xs, ys, p, a, b, r, s }) => {
            cor43(xs, ys, p, a, b, *r, *s, tol)
        }
        (GrussVariant::Rem44, Instance::Rem44 { alphas, xs, p, a, r }) => rem44(alphas, xs, p, a, *r, tol),
        (
            GrussVariant::Scalar12,
            Instance::Scalar12 { xs, ys, lo_a, hi_a, lo_b, hi_b },
        ) => scalar12(xs, ys, [*lo_a, *hi_a, *lo_b, *hi_b], tol),
        (v, inst) => Err(Error::Usage(format!(
            "{v} cannot be checked on a '{}' instance",
            inst.kind()
        ))),
    }
}

/// `|x - e(a+b)/2|^2 - (1/4)|e(a-b)|^2 + Re<x - ea, eb - x>`, which vanishes.
fn midpoint_residual(
    id: &str,
    x: &ModuleElement,
    e: &ModuleElement,
    a: &AlgebraElement,
    b: &AlgebraElement,
    tol: Tolerance,
) -> Result<(InequalityVerdict, AlgebraElement)> {
    let half = Complex64::new(0.5, 0.0);
    let u = x - &e.act(&(a + b).scale(half));
    let spread = e.act(&(a - b));
    let re_term = inner_product(&(x - &e.act(a)), &(&e.act(b) - x))?.hermitian_part();
    let right = &spread.gram().scale_real(0.25) - &re_term;
    let v = InequalityVerdict::identity(id, u.gram().matrix(), right.matrix(), tol);
    Ok((v, re_term))
}

#[allow(clippy::too_many_arguments)]
fn thm31(
    x: &ModuleElement,
    y: &ModuleElement,
    e: &ModuleElement,
    a: &AlgebraElement,
    b: &AlgebraElement,
    c: &AlgebraElement,
    d: &AlgebraElement,
    tol: Tolerance,
) -> Result<InequalityVerdict> {
    let k = x.alg_dim();
    if [a, b, c, d].iter().any(|t| t.dim() != k) {
        return Err(domain("a, b, c, d must act on the module"));
    }
    let g = gruss_e(x, y, e, tol)?;
    let gxx = gruss_e(x, x, e, tol)?;
    let gyy = gruss_e(y, y, e, tol)?;
    let half = Complex64::new(0.5, 0.0);
    let u = x - &e.act(&(a + b).scale(half));
    let v = y - &e.act(&(c + d).scale(half));

    let g_sq = &g.adjoint() * &g;
    let schwarz_rhs = gyy.scale_real(gxx.operator_norm());
    let major_rhs = v.gram().scale_real(u.norm().powi(2));
    let gn = g.operator_norm();

    let (mid_x, re_x) = midpoint_residual("thm31.midpoint_x", x, e, a, b, tol)?;
    let (mid_y, re_y) = midpoint_residual("thm31.midpoint_y", y, e, c, d, tol)?;

    let mut links = vec![
        InequalityVerdict::loewner("thm31.schwarz", &g_sq, &schwarz_rhs, tol)?,
        InequalityVerdict::loewner("thm31.majorize", &schwarz_rhs, &major_rhs, tol)?,
        InequalityVerdict::scalar("thm31.norm", gn * gn, u.norm().powi(2) * v.norm().powi(2), tol),
        mid_x,
        mid_y,
    ];

    if re_x.is_psd(tol)? && re_y.is_psd(tol)? {
        let ab = e.act(&(a - b));
        let cd = e.act(&(c - d));
        let ab_n = ab.norm();
        let cd_gram = cd.gram();
        links.push(InequalityVerdict::loewner(
            "thm31.quarter_sq",
            &g_sq,
            &cd_gram.scale_real(ab_n * ab_n / 16.0),
            tol,
        )?);
        let abs_g = g.abs()?;
        let abs_cd = AlgebraElement::from_matrix(abs_matrix(cd.matrix())?)?;
        links.push(InequalityVerdict::loewner(
            "thm31.quarter",
            &abs_g,
            &abs_cd.scale_real(ab_n / 4.0),
            tol,
        )?);
        links.push(InequalityVerdict::scalar(
            "thm31.quarter_norm",
            gn,
            ab_n * cd.norm() / 4.0,
            tol,
        ));
    }
    Ok(InequalityVerdict::chain("thm31", links, tol))
}

/// `sum p |x_i - a|^2 - |sum p x_i - a|^2` and `sum p |x_i - a|^2`.
fn translated_variance(
    xs: &ModuleTuple,
    p: &ProbabilityVector,
    a: &ModuleElement,
) -> Result<(AlgebraElement, AlgebraElement)> {
    if a.shape() != xs.shape() {
        return Err(domain("center must have the tuple shape"));
    }
    let k = xs.shape().1;
    let mut second = AlgebraElement::zeros(k);
    for (x, &w) in xs.iter().zip(p.weights()) {
        second = &second + &(x - a).gram().scale_real(w);
    }
    let spread = &xs.weighted_mean(p) - a;
    Ok((&second - &spread.gram(), second))
}

fn thm42(
    xs: &ModuleTuple,
    ys: &ModuleTuple,
    p: &ProbabilityVector,
    a: &ModuleElement,
    b: &ModuleElement,
    tol: Tolerance,
) -> Result<InequalityVerdict> {
    let g = gruss_p(xs, ys, p)?;
    let (mx, _) = translated_variance(xs, p, a)?;
    let (my, sy) = translated_variance(ys, p, b)?;
    let sum_norm_x: f64 = xs
        .iter()
        .zip(p.weights())
        .map(|(x, &w)| w * (x - a).norm().powi(2))
        .sum();
    let mid = my.scale_real(mx.operator_norm());
    Ok(InequalityVerdict::chain(
        "thm42",
        vec![
            InequalityVerdict::loewner("thm42.schwarz", &(&g.adjoint() * &g), &mid, tol)?,
            InequalityVerdict::loewner("thm42.final", &mid, &sy.scale_real(sum_norm_x), tol)?,
            InequalityVerdict::scalar("thm42.norm_link", mx.operator_norm(), sum_norm_x, tol),
        ],
        tol,
    ))
}

/// Largest `|x_i - a|`, checked against a declared radius when one is given.
fn certified_radius(xs: &ModuleTuple, a: &ModuleElement, declared: Option<f64>, name: &str, tol: Tolerance) -> Result<f64> {
    if a.shape() != xs.shape() {
        return Err(domain("center must have the tuple shape"));
    }
    let actual = xs.iter().map(|x| module_norm(&(x - a))).fold(0.0, f64::max);
    if let Some(r) = declared {
        if !(r.is_finite() && r >= 0.0) {
            return Err(domain(format!("declared radius {name} = {r} is not a finite nonnegative number")));
        }
        if actual > r + tol.threshold(r) {
            return Err(Error::Precondition(format!(
                "declared radius {name} = {r} is smaller than the largest distance {actual}"
            )));
        }
    }
    Ok(actual)
}

#[allow(clippy::too_many_arguments)]
fn cor43(
    xs: &ModuleTuple,
    ys: &ModuleTuple,
    p: &ProbabilityVector,
    a: &ModuleElement,
    b: &ModuleElement,
    r: Option<f64>,
    s: Option<f64>,
    tol: Tolerance,
) -> Result<InequalityVerdict> {
    let r = certified_radius(xs, a, r, "r", tol)?;
    let s = certified_radius(ys, b, s, "s", tol)?;
    let g = gruss_p(xs, ys, p)?;
    Ok(InequalityVerdict::scalar("cor43", g.operator_norm(), r * s, tol))
}

fn rem44(
    alphas: &ScalarCoefficients,
    xs: &ModuleTuple,
    p: &ProbabilityVector,
    a: &ModuleElement,
    r: Option<f64>,
    tol: Tolerance,
) -> Result<InequalityVerdict> {
    let r = certified_radius(xs, a, r, "r", tol)?;
    let lhs = weighted_alpha_combination(alphas, xs, p)?.norm();
    let mean = alphas.weighted_mean(p);
    let w = p.weights();
    let abs_dev: f64 = alphas.values().iter().zip(w).map(|(al, &wi)| wi * (al - mean).norm()).sum();
    let second: f64 = alphas.values().iter().zip(w).map(|(al, &wi)| wi * al.norm_sqr()).sum();
    let var = (second - mean.norm_sqr()).max(0.0);
    Ok(InequalityVerdict::chain(
        "rem44",
        vec![
            InequalityVerdict::scalar("rem44.first", lhs, r * abs_dev, tol),
            InequalityVerdict::scalar("rem44.second", r * abs_dev, r * var.sqrt(), tol),
        ],
        tol,
    ))
}

fn scalar12(xs: &ModuleTuple, ys: &ModuleTuple, bounds: [f64; 4], tol: Tolerance) -> Result<InequalityVerdict> {
    let [lo_a, hi_a, lo_b, hi_b] = bounds;
    if xs.shape() != (1, 1) || ys.shape() != (1, 1) {
        return Err(Error::Precondition("scalar bound needs k = m = 1".into()));
    }
    if !(lo_a <= hi_a && lo_b <= hi_b) || bounds.iter().any(|v| !v.is_finite()) {
        return Err(domain("bounds must be finite with lo <= hi"));
    }
    let check = |t: &ModuleTuple, lo: f64, hi: f64, name: &str| -> Result<()> {
        for (i, x) in t.iter().enumerate() {
            let z = x.matrix()[(0, 0)];
            let slack = tol.threshold(lo.abs().max(hi.abs()) + 1.0);
            if z.im.abs() > tol.atol || z.re < lo - slack || z.re > hi + slack {
                return Err(Error::Precondition(format!(
                    "{name}_{i} = {z} is not a real number in [{lo}, {hi}]"
                )));
            }
        }
        Ok(())
    };
    check(xs, lo_a, hi_a, "a")?;
    check(ys, lo_b, hi_b, "b")?;
    let p = ProbabilityVector::uniform(xs.len())?;
    let g = gruss_p(xs, ys, &p)?;
    Ok(InequalityVerdict::scalar(
        "scalar12",
        g.matrix()[(0, 0)].norm(),
        0.25 * (hi_a - lo_a) * (hi_b - lo_b),
        tol,
    ))
}

/// The two-point instance `x = (a + r e, a - r e)`, `y = (b + s e, b - s e)` with
/// uniform weights, on which the bound `|G_p| <= r s` is attained.
pub fn sharpness_demo(r: f64, s: f64, k: usize, m: usize) -> Result<(Instance, InequalityVerdict)> {
    if k == 0 || m == 0 {
        return Err(domain("dimensions must be positive"));
    }
    let cfg = GenConfig::with_seed(0);
    let mut sampler = cfg.substream("sharpness", 0).sampler();
    let a = sampler.module(m, k);
    let b = sampler.module(m, k);
    let pair = sharpness_pair(&a, &b, r, s, &cfg.substream("sharpness", 1))?;
    let inst = Instance::Pair {
        xs: pair.xs,
        ys: pair.ys,
        p: pair.p,
        a,
        b,
        r: Some(r),
        s: Some(s),
    };
    let v = check_gruss(GrussVariant::Cor43, &inst, Tolerance::default())?;
    Ok((inst, v))
}
