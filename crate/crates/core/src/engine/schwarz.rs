//! Schwarz-type inequalities for the `M_k`-valued inner product.
//!
//! The positive functional is the normalized trace and the C*-seminorm is the
//! operator norm.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{InequalityId, InequalityVerdict};
use crate::algebra::{AlgebraElement, Tolerance};
use crate::error::{Error, Result};
use crate::module::{inner_product, ModuleElement};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchwarzVariant {
    /// `<y,x><x,y> <= |<x,x>| <y,y>` (Loewner).
    Module,
    /// `|<x,y>|^2 <= |<x,x>| <y,y>` (Loewner), through the absolute value.
    Abs,
    /// `|phi<x,y>|^2 <= phi<x,x> phi<y,y>`.
    Functional,
    /// `phi(<y,x><x,y>) <= phi<x,x> r<y,y>`.
    Radius,
    /// `gamma(<x,y>)^2 <= gamma<x,x> gamma<y,y>`.
    Seminorm,
}

impl SchwarzVariant {
    pub const ALL: [SchwarzVariant; 5] = [
        SchwarzVariant::Module,
        SchwarzVariant::Abs,
        SchwarzVariant::Functional,
        SchwarzVariant::Radius,
        SchwarzVariant::Seminorm,
    ];

    pub fn id(self) -> InequalityId {
        match self {
            SchwarzVariant::Module => InequalityId::SchwarzModule,
            SchwarzVariant::Abs => InequalityId::SchwarzAbs,
            SchwarzVariant::Functional => InequalityId::SchwarzFunctional,
            SchwarzVariant::Radius => InequalityId::SchwarzRadius,
            SchwarzVariant::Seminorm => InequalityId::SchwarzSeminorm,
        }
    }

    pub fn from_id(id: InequalityId) -> Option<Self> {
        SchwarzVariant::ALL.into_iter().find(|v| v.id() == id)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SchwarzVariant::Module => "module",
            SchwarzVariant::Abs => "abs",
            SchwarzVariant::Functional => "functional",
            SchwarzVariant::Radius => "radius",
            SchwarzVariant::Seminorm => "seminorm",
        }
    }
}

impl fmt::Display for SchwarzVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SchwarzVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SchwarzVariant::ALL
            .into_iter()
            .find(|v| v.as_str() == s)
            .ok_or_else(|| Error::Usage(format!("unknown Schwarz variant '{s}'")))
    }
}

/// Normalized trace, a state on `M_k`.
pub fn trace_state(a: &AlgebraElement) -> Complex64 {
    a.trace() / a.dim() as f64
}

pub fn check_schwarz(
    variant: SchwarzVariant,
    x: &ModuleElement,
    y: &ModuleElement,
    tol: Tolerance,
) -> Result<InequalityVerdict> {
    let xy = inner_product(x, y)?;
    let xx = x.gram();
    let yy = y.gram();
    let id = variant.id().as_str();
    let v = match variant {
        SchwarzVariant::Module => {
            let lhs = &xy.adjoint() * &xy;
            InequalityVerdict::loewner(id, &lhs, &yy.scale_real(xx.operator_norm()), tol)?
        }
        SchwarzVariant::Abs => {
            let a = xy.abs()?;
            let lhs = &a * &a;
            InequalityVerdict::loewner(id, &lhs, &yy.scale_real(xx.operator_norm()), tol)?
        }
        SchwarzVariant::Functional => {
            let lhs = trace_state(&xy).norm_sqr();
            let rhs = trace_state(&xx).re * trace_state(&yy).re;
            InequalityVerdict::scalar(id, lhs, rhs, tol)
        }
        SchwarzVariant::Radius => {
            let lhs = trace_state(&(&xy.adjoint() * &xy)).re;
            let rhs = trace_state(&xx).re * yy.spectral_radius()?;
            InequalityVerdict::scalar(id, lhs, rhs, tol)
        }
        SchwarzVariant::Seminorm => {
            let g = xy.operator_norm();
            InequalityVerdict::scalar(id, g * g, xx.operator_norm() * yy.operator_norm(), tol)
        }
    };
    Ok(v)
}
