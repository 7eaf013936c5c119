use serde::{Deserialize, Serialize};

use crate::algebra::{loewner_slack, AlgebraElement, Tolerance};
use crate::error::Result;

/// How a verdict's sides were compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictForm {
    /// `lhs <= rhs` in the Loewner order; slack is `lambda_min(rhs - lhs)`.
    Loewner,
    /// Real inequality `lhs <= rhs`; slack is `rhs - lhs`.
    Scalar,
    /// Equality of two expressions; lhs is the residual norm, rhs is zero.
    Identity,
    /// Conjunction of links; slack and scale come from the weakest link.
    Chain,
}

/// Outcome of checking one inequality on one instance.
///
/// `holds` is exactly `slack >= -(tol_used.atol + tol_used.rtol * scale)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityVerdict {
    pub inequality_id: String,
    pub form: VerdictForm,
    pub lhs_scalar: f64,
    pub rhs_scalar: f64,
    pub slack: f64,
    pub scale: f64,
    pub holds: bool,
    pub tol_used: Tolerance,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub links: Vec<InequalityVerdict>,
}

impl InequalityVerdict {
    fn finish(
        id: impl Into<String>,
        form: VerdictForm,
        lhs: f64,
        rhs: f64,
        slack: f64,
        scale: f64,
        tol: Tolerance,
    ) -> Self {
        InequalityVerdict {
            inequality_id: id.into(),
            form,
            lhs_scalar: lhs,
            rhs_scalar: rhs,
            slack,
            scale,
            holds: slack >= -tol.threshold(scale),
            tol_used: tol,
            links: Vec::new(),
        }
    }

    /// `lhs <= rhs` as Hermitian elements.
    pub fn loewner(
        id: impl Into<String>,
        lhs: &AlgebraElement,
        rhs: &AlgebraElement,
        tol: Tolerance,
    ) -> Result<Self> {
        let slack = loewner_slack(lhs, rhs)?;
        let (l, r) = (lhs.operator_norm(), rhs.operator_norm());
        Ok(Self::finish(id, VerdictForm::Loewner, l, r, slack, l.max(r) + 1.0, tol))
    }

    pub fn scalar(id: impl Into<String>, lhs: f64, rhs: f64, tol: Tolerance) -> Self {
        let scale = lhs.abs().max(rhs.abs()) + 1.0;
        Self::finish(id, VerdictForm::Scalar, lhs, rhs, rhs - lhs, scale, tol)
    }

    /// Residual `|left - right|` against zero, at the scale of both sides.
    pub fn identity(
        id: impl Into<String>,
        left: &nalgebra::DMatrix<num_complex::Complex64>,
        right: &nalgebra::DMatrix<num_complex::Complex64>,
        tol: Tolerance,
    ) -> Self {
        let residual = crate::algebra::spectral_norm(&(left - right));
        let scale = crate::algebra::spectral_norm(left).max(crate::algebra::spectral_norm(right)) + 1.0;
        Self::finish(id, VerdictForm::Identity, residual, 0.0, -residual, scale, tol)
    }

    /// All links must hold. The reported slack and scale are those of the
    /// link closest to failing (smallest `slack + threshold(scale)`).
    pub fn chain(id: impl Into<String>, links: Vec<InequalityVerdict>, tol: Tolerance) -> Self {
        assert!(!links.is_empty(), "a chain needs at least one link");
        let margin = |v: &InequalityVerdict| v.slack + v.tol_used.threshold(v.scale);
        let worst = links
            .iter()
            .min_by(|a, b| margin(a).total_cmp(&margin(b)))
            .expect("nonempty");
        let mut v = Self::finish(
            id,
            VerdictForm::Chain,
            worst.lhs_scalar,
            worst.rhs_scalar,
            worst.slack,
            worst.scale,
            tol,
        );
        v.holds = links.iter().all(|l| l.holds);
        v.links = links;
        v
    }

    /// Find a link by id, searching depth first.
    pub fn link(&self, id: &str) -> Option<&InequalityVerdict> {
        self.links.iter().find_map(|l| {
            if l.inequality_id == id {
                Some(l)
            } else {
                l.link(id)
            }
        })
    }
}
