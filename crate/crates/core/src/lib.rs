//! Grüss-type inequalities in Hilbert C*-modules over `M_k(C)`.
//!
//! Module elements are `m x k` complex matrices with `<x, y> = x* y`. The crate
//! evaluates the Grüss functionals, checks the associated inequalities with a
//! signed slack, generates seeded random instances and bounds the error of
//! rank-one approximations to discrete Fourier and Mellin transforms.

pub mod algebra;
pub mod engine;
mod error;
pub mod gen;
pub mod interchange;
pub mod module;
pub mod transforms;

pub use algebra::{loewner_leq, loewner_slack, AlgebraElement, Tolerance};
pub use engine::{FuzzReport, InequalityId, InequalityVerdict, Instance};
pub use error::{Error, Result};
pub use gen::GenConfig;
pub use module::{ModuleElement, ModuleTuple, ProbabilityVector, ScalarCoefficients};
