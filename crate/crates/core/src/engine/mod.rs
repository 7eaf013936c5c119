//! Checkable verdicts for the Schwarz and Grüss inequalities, identity checks,
//! the extremal construction and fuzz campaigns.

mod fuzz;
mod gruss;
mod identities;
mod instance;
mod schwarz;
mod verdict;

pub use fuzz::{evaluate, fuzz_campaign, replay, FuzzReport, WorstCase};
pub use gruss::{check_gruss, sharpness_demo, GrussVariant};
pub use identities::{check_identities, IdentitySet};
pub use instance::{generate, real_scalars, Dims, InequalityId, Instance};
pub use schwarz::{check_schwarz, trace_state, SchwarzVariant};
pub use verdict::{InequalityVerdict, VerdictForm};
