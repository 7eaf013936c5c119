//! Seeded randomized campaigns over generated instances.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{check_gruss, check_identities, check_schwarz, generate, Dims, GrussVariant, IdentitySet};
use super::{InequalityId, InequalityVerdict, Instance, SchwarzVariant};
use crate::algebra::{AlgebraElement, Tolerance};
use crate::error::{Error, Result};
use crate::gen::GenConfig;
use crate::transforms::{alpha_bound_check, fourier_bound_check, mellin_bound_check};

/// The trial with the smallest slack, with everything needed to replay it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorstCase {
    pub trial: u64,
    pub config: GenConfig,
    pub instance: Instance,
    pub verdict: InequalityVerdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzReport {
    pub inequality_id: InequalityId,
    pub trials: u64,
    pub failures: u64,
    pub min_slack: f64,
    pub worst_case: Option<WorstCase>,
    pub seed: u64,
    pub dims: Dims,
    pub tol: Tolerance,
}

/// Evaluate inequality `id` on `instance`.
pub fn evaluate(id: InequalityId, instance: &Instance, tol: Tolerance) -> Result<InequalityVerdict> {
    if let Some(v) = SchwarzVariant::from_id(id) {
        return match instance {
            Instance::Schwarz { x, y } => check_schwarz(v, x, y, tol),
            other => Err(mismatch(id, other)),
        };
    }
    if let Some(v) = GrussVariant::from_id(id) {
        return check_gruss(v, instance, tol);
    }
    match (id, instance) {
        (InequalityId::Lemma31, _) => {
            Ok(InequalityVerdict::chain(id.as_str(), check_identities(IdentitySet::Lemma31, instance, tol)?, tol))
        }
        (InequalityId::Lemma41, _) => {
            Ok(InequalityVerdict::chain(id.as_str(), check_identities(IdentitySet::Lemma41, instance, tol)?, tol))
        }
        (InequalityId::Eq43, Instance::Alpha { alphas, ops, a, b, p }) => {
            let r = alpha_bound_check(alphas, ops, a, b, p, tol)?;
            Ok(InequalityVerdict::chain(id.as_str(), vec![r.translated.verdict, r.centered.verdict], tol))
        }
        (InequalityId::Eq45, Instance::Fourier { ops_a, ops_b, a, b, params }) => {
            let r = fourier_bound_check(ops_a, ops_b, a, b, params, tol)?;
            Ok(InequalityVerdict::chain(id.as_str(), vec![r.chain.verdict, r.surrogate.verdict], tol))
        }
        (InequalityId::Eq46, Instance::Mellin { ops_a, ops_b, a, b, m }) => {
            let r = mellin_bound_check(ops_a, ops_b, a, b, *m, tol)?;
            let mut links = vec![r.chain.verdict, r.surrogate.verdict];
            if let Some(closed) = &r.closed_form {
                let as_f64 = |s: &str| s.parse::<f64>().unwrap_or(f64::INFINITY);
                let exact = usize::from(r.closed_form_matches != Some(true)) as f64;
                let scale = as_f64(&r.coefficient).max(as_f64(closed));
                links.push(InequalityVerdict::identity(
                    "eq46.closed_form",
                    AlgebraElement::real_diagonal(&[exact * scale.max(1.0)]).matrix(),
                    AlgebraElement::zeros(1).matrix(),
                    tol,
                ));
            }
            Ok(InequalityVerdict::chain(id.as_str(), links, tol))
        }
        (_, other) => Err(mismatch(id, other)),
    }
}

fn mismatch(id: InequalityId, inst: &Instance) -> Error {
    Error::Usage(format!("{id} cannot be evaluated on a '{}' instance", inst.kind()))
}

fn trial_config(id: InequalityId, seed: u64, trial: u64) -> GenConfig {
    GenConfig::with_seed(seed).substream(id.as_str(), trial)
}

/// Run `trials` independent trials of `id`. Trials run in parallel; each
/// draws from its own substream so the report does not depend on scheduling.
pub fn fuzz_campaign(
    id: InequalityId,
    trials: u64,
    seed: u64,
    dims: &Dims,
    tol: Tolerance,
) -> Result<FuzzReport> {
    if trials == 0 {
        return Err(Error::Usage("a fuzz campaign needs at least one trial".into()));
    }
    dims.validate()?;
    let outcomes: Vec<(f64, bool)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let inst = generate(id, dims, &trial_config(id, seed, t))?;
            let v = evaluate(id, &inst, tol)?;
            Ok((v.slack, v.holds))
        })
        .collect::<Result<_>>()?;

    let failures = outcomes.iter().filter(|(_, h)| !h).count() as u64;
    // first index wins ties, so the choice is schedule independent
    let (worst, min_slack) = outcomes
        .iter()
        .enumerate()
        .fold((0usize, f64::INFINITY), |(bi, bs), (i, &(s, _))| {
            if s < bs || (bs.is_nan() && !s.is_nan()) {
                (i, s)
            } else {
                (bi, bs)
            }
        });
    let config = trial_config(id, seed, worst as u64);
    let instance = generate(id, dims, &config)?;
    let verdict = evaluate(id, &instance, tol)?;
    Ok(FuzzReport {
        inequality_id: id,
        trials,
        failures,
        min_slack,
        worst_case: Some(WorstCase {
            trial: worst as u64,
            config,
            instance,
            verdict,
        }),
        seed,
        dims: *dims,
        tol,
    })
}

/// Re-evaluate a report's worst case from its serialized instance.
pub fn replay(report: &FuzzReport) -> Result<InequalityVerdict> {
    let wc = report
        .worst_case
        .as_ref()
        .ok_or_else(|| Error::Usage("report has no worst case to replay".into()))?;
    evaluate(report.inequality_id, &wc.instance, wc.verdict.tol_used)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_trials_is_usage_error() {
        assert!(matches!(
            fuzz_campaign(InequalityId::Thm42, 0, 1, &Dims::default(), Tolerance::default()),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn every_inequality_survives_a_short_campaign() {
        for id in InequalityId::ALL {
            let r = fuzz_campaign(id, 40, 9, &Dims::default(), Tolerance::default()).unwrap();
            assert_eq!(r.failures, 0, "{id}: {:?}", r.worst_case);
            let wc = r.worst_case.as_ref().unwrap();
            assert_eq!(wc.verdict.slack, r.min_slack);
            assert_eq!(replay(&r).unwrap().slack, r.min_slack);
        }
    }

    #[test]
    fn mismatched_instance_is_rejected() {
        let x = crate::module::ModuleElement::zeros(1, 1);
        let inst = Instance::Schwarz { x: x.clone(), y: x };
        assert!(matches!(evaluate(InequalityId::Eq45, &inst, Tolerance::default()), Err(Error::Usage(_))));
    }
}
