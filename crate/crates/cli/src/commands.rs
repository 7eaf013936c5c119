use gruss_core::engine::{
    check_gruss, fuzz_campaign, real_scalars, replay, sharpness_demo, Dims, GrussVariant, InequalityId,
};
use gruss_core::transforms::{
    fourier_bound_check, fourier_chain_check, fourier_kernel_direct, fourier_kernel_sum, mellin_bound_check,
    mellin_closed_form, mellin_coefficient, TransformParams, DEFAULT_KERNEL_GUARD,
};
use gruss_core::{Error, GenConfig, Instance, ModuleTuple, Tolerance};

use crate::args::{Common, Span, Suite, TransformKind};
use crate::error::{CliError, CliResult};
use crate::report::{load_fuzz_reports, BoundRecord, CheckRecord, ReplayRecord, VerdictEntry, SINGULAR_STATUS};

/// Replayed slack must match the recorded one this closely.
pub const REPLAY_TOLERANCE: f64 = 1e-12;

pub fn tolerance(c: &Common) -> CliResult<Tolerance> {
    Tolerance::new(c.rtol, c.atol).map_err(|e| CliError::Usage(e.to_string()))
}

fn dims(c: &Common, k: [usize; 2], m: [usize; 2], n: [usize; 2]) -> CliResult<Dims> {
    let d = Dims {
        k: c.k.map_or(k, Span::pair),
        m: c.m_dim.map_or(m, Span::pair),
        n: c.n.map_or(n, Span::pair),
    };
    d.validate()?;
    Ok(d)
}

fn campaign(ids: &[InequalityId], trials: u64, seed: u64, d: &Dims, tol: Tolerance) -> CliResult<Vec<VerdictEntry>> {
    ids.iter()
        .map(|&id| Ok(VerdictEntry::Fuzz(fuzz_campaign(id, trials, seed, d, tol)?)))
        .collect()
}

pub fn fuzz(c: &Common, id: &str, trials: u64) -> CliResult<Vec<VerdictEntry>> {
    let id: InequalityId = id.parse()?;
    let d = dims(c, [1, 4], [1, 4], [1, 8])?;
    campaign(&[id], trials, c.seed, &d, tolerance(c)?)
}

pub fn verify(c: &Common, suite: Suite, trials: u64) -> CliResult<Vec<VerdictEntry>> {
    use InequalityId::*;
    let tol = tolerance(c)?;
    let mut out = Vec::new();
    let all = suite == Suite::All;
    if all || suite == Suite::Schwarz {
        let d = dims(c, [1, 4], [1, 4], [1, 8])?;
        out.extend(campaign(
            &[SchwarzModule, SchwarzAbs, SchwarzFunctional, SchwarzRadius, SchwarzSeminorm],
            trials,
            c.seed,
            &d,
            tol,
        )?);
    }
    if all || suite == Suite::Identities {
        let d = dims(c, [1, 4], [1, 4], [1, 8])?;
        out.extend(campaign(&[Lemma31, Lemma41], trials, c.seed, &d, tol)?);
    }
    if all || suite == Suite::Gruss {
        let d = dims(c, [1, 4], [1, 4], [1, 8])?;
        out.extend(campaign(&[Thm31, Thm42, Cor43, Rem44, Scalar12, Eq43], trials, c.seed, &d, tol)?);
        out.push(VerdictEntry::Check(sharpness_grid()?));
        out.push(VerdictEntry::Check(scalar_extremal(tol)?));
    }
    if all || suite == Suite::Transforms {
        let d = dims(c, [2, 2], [1, 4], [1, 16])?;
        out.extend(campaign(&[Eq45, Eq46], trials, c.seed, &d, tol)?);
        out.push(VerdictEntry::Check(kernel_grid()?));
        out.push(VerdictEntry::Check(mellin_closed_forms()?));
    }
    Ok(out)
}

/// Largest admissible `|ratio - 1|` on the extremal instance.
pub const SHARPNESS_TOLERANCE: f64 = 1e-9;

/// `||G_p|| / (r s)` on the extremal instance, over a grid of radii and dimensions.
pub fn sharpness_grid() -> CliResult<CheckRecord> {
    let mut points = 0;
    let mut failures = 0;
    let mut max_error: f64 = 0.0;
    for (r, s) in [(1.0, 1.0), (2.0, 3.0), (0.1, 10.0)] {
        for k in [1, 2, 4] {
            for m in [1, 2, 4] {
                let (_, v) = sharpness_demo(r, s, k, m)?;
                let err = (v.lhs_scalar / (r * s) - 1.0).abs();
                points += 1;
                if !within(err, SHARPNESS_TOLERANCE) || !v.holds {
                    failures += 1;
                }
                max_error = max_error.max(err);
            }
        }
    }
    Ok(check("sharpness", points, failures, 0, max_error, SHARPNESS_TOLERANCE))
}

pub const EXTREMAL_TOLERANCE: f64 = 1e-12;

/// Alternating two-valued scalar sequences attain `(1/4)(A - a)(B - b)`.
pub fn scalar_extremal(tol: Tolerance) -> CliResult<CheckRecord> {
    let mut points = 0;
    let mut failures = 0;
    let mut max_error: f64 = 0.0;
    for (lo_a, hi_a, lo_b, hi_b) in [(0.0, 1.0, 0.0, 1.0), (-2.0, 3.0, 1.0, 4.5), (-0.5, 0.25, -7.0, -1.0)] {
        for n in (2..=20).step_by(2) {
            let xs: Vec<f64> = (0..n).map(|i| if i % 2 == 0 { lo_a } else { hi_a }).collect();
            let ys: Vec<f64> = (0..n).map(|i| if i % 2 == 0 { lo_b } else { hi_b }).collect();
            let inst = Instance::Scalar12 {
                xs: real_scalars(&xs),
                ys: real_scalars(&ys),
                lo_a,
                hi_a,
                lo_b,
                hi_b,
            };
            let v = check_gruss(GrussVariant::Scalar12, &inst, tol)?;
            let err = (v.lhs_scalar - v.rhs_scalar).abs();
            points += 1;
            if !within(err, EXTREMAL_TOLERANCE) || !v.holds {
                failures += 1;
            }
            max_error = max_error.max(err);
        }
    }
    Ok(check("scalar_extremal", points, failures, 0, max_error, EXTREMAL_TOLERANCE))
}

/// Closed-form kernel against direct summation, per unit of n.
pub const KERNEL_TOLERANCE: f64 = 1e-12;

pub fn kernel_grid() -> CliResult<CheckRecord> {
    let mut points = 0;
    let mut failures = 0;
    let mut skipped = 0;
    let mut max_error: f64 = 0.0;
    for i in 0..=15 {
        let omega = f64::from(i) / 10.0;
        for n in 1..=64 {
            for m in 1..=n {
                let params = TransformParams::new(omega, m, n)?;
                match fourier_kernel_sum(&params, DEFAULT_KERNEL_GUARD) {
                    Ok(k) => {
                        let err = (k - fourier_kernel_direct(&params)).norm() / n as f64;
                        points += 1;
                        if !within(err, KERNEL_TOLERANCE) {
                            failures += 1;
                        }
                        max_error = max_error.max(err);
                    }
                    Err(Error::SingularKernel { .. }) => skipped += 1,
                    Err(e) => return Err(e.into()),
                }
            }
        }
    }
    Ok(check("fourier_kernel", points, failures, skipped, max_error, KERNEL_TOLERANCE))
}

pub const MELLIN_CLOSED_FORM_MAX_N: u64 = 1000;

pub fn mellin_closed_forms() -> CliResult<CheckRecord> {
    let mut points = 0;
    let mut failures = 0;
    for m in [2u32, 3] {
        for n in 1..=MELLIN_CLOSED_FORM_MAX_N {
            points += 1;
            if mellin_closed_form(m, n) != Some(mellin_coefficient(m, n)?) {
                failures += 1;
            }
        }
    }
    Ok(check("mellin_closed_forms", points, failures, 0, failures as f64, 0.0))
}

/// False for NaN, so an undefined error never passes.
fn within(err: f64, limit: f64) -> bool {
    err <= limit
}

fn check(name: &str, points: u64, failures: u64, skipped: u64, max_error: f64, tolerance: f64) -> CheckRecord {
    CheckRecord {
        name: name.to_string(),
        points,
        failures,
        skipped,
        max_error,
        tolerance,
        passed: failures == 0,
    }
}

pub fn replay_file(path: &std::path::Path) -> CliResult<Vec<VerdictEntry>> {
    let reports = load_fuzz_reports(path)?;
    let mut out = Vec::new();
    for r in &reports {
        let Some(wc) = &r.worst_case else { continue };
        let v = replay(r)?;
        out.push(VerdictEntry::Replay(ReplayRecord {
            inequality_id: r.inequality_id.to_string(),
            trial: wc.trial,
            recorded_slack: wc.verdict.slack,
            replayed_slack: v.slack,
            reproduced: (v.slack - wc.verdict.slack).abs() <= REPLAY_TOLERANCE && v.holds == wc.verdict.holds,
            holds: v.holds,
        }));
    }
    if out.is_empty() {
        return Err(CliError::Usage(format!("{}: no worst cases to replay", path.display())));
    }
    Ok(out)
}

pub fn sharpness(c: &Common, r: f64, s: f64) -> CliResult<Vec<VerdictEntry>> {
    if !(r.is_finite() && s.is_finite() && r > 0.0 && s > 0.0) {
        return Err(CliError::Usage("radii must be positive and finite".into()));
    }
    let k = c.k.map_or(2, |s| s.hi);
    let m = c.m_dim.map_or(2, |s| s.hi);
    let (_, v) = sharpness_demo(r, s, k, m)?;
    let err = (v.lhs_scalar / (r * s) - 1.0).abs();
    let failures = u64::from(!within(err, SHARPNESS_TOLERANCE) || !v.holds);
    Ok(vec![VerdictEntry::Check(check(
        &format!("sharpness r={r} s={s} k={k} m={m}"),
        1,
        failures,
        0,
        err,
        SHARPNESS_TOLERANCE,
    ))])
}

/// Grid points in canonical order: n, then m, then omega as given, then tuple.
pub fn transforms(c: &Common, kind: TransformKind, m_span: Option<Span>, omegas: &[f64]) -> CliResult<Vec<BoundRecord>> {
    let tol = tolerance(c)?;
    match kind {
        TransformKind::Fourier if omegas.is_empty() => {
            return Err(CliError::Usage("fourier needs at least one --omega".into()))
        }
        TransformKind::Mellin if !omegas.is_empty() => {
            return Err(CliError::Usage("--omega only applies to fourier".into()))
        }
        _ => {}
    }
    if let Some(w) = omegas.iter().find(|w| !w.is_finite()) {
        return Err(CliError::Usage(format!("omega {w} is not finite")));
    }
    let n_span = c.n.unwrap_or(Span { lo: 1, hi: 8 });
    let k_span = c.k.unwrap_or(Span::single(2));
    let rows_span = c.m_dim.unwrap_or(Span::single(2));
    let omega_axis: Vec<Option<f64>> = match kind {
        TransformKind::Fourier => omegas.iter().copied().map(Some).collect(),
        TransformKind::Mellin => vec![None],
    };

    let mut out = Vec::new();
    for n in n_span.values() {
        let ms = m_span.unwrap_or(Span { lo: 1, hi: n });
        for m in ms.values().filter(|&m| m <= n) {
            for &omega in &omega_axis {
                for tuple in ["random", "constant"] {
                    let tag = format!("transforms:{n}:{m}:{:x}:{tuple}", omega.unwrap_or(0.0).to_bits());
                    let mut s = GenConfig::with_seed(c.seed).substream(&tag, 0).sampler();
                    let k = s.index(k_span.lo, k_span.hi);
                    let rows = s.index(rows_span.lo, rows_span.hi);
                    let a_s = if tuple == "constant" {
                        let x = s.module(rows, k);
                        ModuleTuple::new(vec![x; n])?
                    } else {
                        s.tuple(n, rows, k)
                    };
                    let b_s = s.tuple(n, rows, k);
                    let a = s.module(rows, k);
                    let b = s.module(rows, k);
                    out.push(match omega {
                        Some(w) => fourier_point(&a_s, &b_s, &a, &b, TransformParams::new(w, m, n)?, tuple, tol)?,
                        None => {
                            let mb = mellin_bound_check(&a_s, &b_s, &a, &b, m, tol)?;
                            let ok = mb.chain.loewner_holds && mb.surrogate.loewner_holds;
                            BoundRecord {
                                n,
                                m,
                                omega: None,
                                tuple: tuple.into(),
                                chain: mb.chain,
                                surrogate: Some(mb.surrogate),
                                coefficient: Some(mb.coefficient),
                                status: status(ok),
                            }
                        }
                    });
                }
            }
        }
    }
    if out.is_empty() {
        return Err(CliError::Usage(format!("no grid points: --m must allow some m <= n in {n_span}")));
    }
    Ok(out)
}

fn status(ok: bool) -> String {
    if ok { "ok" } else { "fail" }.to_string()
}

fn fourier_point(
    a_s: &ModuleTuple,
    b_s: &ModuleTuple,
    a: &gruss_core::ModuleElement,
    b: &gruss_core::ModuleElement,
    params: TransformParams,
    tuple: &str,
    tol: Tolerance,
) -> CliResult<BoundRecord> {
    let base = |chain, surrogate, coefficient, status| BoundRecord {
        n: params.n,
        m: params.m,
        omega: Some(params.omega),
        tuple: tuple.into(),
        chain,
        surrogate,
        coefficient,
        status,
    };
    match fourier_bound_check(a_s, b_s, a, b, &params, tol) {
        Ok(fb) => {
            let ratio = params.sin_ratio(DEFAULT_KERNEL_GUARD)?;
            let n = params.n as f64;
            let ok = fb.chain.loewner_holds && fb.surrogate.loewner_holds;
            Ok(base(fb.chain, Some(fb.surrogate), Some((n * n - ratio * ratio).to_string()), status(ok)))
        }
        Err(Error::SingularKernel { .. }) => {
            // the bilinear chain needs no closed form, so it is still reported
            let chain = fourier_chain_check(a_s, b_s, a, b, &params, tol)?;
            let st = if chain.loewner_holds { SINGULAR_STATUS.to_string() } else { status(false) };
            Ok(base(chain, None, None, st))
        }
        Err(e) => Err(e.into()),
    }
}
