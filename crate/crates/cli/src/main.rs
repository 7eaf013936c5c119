use std::path::PathBuf;
use std::process::ExitCode;

use chrono::{SecondsFormat, Utc};
use clap::Parser;
use serde_json::json;

mod args;
mod commands;
mod error;
mod report;

use args::{Cli, Command, Format, TransformKind};
use error::CliResult;
use report::{
    write_csv, BoundRecord, RunManifest, RunReport, Summary, SummaryRow, TransformRow, VerdictEntry, SCHEMA_VERSION,
};

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors and 0 for --help/--version
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("gruss: {e}");
            e.exit_code()
        }
    }
}

fn now() -> String {
    Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true)
}

/// Runs the command, writes its report and returns whether everything passed.
fn run(cli: &Cli) -> CliResult<bool> {
    let c = &cli.common;
    commands::tolerance(c)?;
    let started = now();
    let (name, params, body) = match &cli.command {
        Command::Verify { suite, trials, replay } => {
            let params = json!({ "suite": suite, "trials": trials, "replay": replay });
            let entries = match replay {
                Some(path) => commands::replay_file(path)?,
                None => commands::verify(c, *suite, *trials)?,
            };
            ("verify", params, Body::Verdicts(entries))
        }
        Command::Fuzz { id, trials } => {
            let params = json!({ "id": id, "trials": trials });
            ("fuzz", params, Body::Verdicts(commands::fuzz(c, id, *trials)?))
        }
        Command::Transforms { kind, m, omega } => {
            let params = json!({ "kind": kind, "m": m, "omega": omega });
            let recs = commands::transforms(c, *kind, *m, omega)?;
            let id = match kind {
                TransformKind::Fourier => "eq45",
                TransformKind::Mellin => "eq46",
            };
            ("transforms", params, Body::Bounds(recs, id))
        }
        Command::Sharpness { r, s } => {
            let params = json!({ "r": r, "s": s });
            ("sharpness", params, Body::Verdicts(commands::sharpness(c, *r, *s)?))
        }
    };

    let mut parameters = serde_json::to_value(c).map_err(error::CliError::runtime)?;
    if let (Some(obj), Some(extra)) = (parameters.as_object_mut(), params.as_object()) {
        obj.extend(extra.clone());
    }
    let summary = body.summary();
    let passed = summary.passed;
    let manifest = RunManifest {
        command: name.to_string(),
        parameters,
        seed: c.seed,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        started,
        finished: now(),
        summary,
    };

    if !c.quiet {
        body.print();
        let s = &manifest.summary;
        println!(
            "{}: {} evaluated, {} failed, {} skipped (seed {})",
            if passed { "PASS" } else { "FAIL" },
            s.evaluated,
            s.failures,
            s.skipped,
            c.seed
        );
    }

    let ext = match c.format {
        Format::Json => "json",
        Format::Csv => "csv",
    };
    let path = c.output.clone().unwrap_or_else(|| PathBuf::from(format!("gruss-{name}.{ext}")));
    match c.format {
        Format::Json => body.into_report(manifest).write_json(&path)?,
        Format::Csv => match &body {
            Body::Verdicts(entries) => {
                let rows: Vec<SummaryRow> = entries.iter().filter_map(|e| SummaryRow::from_entry(e, c.seed)).collect();
                write_csv(&path, &rows)?
            }
            Body::Bounds(..) => write_csv(&path, &body.rows())?,
        },
    }
    if !c.quiet {
        println!("report: {}", path.display());
    }
    Ok(passed)
}

enum Body {
    Verdicts(Vec<VerdictEntry>),
    /// Grid records and the surrogate inequality id for skipped rows.
    Bounds(Vec<BoundRecord>, &'static str),
}

impl Body {
    fn rows(&self) -> Vec<TransformRow> {
        match self {
            Body::Bounds(recs, id) => recs.iter().flat_map(|r| TransformRow::from_record(r, id)).collect(),
            Body::Verdicts(_) => Vec::new(),
        }
    }

    fn summary(&self) -> Summary {
        match self {
            Body::Verdicts(entries) => {
                let failures = entries.iter().filter(|e| !e.passed()).count() as u64;
                Summary::new(entries.len() as u64, failures, 0)
            }
            Body::Bounds(..) => {
                let rows = self.rows();
                let skipped = rows.iter().filter(|r| r.loewner_holds.is_none()).count() as u64;
                let failures = rows.iter().filter(|r| r.loewner_holds == Some(false)).count() as u64;
                Summary::new(rows.len() as u64 - skipped, failures, skipped)
            }
        }
    }

    fn print(&self) {
        match self {
            Body::Verdicts(entries) => {
                for e in entries {
                    let mark = if e.passed() { "ok  " } else { "FAIL" };
                    match e {
                        VerdictEntry::Fuzz(r) => println!(
                            "{mark} {:<20} trials {:>6}  failures {:>4}  min slack {:>11.3e}",
                            r.inequality_id.as_str(),
                            r.trials,
                            r.failures,
                            r.min_slack
                        ),
                        VerdictEntry::Check(k) => println!(
                            "{mark} {:<20} points {:>6}  failures {:>4}  max error {:>11.3e}  (tol {:.0e}, {} skipped)",
                            k.name, k.points, k.failures, k.max_error, k.tolerance, k.skipped
                        ),
                        VerdictEntry::Replay(r) => println!(
                            "{mark} replay {:<11} trial {:>6}  recorded {:>11.3e}  replayed {:>11.3e}",
                            r.inequality_id, r.trial, r.recorded_slack, r.replayed_slack
                        ),
                        VerdictEntry::Bound(_) => {}
                    }
                }
            }
            Body::Bounds(..) => {
                println!(
                    "{:<6} {:>4} {:>4} {:>8} {:>10} {:>10} {:<9} status",
                    "id", "n", "m", "omega", "tightness", "lhs", "tuple"
                );
                for r in self.rows() {
                    let opt = |v: Option<f64>, p: usize| v.map_or("-".to_string(), |x| format!("{x:.p$}"));
                    println!(
                        "{:<6} {:>4} {:>4} {:>8} {:>10} {:>10} {:<9} {}",
                        r.inequality_id,
                        r.n,
                        r.m,
                        opt(r.omega, 3),
                        opt(r.tightness, 6),
                        r.lhs_norm.map_or("-".to_string(), |x| format!("{x:.3e}")),
                        r.tuple,
                        r.status
                    );
                }
            }
        }
    }

    fn into_report(self, manifest: RunManifest) -> RunReport {
        let verdicts = match self {
            Body::Verdicts(v) => v,
            Body::Bounds(recs, _) => recs.into_iter().map(VerdictEntry::Bound).collect(),
        };
        RunReport {
            schema_version: SCHEMA_VERSION,
            manifest,
            verdicts,
        }
    }
}
