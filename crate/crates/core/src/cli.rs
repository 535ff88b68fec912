// SPDX-License-Identifier: Apache-2.0

//! Command-line front end: `report`, `survey` and `verify`.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::Error;
use crate::report::{build_report, Report, ReportOptions, Source};
use crate::ring::{ProductRing, RingSpec, DEFAULT_CAP};
use crate::survey::{survey, SurveyRow};
use crate::verify::{verify_rings, verify_up_to, VerifyOptions, VerifyReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;
pub const EXIT_CAP: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "quct",
    version,
    about = "Spectra and invariants of quadratic unitary Cayley graphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Largest ring order the tool will build.
    #[arg(long, env = "QUCT_CAP", default_value_t = DEFAULT_CAP)]
    pub cap: u64,
    /// Write output here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Spectrum and invariants of one ring.
    Report {
        /// Ring such as "Z45", "F9", "F3*F5" or "F5[x]/(x^2)".
        spec: String,
        #[arg(long, value_enum, default_value_t = Source::Both)]
        method: Source,
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..=8))]
        k_max: u32,
        #[command(flatten)]
        common: Common,
    },
    /// One row per supported ring up to an order bound.
    Survey {
        #[arg(long)]
        max_order: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Closed forms against oracles for one ring or every ring up to a bound.
    Verify {
        #[arg(required_unless_present = "max_order", conflicts_with = "max_order")]
        spec: Option<String>,
        #[arg(long)]
        max_order: Option<u64>,
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..=8))]
        k_max: u32,
        /// Negate one closed-form eigenvalue before comparing.
        #[arg(long, hide = true)]
        inject_fault: bool,
        #[command(flatten)]
        common: Common,
    },
}

/// What a command produced: the main output, diagnostics and exit code.
#[derive(Debug, Default)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Parse { .. } | Error::NotPrimePower(_) | Error::NotPrime(_) => EXIT_PARSE,
        Error::UnsupportedRingClass { .. } | Error::EvenCharacteristicUnsupported(_) => EXIT_UNSUPPORTED,
        Error::SizeCapExceeded { .. } => EXIT_CAP,
        _ => EXIT_VERIFY_FAILED,
    }
}

fn failure(err: Error) -> Outcome {
    Outcome {
        stdout: String::new(),
        stderr: format!("error: {err}\n"),
        code: exit_code(&err),
    }
}

fn parse_ring(spec: &str, cap: u64) -> Result<ProductRing, Error> {
    let ring = RingSpec::parse(spec)?.build_with_cap(cap);
    ring.check_cap()?;
    Ok(ring)
}

pub fn execute(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Report {
            spec,
            method,
            k_max,
            common,
        } => cmd_report(spec, *method, *k_max, common),
        Command::Survey { max_order, common } => cmd_survey(*max_order, common),
        Command::Verify {
            spec,
            max_order,
            k_max,
            inject_fault,
            common,
        } => {
            let opts = VerifyOptions {
                k_max: *k_max,
                inject_fault: *inject_fault,
            };
            cmd_verify(spec.as_deref(), *max_order, &opts, common)
        }
    }
}

/// Unsupported rings with `--method both` still get the oracle half of the
/// report, followed by exit code 3.
pub fn cmd_report(spec: &str, method: Source, k_max: u32, common: &Common) -> Outcome {
    let ring = match parse_ring(spec, common.cap) {
        Ok(r) => r,
        Err(e) => return failure(e),
    };
    let opts = ReportOptions { source: method, k_max };
    match build_report(&ring, &opts) {
        Ok(report) => Outcome {
            stdout: render_report(&report, common.format),
            ..Outcome::default()
        },
        Err(err @ Error::UnsupportedRingClass { .. }) if method == Source::Both => {
            let fallback = ReportOptions {
                source: Source::Oracle,
                k_max,
            };
            match build_report(&ring, &fallback) {
                Ok(report) => Outcome {
                    stdout: render_report(&report, common.format),
                    stderr: format!("error: {err}\n"),
                    code: EXIT_UNSUPPORTED,
                },
                Err(e) => failure(e),
            }
        }
        Err(e) => failure(e),
    }
}

pub fn cmd_survey(max_order: u64, common: &Common) -> Outcome {
    match survey(max_order, common.cap) {
        Ok(rows) => Outcome {
            stdout: render_survey(&rows, common.format),
            ..Outcome::default()
        },
        Err(e) => failure(e),
    }
}

#[derive(Serialize)]
struct Diagnostic<'a> {
    status: &'static str,
    failed: Vec<FailedRing<'a>>,
}

#[derive(Serialize)]
struct FailedRing<'a> {
    ring: &'a str,
    checks: Vec<&'a str>,
}

/// Exit 1 with a JSON diagnostic on stderr if any check fails.
pub fn cmd_verify(spec: Option<&str>, max_order: Option<u64>, opts: &VerifyOptions, common: &Common) -> Outcome {
    let reports = match (spec, max_order) {
        (Some(s), _) => RingSpec::parse(s).and_then(|r| {
            r.build_with_cap(common.cap).check_cap()?;
            verify_rings(&[r], common.cap, opts)
        }),
        (None, Some(n)) => verify_up_to(n, common.cap, opts),
        (None, None) => Err(Error::Parse {
            pos: 0,
            msg: "expected a ring spec or --max-order".into(),
        }),
    };
    let reports = match reports {
        Ok(r) => r,
        Err(e) => return failure(e),
    };
    let stdout = render_verify(&reports, common.format, spec.is_some());
    let failed: Vec<FailedRing> = reports
        .iter()
        .filter(|r| !r.pass)
        .map(|r| FailedRing {
            ring: &r.ring,
            checks: r.failed().map(|c| c.name.as_str()).collect(),
        })
        .collect();
    if failed.is_empty() {
        return Outcome {
            stdout,
            ..Outcome::default()
        };
    }
    let diagnostic = Diagnostic { status: "fail", failed };
    Outcome {
        stdout,
        stderr: serde_json::to_string(&diagnostic).expect("diagnostic serializes") + "\n",
        code: EXIT_VERIFY_FAILED,
    }
}

fn json<T: Serialize + ?Sized>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serializes") + "\n"
}

fn csv_from<F: FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>>(fill: F) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    fill(&mut w).expect("in-memory csv");
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8 csv")
}

fn flag(v: Option<bool>) -> String {
    v.map_or_else(|| "-".to_string(), |b| b.to_string())
}

fn report_fields(report: &Report) -> Vec<(String, String)> {
    let inv = &report.invariants;
    let mut f = vec![
        ("ring".to_string(), inv.ring.clone()),
        ("order".into(), inv.order.to_string()),
        ("classification".into(), inv.classification.to_string()),
        ("degree".into(), inv.degree.to_string()),
        (
            "energy".into(),
            inv.energy
                .exact
                .as_ref()
                .map_or_else(|| "-".to_string(), |e| e.to_string()),
        ),
        ("energy_approx".into(), format!("{:.12}", inv.energy.approx)),
        (
            "hyperenergetic_computed".into(),
            inv.hyperenergetic.computed.to_string(),
        ),
        ("hyperenergetic_classifier".into(), flag(inv.hyperenergetic.classifier)),
    ];
    for (k, m) in inv.moments.iter().enumerate() {
        f.push((format!("s{}", k + 1), m.clone()));
    }
    f.push(("triangles".into(), inv.triangles.to_string()));
    f.push(("ramanujan_computed".into(), flag(inv.ramanujan.map(|v| v.computed))));
    f.push((
        "ramanujan_classifier".into(),
        flag(inv.ramanujan.and_then(|v| v.classifier)),
    ));
    f.push((
        "diameter".into(),
        report.diameter.map_or_else(|| "inf".to_string(), |d| d.to_string()),
    ));
    f.push(("tensor_decomposes".into(), flag(report.tensor_decomposes)));
    let s = &inv.sources;
    for (name, v) in [
        ("agree_spectrum_character", s.spectrum_character),
        ("agree_spectrum_jacobi", s.spectrum_jacobi),
        ("agree_moments", s.moments),
        ("agree_triangles", s.triangles),
        ("agree_energy", s.energy),
    ] {
        f.push((name.into(), flag(v)));
    }
    f
}

pub fn render_report(report: &Report, format: Format) -> String {
    match format {
        Format::Json => json(report),
        Format::Csv => csv_from(|w| {
            w.write_record(["field", "value"])?;
            for (k, v) in report_fields(report) {
                w.write_record([k, v])?;
            }
            Ok(())
        }),
        Format::Table => {
            let mut out = String::new();
            for (k, v) in report_fields(report) {
                let _ = writeln!(out, "{k:<26} {v}");
            }
            if let Some(spectrum) = &report.spectrum {
                let _ = writeln!(out, "spectrum");
                for e in spectrum.entries() {
                    let _ = writeln!(
                        out,
                        "  {:<32} x{:<8} {:.12}",
                        e.value.to_string(),
                        e.multiplicity,
                        e.approx
                    );
                }
            } else if let Some(numeric) = &report.numeric_spectrum {
                let _ = writeln!(out, "spectrum (numeric)");
                for e in numeric {
                    let _ = writeln!(out, "  {:<32.12} x{}", e.approx, e.multiplicity);
                }
            }
            for m in &report.matches {
                let verdict = if m.pass { "pass" } else { "FAIL" };
                let _ = writeln!(
                    out,
                    "match {:<10} max_dev={:.3e} tol={:.0e} {verdict}",
                    m.method.to_string(),
                    m.max_dev,
                    m.tol
                );
            }
            out
        }
    }
}

pub fn render_survey(rows: &[SurveyRow], format: Format) -> String {
    match format {
        Format::Json => json(rows),
        Format::Csv => csv_from(|w| {
            if rows.is_empty() {
                w.write_record(SURVEY_COLUMNS)?;
            }
            rows.iter().try_for_each(|r| w.serialize(r))
        }),
        Format::Table => {
            let mut out = format!(
                "{:<24} {:>6} {:<10} {:>6} {:>14} {:<11} {:<11} {:>10} {}\n",
                "ring", "order", "class", "degree", "energy", "hyper c/p", "raman c/p", "triangles", "agree"
            );
            for r in rows {
                let agree = r.spectrum_agree && r.triangles_agree && r.hyperenergetic_agree && r.ramanujan_agree;
                let note = if agree { "yes".to_string() } else { disagreements(r) };
                let _ = writeln!(
                    out,
                    "{:<24} {:>6} {:<10} {:>6} {:>14.6} {:<11} {:<11} {:>10} {note}",
                    r.ring,
                    r.order,
                    r.classification.to_string(),
                    r.degree,
                    r.energy_approx,
                    format!("{}/{}", r.hyperenergetic_computed, r.hyperenergetic_classifier),
                    format!("{}/{}", r.ramanujan_computed, r.ramanujan_classifier),
                    r.triangles,
                );
            }
            out
        }
    }
}

/// CSV header of `quct survey --format csv`.
pub const SURVEY_COLUMNS: [&str; 15] = [
    "ring",
    "order",
    "classification",
    "degree",
    "energy",
    "energy_approx",
    "hyperenergetic_computed",
    "hyperenergetic_classifier",
    "ramanujan_computed",
    "ramanujan_classifier",
    "triangles",
    "spectrum_agree",
    "triangles_agree",
    "hyperenergetic_agree",
    "ramanujan_agree",
];

fn disagreements(r: &SurveyRow) -> String {
    let mut names = Vec::new();
    for (name, ok) in [
        ("spectrum", r.spectrum_agree),
        ("triangles", r.triangles_agree),
        ("hyperenergetic", r.hyperenergetic_agree),
        ("ramanujan", r.ramanujan_agree),
    ] {
        if !ok {
            names.push(name);
        }
    }
    format!("no: {}", names.join(","))
}

pub fn render_verify(reports: &[VerifyReport], format: Format, detailed: bool) -> String {
    match format {
        Format::Json => json(reports),
        Format::Csv => csv_from(|w| {
            w.write_record(["ring", "check", "pass", "detail"])?;
            for r in reports {
                for c in &r.checks {
                    w.write_record([r.ring.as_str(), c.name.as_str(), &c.pass.to_string(), c.detail.as_str()])?;
                }
            }
            Ok(())
        }),
        Format::Table => {
            let mut out = String::new();
            for r in reports {
                let _ = writeln!(out, "{:<24} {}", r.ring, if r.pass { "PASS" } else { "FAIL" });
                for c in r.checks.iter().filter(|c| detailed || !c.pass) {
                    let _ = writeln!(
                        out,
                        "  {:<22} {:<4} {}",
                        c.name,
                        if c.pass { "ok" } else { "FAIL" },
                        c.detail
                    );
                }
            }
            let passed = reports.iter().filter(|r| r.pass).count();
            let _ = writeln!(out, "{passed}/{} rings passed", reports.len());
            out
        }
    }
}

/// Runs the parsed command, writing output to `--out` or stdout.
pub fn main_with(cli: Cli) -> i32 {
    let mut outcome = execute(&cli);
    let out = match &cli.command {
        Command::Report { common, .. } | Command::Survey { common, .. } | Command::Verify { common, .. } => {
            common.out.clone()
        }
    };
    if let Some(path) = out {
        if !outcome.stdout.is_empty() {
            if let Err(e) = std::fs::write(&path, &outcome.stdout) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return EXIT_VERIFY_FAILED;
            }
        }
        outcome.stdout.clear();
    }
    print!("{}", outcome.stdout);
    eprint!("{}", outcome.stderr);
    outcome.code
}
