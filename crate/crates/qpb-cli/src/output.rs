//! Report serialization: one versioned JSON `SuiteReport` object on stdout,
//! or a human-readable text listing.  JSON output is byte-identical for
//! identical `(argv, seed)` pairs, so timings appear only in text mode.

use std::process::ExitCode;
use std::time::Instant;

use serde::Serialize;

use qpb_core::report::{Report, Status};
use qpb_core::Error;

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

impl Format {
    pub fn parse(text: &str) -> Result<Format, Error> {
        match text {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            other => Err(Error::InvalidSpec(format!("unknown format `{other}` (text|json)"))),
        }
    }
}

#[derive(Serialize)]
pub struct SuiteParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<String>,
}

#[derive(Serialize)]
struct JsonCheck<'a> {
    id: &'a str,
    statement: &'a str,
    status: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<&'a str>,
}

#[derive(Serialize)]
struct SuiteReport<'a> {
    schema: u32,
    suite: &'a str,
    params: &'a SuiteParams,
    checks: Vec<JsonCheck<'a>>,
    overall: &'a str,
}

/// Print the report in canonical order (sorted by check id) and return the
/// process exit code: 0 iff every non-skip check passes.
pub fn emit(
    suite: &str,
    params: &SuiteParams,
    report: Report,
    format: Format,
) -> Result<ExitCode, Error> {
    let started = Instant::now();
    let report = report.sorted();
    let overall = if report.pass() { "pass" } else { "fail" };
    match format {
        Format::Json => {
            let checks: Vec<JsonCheck> = report
                .checks
                .iter()
                .map(|c| JsonCheck {
                    id: &c.id,
                    statement: &c.statement,
                    status: c.status.as_str(),
                    witness: c.witness.as_deref(),
                })
                .collect();
            let out = SuiteReport { schema: 1, suite, params, checks, overall };
            println!("{}", serde_json::to_string_pretty(&out).expect("serializable report"));
        }
        Format::Text => {
            for c in &report.checks {
                let mark = match c.status {
                    Status::Pass => "pass",
                    Status::Fail => "FAIL",
                    Status::Skip => "skip",
                };
                println!("[{mark}] {} — {}", c.id, c.statement);
                if let (Status::Fail, Some(w)) = (c.status, &c.witness) {
                    println!("       witness: {w}");
                }
            }
            let n_fail = report.failures().count();
            println!(
                "{}: {} checks, {} failed ({:.2?})",
                overall,
                report.checks.len(),
                n_fail,
                started.elapsed()
            );
        }
    }
    Ok(if report.pass() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
