//! Report serialization and exit codes.

use oddjacobi::VerificationReport;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Serialize)]
struct JsonCondition<'a> {
    name: &'a str,
    residual: String,
    pass: bool,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    structure: &'a str,
    conditions: Vec<JsonCondition<'a>>,
    verdict: bool,
}

fn json_report(r: &VerificationReport) -> JsonReport<'_> {
    JsonReport {
        structure: &r.structure,
        conditions: r
            .conditions
            .iter()
            .map(|c| JsonCondition {
                name: &c.name,
                residual: c.residual_text(),
                pass: c.pass(),
            })
            .collect(),
        verdict: r.verdict(),
    }
}

/// One report as a JSON object.
pub fn report_json(r: &VerificationReport) -> String {
    serde_json::to_string_pretty(&json_report(r)).expect("reports serialize")
}

/// JSON emits an array of report objects; text emits the tabulated reports separated by
/// blank lines. Both end in a newline.
pub fn emit(reports: &[VerificationReport], format: Format) -> String {
    let mut out = match format {
        Format::Json => {
            let all: Vec<_> = reports.iter().map(json_report).collect();
            serde_json::to_string_pretty(&all).expect("reports serialize")
        }
        Format::Text => reports.iter().map(|r| r.to_string()).collect::<Vec<_>>().join("\n\n"),
    };
    out.push('\n');
    out
}

/// 0 when every verdict passes, 1 otherwise.
pub fn exit_code(reports: &[VerificationReport]) -> i32 {
    if reports.iter().all(VerificationReport::verdict) {
        0
    } else {
        1
    }
}

/// Exit code for files that fail to parse or elaborate.
pub const EXIT_INVALID: i32 = 2;
