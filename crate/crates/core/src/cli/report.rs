use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        }
    }
}

/// Outcome of one check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub check_id: String,
    pub anchor: String,
    pub lhs: String,
    pub rhs: String,
    pub abs_difference: String,
    pub digits_matched: i64,
    pub threshold: i64,
    pub threshold_rule: String,
    /// Name of the relation with the fewest matching digits.
    pub relation: String,
    pub relations: usize,
    pub runtime_ms: u64,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

/// Totals over a run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub digits: u32,
    pub jobs: usize,
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub runtime_ms: u64,
}

impl Summary {
    pub fn from_results(results: &[CheckResult], digits: u32, jobs: usize, runtime_ms: u64) -> Self {
        let count = |s| results.iter().filter(|r| r.status == s).count();
        Summary {
            digits,
            jobs,
            total: results.len(),
            passed: count(Status::Pass),
            failed: count(Status::Fail),
            skipped: count(Status::Skipped),
            runtime_ms,
        }
    }
}

/// One line of a JSON Lines report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "record", rename_all = "lowercase")]
pub enum Record {
    Check(CheckResult),
    Summary(Summary),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Text,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            _ => Err(Error::Unknown { kind: "format", name: s.to_string() }),
        }
    }
}

pub fn render(results: &[CheckResult], summary: &Summary, format: Format) -> String {
    match format {
        Format::Json => render_json(results, summary),
        Format::Text => render_text(results, summary),
    }
}

fn render_json(results: &[CheckResult], summary: &Summary) -> String {
    let mut out = String::new();
    let records = results.iter().cloned().map(Record::Check).chain(std::iter::once(Record::Summary(summary.clone())));
    for r in records {
        out.push_str(&serde_json::to_string(&r).expect("report records serialize"));
        out.push('\n');
    }
    out
}

fn render_text(results: &[CheckResult], summary: &Summary) -> String {
    let mut out = String::new();
    let width = results.iter().map(|r| r.check_id.len()).max().unwrap_or(0);
    for r in results {
        let tag = r.status.as_str().to_uppercase();
        let _ = write!(out, "{tag:<7} {:<width$}  ", r.check_id);
        if r.status == Status::Skipped {
            let _ = writeln!(out, "not part of --all");
        } else {
            let _ = writeln!(
                out,
                "digits {:>4} / {:<4} ({})  {} ms  [{}]",
                r.digits_matched, r.threshold, r.threshold_rule, r.runtime_ms, r.relation
            );
            let _ = writeln!(out, "        lhs = {}", r.lhs);
            let _ = writeln!(out, "        rhs = {}", r.rhs);
        }
        if let Some(m) = &r.message {
            let _ = writeln!(out, "        {m}");
        }
    }
    let _ = writeln!(
        out,
        "{} checks at {} digits: {} passed, {} failed, {} skipped ({} ms, {} jobs)",
        summary.total, summary.digits, summary.passed, summary.failed, summary.skipped, summary.runtime_ms, summary.jobs
    );
    out
}

/// Parses a JSON Lines report back into records.
pub fn parse_json(text: &str) -> Result<Vec<Record>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(|e| Error::Domain(format!("bad report line: {e}"))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> CheckResult {
        CheckResult {
            check_id: "thm1.1".into(),
            anchor: "E:x".into(),
            lhs: "1.0e0".into(),
            rhs: "1.0e0".into(),
            abs_difference: "0".into(),
            digits_matched: 95,
            threshold: 90,
            threshold_rule: "D-10".into(),
            relation: "I(1)".into(),
            relations: 1,
            runtime_ms: 12,
            status: Status::Pass,
            message: None,
        }
    }

    #[test]
    fn json_round_trip() {
        let r = vec![sample()];
        let s = Summary::from_results(&r, 100, 1, 12);
        let text = render(&r, &s, Format::Json);
        assert!(text.lines().next().unwrap().starts_with(r#"{"record":"check","check_id":"thm1.1""#));
        assert!(text.contains(r#""status":"pass""#));
        let back = parse_json(&text).unwrap();
        assert_eq!(back, vec![Record::Check(sample()), Record::Summary(s)]);
    }

    #[test]
    fn text_lists_every_check() {
        let mut f = sample();
        f.status = Status::Fail;
        f.message = Some("boom".into());
        let r = vec![sample(), f];
        let text = render(&r, &Summary::from_results(&r, 100, 2, 5), Format::Text);
        assert!(text.contains("PASS") && text.contains("FAIL") && text.contains("boom"));
        assert!(text.contains("1 passed, 1 failed, 0 skipped"));
        assert!("xml".parse::<Format>().is_err());
    }
}
