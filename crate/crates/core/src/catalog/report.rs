//! Rendering verification reports as text, JSON and CSV.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use super::verify::{tally, Field, Status, VerificationReport};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub matched: usize,
    pub mismatched: usize,
    pub skipped: usize,
    pub unsupported: usize,
}

impl Counts {
    pub fn total(&self) -> usize {
        self.matched + self.mismatched + self.skipped + self.unsupported
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub rows: usize,
    pub entries: usize,
    pub by_field: BTreeMap<Field, Counts>,
    pub total: Counts,
}

impl Summary {
    pub fn of(report: &VerificationReport) -> Self {
        let by_field: BTreeMap<Field, Counts> = tally(report)
            .into_iter()
            .map(|(f, [m, x, s, u])| {
                (
                    f,
                    Counts {
                        matched: m,
                        mismatched: x,
                        skipped: s,
                        unsupported: u,
                    },
                )
            })
            .collect();
        let total = by_field.values().fold(Counts::default(), |a, c| Counts {
            matched: a.matched + c.matched,
            mismatched: a.mismatched + c.mismatched,
            skipped: a.skipped + c.skipped,
            unsupported: a.unsupported + c.unsupported,
        });
        Summary {
            rows: report.rows,
            entries: report.entries.len(),
            by_field,
            total,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ReportFormat {
    #[default]
    Text,
    Json,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(ReportFormat::Text),
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            _ => Err(Error::Model(format!("unknown format {s:?}"))),
        }
    }
}

/// Summary table followed by every entry that is not a plain match.
pub fn render_summary(report: &VerificationReport) -> String {
    let s = report.summary();
    let mut out = String::new();
    writeln!(out, "catalogue sha256 {}", report.catalog_digest).unwrap();
    writeln!(out, "rows {}  entries {}", s.rows, s.entries).unwrap();
    writeln!(
        out,
        "{:<8}{:>8}{:>10}{:>9}{:>13}",
        "field", "match", "mismatch", "skipped", "unsupported"
    )
    .unwrap();
    for (f, c) in &s.by_field {
        writeln!(
            out,
            "{:<8}{:>8}{:>10}{:>9}{:>13}",
            f.as_str(),
            c.matched,
            c.mismatched,
            c.skipped,
            c.unsupported
        )
        .unwrap();
    }
    writeln!(
        out,
        "{:<8}{:>8}{:>10}{:>9}{:>13}",
        "total", s.total.matched, s.total.mismatched, s.total.skipped, s.total.unsupported
    )
    .unwrap();
    let flagged: Vec<String> = report
        .entries
        .iter()
        .filter(|e| matches!(e.status, Status::Mismatch | Status::Skipped(_)))
        .map(|e| {
            format!(
                "  {:<12} {:<6} {:<12} computed {:<26} printed {:<26} {}",
                e.key().to_string(),
                e.field.as_str(),
                e.method,
                e.computed.as_deref().unwrap_or("-"),
                e.printed.as_deref().unwrap_or("-"),
                e.status
            )
            .trim_end()
            .to_string()
        })
        .collect();
    if !flagged.is_empty() {
        writeln!(out, "mismatched or skipped:").unwrap();
        for line in flagged {
            writeln!(out, "{line}").unwrap();
        }
    }
    out
}

/// One line per entry.
pub fn render_text(report: &VerificationReport) -> String {
    let mut out = render_summary(report);
    writeln!(out, "entries:").unwrap();
    for e in &report.entries {
        let mut line = format!(
            "  {:<12} {:<6} {:<12} computed {:<26} printed {:<26} {}",
            e.key().to_string(),
            e.field.as_str(),
            e.method,
            e.computed.as_deref().unwrap_or("-"),
            e.printed.as_deref().unwrap_or("-"),
            e.status
        );
        if let Some(n) = &e.note {
            write!(line, "  ({n})").unwrap();
        }
        writeln!(out, "{}", line.trim_end()).unwrap();
    }
    out
}

#[derive(Serialize)]
struct JsonReport<'a> {
    catalog_digest: &'a str,
    summary: Summary,
    entries: &'a [super::verify::ReportEntry],
}

pub fn render_json(report: &VerificationReport) -> String {
    let doc = JsonReport {
        catalog_digest: &report.catalog_digest,
        summary: report.summary(),
        entries: &report.entries,
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
    s.push('\n');
    s
}

/// Columns `grdb, field, computed, printed, status, method`.
pub fn render_csv(report: &VerificationReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["grdb", "field", "computed", "printed", "status", "method"])
        .expect("in-memory write");
    for e in &report.entries {
        w.write_record([
            e.key().to_string().as_str(),
            e.field.as_str(),
            e.computed.as_deref().unwrap_or(""),
            e.printed.as_deref().unwrap_or(""),
            e.status.to_string().as_str(),
            e.method.as_str(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv emits UTF-8")
}

pub fn render(report: &VerificationReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Text => render_text(report),
        ReportFormat::Json => render_json(report),
        ReportFormat::Csv => render_csv(report),
    }
}
