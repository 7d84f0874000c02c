//! Diagnostics and their text/JSON renderings.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::program::Indicator;
use crate::source::Span;

/// Rule id used for lexical errors.
pub const LEX_ERROR: &str = "P01";
/// Rule id used for syntax errors.
pub const SYNTAX_ERROR: &str = "P02";
/// Rule id used when a rule itself fails.
pub const INTERNAL_ERROR: &str = "X01";

/// Diagnostic severity, ordered `Hint < Info < Warning < Error`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Hint,
    Info,
    Warning,
    Error,
}

impl Severity {
    pub const ALL: [Severity; 4] = [
        Severity::Error,
        Severity::Warning,
        Severity::Info,
        Severity::Hint,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
            Severity::Info => "info",
            Severity::Hint => "hint",
        }
    }
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Severity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "error" => Ok(Severity::Error),
            "warning" | "warn" => Ok(Severity::Warning),
            "info" => Ok(Severity::Info),
            "hint" => Ok(Severity::Hint),
            other => Err(format!(
                "unknown severity `{other}` (expected error, warning, info or hint)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub rule_id: String,
    pub severity: Severity,
    pub span: Span,
    pub message: String,
    pub suggestion: Option<String>,
    pub predicate: Option<Indicator>,
    /// Further locations the finding refers to (e.g. every occurrence of a literal).
    pub related: Vec<Span>,
}

impl Diagnostic {
    pub fn new(
        rule_id: impl Into<String>,
        severity: Severity,
        span: Span,
        message: impl Into<String>,
    ) -> Diagnostic {
        Diagnostic {
            rule_id: rule_id.into(),
            severity,
            span,
            message: message.into(),
            suggestion: None,
            predicate: None,
            related: Vec::new(),
        }
    }

    pub fn with_suggestion(mut self, suggestion: impl Into<String>) -> Diagnostic {
        self.suggestion = Some(suggestion.into());
        self
    }

    pub fn with_predicate(mut self, predicate: Option<Indicator>) -> Diagnostic {
        self.predicate = predicate;
        self
    }

    pub fn with_related(mut self, related: Vec<Span>) -> Diagnostic {
        self.related = related;
        self
    }

    pub fn is_syntax(&self) -> bool {
        self.rule_id == LEX_ERROR || self.rule_id == SYNTAX_ERROR
    }
}

/// Sort by (line, column, rule id), the order every renderer uses.
pub fn sort_diagnostics(diags: &mut [Diagnostic]) {
    diags.sort_by(|a, b| sort_key(a).cmp(&sort_key(b)));
}

fn sort_key(d: &Diagnostic) -> (usize, usize, &str, usize) {
    (d.span.start_line, d.span.start_col, &d.rule_id, d.span.byte_end)
}

/// Diagnostics of one file.
#[derive(Debug, Clone)]
pub struct FileReport {
    pub path: String,
    pub diagnostics: Vec<Diagnostic>,
}

/// Counts per severity.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub error: usize,
    pub warning: usize,
    pub info: usize,
    pub hint: usize,
}

impl Summary {
    pub fn of<'a>(diags: impl IntoIterator<Item = &'a Diagnostic>) -> Summary {
        let mut s = Summary::default();
        for d in diags {
            match d.severity {
                Severity::Error => s.error += 1,
                Severity::Warning => s.warning += 1,
                Severity::Info => s.info += 1,
                Severity::Hint => s.hint += 1,
            }
        }
        s
    }
}

fn ordered(reports: &[FileReport]) -> Vec<(&str, &Diagnostic)> {
    let mut sorted: Vec<&FileReport> = reports.iter().collect();
    sorted.sort_by(|a, b| a.path.cmp(&b.path));
    let mut rows = Vec::new();
    for report in sorted {
        let mut diags: Vec<&Diagnostic> = report.diagnostics.iter().collect();
        diags.sort_by(|a, b| sort_key(a).cmp(&sort_key(b)));
        rows.extend(diags.into_iter().map(|d| (report.path.as_str(), d)));
    }
    rows
}

/// One line per diagnostic: `path:line:col: severity [RULE] message`.
pub fn render_text(reports: &[FileReport]) -> String {
    let mut out = String::new();
    for (path, d) in ordered(reports) {
        out.push_str(&format!(
            "{}:{}:{}: {} [{}] {}\n",
            path, d.span.start_line, d.span.start_col, d.severity, d.rule_id, d.message
        ));
    }
    out
}

#[derive(Serialize)]
struct JsonDiagnostic<'a> {
    path: &'a str,
    line: usize,
    col: usize,
    end_line: usize,
    end_col: usize,
    rule: &'a str,
    severity: Severity,
    message: &'a str,
    suggestion: Option<&'a str>,
    predicate: Option<String>,
}

#[derive(Serialize)]
struct JsonDocument<'a> {
    diagnostics: Vec<JsonDiagnostic<'a>>,
    summary: Summary,
}

/// A single JSON document holding every diagnostic plus severity counts.
pub fn render_json(reports: &[FileReport]) -> String {
    let rows = ordered(reports);
    let summary = Summary::of(rows.iter().map(|(_, d)| *d));
    let doc = JsonDocument {
        diagnostics: rows
            .into_iter()
            .map(|(path, d)| JsonDiagnostic {
                path,
                line: d.span.start_line,
                col: d.span.start_col,
                end_line: d.span.end_line,
                end_col: d.span.end_col,
                rule: &d.rule_id,
                severity: d.severity,
                message: &d.message,
                suggestion: d.suggestion.as_deref(),
                predicate: d.predicate.as_ref().map(|p| p.to_string()),
            })
            .collect(),
        summary,
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("diagnostics serialize");
    text.push('\n');
    text
}
