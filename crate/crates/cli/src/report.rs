//! The report every command produces, and its text and JSON renderings.

use serde::Serialize;
use serde_json::Value;

use hgt_core::format::Diagnostic;
use hgt_core::{IssueClass, Report};

pub const REPORT_SCHEMA: &str = "hgauge-report/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Violation,
    Error,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::Violation => 1,
            Status::Error => 2,
        }
    }

    fn word(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Violation => "violation",
            Status::Error => "error",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Issue {
    pub class: &'static str,
    pub code: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub column: Option<usize>,
}

impl Issue {
    pub fn new(class: &'static str, code: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            class,
            code: code.into(),
            message: message.into(),
            source: None,
            line: None,
            column: None,
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Self::new("usage", "usage", message)
    }

    pub fn at(mut self, source: &str) -> Self {
        self.source = Some(source.to_string());
        self
    }

    pub fn from_diagnostic(source: &str, d: &Diagnostic) -> Self {
        Self {
            class: "input",
            code: d.code.to_string(),
            message: d.message.clone(),
            source: Some(source.to_string()),
            line: Some(d.line),
            column: Some(d.column),
        }
    }

    pub fn from_report(source: &str, report: &Report) -> Vec<Self> {
        report
            .issues()
            .iter()
            .map(|i| Issue::new(i.class.as_str(), i.code, i.message.clone()).at(source))
            .collect()
    }

    /// Status implied by this issue alone.
    pub fn status(&self) -> Status {
        if self.class == IssueClass::Violation.as_str() {
            Status::Violation
        } else {
            Status::Error
        }
    }

    fn render(&self) -> String {
        let place = match (&self.source, self.line, self.column) {
            (Some(s), Some(l), Some(c)) => format!("{s}:{l}:{c}: "),
            (Some(s), _, _) => format!("{s}: "),
            _ => String::new(),
        };
        format!("{place}{}[{}]: {}", self.class, self.code, self.message)
    }
}

/// Failure that stops a command before it produces a result.
#[derive(Debug)]
pub struct Failure {
    pub issues: Vec<Issue>,
}

impl Failure {
    pub fn status(&self) -> Status {
        self.issues.iter().map(Issue::status).max().unwrap_or(Status::Error)
    }
}

impl From<Issue> for Failure {
    fn from(i: Issue) -> Self {
        Failure { issues: vec![i] }
    }
}

impl From<Vec<Issue>> for Failure {
    fn from(issues: Vec<Issue>) -> Self {
        Failure { issues }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Envelope {
    pub schema: &'static str,
    pub command: String,
    pub status: Status,
    pub result: Value,
    pub issues: Vec<Issue>,
}

/// What a command produced: its JSON result, its text form, and any issues.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub result: Value,
    pub text: String,
    pub issues: Vec<Issue>,
    /// Raw text output replacing the report body, for commands that emit a
    /// document.
    pub document: bool,
}

impl Outcome {
    pub fn new(result: Value, text: String) -> Self {
        Self {
            result,
            text,
            issues: Vec::new(),
            document: false,
        }
    }

    pub fn document(result: Value, text: String) -> Self {
        Self {
            document: true,
            ..Self::new(result, text)
        }
    }

    pub fn status(&self) -> Status {
        self.issues.iter().map(Issue::status).max().unwrap_or(Status::Ok)
    }
}

pub struct Style {
    pub color: bool,
}

impl Style {
    /// Colors unless `HG_COLOR` is `0`, `never`, `off` or `false`; by default
    /// only on a terminal.
    pub fn detect(is_terminal: bool) -> Self {
        let color = match std::env::var("HG_COLOR").ok().as_deref() {
            Some("0" | "never" | "off" | "false") => false,
            Some("1" | "always" | "on" | "true") => true,
            _ => is_terminal,
        };
        Self { color }
    }

    fn paint(&self, status: Status, text: &str) -> String {
        if !self.color {
            return text.to_string();
        }
        let code = match status {
            Status::Ok => "32",
            Status::Violation => "31",
            Status::Error => "1;31",
        };
        format!("\x1b[{code}m{text}\x1b[0m")
    }
}

pub fn render_json(command: &str, status: Status, result: Value, issues: Vec<Issue>) -> String {
    let env = Envelope {
        schema: REPORT_SCHEMA,
        command: command.to_string(),
        status,
        result,
        issues,
    };
    let mut s = serde_json::to_string_pretty(&env).expect("reports serialize");
    s.push('\n');
    s
}

pub fn render_text(body: &str, document: bool, status: Status, issues: &[Issue], style: &Style) -> String {
    let mut out = body.to_string();
    if document && issues.is_empty() {
        return out;
    }
    for i in issues {
        out.push_str(&i.render());
        out.push('\n');
    }
    out.push_str(&format!("status: {}\n", style.paint(status, status.word())));
    out
}
