//! Validation reports shared by every validator in the crate.

use std::fmt;

/// Broad class of a validation issue.
///
/// Structural problems (malformed tables, dangling references) are kept apart
/// from genuine law violations so callers can tell "this input is not even a
/// table" from "this table is not a crossed module".
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IssueClass {
    /// Input is structurally broken: duplicate ids, partial tables, bad keys.
    Malformed,
    /// Input references something that was never declared.
    Dangling,
    /// Input is well formed but violates an axiom or invariant.
    Violation,
}

impl IssueClass {
    pub fn as_str(self) -> &'static str {
        match self {
            IssueClass::Malformed => "malformed",
            IssueClass::Dangling => "dangling",
            IssueClass::Violation => "violation",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Issue {
    pub class: IssueClass,
    /// Stable machine-readable code, e.g. `boundary-not-homomorphism`.
    pub code: &'static str,
    pub message: String,
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}:{}] {}", self.class.as_str(), self.code, self.message)
    }
}

/// An ordered list of issues. Empty means valid.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    issues: Vec<Issue>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, class: IssueClass, code: &'static str, message: impl Into<String>) {
        self.issues.push(Issue {
            class,
            code,
            message: message.into(),
        });
    }

    pub fn malformed(&mut self, code: &'static str, message: impl Into<String>) {
        self.push(IssueClass::Malformed, code, message);
    }

    pub fn dangling(&mut self, code: &'static str, message: impl Into<String>) {
        self.push(IssueClass::Dangling, code, message);
    }

    pub fn violation(&mut self, code: &'static str, message: impl Into<String>) {
        self.push(IssueClass::Violation, code, message);
    }

    pub fn extend(&mut self, other: Report) {
        self.issues.extend(other.issues);
    }

    pub fn is_empty(&self) -> bool {
        self.issues.is_empty()
    }

    pub fn len(&self) -> usize {
        self.issues.len()
    }

    pub fn issues(&self) -> &[Issue] {
        &self.issues
    }

    pub fn has_code(&self, code: &str) -> bool {
        self.issues.iter().any(|i| i.code == code)
    }

    pub fn has_class(&self, class: IssueClass) -> bool {
        self.issues.iter().any(|i| i.class == class)
    }

    /// `Ok(())` when empty, otherwise the report itself.
    pub fn into_result(self) -> Result<(), Report> {
        if self.is_empty() {
            Ok(())
        } else {
            Err(self)
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, issue) in self.issues.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{issue}")?;
        }
        Ok(())
    }
}
