use std::fmt;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Warning,
    Error,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Warning => "warning",
            Severity::Error => "error",
        })
    }
}

/// A positioned message about a source text. Line and column are 1-based and
/// count characters, not bytes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParseDiagnostic {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub severity: Severity,
}

impl ParseDiagnostic {
    pub fn error(pos: Position, message: impl Into<String>) -> Self {
        ParseDiagnostic { line: pos.line, column: pos.column, message: message.into(), severity: Severity::Error }
    }

    pub fn warning(pos: Position, message: impl Into<String>) -> Self {
        ParseDiagnostic { severity: Severity::Warning, ..ParseDiagnostic::error(pos, message) }
    }
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}: {}", self.line, self.column, self.severity, self.message)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

/// Failure of a fail-fast parse: the first error, preceded by any warnings
/// collected before it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub diagnostics: Vec<ParseDiagnostic>,
}

impl ParseError {
    /// The error-severity diagnostic that aborted the parse.
    pub fn first_error(&self) -> &ParseDiagnostic {
        self.diagnostics.iter().find(|d| d.severity == Severity::Error).unwrap_or(&self.diagnostics[0])
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.first_error().fmt(f)
    }
}

impl std::error::Error for ParseError {}
