//! The run report: one structure every subcommand fills in, rendered as
//! plain text or JSON.
//!
//! The JSON form is the machine interface, so its shape is rigid: top-level
//! keys always appear in the same order (`version`, `command`, `inputs`,
//! `timestamp`, `diagnostics`, `obligations`, `system_contract`, `verdicts`,
//! `confidence`, `exit`), sections a command does not produce are `null`
//! (arrays stay empty instead), and two runs over the same inputs and flags
//! produce byte-identical output apart from `timestamp` — which
//! `--no-timestamp` removes entirely. The text form is for people; it prints
//! only the sections that exist.

use std::fmt::Write as _;

use serde_json::{json, Map, Value};

use agspec_core::confidence::ConfidenceReport;
use agspec_core::syntax::{Diagnostic, Severity};

/// A file the command read, with the digest of its raw bytes.
#[derive(Debug, Clone)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

/// One diagnostic line. Source-anchored diagnostics carry a position;
/// synthesized ones (vacuity warnings, I/O failures) do not.
#[derive(Debug, Clone)]
pub struct ReportDiagnostic {
    pub severity: Severity,
    pub code: String,
    pub message: String,
    pub line: Option<u32>,
    pub col: Option<u32>,
}

impl ReportDiagnostic {
    pub fn from_syntax(diag: &Diagnostic) -> ReportDiagnostic {
        ReportDiagnostic {
            severity: diag.severity,
            code: diag.code.clone(),
            message: diag.message.clone(),
            line: Some(diag.span.line),
            col: Some(diag.span.col),
        }
    }

    pub fn error(code: &str, message: impl Into<String>) -> ReportDiagnostic {
        ReportDiagnostic {
            severity: Severity::Error,
            code: code.to_string(),
            message: message.into(),
            line: None,
            col: None,
        }
    }

    pub fn warning(code: &str, message: impl Into<String>) -> ReportDiagnostic {
        ReportDiagnostic {
            severity: Severity::Warning,
            code: code.to_string(),
            message: message.into(),
            line: None,
            col: None,
        }
    }
}

/// One proof obligation with its discharge outcome.
#[derive(Debug, Clone)]
pub struct ObligationRow {
    pub id: String,
    pub from: String,
    pub to: String,
    pub status: String,
    pub scope: String,
    /// Rendered witness, present only when the obligation failed.
    pub counterexample: Option<String>,
}

/// The end-to-end contract, rendered.
#[derive(Debug, Clone)]
pub struct SystemContractRow {
    pub assumption: String,
    pub guarantee: String,
}

/// Everything one command run produced.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    pub inputs: Vec<InputDigest>,
    pub timestamp: Option<u64>,
    pub diagnostics: Vec<ReportDiagnostic>,
    pub obligations: Vec<ObligationRow>,
    pub system_contract: Option<SystemContractRow>,
    /// Monitor verdicts in emission order: nodes by name, then `system`
    /// for the composed contract.
    pub verdicts: Option<Vec<(String, String)>>,
    pub confidence: Option<ConfidenceReport>,
    pub exit: i32,
}

impl Report {
    pub fn new(command: &str) -> Report {
        Report {
            command: command.to_string(),
            inputs: Vec::new(),
            timestamp: None,
            diagnostics: Vec::new(),
            obligations: Vec::new(),
            system_contract: None,
            verdicts: None,
            confidence: None,
            exit: 0,
        }
    }

    pub fn to_json(&self) -> String {
        let mut root = Map::new();
        root.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
        root.insert("command".into(), json!(self.command));
        root.insert(
            "inputs".into(),
            Value::Array(
                self.inputs
                    .iter()
                    .map(|input| {
                        let mut m = Map::new();
                        m.insert("path".into(), json!(input.path));
                        m.insert("sha256".into(), json!(input.sha256));
                        Value::Object(m)
                    })
                    .collect(),
            ),
        );
        if let Some(timestamp) = self.timestamp {
            root.insert("timestamp".into(), json!(timestamp));
        }
        root.insert(
            "diagnostics".into(),
            Value::Array(
                self.diagnostics
                    .iter()
                    .map(|diag| {
                        let mut m = Map::new();
                        m.insert("severity".into(), json!(diag.severity.to_string()));
                        m.insert("code".into(), json!(diag.code));
                        m.insert("message".into(), json!(diag.message));
                        m.insert("line".into(), diag.line.map_or(Value::Null, |l| json!(l)));
                        m.insert("col".into(), diag.col.map_or(Value::Null, |c| json!(c)));
                        Value::Object(m)
                    })
                    .collect(),
            ),
        );
        root.insert(
            "obligations".into(),
            Value::Array(
                self.obligations
                    .iter()
                    .map(|row| {
                        let mut m = Map::new();
                        m.insert("id".into(), json!(row.id));
                        m.insert("from".into(), json!(row.from));
                        m.insert("to".into(), json!(row.to));
                        m.insert("status".into(), json!(row.status));
                        m.insert("scope".into(), json!(row.scope));
                        m.insert(
                            "counterexample".into(),
                            row.counterexample.as_ref().map_or(Value::Null, |c| json!(c)),
                        );
                        Value::Object(m)
                    })
                    .collect(),
            ),
        );
        root.insert(
            "system_contract".into(),
            self.system_contract.as_ref().map_or(Value::Null, |sc| {
                let mut m = Map::new();
                m.insert("assumption".into(), json!(sc.assumption));
                m.insert("guarantee".into(), json!(sc.guarantee));
                Value::Object(m)
            }),
        );
        root.insert(
            "verdicts".into(),
            self.verdicts.as_ref().map_or(Value::Null, |verdicts| {
                let mut m = Map::new();
                for (name, state) in verdicts {
                    m.insert(name.clone(), json!(state));
                }
                Value::Object(m)
            }),
        );
        root.insert(
            "confidence".into(),
            self.confidence.as_ref().map_or(Value::Null, |report| {
                let mut m = Map::new();
                m.insert("numerator".into(), json!(report.numerator));
                m.insert("denominator".into(), json!(report.denominator));
                m.insert("percent".into(), json!(report.percent));
                m.insert(
                    "per_node".into(),
                    Value::Array(
                        report
                            .rows
                            .iter()
                            .map(|row| {
                                let mut r = Map::new();
                                r.insert("node".into(), json!(row.node));
                                r.insert(
                                    "applied".into(),
                                    Value::Array(
                                        row.applied.iter().map(|t| json!(t.label())).collect(),
                                    ),
                                );
                                r.insert(
                                    "missing".into(),
                                    Value::Array(
                                        row.missing.iter().map(|t| json!(t.label())).collect(),
                                    ),
                                );
                                Value::Object(r)
                            })
                            .collect(),
                    ),
                );
                Value::Object(m)
            }),
        );
        root.insert("exit".into(), json!(self.exit));
        let mut text = serde_json::to_string_pretty(&Value::Object(root))
            .expect("report serialization cannot fail");
        text.push('\n');
        text
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "agspec {} — {}", env!("CARGO_PKG_VERSION"), self.command);
        for input in &self.inputs {
            let _ = writeln!(out, "input: {} (sha256 {})", input.path, input.sha256);
        }
        for diag in &self.diagnostics {
            match (diag.line, diag.col) {
                (Some(line), Some(col)) => {
                    let _ = writeln!(
                        out,
                        "{}[{}] {}:{}: {}",
                        diag.severity, diag.code, line, col, diag.message
                    );
                }
                _ => {
                    let _ = writeln!(out, "{}[{}]: {}", diag.severity, diag.code, diag.message);
                }
            }
        }
        if !self.obligations.is_empty() {
            let _ = writeln!(out, "obligations (scope {}):", self.obligations[0].scope);
            for row in &self.obligations {
                let _ = writeln!(out, "  {}: {}", row.id, row.status);
                if let Some(witness) = &row.counterexample {
                    for line in witness.lines() {
                        let _ = writeln!(out, "    {line}");
                    }
                }
            }
        }
        if let Some(sc) = &self.system_contract {
            let _ = writeln!(out, "system contract:");
            let _ = writeln!(out, "  assumes {}", sc.assumption);
            let _ = writeln!(out, "  guarantees {}", sc.guarantee);
        }
        if let Some(verdicts) = &self.verdicts {
            let _ = writeln!(out, "verdicts:");
            for (name, state) in verdicts {
                let _ = writeln!(out, "  {name}: {state}");
            }
        }
        if let Some(report) = &self.confidence {
            let _ = write!(out, "{report}");
        }
        let _ = writeln!(out, "exit {}", self.exit);
        out
    }
}
