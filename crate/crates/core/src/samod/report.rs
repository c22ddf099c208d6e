use std::fmt::Write as _;

use serde::Serialize;

use crate::ontology::Module;
use crate::turtle::Severity;

use super::suite::{Iteration, Row};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelScope {
    /// The iteration's own modelet.
    Isolated,
    /// The union of all modelets up to the regression target.
    Cumulative,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FindingEntry {
    pub kind: String,
    pub severity: Severity,
    pub focus: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModelTest {
    pub passed: bool,
    pub schema_error: Option<String>,
    pub schema_warnings: Vec<String>,
    pub pitfalls: Vec<FindingEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DataTest {
    pub passed: bool,
    pub input_triples: usize,
    pub derived_triples: usize,
    pub violations: Vec<FindingEntry>,
}

impl DataTest {
    /// Outcome when the model test left no schema to test against.
    pub(crate) fn skipped() -> Self {
        DataTest { passed: false, input_triples: 0, derived_triples: 0, violations: Vec::new() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowCount {
    pub row: Row,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CqReport {
    pub id: String,
    pub text: String,
    pub files: Vec<String>,
    pub passed: bool,
    pub expected_rows: usize,
    pub actual_rows: usize,
    pub missing: Vec<RowCount>,
    pub unexpected: Vec<RowCount>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IterationReport {
    pub iteration: u32,
    pub title: String,
    pub scope: ModelScope,
    pub passed: bool,
    pub model_test: ModelTest,
    pub data_test: DataTest,
    pub query_tests: Vec<CqReport>,
}

impl IterationReport {
    pub(crate) fn new(
        it: &Iteration,
        scope: ModelScope,
        model_test: ModelTest,
        data_test: DataTest,
        query_tests: Vec<CqReport>,
    ) -> Self {
        let passed = model_test.passed
            && data_test.passed
            && query_tests.len() == it.questions.len()
            && query_tests.iter().all(|q| q.passed);
        IterationReport { iteration: it.id, title: it.title.clone(), scope, passed, model_test, data_test, query_tests }
    }

    pub fn cq_passed(&self) -> usize {
        self.query_tests.iter().filter(|q| q.passed).count()
    }
}

/// Report of a suite run or a regression run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TestReport {
    pub module: Module,
    /// Regression target; `None` for a plain run.
    pub regression_up_to: Option<u32>,
    pub runs: Vec<IterationReport>,
    pub cq_passed: usize,
    pub cq_total: usize,
    pub passed: bool,
    /// Set on regression runs only: every test in the bag still passes.
    pub milestone: Option<bool>,
}

impl TestReport {
    /// CQ counts use the cumulative runs when there are any.
    pub fn from_runs(module: Module, regression_up_to: Option<u32>, mut runs: Vec<IterationReport>) -> Self {
        runs.sort_by_key(|r| (r.scope, r.iteration));
        let counted: Vec<&IterationReport> = if runs.iter().any(|r| r.scope == ModelScope::Cumulative) {
            runs.iter().filter(|r| r.scope == ModelScope::Cumulative).collect()
        } else {
            runs.iter().collect()
        };
        let cq_passed = counted.iter().map(|r| r.cq_passed()).sum();
        let cq_total = counted.iter().map(|r| r.query_tests.len()).sum();
        let passed = runs.iter().all(|r| r.passed);
        TestReport {
            module,
            regression_up_to,
            cq_passed,
            cq_total,
            passed,
            milestone: regression_up_to.map(|_| passed),
            runs,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        match self.regression_up_to {
            Some(k) => writeln!(out, "{} regression up to iteration {k}", self.module),
            None => writeln!(out, "{} suite", self.module),
        }
        .expect("writing to a string");
        for r in &self.runs {
            let verdict = |ok: bool| if ok { "ok" } else { "FAILED" };
            let _ = writeln!(
                out,
                "iteration {} ({}) {}: model {}, data {}, queries {}/{}",
                r.iteration,
                match r.scope {
                    ModelScope::Isolated => "isolated",
                    ModelScope::Cumulative => "cumulative",
                },
                r.title,
                verdict(r.model_test.passed),
                verdict(r.data_test.passed),
                r.cq_passed(),
                r.query_tests.len()
            );
            if let Some(e) = &r.model_test.schema_error {
                let _ = writeln!(out, "  schema error: {e}");
            }
            for p in &r.model_test.pitfalls {
                let _ = writeln!(out, "  pitfall {} {}: {}", p.kind, p.focus, p.detail);
            }
            for v in r.data_test.violations.iter().filter(|v| v.severity == Severity::Error) {
                let _ = writeln!(out, "  violation {} {}: {}", v.kind, v.focus, v.detail);
            }
            for q in r.query_tests.iter().filter(|q| !q.passed) {
                let _ = writeln!(out, "  CQ {} failed: {}", q.id, q.text);
                for m in &q.missing {
                    let _ = writeln!(out, "    missing {:?} x{}", m.row, m.count);
                }
                for u in &q.unexpected {
                    let _ = writeln!(out, "    unexpected {:?} x{}", u.row, u.count);
                }
            }
        }
        let _ = writeln!(out, "CQs passed: {}/{}", self.cq_passed, self.cq_total);
        match self.milestone {
            Some(true) => out.push_str("milestone: reached\n"),
            Some(false) => out.push_str("milestone: not reached\n"),
            None => {
                let _ = writeln!(out, "result: {}", if self.passed { "pass" } else { "fail" });
            }
        }
        out
    }
}
