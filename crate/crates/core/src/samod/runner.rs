use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::inference::{saturate_with_stats, scan_pitfalls, validate_instances, RuleSet};
use crate::ontology::extract_schema;
use crate::query::evaluate;
use crate::rdf::Graph;
use crate::turtle::Severity;

use super::report::{CqReport, DataTest, FindingEntry, IterationReport, ModelScope, ModelTest, RowCount, TestReport};
use super::suite::{Iteration, Row, ScenarioSuite};

/// Runs one iteration against its own modelet plus the suite background.
/// Returns `None` when the suite has no such iteration.
pub fn run_iteration(suite: &ScenarioSuite, id: u32) -> Option<IterationReport> {
    let it = suite.iteration(id)?;
    let model = Graph::merge(&it.modelet, &suite.background);
    Some(run_against(it, &model, ModelScope::Isolated))
}

/// Every iteration in isolation, in id order.
pub fn run_suite(suite: &ScenarioSuite) -> TestReport {
    let runs: Vec<IterationReport> = suite
        .iterations
        .par_iter()
        .map(|it| run_against(it, &Graph::merge(&it.modelet, &suite.background), ModelScope::Isolated))
        .collect();
    TestReport::from_runs(suite.module, None, runs)
}

/// The bag of test cases up to iteration `up_to`: every iteration up to it
/// in isolation and again against the union of those modelets. Returns
/// `None` when the suite has no such iteration.
pub fn run_regression(suite: &ScenarioSuite, up_to: u32) -> Option<TestReport> {
    suite.iteration(up_to)?;
    let included: Vec<&Iteration> = suite.iterations.iter().filter(|i| i.id <= up_to).collect();
    let cumulative = included.iter().fold(suite.background.clone(), |acc, it| Graph::merge(&acc, &it.modelet));
    let jobs: Vec<(&Iteration, ModelScope)> =
        included.iter().flat_map(|it| [(*it, ModelScope::Isolated), (*it, ModelScope::Cumulative)]).collect();
    let runs: Vec<IterationReport> = jobs
        .par_iter()
        .map(|(it, scope)| match scope {
            ModelScope::Isolated => run_against(it, &Graph::merge(&it.modelet, &suite.background), *scope),
            ModelScope::Cumulative => run_against(it, &cumulative, *scope),
        })
        .collect();
    Some(TestReport::from_runs(suite.module, Some(up_to), runs))
}

/// Model test, data test and query test of one iteration against `model`.
fn run_against(it: &Iteration, model: &Graph, scope: ModelScope) -> IterationReport {
    let (schema, model_test) = match extract_schema(model) {
        Ok(extracted) => {
            let pitfalls: Vec<FindingEntry> = scan_pitfalls(&extracted.schema)
                .into_iter()
                .map(|p| FindingEntry {
                    kind: p.code.to_string(),
                    severity: Severity::Error,
                    focus: p.subject.to_string(),
                    detail: p.message,
                })
                .collect();
            let test = ModelTest {
                passed: pitfalls.is_empty(),
                schema_error: None,
                schema_warnings: extracted.warnings.iter().map(ToString::to_string).collect(),
                pitfalls,
            };
            (Some(extracted.schema), test)
        }
        Err(e) => (
            None,
            ModelTest {
                passed: false,
                schema_error: Some(e.to_string()),
                schema_warnings: Vec::new(),
                pitfalls: Vec::new(),
            },
        ),
    };
    let Some(schema) = schema else {
        return IterationReport::new(it, scope, model_test, DataTest::skipped(), Vec::new());
    };

    let data = Graph::merge(&it.dataset, model).frozen();
    let (saturated, stats) = saturate_with_stats(&data, &schema, RuleSet::all());
    let saturated = saturated.frozen();
    let violations: Vec<FindingEntry> = validate_instances(&saturated, &schema)
        .into_iter()
        .map(|v| FindingEntry {
            kind: v.kind.to_string(),
            severity: v.severity(),
            focus: v.focus.to_string(),
            detail: v.detail,
        })
        .collect();
    let data_test = DataTest {
        passed: violations.iter().all(|v| v.severity != Severity::Error),
        input_triples: data.len(),
        derived_triples: stats.derived,
        violations,
    };

    let cqs = it
        .questions
        .iter()
        .map(|q| {
            let mut actual: Vec<Row> = Vec::new();
            for query in &q.queries {
                let table = evaluate(query, &saturated);
                for rendered in table.display_rows(query.prefixes()) {
                    actual.push(table.header().iter().cloned().zip(rendered).collect());
                }
            }
            compare(&q.id, &q.text, &q.files, &q.expected, &actual)
        })
        .collect();
    IterationReport::new(it, scope, model_test, data_test, cqs)
}

fn counts(rows: &[Row]) -> BTreeMap<&Row, usize> {
    let mut out = BTreeMap::new();
    for r in rows {
        *out.entry(r).or_insert(0) += 1;
    }
    out
}

/// Multiset comparison; the diff lists rows whose multiplicities differ.
fn compare(id: &str, text: &str, files: &[String], expected: &[Row], actual: &[Row]) -> CqReport {
    let want = counts(expected);
    let got = counts(actual);
    let mut missing = Vec::new();
    let mut unexpected = Vec::new();
    for (row, &n) in &want {
        let m = got.get(row).copied().unwrap_or(0);
        if n > m {
            missing.push(RowCount { row: (*row).clone(), count: n - m });
        }
    }
    for (row, &m) in &got {
        let n = want.get(row).copied().unwrap_or(0);
        if m > n {
            unexpected.push(RowCount { row: (*row).clone(), count: m - n });
        }
    }
    CqReport {
        id: id.to_owned(),
        text: text.to_owned(),
        files: files.to_vec(),
        passed: missing.is_empty() && unexpected.is_empty(),
        expected_rows: expected.len(),
        actual_rows: actual.len(),
        missing,
        unexpected,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(pairs: &[(&str, &str)]) -> Row {
        pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
    }

    #[test]
    fn multiset_comparison_is_exact() {
        let sr = row(&[("d", "SR")]);
        let mf = row(&[("d", "MF")]);
        let one = std::slice::from_ref(&sr);
        assert!(compare("1.1", "", &[], one, one).passed);
        let subset = compare("1.1", "", &[], &[sr.clone(), mf.clone()], one);
        assert!(!subset.passed);
        assert_eq!(subset.missing.len(), 1);
        let doubled = compare("1.1", "", &[], one, &[sr.clone(), sr.clone()]);
        assert!(!doubled.passed);
        assert_eq!(doubled.unexpected[0].count, 1);
        assert!(compare("1.1", "", &[], &[mf.clone(), sr.clone()], &[sr, mf]).passed);
    }
}
