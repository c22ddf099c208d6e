//! Replays SAMOD iterations: model test, data test and query test per
//! iteration, plus the cumulative regression bag.

mod manifest;
mod report;
mod runner;
mod suite;

pub use manifest::{IterationSpec, Manifest, ManifestError, QueryFiles, QuerySpec};
pub use report::{CqReport, DataTest, FindingEntry, IterationReport, ModelScope, ModelTest, RowCount, TestReport};
pub use runner::{run_iteration, run_regression, run_suite};
pub use suite::{load_suite, parse_expected, CompetencyQuestion, Iteration, Row, ScenarioSuite, SuiteError};
