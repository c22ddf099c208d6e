use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::ontology::{builtin_vocabulary, controlled_vocabulary, standard_prefixes, Module};
use crate::query::{parse_query, Query};
use crate::rdf::Graph;
use crate::turtle::{parse_turtle, ParseError};

use super::manifest::{Manifest, ManifestError};

/// An expected or actual answer row: variable name to rendered term.
pub type Row = BTreeMap<String, String>;

#[derive(Debug, Clone)]
pub struct CompetencyQuestion {
    /// `iteration.position`, for example `2.3`.
    pub id: String,
    pub text: String,
    pub answer_text: Option<String>,
    pub files: Vec<String>,
    pub queries: Vec<Query>,
    pub expected: Vec<Row>,
}

#[derive(Debug, Clone)]
pub struct Iteration {
    pub id: u32,
    pub title: String,
    pub modelet: Graph,
    pub dataset: Graph,
    pub questions: Vec<CompetencyQuestion>,
}

/// A fully loaded suite: every file read and parsed.
#[derive(Debug, Clone)]
pub struct ScenarioSuite {
    pub module: Module,
    /// Full vocabularies of the imported modules plus the controlled vocabulary.
    pub background: Graph,
    pub iterations: Vec<Iteration>,
}

impl ScenarioSuite {
    pub fn iteration(&self, id: u32) -> Option<&Iteration> {
        self.iterations.iter().find(|i| i.id == id)
    }

    pub fn question_count(&self) -> usize {
        self.iterations.iter().map(|i| i.questions.len()).sum()
    }
}

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Manifest {
        path: PathBuf,
        #[source]
        source: ManifestError,
    },
    #[error("{path}:{error}")]
    Turtle { path: PathBuf, error: ParseError },
    #[error("{path}:{error}")]
    Query { path: PathBuf, error: ParseError },
    #[error("{path}: {message}")]
    Expected { path: PathBuf, message: String },
    #[error("{path}: expected row {row} has columns {columns:?}, which match no query header {headers:?}")]
    HeaderMismatch { path: PathBuf, row: usize, columns: Vec<String>, headers: Vec<Vec<String>> },
}

fn read(path: &Path) -> Result<String, SuiteError> {
    fs::read_to_string(path).map_err(|source| SuiteError::Io { path: path.to_owned(), source })
}

fn turtle(path: &Path) -> Result<Graph, SuiteError> {
    parse_turtle(&read(path)?, None)
        .map(|p| p.graph)
        .map_err(|error| SuiteError::Turtle { path: path.to_owned(), error })
}

/// Parses an expected-answer file: a JSON array of objects with string values.
pub fn parse_expected(text: &str) -> Result<Vec<Row>, String> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
    let rows = value.as_array().ok_or("expected a JSON array of rows")?;
    rows.iter()
        .enumerate()
        .map(|(i, r)| {
            let obj = r.as_object().ok_or_else(|| format!("row {i} is not an object"))?;
            obj.iter()
                .map(|(k, v)| match v.as_str() {
                    Some(s) => Ok((k.clone(), s.to_owned())),
                    None => Err(format!("row {i} column {k} is not a string")),
                })
                .collect()
        })
        .collect()
}

/// Reads a manifest and everything it references.
pub fn load_suite(manifest_path: &Path) -> Result<ScenarioSuite, SuiteError> {
    let manifest = Manifest::from_json(&read(manifest_path)?)
        .map_err(|source| SuiteError::Manifest { path: manifest_path.to_owned(), source })?;
    let dir = manifest_path.parent().unwrap_or(Path::new("."));
    let mut background = controlled_vocabulary();
    for m in manifest.background_modules() {
        background = Graph::merge(&background, &builtin_vocabulary(m));
    }
    let defaults = standard_prefixes();

    let mut iterations = Vec::new();
    for spec in &manifest.iterations {
        let modelet = turtle(&dir.join(&spec.modelet))?;
        let dataset = turtle(&dir.join(&spec.dataset))?;
        let mut questions = Vec::new();
        for (n, q) in spec.queries.iter().enumerate() {
            let mut queries = Vec::new();
            for file in q.file.paths() {
                let path = dir.join(file);
                let query = parse_query(&read(&path)?, &defaults).map_err(|error| SuiteError::Query { path, error })?;
                queries.push(query);
            }
            let expected_path = dir.join(&q.expected);
            let expected = parse_expected(&read(&expected_path)?)
                .map_err(|message| SuiteError::Expected { path: expected_path.clone(), message })?;
            let headers: Vec<BTreeSet<&str>> =
                queries.iter().map(|query| query.projection().iter().map(|v| v.name()).collect()).collect();
            for (i, row) in expected.iter().enumerate() {
                let columns: BTreeSet<&str> = row.keys().map(String::as_str).collect();
                if !headers.contains(&columns) {
                    return Err(SuiteError::HeaderMismatch {
                        path: expected_path,
                        row: i,
                        columns: columns.into_iter().map(str::to_owned).collect(),
                        headers: headers.iter().map(|h| h.iter().map(|s| s.to_string()).collect()).collect(),
                    });
                }
            }
            questions.push(CompetencyQuestion {
                id: format!("{}.{}", spec.id, n + 1),
                text: q.text.clone(),
                answer_text: q.answer_text.clone(),
                files: q.file.paths().into_iter().map(str::to_owned).collect(),
                queries,
                expected,
            });
        }
        iterations.push(Iteration { id: spec.id, title: spec.title.clone(), modelet, dataset, questions });
    }
    Ok(ScenarioSuite { module: manifest.module, background, iterations })
}
