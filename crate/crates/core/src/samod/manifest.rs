use std::collections::BTreeSet;

use serde::Deserialize;
use thiserror::Error;

use crate::ontology::Module;

/// A suite manifest as written on disk. Paths are relative to the manifest.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub module: Module,
    /// Modules whose full vocabulary backs every modelet; defaults to the
    /// other two modules.
    #[serde(default)]
    pub imports: Option<Vec<Module>>,
    pub iterations: Vec<IterationSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IterationSpec {
    pub id: u32,
    pub title: String,
    pub modelet: String,
    pub dataset: String,
    pub queries: Vec<QuerySpec>,
}

/// One competency question. Several query files unite their answers.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuerySpec {
    pub file: QueryFiles,
    pub text: String,
    pub expected: String,
    /// The answer as the scenario states it, kept for reports.
    #[serde(default)]
    pub answer_text: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
pub enum QueryFiles {
    One(String),
    Many(Vec<String>),
}

impl QueryFiles {
    pub fn paths(&self) -> Vec<&str> {
        match self {
            QueryFiles::One(p) => vec![p.as_str()],
            QueryFiles::Many(ps) => ps.iter().map(String::as_str).collect(),
        }
    }
}

#[derive(Debug, Error)]
pub enum ManifestError {
    #[error("malformed manifest: {0}")]
    Json(#[from] serde_json::Error),
    #[error("manifest has no iterations")]
    NoIterations,
    #[error("iteration ids must be strictly increasing; {0} follows {1}")]
    IterationOrder(u32, u32),
    #[error("iteration {0} has no competency questions")]
    NoQueries(u32),
    #[error("a competency question of iteration {0} lists no query file")]
    NoQueryFile(u32),
    #[error("module {0} imports itself")]
    SelfImport(Module),
}

impl Manifest {
    pub fn from_json(text: &str) -> Result<Self, ManifestError> {
        let m: Manifest = serde_json::from_str(text)?;
        m.check()?;
        Ok(m)
    }

    fn check(&self) -> Result<(), ManifestError> {
        if self.iterations.is_empty() {
            return Err(ManifestError::NoIterations);
        }
        for pair in self.iterations.windows(2) {
            if pair[1].id <= pair[0].id {
                return Err(ManifestError::IterationOrder(pair[1].id, pair[0].id));
            }
        }
        for it in &self.iterations {
            if it.queries.is_empty() {
                return Err(ManifestError::NoQueries(it.id));
            }
            if it.queries.iter().any(|q| q.file.paths().is_empty()) {
                return Err(ManifestError::NoQueryFile(it.id));
            }
        }
        if self.imports.as_ref().is_some_and(|i| i.contains(&self.module)) {
            return Err(ManifestError::SelfImport(self.module));
        }
        Ok(())
    }

    /// Background modules, sorted and deduplicated.
    pub fn background_modules(&self) -> Vec<Module> {
        let set: BTreeSet<Module> = match &self.imports {
            Some(list) => list.iter().copied().collect(),
            None => Module::ALL.into_iter().filter(|m| *m != self.module).collect(),
        };
        set.into_iter().collect()
    }
}
