use std::collections::{HashMap, HashSet};

use thiserror::Error;

use super::term::{BlankNode, Iri, Term, Triple};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph is frozen")]
    FrozenGraph,
}

/// An insertion-ordered set of triples indexed by subject, predicate and object.
///
/// Indexes hold positions into the triple vector, so every lookup yields
/// triples in the order they were first inserted.
#[derive(Debug, Clone, Default)]
pub struct Graph {
    triples: Vec<Triple>,
    positions: HashMap<Triple, usize>,
    by_subject: HashMap<Term, Vec<usize>>,
    by_predicate: HashMap<Iri, Vec<usize>>,
    by_object: HashMap<Term, Vec<usize>>,
    frozen: bool,
}

impl Graph {
    pub fn new() -> Self {
        Graph::default()
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn is_frozen(&self) -> bool {
        self.frozen
    }

    pub fn freeze(&mut self) {
        self.frozen = true;
    }

    pub fn frozen(mut self) -> Self {
        self.frozen = true;
        self
    }

    /// Inserts a triple, returning whether it was new.
    pub fn insert(&mut self, triple: Triple) -> Result<bool, GraphError> {
        if self.frozen {
            return Err(GraphError::FrozenGraph);
        }
        if self.positions.contains_key(&triple) {
            return Ok(false);
        }
        let pos = self.triples.len();
        self.by_subject.entry(triple.subject().clone()).or_default().push(pos);
        self.by_predicate.entry(triple.predicate().clone()).or_default().push(pos);
        self.by_object.entry(triple.object().clone()).or_default().push(pos);
        self.positions.insert(triple.clone(), pos);
        self.triples.push(triple);
        Ok(true)
    }

    pub fn extend<I: IntoIterator<Item = Triple>>(&mut self, triples: I) -> Result<(), GraphError> {
        for t in triples {
            self.insert(t)?;
        }
        Ok(())
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.positions.contains_key(triple)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Triple> {
        self.triples.iter()
    }

    /// Triples agreeing with every bound position; `None` is a wildcard.
    pub fn triples_matching(
        &self,
        subject: Option<&Term>,
        predicate: Option<&Iri>,
        object: Option<&Term>,
    ) -> Vec<&Triple> {
        const EMPTY: &[usize] = &[];
        let lists = [
            subject.map(|s| self.by_subject.get(s).map_or(EMPTY, Vec::as_slice)),
            predicate.map(|p| self.by_predicate.get(p).map_or(EMPTY, Vec::as_slice)),
            object.map(|o| self.by_object.get(o).map_or(EMPTY, Vec::as_slice)),
        ];
        let candidates = lists.into_iter().flatten().min_by_key(|l| l.len());
        let keep = |t: &&Triple| {
            subject.map_or(true, |s| t.subject() == s)
                && predicate.map_or(true, |p| t.predicate() == p)
                && object.map_or(true, |o| t.object() == o)
        };
        match candidates {
            None => self.triples.iter().collect(),
            Some(positions) => positions.iter().map(|&i| &self.triples[i]).filter(keep).collect(),
        }
    }

    /// Number of triples that a pattern with these bound positions could touch,
    /// taken from the smallest applicable index.
    pub fn estimate(&self, subject: Option<&Term>, predicate: Option<&Iri>, object: Option<&Term>) -> usize {
        let mut best = self.triples.len();
        if let Some(s) = subject {
            best = best.min(self.by_subject.get(s).map_or(0, Vec::len));
        }
        if let Some(p) = predicate {
            best = best.min(self.by_predicate.get(p).map_or(0, Vec::len));
        }
        if let Some(o) = object {
            best = best.min(self.by_object.get(o).map_or(0, Vec::len));
        }
        best
    }

    pub fn objects(&self, subject: &Term, predicate: &Iri) -> Vec<&Term> {
        self.triples_matching(Some(subject), Some(predicate), None).into_iter().map(Triple::object).collect()
    }

    /// Distinct terms in order of first occurrence.
    pub fn terms(&self) -> Vec<Term> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for t in &self.triples {
            let p = Term::Iri(t.predicate().clone());
            for term in [t.subject(), &p, t.object()] {
                if seen.insert(term.clone()) {
                    out.push(term.clone());
                }
            }
        }
        out
    }

    /// Set union; the result is unfrozen and the inputs are untouched.
    pub fn merge(a: &Graph, b: &Graph) -> Graph {
        let mut out = Graph::new();
        for t in a.iter().chain(b.iter()) {
            out.insert(t.clone()).expect("fresh graph is not frozen");
        }
        out
    }

    /// Copy with blank nodes renamed `c0`, `c1`, ... in order of first occurrence.
    pub fn with_canonical_blank_nodes(&self) -> Graph {
        let mut names: HashMap<BlankNode, BlankNode> = HashMap::new();
        let mut rename = |term: &Term| match term {
            Term::Blank(b) => {
                let next = names.len();
                Term::Blank(
                    names
                        .entry(b.clone())
                        .or_insert_with(|| BlankNode::new(format!("c{next}")).expect("valid label"))
                        .clone(),
                )
            }
            other => other.clone(),
        };
        let mut out = Graph::new();
        for t in &self.triples {
            let s = rename(t.subject());
            let o = rename(t.object());
            out.insert(Triple::new(s, t.predicate().clone(), o).expect("subject kind preserved"))
                .expect("fresh graph is not frozen");
        }
        out
    }

    /// Equality used when comparing test graphs: blank nodes are compared after
    /// canonical relabeling.
    pub fn equivalent(&self, other: &Graph) -> bool {
        let has_blanks = |g: &Graph| g.iter().any(|t| t.subject().is_blank() || t.object().is_blank());
        if has_blanks(self) || has_blanks(other) {
            self.with_canonical_blank_nodes() == other.with_canonical_blank_nodes()
        } else {
            self == other
        }
    }

    /// Triples in a canonical sorted order.
    pub fn sorted_triples(&self) -> Vec<&Triple> {
        let mut out: Vec<&Triple> = self.triples.iter().collect();
        out.sort();
        out
    }
}

/// Set equality; insertion order and frozen state are ignored.
impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.len() == other.len() && self.triples.iter().all(|t| other.contains(t))
    }
}

impl Eq for Graph {}

impl<'a> IntoIterator for &'a Graph {
    type Item = &'a Triple;
    type IntoIter = std::slice::Iter<'a, Triple>;

    fn into_iter(self) -> Self::IntoIter {
        self.triples.iter()
    }
}

impl FromIterator<Triple> for Graph {
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> Self {
        let mut g = Graph::new();
        g.extend(iter).expect("fresh graph is not frozen");
        g
    }
}
