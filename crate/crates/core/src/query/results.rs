use std::collections::BTreeMap;

use thiserror::Error;

use crate::rdf::{Datatype, Term};
use crate::turtle::PrefixMap;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("row {row} has {found} entries but the header has {expected}")]
pub struct ArityError {
    pub row: usize,
    pub expected: usize,
    pub found: usize,
}

/// Solution rows under a header of variable names. `None` is an unbound entry.
/// Invariant: every row has header-length entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ResultTable {
    header: Vec<String>,
    rows: Vec<Vec<Option<Term>>>,
}

impl ResultTable {
    pub fn new(header: Vec<String>, rows: Vec<Vec<Option<Term>>>) -> Result<Self, ArityError> {
        if let Some((row, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != header.len()) {
            return Err(ArityError { row, expected: header.len(), found: r.len() });
        }
        Ok(ResultTable { header, rows })
    }

    pub fn header(&self) -> &[String] {
        &self.header
    }

    pub fn rows(&self) -> &[Vec<Option<Term>>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Row multiset: each distinct row with its multiplicity.
    pub fn multiset(&self) -> BTreeMap<&[Option<Term>], usize> {
        let mut out = BTreeMap::new();
        for r in &self.rows {
            *out.entry(r.as_slice()).or_insert(0) += 1;
        }
        out
    }

    /// Rows as rendered strings: literals by lexical form, IRIs as prefixed
    /// names when possible, unbound entries as the empty string.
    pub fn display_rows(&self, prefixes: &PrefixMap) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|t| t.as_ref().map_or_else(String::new, |t| display_term(t, prefixes))).collect())
            .collect()
    }

    /// CSV with a header row. IRIs are prefixed names when possible and
    /// literals are quoted with their datatype or language suffix.
    pub fn to_csv(&self, prefixes: &PrefixMap) -> String {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.header).expect("writing to memory");
        for r in &self.rows {
            let fields: Vec<String> =
                r.iter().map(|t| t.as_ref().map_or_else(String::new, |t| csv_term(t, prefixes))).collect();
            w.write_record(&fields).expect("writing to memory");
        }
        String::from_utf8(w.into_inner().expect("flushing memory")).expect("CSV of UTF-8 fields")
    }
}

/// Human-facing form used to compare against expected answers.
pub fn display_term(t: &Term, prefixes: &PrefixMap) -> String {
    match t {
        Term::Iri(iri) => prefixes.compact(iri).unwrap_or_else(|| iri.as_str().to_owned()),
        Term::Blank(b) => b.to_string(),
        Term::Literal(lit) => lit.lexical().to_owned(),
    }
}

fn csv_term(t: &Term, prefixes: &PrefixMap) -> String {
    match t {
        Term::Literal(lit) => {
            let quoted = format!("\"{}\"", crate::rdf::escape_string(lit.lexical()));
            match (lit.datatype(), lit.lang()) {
                (_, Some(lang)) => format!("{quoted}@{lang}"),
                (Datatype::String, None) => quoted,
                (dt, None) => format!("{quoted}^^{}", prefixes.render_iri(&dt.iri())),
            }
        }
        other => prefixes.render_term(other),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::{Iri, Literal};

    #[test]
    fn arity_is_checked() {
        assert!(ResultTable::new(vec!["a".into()], vec![vec![None, None]]).is_err());
    }

    #[test]
    fn csv_rendering() {
        let mut prefixes = PrefixMap::new();
        prefixes.insert("xsd", Iri::new("http://www.w3.org/2001/XMLSchema#").unwrap());
        prefixes.insert("", Iri::new("https://w3id.org/zeri/samod/agents/").unwrap());
        let year = Term::Literal(Literal::new("1949", Datatype::GYear, None).unwrap());
        let who = Term::iri("https://w3id.org/zeri/samod/agents/SR").unwrap();
        let name = Term::Literal(Literal::string("Arti d'Urbe, Rome"));
        let t = ResultTable::new(
            vec!["who".into(), "year".into(), "name".into(), "gap".into()],
            vec![vec![Some(who), Some(year), Some(name), None]],
        )
        .unwrap();
        assert_eq!(
            t.to_csv(&prefixes),
            "who,year,name,gap\n:SR,\"\"\"1949\"\"^^xsd:gYear\",\"\"\"Arti d'Urbe, Rome\"\"\",\n"
        );
        assert_eq!(t.display_rows(&prefixes), [[":SR", "1949", "Arti d'Urbe, Rome", ""]]);
    }
}
