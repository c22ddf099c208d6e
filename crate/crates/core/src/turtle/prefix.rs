use std::collections::BTreeMap;

use crate::rdf::{Datatype, Iri, Literal, Term};

use super::lexer::is_plain_local_name;

/// Prefix label to namespace bindings plus an optional base IRI.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PrefixMap {
    prefixes: BTreeMap<String, Iri>,
    base: Option<Iri>,
}

impl PrefixMap {
    pub fn new() -> Self {
        PrefixMap::default()
    }

    /// Binds `label`, replacing any earlier binding; returns the replaced namespace.
    pub fn insert(&mut self, label: impl Into<String>, namespace: Iri) -> Option<Iri> {
        self.prefixes.insert(label.into(), namespace)
    }

    pub fn get(&self, label: &str) -> Option<&Iri> {
        self.prefixes.get(label)
    }

    pub fn base(&self) -> Option<&Iri> {
        self.base.as_ref()
    }

    pub fn set_base(&mut self, base: Option<Iri>) {
        self.base = base;
    }

    pub fn len(&self) -> usize {
        self.prefixes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prefixes.is_empty()
    }

    /// Bindings in label order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &Iri)> {
        self.prefixes.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Adds every binding of `other` whose label is still free.
    pub fn absorb(&mut self, other: &PrefixMap) {
        for (label, ns) in other.iter() {
            self.prefixes.entry(label.to_owned()).or_insert_with(|| ns.clone());
        }
    }

    pub fn expand(&self, label: &str, local: &str) -> Option<Iri> {
        let ns = self.prefixes.get(label)?;
        Iri::new(format!("{}{}", ns.as_str(), local)).ok()
    }

    /// Shortest prefixed form of `iri` using the longest matching namespace whose
    /// remainder is a plain local name.
    pub fn compact(&self, iri: &Iri) -> Option<String> {
        let text = iri.as_str();
        self.prefixes
            .iter()
            .filter(|(_, ns)| text.starts_with(ns.as_str()))
            .filter(|(_, ns)| is_plain_local_name(&text[ns.as_str().len()..]))
            .max_by(|(la, a), (lb, b)| a.as_str().len().cmp(&b.as_str().len()).then_with(|| lb.cmp(la)))
            .map(|(label, ns)| format!("{label}:{}", &text[ns.as_str().len()..]))
    }

    pub fn render_iri(&self, iri: &Iri) -> String {
        self.compact(iri).unwrap_or_else(|| iri.to_string())
    }

    /// Turtle rendering of a term; literals use the bare numeric or boolean form
    /// only when it reads back as the same datatype.
    pub fn render_term(&self, term: &Term) -> String {
        match term {
            Term::Iri(iri) => self.render_iri(iri),
            Term::Blank(b) => b.to_string(),
            Term::Literal(lit) => self.render_literal(lit),
        }
    }

    pub fn render_literal(&self, lit: &Literal) -> String {
        let quoted = format!("\"{}\"", crate::rdf::escape_string(lit.lexical()));
        match lit.datatype() {
            Datatype::String => quoted,
            Datatype::LangString => format!("{quoted}@{}", lit.lang().unwrap_or_default()),
            dt => {
                if bare_form_reads_back(lit.lexical(), dt) {
                    lit.lexical().to_owned()
                } else {
                    format!("{quoted}^^{}", self.render_iri(&dt.iri()))
                }
            }
        }
    }
}

fn bare_form_reads_back(lexical: &str, dt: Datatype) -> bool {
    let body = lexical.strip_prefix(['+', '-']).unwrap_or(lexical);
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    match dt {
        Datatype::Integer => digits(body),
        Datatype::Decimal => match body.split_once('.') {
            Some((w, f)) => (w.is_empty() || digits(w)) && digits(f),
            None => false,
        },
        Datatype::Boolean => matches!(lexical, "true" | "false"),
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ns(s: &str) -> Iri {
        Iri::new(s).unwrap()
    }

    #[test]
    fn holds_alignment_prefixes() {
        let mut map = PrefixMap::new();
        for label in [
            "skos",
            "crm",
            "arco-context",
            "arco-archive",
            "org",
            "dul",
            "fentry",
            "hico",
            "prov",
            "fabio",
            "cito",
            "zamoa",
            "zamoe",
            "zamos",
        ] {
            map.insert(label, ns(&format!("http://example.org/{label}/")));
        }
        assert_eq!(map.len(), 14);
        assert_eq!(map.expand("arco-context", "x").unwrap().as_str(), "http://example.org/arco-context/x");
    }

    #[test]
    fn compact_prefers_longest_namespace() {
        let mut map = PrefixMap::new();
        map.insert("a", ns("http://e.org/"));
        map.insert("b", ns("http://e.org/x/"));
        assert_eq!(map.compact(&ns("http://e.org/x/y")).as_deref(), Some("b:y"));
        assert_eq!(map.compact(&ns("http://e.org/z")).as_deref(), Some("a:z"));
        assert_eq!(map.compact(&ns("http://e.org/x/a%")), None);
        assert_eq!(map.render_iri(&ns("http://other/q")), "<http://other/q>");
    }

    #[test]
    fn literal_rendering() {
        let map = PrefixMap::new();
        let lit = |l: &str, d| Literal::new(l, d, None).unwrap();
        assert_eq!(map.render_literal(&lit("15000", Datatype::Integer)), "15000");
        assert_eq!(map.render_literal(&lit("2.5", Datatype::Decimal)), "2.5");
        assert_eq!(
            map.render_literal(&lit("15000", Datatype::Decimal)),
            "\"15000\"^^<http://www.w3.org/2001/XMLSchema#decimal>"
        );
        assert_eq!(
            map.render_literal(&lit("1", Datatype::Boolean)),
            "\"1\"^^<http://www.w3.org/2001/XMLSchema#boolean>"
        );
        assert_eq!(map.render_literal(&Literal::string("a\"b")), "\"a\\\"b\"");
    }
}
