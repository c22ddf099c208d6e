use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::ontology::{reachable, OntologySchema, Range};
use crate::rdf::Iri;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum PitfallCode {
    NoDomain,
    NoRange,
    NoLabel,
    OrphanClass,
    HierarchyCycle,
}

impl fmt::Display for PitfallCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pitfall {
    pub code: PitfallCode,
    pub subject: Iri,
    pub message: String,
}

impl fmt::Display for Pitfall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}: {}", self.code, self.subject, self.message)
    }
}

/// Model-test checks over the declared entities of a schema, sorted by
/// `(code, subject)`.
pub fn scan_pitfalls(schema: &OntologySchema) -> Vec<Pitfall> {
    let mut out = Vec::new();
    let mut push = |code, subject: &Iri, message: &str| {
        out.push(Pitfall { code, subject: subject.clone(), message: message.to_owned() })
    };

    let properties: BTreeSet<&Iri> = schema.object_properties.iter().chain(&schema.data_properties).collect();
    for p in &properties {
        if !schema.domain.contains_key(*p) {
            push(PitfallCode::NoDomain, p, "property has no domain");
        }
        if !schema.range.contains_key(*p) {
            push(PitfallCode::NoRange, p, "property has no range");
        }
    }
    for x in schema.classes.iter().chain(properties.iter().copied()) {
        if !schema.labels.contains_key(x) {
            push(PitfallCode::NoLabel, x, "entity has no rdfs:label");
        }
    }

    let mut used: BTreeSet<&Iri> = BTreeSet::new();
    for (a, b) in &schema.sub_class_edges {
        used.insert(a);
        used.insert(b);
    }
    used.extend(schema.domain.values());
    used.extend(schema.range.values().filter_map(|r| match r {
        Range::Class(c) => Some(c),
        _ => None,
    }));
    for c in &schema.classes {
        if !used.contains(c) {
            push(PitfallCode::OrphanClass, c, "class has no hierarchy edge and is no domain or range");
        }
    }

    for (edges, kind) in [(&schema.sub_class_edges, "class"), (&schema.sub_property_edges, "property")] {
        let nodes: BTreeSet<&Iri> = edges.iter().map(|(a, _)| a).collect();
        for n in nodes {
            if reachable(edges, n).contains(n) {
                push(PitfallCode::HierarchyCycle, n, &format!("{kind} is its own strict ancestor"));
            }
        }
    }

    out.sort_by(|a, b| (a.code, &a.subject).cmp(&(b.code, &b.subject)));
    out.dedup_by(|a, b| a.code == b.code && a.subject == b.subject);
    out
}
