use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::rdf::vocab::{self, owl, rdf, rdfs};
use crate::rdf::{Datatype, Graph, Iri, Term};

/// Declared range of a property.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Range {
    Class(Iri),
    Datatype(Datatype),
    /// `rdfs:Literal`: any literal.
    AnyLiteral,
}

impl fmt::Display for Range {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Range::Class(iri) => iri.fmt(f),
            Range::Datatype(dt) => write!(f, "<{}>", dt.iri_str()),
            Range::AnyLiteral => write!(f, "<{}>", rdfs::LITERAL),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum PropertyKind {
    Object,
    Data,
}

/// Typed view of the class and property declarations in a graph.
///
/// Every edge endpoint and every domain or range class is either in `classes`
/// or in `external`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OntologySchema {
    pub classes: BTreeSet<Iri>,
    pub object_properties: BTreeSet<Iri>,
    pub data_properties: BTreeSet<Iri>,
    pub sub_class_edges: BTreeSet<(Iri, Iri)>,
    pub sub_property_edges: BTreeSet<(Iri, Iri)>,
    pub domain: BTreeMap<Iri, Iri>,
    pub range: BTreeMap<Iri, Range>,
    /// Symmetric: `inverse[p] == q` implies `inverse[q] == p`.
    pub inverse: BTreeMap<Iri, Iri>,
    /// Unordered pairs stored with the smaller IRI first.
    pub disjoint: BTreeSet<(Iri, Iri)>,
    pub labels: BTreeMap<Iri, String>,
    /// Referenced but undeclared IRIs, including builtin classes such as `owl:Thing`.
    pub external: BTreeSet<Iri>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemaError {
    #[error("{iri} is declared both as a class and as a property")]
    SchemaConflict { iri: Iri },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SchemaWarning {
    pub subject: String,
    pub message: String,
}

impl fmt::Display for SchemaWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.subject, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtractedSchema {
    pub schema: OntologySchema,
    pub warnings: Vec<SchemaWarning>,
}

fn iri(s: &str) -> Iri {
    Iri::new(s).expect("vocabulary constant")
}

fn is_well_known(iri: &Iri) -> bool {
    vocab::is_builtin(iri.as_str())
}

/// Collects declarations and axioms from `g`. Unknown vocabulary produces
/// warnings; an IRI that is both a class and a property is an error.
pub fn extract_schema(g: &Graph) -> Result<ExtractedSchema, SchemaError> {
    let mut s = OntologySchema::default();
    let mut warnings = Vec::new();
    let warn = |warnings: &mut Vec<SchemaWarning>, subject: &dyn fmt::Display, message: String| {
        warnings.push(SchemaWarning { subject: subject.to_string(), message })
    };

    let rdf_type = iri(rdf::TYPE);
    for t in g.triples_matching(None, Some(&rdf_type), None) {
        let (Some(subject), Some(kind)) = (t.subject().as_iri(), t.object().as_iri()) else {
            continue;
        };
        match kind.as_str() {
            owl::CLASS | rdfs::CLASS => {
                s.classes.insert(subject.clone());
            }
            owl::OBJECT_PROPERTY | rdf::PROPERTY => {
                s.object_properties.insert(subject.clone());
            }
            owl::DATATYPE_PROPERTY => {
                s.data_properties.insert(subject.clone());
            }
            _ => {}
        }
    }

    if let Some(iri) = s.classes.iter().find(|c| s.object_properties.contains(*c) || s.data_properties.contains(*c)) {
        return Err(SchemaError::SchemaConflict { iri: iri.clone() });
    }
    for p in s.object_properties.intersection(&s.data_properties) {
        warn(&mut warnings, p, "declared both as object and datatype property".into());
    }

    let pairs = |pred: &str| -> Vec<(Term, Term)> {
        g.triples_matching(None, Some(&iri(pred)), None)
            .into_iter()
            .map(|t| (t.subject().clone(), t.object().clone()))
            .collect()
    };
    let both_iris = |a: &Term, b: &Term| -> Option<(Iri, Iri)> { Some((a.as_iri()?.clone(), b.as_iri()?.clone())) };

    for (a, b) in pairs(rdfs::SUB_CLASS_OF) {
        match both_iris(&a, &b) {
            Some(edge) => {
                s.sub_class_edges.insert(edge);
            }
            None => warn(&mut warnings, &a, "subClassOf between non-IRI terms is ignored".into()),
        }
    }
    for (a, b) in pairs(rdfs::SUB_PROPERTY_OF) {
        match both_iris(&a, &b) {
            Some(edge) => {
                s.sub_property_edges.insert(edge);
            }
            None => warn(&mut warnings, &a, "subPropertyOf between non-IRI terms is ignored".into()),
        }
    }
    for (p, c) in pairs(rdfs::DOMAIN) {
        let Some((p, c)) = both_iris(&p, &c) else {
            warn(&mut warnings, &p, "domain between non-IRI terms is ignored".into());
            continue;
        };
        match s.domain.get(&p) {
            Some(existing) if *existing != c => {
                warn(&mut warnings, &p, format!("additional domain {c} ignored; keeping {existing}"))
            }
            _ => {
                s.domain.insert(p, c);
            }
        }
    }
    for (p, r) in pairs(rdfs::RANGE) {
        let Some((p, r)) = both_iris(&p, &r) else {
            warn(&mut warnings, &p, "range between non-IRI terms is ignored".into());
            continue;
        };
        let range = if r.as_str() == rdfs::LITERAL {
            Range::AnyLiteral
        } else if let Some(dt) = Datatype::from_iri(r.as_str()) {
            Range::Datatype(dt)
        } else if r.as_str().starts_with(vocab::xsd::NS) {
            warn(&mut warnings, &p, format!("unsupported datatype range {r}; treated as any literal"));
            Range::AnyLiteral
        } else {
            Range::Class(r)
        };
        match s.range.get(&p) {
            Some(existing) if *existing != range => {
                warn(&mut warnings, &p, format!("additional range {range} ignored; keeping {existing}"))
            }
            _ => {
                s.range.insert(p, range);
            }
        }
    }
    for (p, q) in pairs(owl::INVERSE_OF) {
        let Some((p, q)) = both_iris(&p, &q) else { continue };
        s.inverse.insert(p.clone(), q.clone());
        s.inverse.insert(q, p);
    }
    for (a, b) in pairs(owl::DISJOINT_WITH) {
        let Some((a, b)) = both_iris(&a, &b) else { continue };
        s.disjoint.insert(if a <= b { (a, b) } else { (b, a) });
    }
    // First untagged or English label wins, otherwise the first label.
    let mut preferred = BTreeSet::new();
    for (x, l) in pairs(rdfs::LABEL) {
        let (Some(x), Some(lit)) = (x.as_iri(), l.as_literal()) else { continue };
        let is_preferred = lit.lang().map_or(true, |l| l == "en" || l.starts_with("en-"));
        if !preferred.contains(x) && (is_preferred || !s.labels.contains_key(x)) {
            s.labels.insert(x.clone(), lit.lexical().to_owned());
            if is_preferred {
                preferred.insert(x.clone());
            }
        }
    }

    // Endpoints that are not declared become external.
    let mut referenced_classes: Vec<Iri> = Vec::new();
    for (a, b) in &s.sub_class_edges {
        referenced_classes.push(a.clone());
        referenced_classes.push(b.clone());
    }
    referenced_classes.extend(s.domain.values().cloned());
    referenced_classes.extend(s.range.values().filter_map(|r| match r {
        Range::Class(c) => Some(c.clone()),
        _ => None,
    }));
    for (a, b) in &s.disjoint {
        referenced_classes.push(a.clone());
        referenced_classes.push(b.clone());
    }
    for c in referenced_classes {
        if !s.classes.contains(&c) && s.external.insert(c.clone()) && !is_well_known(&c) {
            warn(&mut warnings, &c, "referenced as a class but not declared".into());
        }
    }
    let mut referenced_properties: Vec<Iri> = Vec::new();
    for (a, b) in &s.sub_property_edges {
        referenced_properties.push(a.clone());
        referenced_properties.push(b.clone());
    }
    referenced_properties.extend(s.domain.keys().cloned());
    referenced_properties.extend(s.range.keys().cloned());
    referenced_properties.extend(s.inverse.keys().cloned());
    for p in referenced_properties {
        if !s.is_property(&p) && s.external.insert(p.clone()) && !is_well_known(&p) {
            warn(&mut warnings, &p, "referenced as a property but not declared".into());
        }
    }

    Ok(ExtractedSchema { schema: s, warnings })
}

impl OntologySchema {
    pub fn is_class(&self, iri: &Iri) -> bool {
        self.classes.contains(iri)
    }

    pub fn is_property(&self, iri: &Iri) -> bool {
        self.object_properties.contains(iri) || self.data_properties.contains(iri)
    }

    pub fn property_kind(&self, iri: &Iri) -> Option<PropertyKind> {
        if self.object_properties.contains(iri) {
            Some(PropertyKind::Object)
        } else if self.data_properties.contains(iri) {
            Some(PropertyKind::Data)
        } else {
            None
        }
    }

    /// Classes and properties declared by this schema.
    pub fn declared_entities(&self) -> BTreeSet<Iri> {
        self.classes.iter().chain(&self.object_properties).chain(&self.data_properties).cloned().collect()
    }

    /// Whether `sup` is reachable from `sub` in the reflexive-transitive closure
    /// of the subclass edges.
    pub fn is_subclass_of(&self, sub: &Iri, sup: &Iri) -> bool {
        sub == sup || reachable(&self.sub_class_edges, sub).contains(sup)
    }

    pub fn is_subproperty_of(&self, sub: &Iri, sup: &Iri) -> bool {
        sub == sup || reachable(&self.sub_property_edges, sub).contains(sup)
    }

    /// Reflexive-transitive superclasses of `class`.
    pub fn superclasses(&self, class: &Iri) -> BTreeSet<Iri> {
        let mut out = reachable(&self.sub_class_edges, class);
        out.insert(class.clone());
        out
    }

    /// Reflexive-transitive superproperties of `property`.
    pub fn superproperties(&self, property: &Iri) -> BTreeSet<Iri> {
        let mut out = reachable(&self.sub_property_edges, property);
        out.insert(property.clone());
        out
    }

    /// Whether two classes are declared disjoint, directly or through superclasses.
    pub fn are_disjoint(&self, a: &Iri, b: &Iri) -> bool {
        let sa = self.superclasses(a);
        let sb = self.superclasses(b);
        self.disjoint.iter().any(|(x, y)| (sa.contains(x) && sb.contains(y)) || (sa.contains(y) && sb.contains(x)))
    }
}

/// Nodes reachable from `start` by one or more edges (breadth first).
pub(crate) fn reachable(edges: &BTreeSet<(Iri, Iri)>, start: &Iri) -> BTreeSet<Iri> {
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::from([start.clone()]);
    while let Some(node) = queue.pop_front() {
        for (_, to) in edges.iter().filter(|(from, _)| *from == node) {
            if seen.insert(to.clone()) {
                queue.push_back(to.clone());
            }
        }
    }
    seen
}
