use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::ontology::{OntologySchema, PropertyKind, Range};
use crate::rdf::vocab::{self, rdf};
use crate::rdf::{Graph, Iri, Term};
use crate::turtle::Severity;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ViolationKind {
    DisjointnessClash,
    LiteralAsObject,
    DatatypeMismatch,
    UndeclaredProperty,
    UndeclaredClass,
}

impl ViolationKind {
    pub fn severity(self) -> Severity {
        match self {
            ViolationKind::UndeclaredProperty | ViolationKind::UndeclaredClass => Severity::Warning,
            _ => Severity::Error,
        }
    }
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A data-test finding. `focus` is always a term of the validated graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Violation {
    pub kind: ViolationKind,
    pub focus: Term,
    pub detail: String,
}

impl Violation {
    pub fn severity(&self) -> Severity {
        self.kind.severity()
    }

    pub fn is_error(&self) -> bool {
        self.severity() == Severity::Error
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}: {}", self.severity(), self.kind, self.focus, self.detail)
    }
}

/// Checks instance data against the schema. Terms of the builtin W3C
/// vocabularies are never reported as undeclared. The result is sorted.
pub fn validate_instances(data: &Graph, schema: &OntologySchema) -> Vec<Violation> {
    let mut out = BTreeSet::new();
    let rdf_type = Iri::new(rdf::TYPE).expect("constant");
    let mut types: BTreeMap<&Term, BTreeSet<Iri>> = BTreeMap::new();

    for t in data {
        let p = t.predicate();
        if *p == rdf_type {
            if let Some(class) = t.object().as_iri() {
                types.entry(t.subject()).or_default().extend(schema.superclasses(class));
                if !schema.is_class(class) && !vocab::is_builtin(class.as_str()) {
                    out.insert(Violation {
                        kind: ViolationKind::UndeclaredClass,
                        focus: class.clone().into(),
                        detail: "used as a type but not declared as a class".into(),
                    });
                }
            }
            continue;
        }
        match schema.property_kind(p) {
            Some(PropertyKind::Object) => {
                if let Term::Literal(lit) = t.object() {
                    out.insert(Violation {
                        kind: ViolationKind::LiteralAsObject,
                        focus: t.subject().clone(),
                        detail: format!("object property {p} has literal value {lit}"),
                    });
                }
            }
            Some(PropertyKind::Data) => match (t.object(), schema.range.get(p)) {
                (Term::Literal(lit), Some(Range::Datatype(expected))) if !lit.datatype().conforms_to(*expected) => {
                    out.insert(Violation {
                        kind: ViolationKind::DatatypeMismatch,
                        focus: t.subject().clone(),
                        detail: format!("{p} expects <{}> but has {lit}", expected.iri_str()),
                    });
                }
                (Term::Literal(_), _) => {}
                (other, _) => {
                    out.insert(Violation {
                        kind: ViolationKind::DatatypeMismatch,
                        focus: t.subject().clone(),
                        detail: format!("datatype property {p} has non-literal value {other}"),
                    });
                }
            },
            None => {
                if !vocab::is_builtin(p.as_str()) {
                    out.insert(Violation {
                        kind: ViolationKind::UndeclaredProperty,
                        focus: p.clone().into(),
                        detail: "used as a predicate but not declared as a property".into(),
                    });
                }
            }
        }
    }

    for (subject, classes) in types {
        for (a, b) in &schema.disjoint {
            if classes.contains(a) && classes.contains(b) {
                out.insert(Violation {
                    kind: ViolationKind::DisjointnessClash,
                    focus: subject.clone(),
                    detail: format!("typed as both {a} and {b}, which are disjoint"),
                });
            }
        }
    }
    out.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::extract_schema;
    use crate::turtle::parse_turtle;

    const DOC: &str = "@prefix owl: <http://www.w3.org/2002/07/owl#> .
@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .
@prefix xsd: <http://www.w3.org/2001/XMLSchema#> .
@prefix : <http://e.org/> .
:Agent a owl:Class . :Person a owl:Class ; rdfs:subClassOf :Agent ; owl:disjointWith :Org .
:Org a owl:Class ; rdfs:subClassOf :Agent . :House a owl:Class ; rdfs:subClassOf :Org .
:knows a owl:ObjectProperty . :year a owl:DatatypeProperty ; rdfs:range xsd:decimal .
";

    fn check(data: &str) -> Vec<Violation> {
        let g = parse_turtle(&format!("{DOC}{data}"), None).unwrap().graph;
        let schema = extract_schema(&g).unwrap().schema;
        validate_instances(&g, &schema)
    }

    fn kinds(vs: &[Violation]) -> Vec<ViolationKind> {
        vs.iter().map(|v| v.kind).collect()
    }

    #[test]
    fn clean_data() {
        assert!(check(":sr a :Person ; :knows :mf ; :year 1949 . :mf a :House .").is_empty());
    }

    #[test]
    fn disjointness_through_subclasses() {
        let vs = check(":sr a :Person, :House .");
        assert_eq!(kinds(&vs), vec![ViolationKind::DisjointnessClash]);
        assert!(vs[0].is_error());
    }

    #[test]
    fn literal_and_datatype_clashes() {
        let vs = check(":qc :knows \"QC\" ; :year \"1978\" ; :year :x .");
        assert_eq!(
            kinds(&vs),
            vec![ViolationKind::LiteralAsObject, ViolationKind::DatatypeMismatch, ViolationKind::DatatypeMismatch]
        );
    }

    #[test]
    fn undeclared_terms_are_warnings() {
        let vs = check(":x :unknown :y ; a :Mystery .");
        assert_eq!(kinds(&vs), vec![ViolationKind::UndeclaredProperty, ViolationKind::UndeclaredClass]);
        assert!(vs.iter().all(|v| v.severity() == Severity::Warning));
    }
}
