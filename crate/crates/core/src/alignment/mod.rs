//! SKOS punning alignment between ZAMO and external models.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::ontology::{Module, OntologySchema};
use crate::rdf::vocab::{rdf, rdfs, skos};
use crate::rdf::{Graph, Iri, Term, Triple};
use crate::turtle::{parse_turtle, PrefixMap};

/// Prefixes of the external models that alignment targets may use.
pub const ALIGNMENT_PREFIXES: [(&str, &str); 11] = [
    ("skos", "http://www.w3.org/2004/02/skos/core#"),
    ("crm", "http://www.cidoc-crm.org/cidoc-crm/"),
    ("arco-context", "https://w3id.org/arco/ontology/context-description/"),
    ("arco-archive", "https://w3id.org/arco/ontology/archive/"),
    ("org", "http://www.w3.org/ns/org#"),
    ("dul", "http://www.loa-cnr.it/ontologies/DUL.owl#"),
    ("fentry", "http://www.essepuntato.it/2014/03/fentry/"),
    ("hico", "http://purl.org/emmedi/hico/"),
    ("prov", "http://www.w3.org/ns/prov#"),
    ("fabio", "http://purl.org/spar/fabio/"),
    ("cito", "http://purl.org/spar/cito/"),
];

pub fn alignment_prefixes() -> PrefixMap {
    let mut map = PrefixMap::new();
    for (label, ns) in ALIGNMENT_PREFIXES {
        map.insert(label, Iri::new(ns).expect("namespace constant"));
    }
    map
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum MappingProperty {
    ExactMatch,
    CloseMatch,
    BroadMatch,
    NarrowMatch,
    RelatedMatch,
}

impl MappingProperty {
    pub const ALL: [MappingProperty; 5] = [
        MappingProperty::ExactMatch,
        MappingProperty::CloseMatch,
        MappingProperty::BroadMatch,
        MappingProperty::NarrowMatch,
        MappingProperty::RelatedMatch,
    ];

    pub fn local_name(self) -> &'static str {
        match self {
            MappingProperty::ExactMatch => "exactMatch",
            MappingProperty::CloseMatch => "closeMatch",
            MappingProperty::BroadMatch => "broadMatch",
            MappingProperty::NarrowMatch => "narrowMatch",
            MappingProperty::RelatedMatch => "relatedMatch",
        }
    }

    pub fn iri(self) -> Iri {
        Iri::new(format!("{}{}", skos::NS, self.local_name())).expect("SKOS IRI")
    }

    /// `skos:exactMatch` and so on.
    pub fn curie(self) -> String {
        format!("skos:{}", self.local_name())
    }

    fn from_local(local: &str) -> Option<Self> {
        MappingProperty::ALL.into_iter().find(|p| p.local_name() == local)
    }
}

impl fmt::Display for MappingProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.curie())
    }
}

/// One alignment row.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mapping {
    pub zamo_entity: Iri,
    pub property: MappingProperty,
    pub target: Iri,
    pub module: Module,
    /// Whether the source graph types `zamo_entity` as `skos:Concept`.
    pub punned: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlignmentError {
    #[error("{subject} uses {predicate}, which is not a SKOS mapping property")]
    UnknownMappingProperty { subject: Term, predicate: Iri },
    #[error("mapping subject {subject} is not in a ZAMO module namespace")]
    ForeignSubject { subject: Term },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlignmentWarning {
    pub subject: String,
    pub message: String,
}

impl fmt::Display for AlignmentWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.subject, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadedMappings {
    pub mappings: Vec<Mapping>,
    pub warnings: Vec<AlignmentWarning>,
}

/// Predicates that document or type a mapped entity rather than align it.
const ANNOTATIONS: [&str; 8] = [
    rdf::TYPE,
    rdfs::LABEL,
    rdfs::COMMENT,
    "http://www.w3.org/2004/02/skos/core#editorialNote",
    "http://www.w3.org/2004/02/skos/core#note",
    "http://www.w3.org/2004/02/skos/core#scopeNote",
    "http://www.w3.org/2004/02/skos/core#prefLabel",
    "http://www.w3.org/2004/02/skos/core#inScheme",
];

/// Extracts every mapping triple in graph order. `skos:broaderMatch` is read
/// as `skos:broadMatch` with a warning.
pub fn load_mappings(g: &Graph) -> Result<LoadedMappings, AlignmentError> {
    let concept: Term = Iri::new(skos::CONCEPT).expect("constant").into();
    let rdf_type = Iri::new(rdf::TYPE).expect("constant");
    let mut mappings = Vec::new();
    let mut warnings = Vec::new();
    for t in g {
        let p = t.predicate().as_str();
        if ANNOTATIONS.contains(&p) {
            continue;
        }
        let local = p.strip_prefix(skos::NS);
        let property = match local {
            Some("broaderMatch") => {
                warnings.push(AlignmentWarning {
                    subject: t.subject().to_string(),
                    message: "skos:broaderMatch is not a SKOS property; read as skos:broadMatch".into(),
                });
                Some(MappingProperty::BroadMatch)
            }
            Some(l) => MappingProperty::from_local(l),
            None => None,
        };
        let Some(property) = property else {
            if local.is_some() || p.ends_with("Match") {
                return Err(AlignmentError::UnknownMappingProperty {
                    subject: t.subject().clone(),
                    predicate: t.predicate().clone(),
                });
            }
            warnings.push(AlignmentWarning {
                subject: t.subject().to_string(),
                message: format!("ignored non-mapping predicate {}", t.predicate()),
            });
            continue;
        };
        let module = t.subject().as_iri().and_then(|s| Module::of_iri(s.as_str()).map(|m| (s, m)));
        let Some((entity, module)) = module else {
            return Err(AlignmentError::ForeignSubject { subject: t.subject().clone() });
        };
        let Some(target) = t.object().as_iri() else {
            warnings.push(AlignmentWarning {
                subject: t.subject().to_string(),
                message: format!("mapping target {} is not an IRI; ignored", t.object()),
            });
            continue;
        };
        if !ALIGNMENT_PREFIXES.iter().any(|(_, ns)| target.as_str().starts_with(ns)) {
            warnings.push(AlignmentWarning {
                subject: t.subject().to_string(),
                message: format!("target {target} is outside the declared alignment namespaces"),
            });
        }
        let punned =
            g.contains(&Triple::new(entity.clone().into(), rdf_type.clone(), concept.clone()).expect("IRI subject"));
        mappings.push(Mapping { zamo_entity: entity.clone(), property, target: target.clone(), module, punned });
    }
    Ok(LoadedMappings { mappings, warnings })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum AlignmentViolationKind {
    UnknownEntity,
    MappingClash,
    MissingPunning,
}

impl fmt::Display for AlignmentViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlignmentViolation {
    pub kind: AlignmentViolationKind,
    pub entity: Iri,
    pub detail: String,
}

impl fmt::Display for AlignmentViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}: {}", self.kind, self.entity, self.detail)
    }
}

/// Flags unknown ZAMO entities, exactMatch combined with a broad, narrow or
/// related match on the same pair, and mapped entities lacking the punning
/// triple. The result is sorted.
pub fn validate_mappings(ms: &[Mapping], schema: &OntologySchema) -> Vec<AlignmentViolation> {
    let mut out = BTreeSet::new();
    let mut by_pair: BTreeMap<(&Iri, &Iri), BTreeSet<MappingProperty>> = BTreeMap::new();
    for m in ms {
        if !schema.is_class(&m.zamo_entity) && !schema.is_property(&m.zamo_entity) {
            out.insert(AlignmentViolation {
                kind: AlignmentViolationKind::UnknownEntity,
                entity: m.zamo_entity.clone(),
                detail: "not declared in the ZAMO vocabulary".into(),
            });
        }
        if !m.punned {
            out.insert(AlignmentViolation {
                kind: AlignmentViolationKind::MissingPunning,
                entity: m.zamo_entity.clone(),
                detail: "mapped entity is not typed as skos:Concept".into(),
            });
        }
        by_pair.entry((&m.zamo_entity, &m.target)).or_default().insert(m.property);
    }
    for ((entity, target), props) in by_pair {
        if !props.contains(&MappingProperty::ExactMatch) {
            continue;
        }
        let clashing: Vec<String> = props
            .iter()
            .filter(|p| {
                matches!(p, MappingProperty::BroadMatch | MappingProperty::NarrowMatch | MappingProperty::RelatedMatch)
            })
            .map(|p| p.curie())
            .collect();
        if !clashing.is_empty() {
            out.insert(AlignmentViolation {
                kind: AlignmentViolationKind::MappingClash,
                entity: entity.clone(),
                detail: format!("skos:exactMatch and {} both link to {target}", clashing.join(", ")),
            });
        }
    }
    out.into_iter().collect()
}

/// CSV table of one module's mappings in load order.
pub fn export_alignment_table(ms: &[Mapping], module: Module) -> String {
    let prefixes = alignment_prefixes();
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(["Zamo URI", "Skos Property", "Aligned URI"]).expect("writing to memory");
    for m in ms.iter().filter(|m| m.module == module) {
        let local = &m.zamo_entity.as_str()[module.namespace().len()..];
        w.write_record([local, &m.property.curie(), &prefixes.render_iri(&m.target)]).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("flushing memory")).expect("CSV of UTF-8 fields")
}

/// A graph of punning and mapping triples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlignmentGraph {
    graph: Graph,
}

impl AlignmentGraph {
    /// Every mapped entity gets its `skos:Concept` typing, followed by the
    /// mapping triples in order.
    pub fn from_mappings(ms: &[Mapping]) -> Self {
        let concept: Term = Iri::new(skos::CONCEPT).expect("constant").into();
        let rdf_type = Iri::new(rdf::TYPE).expect("constant");
        let mut graph = Graph::new();
        for m in ms {
            graph
                .insert(
                    Triple::new(m.zamo_entity.clone().into(), rdf_type.clone(), concept.clone()).expect("IRI subject"),
                )
                .expect("fresh graph");
        }
        for m in ms {
            graph
                .insert(
                    Triple::new(m.zamo_entity.clone().into(), m.property.iri(), m.target.clone().into())
                        .expect("IRI subject"),
                )
                .expect("fresh graph");
        }
        AlignmentGraph { graph }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn into_graph(self) -> Graph {
        self.graph
    }
}

/// The shipped alignment file of a module.
pub fn builtin_alignment(module: Module) -> Graph {
    let text = match module {
        Module::Agents => include_str!("../../data/alignment/agents.ttl"),
        Module::Events => include_str!("../../data/alignment/events.ttl"),
        Module::Sources => include_str!("../../data/alignment/sources.ttl"),
    };
    match parse_turtle(text, None) {
        Ok(p) => p.graph,
        Err(e) => panic!("shipped alignment for {module} does not parse: {e}"),
    }
}

/// Mappings of the shipped alignment file of a module.
pub fn builtin_mappings(module: Module) -> Vec<Mapping> {
    load_mappings(&builtin_alignment(module)).expect("shipped alignment only uses SKOS mapping properties").mappings
}
