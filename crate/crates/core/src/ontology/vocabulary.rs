use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::rdf::vocab::{self, zamo};
use crate::rdf::{Graph, Iri};
use crate::turtle::{parse_turtle, PrefixMap};

/// One of the three ZAMO modules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Module {
    Agents,
    Events,
    Sources,
}

impl Module {
    pub const ALL: [Module; 3] = [Module::Agents, Module::Events, Module::Sources];

    pub fn namespace(self) -> &'static str {
        match self {
            Module::Agents => zamo::AGENTS,
            Module::Events => zamo::EVENTS,
            Module::Sources => zamo::SOURCES,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Module::Agents => "agents",
            Module::Events => "events",
            Module::Sources => "sources",
        }
    }

    /// Conventional prefix label for the module namespace.
    pub fn prefix(self) -> &'static str {
        match self {
            Module::Agents => "zamoa",
            Module::Events => "zamoe",
            Module::Sources => "zamos",
        }
    }

    /// The module whose namespace contains `iri`.
    pub fn of_iri(iri: &str) -> Option<Module> {
        Module::ALL.into_iter().find(|m| iri.starts_with(m.namespace()))
    }

    fn source(self) -> &'static str {
        match self {
            Module::Agents => include_str!("../../data/vocab/agents.ttl"),
            Module::Events => include_str!("../../data/vocab/events.ttl"),
            Module::Sources => include_str!("../../data/vocab/sources.ttl"),
        }
    }
}

impl fmt::Display for Module {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown module `{0}` (expected agents, events or sources)")]
pub struct UnknownModule(pub String);

impl FromStr for Module {
    type Err = UnknownModule;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "agents" => Ok(Module::Agents),
            "events" => Ok(Module::Events),
            "sources" => Ok(Module::Sources),
            _ => Err(UnknownModule(s.to_owned())),
        }
    }
}

fn parse_shipped(name: &str, text: &str) -> Graph {
    match parse_turtle(text, None) {
        Ok(parsed) => parsed.graph,
        Err(e) => panic!("shipped file {name} does not parse: {e}"),
    }
}

/// The shipped vocabulary of one module.
pub fn builtin_vocabulary(module: Module) -> Graph {
    parse_shipped(module.name(), module.source())
}

/// Controlled-vocabulary individuals: roles, knowledge domains, condition
/// states and attribute types.
pub fn controlled_vocabulary() -> Graph {
    parse_shipped("controlled", include_str!("../../data/vocab/controlled.ttl"))
}

/// The given modules merged with the controlled vocabulary.
pub fn builtin_graph(modules: &[Module]) -> Graph {
    let mut g = controlled_vocabulary();
    for m in modules {
        for t in &builtin_vocabulary(*m) {
            g.insert(t.clone()).expect("fresh graph is not frozen");
        }
    }
    g
}

/// Prefixes used across the shipped data: the W3C vocabularies, the ZAMO
/// modules, the controlled vocabulary and the alignment targets.
pub fn standard_prefixes() -> PrefixMap {
    let mut map = PrefixMap::new();
    let ns = |s: &str| Iri::new(s).expect("namespace constant");
    for (label, iri) in [
        ("rdf", vocab::rdf::NS),
        ("rdfs", vocab::rdfs::NS),
        ("owl", vocab::owl::NS),
        ("xsd", vocab::xsd::NS),
        ("dcterms", vocab::dcterms::NS),
        ("zamov", zamo::VOCABULARY),
    ] {
        map.insert(label, ns(iri));
    }
    for m in Module::ALL {
        map.insert(m.prefix(), ns(m.namespace()));
    }
    for (label, iri) in crate::alignment::ALIGNMENT_PREFIXES {
        map.insert(label, ns(iri));
    }
    map
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::extract_schema;
    use crate::rdf::vocab::{owl, rdf, rdfs};
    use crate::rdf::{Term, Triple};

    fn t(s: &str, p: &str, o: &str) -> Triple {
        Triple::new(Term::iri(s).unwrap(), Iri::new(p).unwrap(), Term::iri(o).unwrap()).unwrap()
    }

    #[test]
    fn agents_has_agent_and_family_venture() {
        let g = builtin_vocabulary(Module::Agents);
        for c in ["Agent", "FamilyVenture"] {
            assert!(g.contains(&t(&format!("{}{c}", zamo::AGENTS), rdf::TYPE, owl::CLASS)), "{c}");
        }
    }

    #[test]
    fn events_has_currency_range() {
        let g = builtin_vocabulary(Module::Events);
        let p = format!("{}hasCurrency", zamo::EVENTS);
        assert!(g.contains(&t(&p, rdfs::RANGE, &format!("{}Currency", zamo::EVENTS))));
    }

    #[test]
    fn sources_has_extent() {
        let g = builtin_vocabulary(Module::Sources);
        let p = format!("{}hasExtent", zamo::SOURCES);
        assert!(g.contains(&t(&p, rdf::TYPE, owl::DATATYPE_PROPERTY)));
    }

    #[test]
    fn each_module_is_schema_well_formed() {
        for m in Module::ALL {
            let all = builtin_graph(&Module::ALL);
            let out = extract_schema(&all).unwrap();
            assert!(out.warnings.is_empty(), "{m}: {:?}", out.warnings);
            assert!(extract_schema(&builtin_vocabulary(m)).is_ok());
        }
    }

    #[test]
    fn module_names_round_trip() {
        for m in Module::ALL {
            assert_eq!(m.name().parse::<Module>().unwrap(), m);
            assert_eq!(Module::of_iri(&format!("{}X", m.namespace())), Some(m));
        }
        assert!("people".parse::<Module>().is_err());
    }
}

#[cfg(test)]
mod model_tests {
    use super::*;
    use crate::inference::scan_pitfalls;
    use crate::ontology::extract_schema;

    #[test]
    fn shipped_model_has_no_pitfalls() {
        let schema = extract_schema(&builtin_graph(&Module::ALL)).unwrap().schema;
        let found: Vec<String> = scan_pitfalls(&schema).iter().map(ToString::to_string).collect();
        assert!(found.is_empty(), "{found:#?}");
    }
}
