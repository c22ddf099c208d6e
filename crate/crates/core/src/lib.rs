//! An in-memory knowledge graph engine for the Zeri Art Market Ontology (ZAMO).
//!
//! The crate parses a Turtle subset, extracts an ontology schema, materializes
//! RDFS-style inferences, evaluates a SPARQL subset, checks the SKOS alignment
//! of ZAMO against external models and replays SAMOD test iterations.

pub mod alignment;
pub mod inference;
pub mod ontology;
pub mod query;
pub mod rdf;
pub mod samod;
pub mod turtle;

pub use rdf::{Datatype, Graph, Iri, Literal, Term, Triple};
