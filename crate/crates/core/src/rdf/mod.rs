//! RDF terms, triples and an indexed in-memory graph.

mod graph;
mod term;
pub mod vocab;

pub use graph::{Graph, GraphError};
pub use term::{escape_string, make_literal, BlankNode, Datatype, ExactDecimal, Iri, Literal, Term, TermError, Triple};
