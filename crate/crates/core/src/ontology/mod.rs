//! Shipped ZAMO vocabulary and the schema view extracted from a graph.

mod schema;
mod vocabulary;

pub(crate) use schema::reachable;
pub use schema::{extract_schema, ExtractedSchema, OntologySchema, PropertyKind, Range, SchemaError, SchemaWarning};
pub use vocabulary::{
    builtin_graph, builtin_vocabulary, controlled_vocabulary, standard_prefixes, Module, UnknownModule,
};
