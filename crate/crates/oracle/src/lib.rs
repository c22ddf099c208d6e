//! Independent oracles and random generators for tests.
//!
//! Nothing here shares code with the engine beyond the data types: the
//! saturation oracle reapplies single-step rules over the whole graph until
//! nothing changes, and the query oracle tries every substitution of the
//! pattern variables by graph terms.

mod generate;
mod query;
mod saturation;

pub use generate::{random_graph, random_query, random_schema_case, rng, SchemaCase};
pub use query::{brute_force, is_sorted_for, OracleRow};
pub use saturation::naive_saturate;
