//! Turtle subset reader and writer.
//!
//! Unsupported syntax (`[ ]`, `( )`, long strings, doubles) is rejected with a
//! positioned diagnostic rather than skipped.

mod diagnostic;
pub(crate) mod lexer;
mod parser;
mod prefix;
mod serializer;

pub use diagnostic::{ParseDiagnostic, ParseError, Position, Severity};
pub(crate) use parser::resolve_iri;
pub use parser::{parse_turtle, ParsedTurtle};
pub use prefix::PrefixMap;
pub use serializer::serialize_turtle;
