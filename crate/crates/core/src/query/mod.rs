//! SPARQL subset: SELECT over one basic graph pattern with filters.

mod ast;
mod eval;
mod parser;
mod results;

pub use ast::{CompareOp, Expr, OrderCondition, PatternTerm, Query, QueryError, TriplePattern, Variable};
pub use eval::{compare, evaluate, evaluate_with, JoinStrategy};
pub use parser::parse_query;
pub use results::{display_term, ArityError, ResultTable};
