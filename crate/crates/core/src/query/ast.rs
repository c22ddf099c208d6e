use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::rdf::{Iri, Term};
use crate::turtle::PrefixMap;

/// A query variable, stored without its leading `?`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Variable(String);

impl Variable {
    /// Names follow the lexer: letters, digits and `_`, not empty.
    pub fn new(name: impl Into<String>) -> Result<Self, QueryError> {
        let name = name.into();
        let ok = !name.is_empty() && name.chars().all(|c| c.is_alphabetic() || c == '_' || c.is_ascii_digit());
        if ok {
            Ok(Variable(name))
        } else {
            Err(QueryError::InvalidVariable(name))
        }
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "?{}", self.0)
    }
}

/// A position of a triple pattern or a filter operand.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PatternTerm {
    Var(Variable),
    Term(Term),
}

impl PatternTerm {
    pub fn as_var(&self) -> Option<&Variable> {
        match self {
            PatternTerm::Var(v) => Some(v),
            PatternTerm::Term(_) => None,
        }
    }
}

impl From<Variable> for PatternTerm {
    fn from(v: Variable) -> Self {
        PatternTerm::Var(v)
    }
}

impl From<Term> for PatternTerm {
    fn from(t: Term) -> Self {
        PatternTerm::Term(t)
    }
}

impl From<Iri> for PatternTerm {
    fn from(i: Iri) -> Self {
        PatternTerm::Term(i.into())
    }
}

impl fmt::Display for PatternTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternTerm::Var(v) => v.fmt(f),
            PatternTerm::Term(t) => t.fmt(f),
        }
    }
}

/// Invariant: the subject is not a literal and a constant predicate is an IRI.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TriplePattern {
    subject: PatternTerm,
    predicate: PatternTerm,
    object: PatternTerm,
}

impl TriplePattern {
    pub fn new(subject: PatternTerm, predicate: PatternTerm, object: PatternTerm) -> Result<Self, QueryError> {
        if matches!(&subject, PatternTerm::Term(Term::Literal(_))) {
            return Err(QueryError::LiteralSubject);
        }
        if matches!(&predicate, PatternTerm::Term(t) if t.as_iri().is_none()) {
            return Err(QueryError::NonIriPredicate);
        }
        Ok(TriplePattern { subject, predicate, object })
    }

    pub fn subject(&self) -> &PatternTerm {
        &self.subject
    }

    pub fn predicate(&self) -> &PatternTerm {
        &self.predicate
    }

    pub fn object(&self) -> &PatternTerm {
        &self.object
    }

    pub fn positions(&self) -> [&PatternTerm; 3] {
        [&self.subject, &self.predicate, &self.object]
    }

    pub fn variables(&self) -> impl Iterator<Item = &Variable> {
        self.positions().into_iter().filter_map(PatternTerm::as_var)
    }
}

impl fmt::Display for TriplePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CompareOp {
    Lt,
    Le,
    Eq,
    Ne,
    Ge,
    Gt,
}

impl CompareOp {
    pub const ALL: [CompareOp; 6] =
        [CompareOp::Lt, CompareOp::Le, CompareOp::Eq, CompareOp::Ne, CompareOp::Ge, CompareOp::Gt];

    pub fn symbol(self) -> &'static str {
        match self {
            CompareOp::Lt => "<",
            CompareOp::Le => "<=",
            CompareOp::Eq => "=",
            CompareOp::Ne => "!=",
            CompareOp::Ge => ">=",
            CompareOp::Gt => ">",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Self> {
        CompareOp::ALL.into_iter().find(|op| op.symbol() == s)
    }
}

/// Filter expression tree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Compare(CompareOp, PatternTerm, PatternTerm),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
    Not(Box<Expr>),
    /// `EXISTS { ... }`, or `NOT EXISTS { ... }` when `negated`.
    Exists {
        negated: bool,
        patterns: Vec<TriplePattern>,
    },
    /// `LANG(?v) = "tag"`, compared case-insensitively; an untagged literal
    /// has the empty tag.
    Lang {
        variable: Variable,
        tag: String,
    },
}

impl Expr {
    /// Variables the expression reads from the enclosing solution. Variables
    /// inside an `EXISTS` block are local to it and are not listed.
    pub fn free_variables(&self) -> BTreeSet<&Variable> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut out);
        out
    }

    fn collect_free<'a>(&'a self, out: &mut BTreeSet<&'a Variable>) {
        match self {
            Expr::Compare(_, a, b) => out.extend(a.as_var().into_iter().chain(b.as_var())),
            Expr::And(a, b) | Expr::Or(a, b) => {
                a.collect_free(out);
                b.collect_free(out);
            }
            Expr::Not(a) => a.collect_free(out),
            Expr::Exists { .. } => {}
            Expr::Lang { variable, .. } => {
                out.insert(variable);
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Compare(op, a, b) => write!(f, "({a} {} {b})", op.symbol()),
            Expr::And(a, b) => write!(f, "({a} && {b})"),
            Expr::Or(a, b) => write!(f, "({a} || {b})"),
            Expr::Not(a) => write!(f, "(!{a})"),
            Expr::Lang { variable, tag } => write!(f, "(LANG({variable}) = \"{}\")", crate::rdf::escape_string(tag)),
            Expr::Exists { negated, patterns } => {
                if *negated {
                    f.write_str("NOT ")?;
                }
                f.write_str("EXISTS {")?;
                for p in patterns {
                    write!(f, " {p}")?;
                }
                f.write_str(" }")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrderCondition {
    pub variable: Variable,
    pub descending: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error("invalid variable name `{0}`")]
    InvalidVariable(String),
    #[error("a literal cannot be the subject of a triple pattern")]
    LiteralSubject,
    #[error("a constant predicate must be an IRI")]
    NonIriPredicate,
    #[error("variable {0} is not bound by the graph pattern")]
    UnboundVariable(Variable),
    #[error("variable {0} is projected twice")]
    DuplicateProjection(Variable),
    #[error("the graph pattern is empty")]
    EmptyPattern,
}

/// A SELECT query over one basic graph pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    projection: Vec<Variable>,
    distinct: bool,
    patterns: Vec<TriplePattern>,
    filters: Vec<Expr>,
    order_by: Vec<OrderCondition>,
    prefixes: PrefixMap,
}

impl Query {
    /// Checks that projected, filtered and ordering variables all occur in
    /// `patterns`. An empty projection means `SELECT *`.
    pub fn new(
        projection: Vec<Variable>,
        distinct: bool,
        patterns: Vec<TriplePattern>,
        filters: Vec<Expr>,
        order_by: Vec<OrderCondition>,
    ) -> Result<Self, QueryError> {
        if patterns.is_empty() {
            return Err(QueryError::EmptyPattern);
        }
        let bound = bgp_variables(&patterns);
        let projection = if projection.is_empty() { bound.clone() } else { projection };
        let mut seen = BTreeSet::new();
        for v in &projection {
            if !seen.insert(v) {
                return Err(QueryError::DuplicateProjection(v.clone()));
            }
        }
        let used = projection
            .iter()
            .chain(filters.iter().flat_map(Expr::free_variables))
            .chain(order_by.iter().map(|o| &o.variable));
        for v in used {
            if !bound.contains(v) {
                return Err(QueryError::UnboundVariable(v.clone()));
            }
        }
        Ok(Query { projection, distinct, patterns, filters, order_by, prefixes: PrefixMap::new() })
    }

    pub(crate) fn with_prefixes(mut self, prefixes: PrefixMap) -> Self {
        self.prefixes = prefixes;
        self
    }

    pub fn projection(&self) -> &[Variable] {
        &self.projection
    }

    pub fn distinct(&self) -> bool {
        self.distinct
    }

    pub fn patterns(&self) -> &[TriplePattern] {
        &self.patterns
    }

    pub fn filters(&self) -> &[Expr] {
        &self.filters
    }

    pub fn order_by(&self) -> &[OrderCondition] {
        &self.order_by
    }

    /// Prefixes in scope when the query was parsed, for rendering results.
    pub fn prefixes(&self) -> &PrefixMap {
        &self.prefixes
    }

    /// Variables of the graph pattern in order of first occurrence.
    pub fn variables(&self) -> Vec<Variable> {
        bgp_variables(&self.patterns)
    }

    /// The same query with its patterns in another order.
    pub fn with_patterns(&self, patterns: Vec<TriplePattern>) -> Result<Self, QueryError> {
        Query::new(self.projection.clone(), self.distinct, patterns, self.filters.clone(), self.order_by.clone())
            .map(|q| q.with_prefixes(self.prefixes.clone()))
    }
}

fn bgp_variables(patterns: &[TriplePattern]) -> Vec<Variable> {
    let mut out: Vec<Variable> = Vec::new();
    for v in patterns.iter().flat_map(TriplePattern::variables) {
        if !out.contains(v) {
            out.push(v.clone());
        }
    }
    out
}

/// Query text with full IRIs; parsing it yields an equal query.
impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("SELECT ")?;
        if self.distinct {
            f.write_str("DISTINCT ")?;
        }
        let vars: Vec<String> = self.projection.iter().map(ToString::to_string).collect();
        writeln!(f, "{} WHERE {{", vars.join(" "))?;
        for p in &self.patterns {
            writeln!(f, "  {p}")?;
        }
        for e in &self.filters {
            writeln!(f, "  FILTER {e}")?;
        }
        f.write_str("}")?;
        if !self.order_by.is_empty() {
            f.write_str(" ORDER BY")?;
            for o in &self.order_by {
                if o.descending {
                    write!(f, " DESC({})", o.variable)?;
                } else {
                    write!(f, " {}", o.variable)?;
                }
            }
        }
        writeln!(f)
    }
}
