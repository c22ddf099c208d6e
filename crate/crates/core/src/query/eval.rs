use std::cmp::Ordering;
use std::collections::HashSet;

use crate::rdf::{Datatype, ExactDecimal, Graph, Iri, Literal, Term};

use super::ast::{CompareOp, Expr, PatternTerm, Query, TriplePattern, Variable};
use super::results::ResultTable;

/// How the patterns of a graph pattern are ordered for the nested-loop join.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum JoinStrategy {
    /// Most bound positions first, then smallest index estimate.
    #[default]
    Selective,
    /// Patterns in the order they were written.
    AsWritten,
}

/// All solutions of the query against `g`, filtered, projected, deduplicated
/// with DISTINCT and sorted with ORDER BY.
pub fn evaluate(q: &Query, g: &Graph) -> ResultTable {
    evaluate_with(q, g, JoinStrategy::Selective)
}

pub fn evaluate_with(q: &Query, g: &Graph, strategy: JoinStrategy) -> ResultTable {
    let mut slots = Slots::default();
    let patterns = compile(q.patterns(), &mut slots);
    let filters: Vec<CExpr> = q.filters().iter().map(|e| compile_expr(e, &mut slots)).collect();
    let projection: Vec<usize> =
        q.projection().iter().map(|v| slots.get(v).expect("projected variables are in the pattern")).collect();
    let order: Vec<(usize, bool)> = q
        .order_by()
        .iter()
        .map(|o| (slots.get(&o.variable).expect("ordering variables are in the pattern"), o.descending))
        .collect();

    let mut binding: Binding = vec![None; slots.len()];
    let plan = plan(&patterns, &vec![false; slots.len()], g, strategy);
    let mut rows: Vec<Vec<Option<Term>>> = Vec::new();
    let mut seen = HashSet::new();
    let mut sort_keys: Vec<Vec<Option<Term>>> = Vec::new();
    solve(&patterns, &plan, g, &mut binding, &mut |b| {
        if filters.iter().all(|f| eval_expr(f, b, g, strategy) == Some(true)) {
            let row: Vec<Option<Term>> = projection.iter().map(|&i| b[i].clone()).collect();
            if !q.distinct() || seen.insert(row.clone()) {
                sort_keys.push(order.iter().map(|&(i, _)| b[i].clone()).collect());
                rows.push(row);
            }
        }
        true
    });

    if !order.is_empty() {
        let mut indexed: Vec<usize> = (0..rows.len()).collect();
        indexed.sort_by(|&a, &b| {
            for (k, &(_, descending)) in order.iter().enumerate() {
                let c = order_cmp(sort_keys[a][k].as_ref(), sort_keys[b][k].as_ref());
                let c = if descending { c.reverse() } else { c };
                if c != Ordering::Equal {
                    return c;
                }
            }
            Ordering::Equal
        });
        let mut taken: Vec<Option<Vec<Option<Term>>>> = rows.into_iter().map(Some).collect();
        rows = indexed.into_iter().map(|i| taken[i].take().expect("each index once")).collect();
    }

    ResultTable::new(q.projection().iter().map(|v| v.name().to_owned()).collect(), rows)
        .expect("rows are built with the projection width")
}

type Binding = Vec<Option<Term>>;

#[derive(Default)]
struct Slots {
    names: Vec<Variable>,
}

impl Slots {
    fn get(&self, v: &Variable) -> Option<usize> {
        self.names.iter().position(|n| n == v)
    }

    fn slot(&mut self, v: &Variable) -> usize {
        self.get(v).unwrap_or_else(|| {
            self.names.push(v.clone());
            self.names.len() - 1
        })
    }

    fn len(&self) -> usize {
        self.names.len()
    }
}

#[derive(Debug, Clone)]
enum Slot {
    Var(usize),
    Const(Term),
}

type CPattern = [Slot; 3];

fn compile(patterns: &[TriplePattern], slots: &mut Slots) -> Vec<CPattern> {
    let mut slot = |p: &PatternTerm| match p {
        PatternTerm::Var(v) => Slot::Var(slots.slot(v)),
        PatternTerm::Term(t) => Slot::Const(t.clone()),
    };
    patterns.iter().map(|p| [slot(p.subject()), slot(p.predicate()), slot(p.object())]).collect()
}

enum CExpr {
    Compare(CompareOp, Slot, Slot),
    And(Box<CExpr>, Box<CExpr>),
    Or(Box<CExpr>, Box<CExpr>),
    Not(Box<CExpr>),
    Exists { negated: bool, patterns: Vec<CPattern> },
    Lang { slot: usize, tag: String },
}

fn compile_expr(e: &Expr, slots: &mut Slots) -> CExpr {
    let operand = |p: &PatternTerm, slots: &mut Slots| match p {
        PatternTerm::Var(v) => Slot::Var(slots.slot(v)),
        PatternTerm::Term(t) => Slot::Const(t.clone()),
    };
    match e {
        Expr::Compare(op, a, b) => {
            let a = operand(a, slots);
            CExpr::Compare(*op, a, operand(b, slots))
        }
        Expr::And(a, b) => CExpr::And(Box::new(compile_expr(a, slots)), Box::new(compile_expr(b, slots))),
        Expr::Or(a, b) => CExpr::Or(Box::new(compile_expr(a, slots)), Box::new(compile_expr(b, slots))),
        Expr::Not(a) => CExpr::Not(Box::new(compile_expr(a, slots))),
        Expr::Exists { negated, patterns } => CExpr::Exists { negated: *negated, patterns: compile(patterns, slots) },
        Expr::Lang { variable, tag } => CExpr::Lang { slot: slots.slot(variable), tag: tag.to_ascii_lowercase() },
    }
}

/// Static join order. `bound` marks slots bound before the first pattern runs.
fn plan(patterns: &[CPattern], bound: &[bool], g: &Graph, strategy: JoinStrategy) -> Vec<usize> {
    if strategy == JoinStrategy::AsWritten {
        return (0..patterns.len()).collect();
    }
    let mut bound = bound.to_vec();
    let mut remaining: Vec<usize> = (0..patterns.len()).collect();
    let mut order = Vec::with_capacity(patterns.len());
    while !remaining.is_empty() {
        let score = |i: usize| {
            let p = &patterns[i];
            let bound_count = p
                .iter()
                .filter(|s| match s {
                    Slot::Const(_) => true,
                    Slot::Var(v) => bound[*v],
                })
                .count();
            let constant = |s: &Slot| match s {
                Slot::Const(t) => Some(t.clone()),
                Slot::Var(_) => None,
            };
            let (s, pr, o) = (constant(&p[0]), constant(&p[1]), constant(&p[2]));
            let pr = pr.as_ref().and_then(Term::as_iri);
            let estimate = g.estimate(s.as_ref(), pr, o.as_ref());
            (std::cmp::Reverse(bound_count), estimate, i)
        };
        let (pos, &best) = remaining.iter().enumerate().min_by_key(|(_, &i)| score(i)).expect("remaining is not empty");
        remaining.remove(pos);
        for s in &patterns[best] {
            if let Slot::Var(v) = s {
                bound[*v] = true;
            }
        }
        order.push(best);
    }
    order
}

/// Nested-loop join over `plan`; `emit` returns false to stop early.
fn solve(
    patterns: &[CPattern],
    plan: &[usize],
    g: &Graph,
    binding: &mut Binding,
    emit: &mut dyn FnMut(&Binding) -> bool,
) -> bool {
    let Some((&first, rest)) = plan.split_first() else {
        return emit(binding);
    };
    let p = &patterns[first];
    let value = |s: &Slot, b: &Binding| -> Option<Term> {
        match s {
            Slot::Const(t) => Some(t.clone()),
            Slot::Var(v) => b[*v].clone(),
        }
    };
    let (s, pr, o) = (value(&p[0], binding), value(&p[1], binding), value(&p[2], binding));
    let predicate: Option<Iri> = match pr {
        Some(Term::Iri(iri)) => Some(iri),
        Some(_) => return true,
        None => None,
    };
    let matches: Vec<_> = g.triples_matching(s.as_ref(), predicate.as_ref(), o.as_ref());
    for t in matches {
        let predicate_term = Term::Iri(t.predicate().clone());
        let values = [t.subject(), &predicate_term, t.object()];
        let mut newly = Vec::new();
        let mut ok = true;
        for (slot, value) in p.iter().zip(values) {
            if let Slot::Var(v) = slot {
                match &binding[*v] {
                    Some(existing) => {
                        if existing != value {
                            ok = false;
                            break;
                        }
                    }
                    None => {
                        binding[*v] = Some(value.clone());
                        newly.push(*v);
                    }
                }
            }
        }
        let keep_going = !ok || solve(patterns, rest, g, binding, emit);
        for v in newly {
            binding[v] = None;
        }
        if !keep_going {
            return false;
        }
    }
    true
}

/// Three-valued filter evaluation: `None` is an error, which drops the solution
/// unless an enclosing `||` or `&&` decides the result without it.
fn eval_expr(e: &CExpr, b: &Binding, g: &Graph, strategy: JoinStrategy) -> Option<bool> {
    match e {
        CExpr::Compare(op, x, y) => {
            let value = |s: &Slot| match s {
                Slot::Const(t) => Some(t.clone()),
                Slot::Var(v) => b[*v].clone(),
            };
            compare(*op, &value(x)?, &value(y)?)
        }
        CExpr::And(x, y) => match (eval_expr(x, b, g, strategy), eval_expr(y, b, g, strategy)) {
            (Some(false), _) | (_, Some(false)) => Some(false),
            (Some(true), Some(true)) => Some(true),
            _ => None,
        },
        CExpr::Or(x, y) => match (eval_expr(x, b, g, strategy), eval_expr(y, b, g, strategy)) {
            (Some(true), _) | (_, Some(true)) => Some(true),
            (Some(false), Some(false)) => Some(false),
            _ => None,
        },
        CExpr::Not(x) => eval_expr(x, b, g, strategy).map(|v| !v),
        CExpr::Exists { negated, patterns } => {
            let bound: Vec<bool> = b.iter().map(Option::is_some).collect();
            let inner_plan = plan(patterns, &bound, g, strategy);
            let mut scratch = b.clone();
            let mut found = false;
            solve(patterns, &inner_plan, g, &mut scratch, &mut |_| {
                found = true;
                false
            });
            Some(found != *negated)
        }
        CExpr::Lang { slot, tag } => match b[*slot].as_ref()? {
            Term::Literal(lit) => Some(lit.lang().unwrap_or("") == tag),
            _ => None,
        },
    }
}

/// Value classes for comparison. Integers, decimals and gYears share the
/// numeric class; orderings exist within the numeric, date and boolean classes.
enum Value<'a> {
    Numeric(ExactDecimal),
    Date((i64, u8, u8)),
    Boolean(bool),
    Text(&'a Literal),
    Node(&'a Term),
}

fn classify(t: &Term) -> Value<'_> {
    let Term::Literal(lit) = t else {
        return Value::Node(t);
    };
    match lit.datatype() {
        Datatype::Integer | Datatype::Decimal | Datatype::GYear => {
            Value::Numeric(lit.numeric_value().expect("well-formed numeric literal"))
        }
        Datatype::Date => Value::Date(lit.date_value().expect("well-formed date literal")),
        Datatype::Boolean => Value::Boolean(lit.boolean_value().expect("well-formed boolean literal")),
        Datatype::String | Datatype::LangString => Value::Text(lit),
    }
}

/// `Some(result)` or `None` when the operands are not comparable with `op`.
/// IRIs and blank nodes equal only themselves and are never equal to a literal.
pub fn compare(op: CompareOp, a: &Term, b: &Term) -> Option<bool> {
    let ordering = match (classify(a), classify(b)) {
        (Value::Numeric(x), Value::Numeric(y)) => x.cmp(&y),
        (Value::Date(x), Value::Date(y)) => x.cmp(&y),
        (Value::Boolean(x), Value::Boolean(y)) => x.cmp(&y),
        (Value::Text(x), Value::Text(y)) => return equality(op, x == y),
        (Value::Node(x), Value::Node(y)) => return equality(op, x == y),
        (Value::Node(_), _) | (_, Value::Node(_)) => return equality(op, false),
        _ => return None,
    };
    Some(match op {
        CompareOp::Lt => ordering == Ordering::Less,
        CompareOp::Le => ordering != Ordering::Greater,
        CompareOp::Eq => ordering == Ordering::Equal,
        CompareOp::Ne => ordering != Ordering::Equal,
        CompareOp::Ge => ordering != Ordering::Less,
        CompareOp::Gt => ordering == Ordering::Greater,
    })
}

fn equality(op: CompareOp, equal: bool) -> Option<bool> {
    match op {
        CompareOp::Eq => Some(equal),
        CompareOp::Ne => Some(!equal),
        _ => None,
    }
}

/// Total order for ORDER BY: unbound, blank nodes, IRIs, numbers, dates,
/// booleans, strings; term order breaks ties within a class.
fn order_cmp(a: Option<&Term>, b: Option<&Term>) -> Ordering {
    let rank = |t: Option<&Term>| match t.map(classify) {
        None => 0,
        Some(Value::Node(Term::Blank(_))) => 1,
        Some(Value::Node(_)) => 2,
        Some(Value::Numeric(_)) => 3,
        Some(Value::Date(_)) => 4,
        Some(Value::Boolean(_)) => 5,
        Some(Value::Text(_)) => 6,
    };
    rank(a).cmp(&rank(b)).then_with(|| match (a, b) {
        (Some(x), Some(y)) => {
            let by_value = match (classify(x), classify(y)) {
                (Value::Numeric(m), Value::Numeric(n)) => m.cmp(&n),
                (Value::Date(m), Value::Date(n)) => m.cmp(&n),
                (Value::Boolean(m), Value::Boolean(n)) => m.cmp(&n),
                _ => Ordering::Equal,
            };
            by_value.then_with(|| x.cmp(y))
        }
        _ => Ordering::Equal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::standard_prefixes;
    use crate::query::parse_query;
    use crate::turtle::parse_turtle;

    const DATA: &str = "@prefix zamoa: <https://w3id.org/zeri/ontology/zamo/agents#> .
@prefix zamov: <https://w3id.org/zeri/ontology/zamo/vocabulary/> .
@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .
@prefix xsd: <http://www.w3.org/2001/XMLSchema#> .
@prefix : <https://w3id.org/zeri/samod/agents/> .
:SR a zamoa:Person ; rdfs:label \"SR\" ; zamoa:providesServiceIn :c1 .
:Antichita a zamoa:AuctionHouse ; zamoa:requestsServiceIn :c1 .
:c1 zamoa:hasRole zamov:managing-director .
:f1 zamoa:hasDate \"1949\"^^xsd:gYear ; zamoa:hasFoundedOrganization :A .
:f2 zamoa:hasDate \"1956\"^^xsd:gYear ; zamoa:hasFoundedOrganization :B .
:f3 zamoa:hasDate \"1990-05-01\"^^xsd:date ; zamoa:hasFoundedOrganization :C .
";

    fn run(query: &str) -> ResultTable {
        let g = parse_turtle(DATA, None).unwrap().graph.frozen();
        let q = parse_query(&format!("PREFIX : <https://w3id.org/zeri/samod/agents/>\n{query}"), &standard_prefixes())
            .unwrap();
        evaluate(&q, &g)
    }

    fn iri(local: &str) -> Term {
        Term::iri(format!("https://w3id.org/zeri/samod/agents/{local}")).unwrap()
    }

    #[test]
    fn managing_director_of_antichita() {
        let t = run(
            "SELECT ?d WHERE { ?d a zamoa:Person ; zamoa:providesServiceIn ?c . :Antichita zamoa:requestsServiceIn ?c . ?c zamoa:hasRole zamov:managing-director }",
        );
        assert_eq!(t.header(), ["d"]);
        assert_eq!(t.rows(), [vec![Some(iri("SR"))]]);
    }

    #[test]
    fn empty_graph_keeps_header() {
        let q = parse_query("SELECT ?a ?b WHERE { ?a ?p ?b }", &crate::turtle::PrefixMap::new()).unwrap();
        let t = evaluate(&q, &Graph::new().frozen());
        assert_eq!(t.header(), ["a", "b"]);
        assert!(t.is_empty());
    }

    #[test]
    fn gyear_range_filter_ignores_dates() {
        let t = run("SELECT ?o WHERE { ?f zamoa:hasDate ?y ; zamoa:hasFoundedOrganization ?o FILTER(?y >= 1950 && ?y <= 1985) }");
        assert_eq!(t.rows(), [vec![Some(iri("B"))]]);
    }

    #[test]
    fn error_operand_is_rescued_by_or() {
        let t = run("SELECT ?o WHERE { ?f zamoa:hasDate ?y ; zamoa:hasFoundedOrganization ?o FILTER(?y < 1950 || ?o = :C) } ORDER BY ?o");
        assert_eq!(t.rows(), [vec![Some(iri("A"))], vec![Some(iri("C"))]]);
    }

    #[test]
    fn not_exists_excludes() {
        let t = run("SELECT ?x WHERE { ?x zamoa:requestsServiceIn ?c FILTER NOT EXISTS { ?x a zamoa:AuctionHouse } }");
        assert!(t.is_empty());
        let t = run("SELECT ?x WHERE { ?x zamoa:providesServiceIn ?c FILTER NOT EXISTS { ?x a zamoa:AuctionHouse } }");
        assert_eq!(t.len(), 1);
    }

    #[test]
    fn distinct_and_order() {
        let t = run("SELECT DISTINCT ?p WHERE { ?s ?p ?o } ORDER BY DESC(?p)");
        let mut sorted = t.rows().to_vec();
        sorted.sort();
        sorted.reverse();
        assert_eq!(t.rows(), sorted);
        assert_eq!(t.len(), 7);
    }

    #[test]
    fn repeated_variable_in_one_pattern() {
        let g = parse_turtle("<http://e/a> <http://e/p> <http://e/a> . <http://e/a> <http://e/p> <http://e/b> .", None)
            .unwrap()
            .graph;
        let q = parse_query("SELECT ?x WHERE { ?x <http://e/p> ?x }", &crate::turtle::PrefixMap::new()).unwrap();
        assert_eq!(evaluate(&q, &g).len(), 1);
    }

    #[test]
    fn lang_selects_tagged_labels() {
        let g =
            parse_turtle("<http://e/rome> <http://e/label> \"Rome\"@en, \"Roma\"@it, \"RM\" .", None).unwrap().graph;
        let q = |f: &str| {
            parse_query(
                &format!("SELECT ?c WHERE {{ ?l <http://e/label> ?c FILTER({f}) }}"),
                &crate::turtle::PrefixMap::new(),
            )
            .unwrap()
        };
        let labels = |f: &str| -> Vec<String> {
            evaluate(&q(f), &g)
                .rows()
                .iter()
                .map(|r| r[0].as_ref().unwrap().as_literal().unwrap().lexical().to_owned())
                .collect()
        };
        assert_eq!(labels("LANG(?c) = \"IT\""), ["Roma"]);
        assert_eq!(labels("LANG(?c) = \"\""), ["RM"]);
        assert_eq!(labels("LANG(?c) != \"it\"").len(), 2);
        let iri = parse_query(
            "SELECT ?l WHERE { ?l <http://e/label> ?c FILTER(LANG(?l) = \"\") }",
            &crate::turtle::PrefixMap::new(),
        )
        .unwrap();
        assert!(evaluate(&iri, &g).is_empty());
    }

    #[test]
    fn comparison_table() {
        let lit = |lex: &str, dt: Datatype| Term::Literal(Literal::new(lex, dt, None).unwrap());
        let year = lit("1980", Datatype::GYear);
        assert_eq!(compare(CompareOp::Eq, &year, &lit("1980", Datatype::Integer)), Some(true));
        assert_eq!(compare(CompareOp::Lt, &lit("2.5", Datatype::Decimal), &lit("3", Datatype::Integer)), Some(true));
        assert_eq!(compare(CompareOp::Lt, &year, &lit("1980-01-01", Datatype::Date)), None);
        assert_eq!(compare(CompareOp::Eq, &Term::Literal(Literal::string("a")), &year), None);
        assert_eq!(compare(CompareOp::Ne, &iri("A"), &year), Some(true));
        assert_eq!(compare(CompareOp::Lt, &iri("A"), &iri("B")), None);
        assert_eq!(
            compare(CompareOp::Lt, &lit("1980-01-31", Datatype::Date), &lit("1980-02-01", Datatype::Date)),
            Some(true)
        );
    }
}
