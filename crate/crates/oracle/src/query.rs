use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use zamo::query::{CompareOp, Expr, OrderCondition, PatternTerm, Query, TriplePattern, Variable};
use zamo::{Datatype, Graph, Literal, Term, Triple};

/// A projected answer row; every pattern variable is bound, so no `None`.
pub type OracleRow = Vec<Term>;

type Binding = BTreeMap<Variable, Term>;

/// Answers of `q` over `g` as a sorted multiset, found by trying every
/// assignment of graph terms to the pattern variables. A pattern is checked
/// as soon as all of its variables are assigned, which prunes the search
/// without changing its result.
pub fn brute_force(q: &Query, g: &Graph) -> Vec<OracleRow> {
    let domain = g.terms();
    let vars = q.variables();
    let mut rows = Vec::new();
    enumerate(&vars, q.patterns(), &domain, g, &mut Binding::new(), &mut |b| {
        if q.filters().iter().all(|f| eval(f, b, g) == Some(true)) {
            rows.push(q.projection().iter().map(|v| b[v].clone()).collect::<OracleRow>());
        }
    });
    if q.distinct() {
        let set: BTreeSet<OracleRow> = rows.into_iter().collect();
        return set.into_iter().collect();
    }
    rows.sort();
    rows
}

fn enumerate(
    vars: &[Variable],
    patterns: &[TriplePattern],
    domain: &[Term],
    g: &Graph,
    b: &mut Binding,
    emit: &mut dyn FnMut(&Binding),
) {
    let ready = |b: &Binding, p: &TriplePattern| p.variables().all(|v| b.contains_key(v));
    let Some((v, rest)) = vars.split_first() else {
        if patterns.iter().all(|p| holds(p, b, g)) {
            emit(b);
        }
        return;
    };
    for t in domain {
        b.insert(v.clone(), t.clone());
        let ok = patterns.iter().filter(|p| p.variables().any(|x| x == v) && ready(b, p)).all(|p| holds(p, b, g));
        if ok {
            enumerate(rest, patterns, domain, g, b, emit);
        }
    }
    b.remove(v);
}

fn resolve<'a>(t: &'a PatternTerm, b: &'a Binding) -> &'a Term {
    match t {
        PatternTerm::Var(v) => &b[v],
        PatternTerm::Term(t) => t,
    }
}

fn holds(p: &TriplePattern, b: &Binding, g: &Graph) -> bool {
    let Some(pred) = resolve(p.predicate(), b).as_iri() else {
        return false;
    };
    match Triple::new(resolve(p.subject(), b).clone(), pred.clone(), resolve(p.object(), b).clone()) {
        Ok(t) => g.contains(&t),
        Err(_) => false,
    }
}

fn eval(e: &Expr, b: &Binding, g: &Graph) -> Option<bool> {
    match e {
        Expr::Compare(op, x, y) => compare(*op, resolve(x, b), resolve(y, b)),
        Expr::And(x, y) => match (eval(x, b, g), eval(y, b, g)) {
            (Some(false), _) | (_, Some(false)) => Some(false),
            (Some(true), Some(true)) => Some(true),
            _ => None,
        },
        Expr::Or(x, y) => match (eval(x, b, g), eval(y, b, g)) {
            (Some(true), _) | (_, Some(true)) => Some(true),
            (Some(false), Some(false)) => Some(false),
            _ => None,
        },
        Expr::Not(x) => eval(x, b, g).map(|v| !v),
        Expr::Exists { negated, patterns } => {
            let fresh: BTreeSet<Variable> =
                patterns.iter().flat_map(|p| p.variables().cloned()).filter(|v| !b.contains_key(v)).collect();
            let fresh: Vec<Variable> = fresh.into_iter().collect();
            let mut found = false;
            enumerate(&fresh, patterns, &g.terms(), g, &mut b.clone(), &mut |_| found = true);
            Some(found != *negated)
        }
        Expr::Lang { variable, tag } => match &b[variable] {
            Term::Literal(l) => Some(l.lang().unwrap_or("").eq_ignore_ascii_case(tag)),
            _ => None,
        },
    }
}

/// Exact decimal as (numerator, number of fractional digits).
fn decimal(lexical: &str) -> (i128, u32) {
    let (neg, body) = match lexical.as_bytes().first() {
        Some(b'-') => (true, &lexical[1..]),
        Some(b'+') => (false, &lexical[1..]),
        _ => (false, lexical),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    let digits = format!("{int}{frac}");
    let n: i128 = if digits.is_empty() { 0 } else { digits.parse().unwrap() };
    (if neg { -n } else { n }, frac.len() as u32)
}

fn cmp_decimal(a: &str, b: &str) -> Ordering {
    let ((x, sx), (y, sy)) = (decimal(a), decimal(b));
    let scale = sx.max(sy);
    (x * 10i128.pow(scale - sx)).cmp(&(y * 10i128.pow(scale - sy)))
}

#[derive(PartialEq, Eq, PartialOrd, Ord, Clone, Copy)]
enum Class {
    Blank,
    Iri,
    Number,
    Date,
    Boolean,
    Text,
}

fn class(t: &Term) -> Class {
    match t {
        Term::Blank(_) => Class::Blank,
        Term::Iri(_) => Class::Iri,
        Term::Literal(l) => match l.datatype() {
            Datatype::Integer | Datatype::Decimal | Datatype::GYear => Class::Number,
            Datatype::Date => Class::Date,
            Datatype::Boolean => Class::Boolean,
            Datatype::String | Datatype::LangString => Class::Text,
        },
    }
}

fn date(l: &Literal) -> (i64, u32, u32) {
    let s = l.lexical();
    let (sign, s) = s.strip_prefix('-').map_or((1, s), |r| (-1, r));
    let mut parts = s.splitn(3, '-');
    let y: i64 = parts.next().unwrap().parse().unwrap();
    let m: u32 = parts.next().unwrap().parse().unwrap();
    let d: u32 = parts.next().unwrap()[..2].parse().unwrap();
    (sign * y, m, d)
}

fn truth(l: &Literal) -> bool {
    matches!(l.lexical(), "true" | "1")
}

/// Value order within the ordered classes.
fn value_cmp(a: &Literal, b: &Literal) -> Ordering {
    match class(&Term::Literal(a.clone())) {
        Class::Number => cmp_decimal(a.lexical(), b.lexical()),
        Class::Date => date(a).cmp(&date(b)),
        Class::Boolean => truth(a).cmp(&truth(b)),
        _ => unreachable!("only ordered classes"),
    }
}

fn compare(op: CompareOp, a: &Term, b: &Term) -> Option<bool> {
    let (ca, cb) = (class(a), class(b));
    let is_node = |c: Class| matches!(c, Class::Blank | Class::Iri);
    let equality_only = |eq: bool| match op {
        CompareOp::Eq => Some(eq),
        CompareOp::Ne => Some(!eq),
        _ => None,
    };
    if is_node(ca) || is_node(cb) {
        return equality_only(a == b);
    }
    if ca != cb {
        return None;
    }
    let (Term::Literal(x), Term::Literal(y)) = (a, b) else { unreachable!() };
    if ca == Class::Text {
        return equality_only(x == y);
    }
    let o = value_cmp(x, y);
    Some(match op {
        CompareOp::Lt => o.is_lt(),
        CompareOp::Le => o.is_le(),
        CompareOp::Eq => o.is_eq(),
        CompareOp::Ne => o.is_ne(),
        CompareOp::Ge => o.is_ge(),
        CompareOp::Gt => o.is_gt(),
    })
}

/// The documented ORDER BY total order on bound terms.
fn order_cmp(a: &Term, b: &Term) -> Ordering {
    class(a).cmp(&class(b)).then_with(|| match (a, b) {
        (Term::Literal(x), Term::Literal(y)) if !matches!(class(a), Class::Text) => {
            value_cmp(x, y).then_with(|| a.cmp(b))
        }
        _ => a.cmp(b),
    })
}

/// Whether `rows` (projected on `projection`) respect `order`. Every
/// ordering variable must be projected.
pub fn is_sorted_for(rows: &[Vec<Option<Term>>], projection: &[Variable], order: &[OrderCondition]) -> bool {
    let cols: Vec<(usize, bool)> = order
        .iter()
        .map(|o| {
            (projection.iter().position(|v| *v == o.variable).expect("ordering variable is projected"), o.descending)
        })
        .collect();
    rows.windows(2).all(|w| {
        for &(i, desc) in &cols {
            let o = order_cmp(w[0][i].as_ref().unwrap(), w[1][i].as_ref().unwrap());
            let o = if desc { o.reverse() } else { o };
            match o {
                Ordering::Less => return true,
                Ordering::Greater => return false,
                Ordering::Equal => {}
            }
        }
        true
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use zamo::query::parse_query;
    use zamo::turtle::{parse_turtle, PrefixMap};

    #[test]
    fn decimals_compare_exactly() {
        assert_eq!(cmp_decimal("2", "2.00"), Ordering::Equal);
        assert_eq!(cmp_decimal("-1.5", "1"), Ordering::Less);
        assert_eq!(cmp_decimal("1978", "1977.9"), Ordering::Greater);
    }

    #[test]
    fn oracle_answers_a_small_join() {
        let g = parse_turtle(
            "<http://e/a> <http://e/p> <http://e/b> . <http://e/b> <http://e/p> <http://e/c> . <http://e/b> <http://e/n> 3 .",
            None,
        )
        .unwrap()
        .graph;
        let q = parse_query(
            "SELECT ?x ?z WHERE { ?x <http://e/p> ?y . ?y <http://e/p> ?z . ?y <http://e/n> ?n FILTER(?n > 2.5) }",
            &PrefixMap::new(),
        )
        .unwrap();
        let rows = brute_force(&q, &g);
        assert_eq!(rows, vec![vec![Term::iri("http://e/a").unwrap(), Term::iri("http://e/c").unwrap()]]);
    }
}
