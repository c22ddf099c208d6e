use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use zamo::ontology::{extract_schema, OntologySchema};
use zamo::query::{CompareOp, Expr, OrderCondition, PatternTerm, Query, TriplePattern, Variable};
use zamo::rdf::vocab::{owl, rdf, rdfs, xsd};
use zamo::{Datatype, Graph, Iri, Literal, Term, Triple};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn iri(s: &str) -> Iri {
    Iri::new(s).unwrap()
}

fn ex(local: &str) -> Iri {
    iri(&format!("http://example.org/{local}"))
}

fn push(g: &mut Graph, s: impl Into<Term>, p: &str, o: impl Into<Term>) {
    g.insert(Triple::new(s.into(), iri(p), o.into()).unwrap()).unwrap();
}

fn literal<R: Rng>(rng: &mut R) -> Literal {
    let lit = |lex: &str, dt| Literal::new(lex, dt, None).unwrap();
    match rng.gen_range(0..9) {
        0 => lit(&rng.gen_range(-2..5).to_string(), Datatype::Integer),
        1 => lit(["1.5", "2.0", "-0.5", "3.25"].choose(rng).unwrap(), Datatype::Decimal),
        2 => lit(["1999", "2000", "2001"].choose(rng).unwrap(), Datatype::GYear),
        3 => lit(["2000-01-01", "2000-12-31", "1999-06-15"].choose(rng).unwrap(), Datatype::Date),
        4 => lit(["true", "false", "1"].choose(rng).unwrap(), Datatype::Boolean),
        5 | 6 => Literal::string(*["a", "b", "Roma"].choose(rng).unwrap()),
        _ => Literal::new(
            *["a", "Roma"].choose(rng).unwrap(),
            Datatype::LangString,
            Some(["en", "it"].choose(rng).unwrap()),
        )
        .unwrap(),
    }
}

/// A graph of at most `max` triples over six nodes, three predicates,
/// `rdf:type` and a handful of literals of every supported datatype.
pub fn random_graph<R: Rng>(rng: &mut R, max: usize) -> Graph {
    let mut g = Graph::new();
    let n = rng.gen_range(0..=max);
    for _ in 0..n {
        let s: Term = ex(&format!("n{}", rng.gen_range(0..6))).into();
        let (p, o): (Iri, Term) = match rng.gen_range(0..6) {
            0 => (iri(rdf::TYPE), ex(&format!("C{}", rng.gen_range(0..3))).into()),
            1 | 2 => (ex(&format!("p{}", rng.gen_range(0..3))), ex(&format!("n{}", rng.gen_range(0..6))).into()),
            _ => (ex(&format!("p{}", rng.gen_range(0..3))), literal(rng).into()),
        };
        g.insert(Triple::new(s, p, o).unwrap()).unwrap();
    }
    g
}

/// A random schema together with instance data that uses it.
pub struct SchemaCase {
    pub schema_graph: Graph,
    pub schema: OntologySchema,
    pub data: Graph,
}

/// At most `max_classes` classes with arbitrary (possibly cyclic) subclass
/// edges, object and data properties with random axioms, and at most
/// `max_triples` instance triples.
pub fn random_schema_case<R: Rng>(rng: &mut R, max_classes: usize, max_triples: usize) -> SchemaCase {
    let mut sg = Graph::new();
    let classes: Vec<Iri> = (0..rng.gen_range(1..=max_classes)).map(|i| ex(&format!("C{i}"))).collect();
    let objects: Vec<Iri> = (0..rng.gen_range(1..=6)).map(|i| ex(&format!("op{i}"))).collect();
    let datas: Vec<Iri> = (0..rng.gen_range(0..=3)).map(|i| ex(&format!("dp{i}"))).collect();
    for c in &classes {
        push(&mut sg, c.clone(), rdf::TYPE, iri(owl::CLASS));
        if rng.gen_bool(0.6) {
            push(&mut sg, c.clone(), rdfs::SUB_CLASS_OF, classes.choose(rng).unwrap().clone());
        }
    }
    for p in &objects {
        push(&mut sg, p.clone(), rdf::TYPE, iri(owl::OBJECT_PROPERTY));
        if rng.gen_bool(0.5) {
            push(&mut sg, p.clone(), rdfs::DOMAIN, classes.choose(rng).unwrap().clone());
        }
        if rng.gen_bool(0.5) {
            push(&mut sg, p.clone(), rdfs::RANGE, classes.choose(rng).unwrap().clone());
        }
        if rng.gen_bool(0.3) {
            push(&mut sg, p.clone(), rdfs::SUB_PROPERTY_OF, objects.choose(rng).unwrap().clone());
        }
        if rng.gen_bool(0.2) {
            push(&mut sg, p.clone(), owl::INVERSE_OF, objects.choose(rng).unwrap().clone());
        }
    }
    for p in &datas {
        push(&mut sg, p.clone(), rdf::TYPE, iri(owl::DATATYPE_PROPERTY));
        if rng.gen_bool(0.5) {
            push(&mut sg, p.clone(), rdfs::DOMAIN, classes.choose(rng).unwrap().clone());
        }
        if rng.gen_bool(0.5) {
            push(&mut sg, p.clone(), rdfs::RANGE, iri(xsd::INTEGER));
        }
        if datas.len() > 1 && rng.gen_bool(0.3) {
            push(&mut sg, p.clone(), rdfs::SUB_PROPERTY_OF, datas.choose(rng).unwrap().clone());
        }
    }
    let schema = match extract_schema(&sg) {
        Ok(e) => e.schema,
        Err(e) => panic!("generated schema is consistent by construction: {e}"),
    };

    let mut data = Graph::new();
    let node = |rng: &mut R| -> Term { ex(&format!("i{}", rng.gen_range(0..10))).into() };
    for _ in 0..rng.gen_range(0..=max_triples) {
        let s = node(rng);
        let t = match rng.gen_range(0..4) {
            0 => Triple::new(s, iri(rdf::TYPE), classes.choose(rng).unwrap().clone().into()),
            1 if !datas.is_empty() => Triple::new(
                s,
                datas.choose(rng).unwrap().clone(),
                Literal::new(rng.gen_range(0..5).to_string(), Datatype::Integer, None).unwrap().into(),
            ),
            _ => Triple::new(s, objects.choose(rng).unwrap().clone(), node(rng)),
        };
        data.insert(t.unwrap()).unwrap();
    }
    SchemaCase { schema_graph: sg, schema, data }
}

fn var(i: usize) -> Variable {
    Variable::new(format!("v{i}")).unwrap()
}

fn pick_term<R: Rng>(rng: &mut R, pool: &[Term], keep: impl Fn(&Term) -> bool) -> Option<Term> {
    let candidates: Vec<&Term> = pool.iter().filter(|t| keep(t)).collect();
    candidates.choose(rng).map(|t| (*t).clone())
}

fn random_pattern<R: Rng>(rng: &mut R, pool: &[Term], vars: usize, force_subject_var: bool) -> TriplePattern {
    let v = |rng: &mut R| PatternTerm::Var(var(rng.gen_range(0..vars)));
    let subject = if force_subject_var || rng.gen_bool(0.7) {
        v(rng)
    } else {
        pick_term(rng, pool, |t| !t.is_literal()).map_or_else(|| v(rng), PatternTerm::Term)
    };
    let predicate = if rng.gen_bool(0.3) {
        v(rng)
    } else {
        let mut preds: Vec<Term> = (0..3).map(|i| ex(&format!("p{i}")).into()).collect();
        preds.push(iri(rdf::TYPE).into());
        PatternTerm::Term(preds.choose(rng).unwrap().clone())
    };
    let object = if rng.gen_bool(0.6) {
        v(rng)
    } else {
        pick_term(rng, pool, |_| true).map_or_else(|| v(rng), PatternTerm::Term)
    };
    TriplePattern::new(subject, predicate, object).expect("subject is never a literal and predicate is never a literal")
}

fn random_expr<R: Rng>(rng: &mut R, pool: &[Term], bound: &[Variable], depth: u32) -> Expr {
    let bv = |rng: &mut R| bound.choose(rng).unwrap().clone();
    match rng.gen_range(0..if depth == 0 { 3 } else { 7 }) {
        0 | 1 => {
            let op = *CompareOp::ALL.choose(rng).unwrap();
            let left = PatternTerm::Var(bv(rng));
            let right = match rng.gen_range(0..10) {
                0..=3 => PatternTerm::Var(bv(rng)),
                4..=6 => {
                    PatternTerm::Term(pick_term(rng, pool, |_| true).unwrap_or_else(|| Term::Literal(literal(rng))))
                }
                _ => PatternTerm::Term(Term::Literal(literal(rng))),
            };
            Expr::Compare(op, left, right)
        }
        2 => Expr::Lang { variable: bv(rng), tag: ["en", "it", ""].choose(rng).unwrap().to_string() },
        3 => Expr::And(
            Box::new(random_expr(rng, pool, bound, depth - 1)),
            Box::new(random_expr(rng, pool, bound, depth - 1)),
        ),
        4 => Expr::Or(
            Box::new(random_expr(rng, pool, bound, depth - 1)),
            Box::new(random_expr(rng, pool, bound, depth - 1)),
        ),
        5 => Expr::Not(Box::new(random_expr(rng, pool, bound, depth - 1))),
        _ => {
            // `?v4` never occurs outside, so it is always local to the block.
            let mut p = random_pattern(rng, pool, 5, false);
            if p.variables().count() == 0 {
                p = TriplePattern::new(PatternTerm::Var(bv(rng)), p.predicate().clone(), p.object().clone()).unwrap();
            }
            Expr::Exists { negated: rng.gen_bool(0.5), patterns: vec![p] }
        }
    }
}

/// Patterns abstracted from connected triples of `g` through one
/// term-to-variable map, so the source triples are always a solution.
fn connected_patterns<R: Rng>(rng: &mut R, g: &Graph, count: usize) -> Vec<TriplePattern> {
    let triples: Vec<&Triple> = g.iter().collect();
    let mut map: Vec<(Term, Variable)> = Vec::new();
    let mut out = Vec::new();
    for _ in 0..count {
        let linked: Vec<&&Triple> =
            triples.iter().filter(|t| map.iter().any(|(m, _)| m == t.subject() || m == t.object())).collect();
        let t = match linked.choose(rng) {
            Some(t) if rng.gen_bool(0.8) => **t,
            _ => *triples.choose(rng).expect("non-empty graph"),
        };
        let mut abstracted = |term: Term, p_var: f64, force: bool| {
            if let Some((_, v)) = map.iter().find(|(m, _)| *m == term) {
                if force || rng.gen_bool(0.9) {
                    return PatternTerm::Var(v.clone());
                }
            }
            if (force || rng.gen_bool(p_var)) && map.len() < 4 {
                let v = var(map.len());
                map.push((term, v.clone()));
                return PatternTerm::Var(v);
            }
            PatternTerm::Term(term)
        };
        let first = out.is_empty();
        let subject = abstracted(t.subject().clone(), 0.7, first);
        let predicate = abstracted(t.predicate().clone().into(), 0.15, false);
        let object = abstracted(t.object().clone(), 0.7, false);
        out.push(TriplePattern::new(subject, predicate, object).expect("abstracted from a valid triple"));
    }
    out
}

/// A query with 1 to 4 patterns over at most four variables, at most two
/// filters, a random projection, and random DISTINCT and ORDER BY. Most
/// patterns are abstracted from the triples of `g`; the rest are random.
pub fn random_query<R: Rng>(rng: &mut R, g: &Graph) -> Query {
    let pool = g.terms();
    let vars = rng.gen_range(1..=4);
    let count = rng.gen_range(1..=4);
    let patterns: Vec<TriplePattern> = if !g.is_empty() && rng.gen_bool(0.7) {
        connected_patterns(rng, g, count)
    } else {
        (0..count).map(|i| random_pattern(rng, &pool, vars, i == 0)).collect()
    };
    let mut bound: Vec<Variable> = Vec::new();
    for p in &patterns {
        for v in p.variables() {
            if !bound.contains(v) {
                bound.push(v.clone());
            }
        }
    }
    let filters: Vec<Expr> = (0..rng.gen_range(0..=2)).map(|_| random_expr(rng, &pool, &bound, 2)).collect();
    let projection: Vec<Variable> = if rng.gen_bool(0.3) {
        Vec::new()
    } else {
        let mut p: Vec<Variable> = bound.iter().filter(|_| rng.gen_bool(0.6)).cloned().collect();
        if p.is_empty() {
            p.push(bound[0].clone());
        }
        p.shuffle(rng);
        p
    };
    let visible = if projection.is_empty() { bound.clone() } else { projection.clone() };
    let mut order_by = Vec::new();
    if rng.gen_bool(0.3) {
        for v in &visible {
            if rng.gen_bool(0.5) {
                order_by.push(OrderCondition { variable: v.clone(), descending: rng.gen_bool(0.5) });
            }
        }
    }
    Query::new(projection, rng.gen_bool(0.3), patterns, filters, order_by).expect("generated query is well formed")
}
