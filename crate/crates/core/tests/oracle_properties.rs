use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::seq::SliceRandom;

use zamo::inference::{saturate, RuleSet};
use zamo::query::{evaluate, evaluate_with, parse_query, JoinStrategy};
use zamo::turtle::{parse_turtle, serialize_turtle, PrefixMap};
use zamo::Term;
use zamo_oracle::{brute_force, is_sorted_for, naive_saturate, random_graph, random_query, random_schema_case, rng};

fn sorted_rows(rows: &[Vec<Option<Term>>]) -> Vec<Vec<Term>> {
    let mut out: Vec<Vec<Term>> = rows
        .iter()
        .map(|r| r.iter().map(|t| t.clone().expect("pattern variables are always bound")).collect())
        .collect();
    out.sort();
    out
}

proptest! {
    #[test]
    fn saturation_equals_the_naive_fixpoint(seed in any::<u64>(), bits in 0u8..32) {
        let mut r = rng(seed);
        let case = random_schema_case(&mut r, 20, 200);
        let rules = RuleSet::from_bits(bits);
        let fast: BTreeSet<_> = saturate(&case.data, &case.schema, rules).iter().cloned().collect();
        prop_assert_eq!(fast, naive_saturate(&case.data, &case.schema, rules));
    }

    #[test]
    fn saturation_is_idempotent_and_monotone(seed in any::<u64>()) {
        let mut r = rng(seed);
        let case = random_schema_case(&mut r, 20, 200);
        let once = saturate(&case.data, &case.schema, RuleSet::all());
        prop_assert!(case.data.iter().all(|t| once.contains(t)));
        let twice = saturate(&once, &case.schema, RuleSet::all());
        prop_assert_eq!(once.len(), twice.len());
    }

    #[test]
    fn evaluation_equals_exhaustive_substitution(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, 100).frozen();
        let q = random_query(&mut r, &g);
        let table = evaluate(&q, &g);
        prop_assert_eq!(sorted_rows(table.rows()), brute_force(&q, &g), "{}", q);
        prop_assert!(is_sorted_for(table.rows(), q.projection(), q.order_by()), "{}", q);
    }

    #[test]
    fn join_order_does_not_change_answers(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, 100).frozen();
        let q = random_query(&mut r, &g);
        let mut patterns = q.patterns().to_vec();
        patterns.shuffle(&mut r);
        let permuted = q.with_patterns(patterns).unwrap();
        let a = evaluate_with(&q, &g, JoinStrategy::Selective);
        let b = evaluate_with(&permuted, &g, JoinStrategy::AsWritten);
        prop_assert_eq!(a.multiset(), b.multiset(), "{}", q);
    }

    #[test]
    fn query_text_round_trips(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, 30);
        let q = random_query(&mut r, &g);
        let again = parse_query(&q.to_string(), &PrefixMap::new()).unwrap();
        prop_assert_eq!(again, q);
    }

    #[test]
    fn turtle_round_trips_random_graphs(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, 100);
        let mut prefixes = PrefixMap::new();
        prefixes.insert("ex", zamo::Iri::new("http://example.org/").unwrap());
        let text = serialize_turtle(&g, &prefixes);
        let back = parse_turtle(&text, None).unwrap().graph;
        prop_assert!(back.equivalent(&g), "{}", text);
    }
}
