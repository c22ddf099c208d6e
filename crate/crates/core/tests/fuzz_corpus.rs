//! Replays the fuzz seeds, and byte-level mutations of them, through the
//! properties the fuzz targets assert.

use std::fs;
use std::path::PathBuf;

use proptest::prelude::*;

use zamo::alignment::load_mappings;
use zamo::ontology::standard_prefixes;
use zamo::query::parse_query;
use zamo::samod::{parse_expected, Manifest};
use zamo::turtle::{parse_turtle, serialize_turtle, PrefixMap};
use zamo::Iri;

fn seeds(target: &str) -> Vec<String> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<String> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| fs::read_to_string(e.unwrap().path()).unwrap())
        .collect();
    out.sort();
    assert!(!out.is_empty(), "{target} has no seeds");
    out
}

fn turtle(text: &str) {
    let base = Iri::new("https://example.org/").unwrap();
    match parse_turtle(text, Some(&base)) {
        Ok(first) => {
            let written = serialize_turtle(&first.graph, &first.prefixes);
            let again = parse_turtle(&written, None).unwrap_or_else(|e| panic!("{e}\n{written}"));
            assert!(again.graph.equivalent(&first.graph), "{written}");
            let _ = load_mappings(&first.graph);
        }
        Err(e) => assert!(e.first_error().line >= 1),
    }
}

fn query(text: &str) {
    if let Ok(q) = parse_query(text, &standard_prefixes()) {
        let again = parse_query(&q.to_string(), &PrefixMap::new()).unwrap_or_else(|e| panic!("{e}\n{q}"));
        assert_eq!(again.to_string(), q.to_string());
    }
}

fn json(text: &str) {
    let _ = Manifest::from_json(text);
    let _ = parse_expected(text);
}

#[test]
fn seeds_satisfy_the_target_properties() {
    for target in ["parse_turtle", "turtle_round_trip", "load_mappings"] {
        seeds(target).iter().for_each(|s| turtle(s));
    }
    seeds("parse_query").iter().for_each(|s| query(s));
    for m in seeds("manifest") {
        Manifest::from_json(&m).unwrap();
    }
    for e in seeds("expected_rows") {
        parse_expected(&e).unwrap();
    }
}

/// Cuts, duplicates or overwrites one span of a seed.
fn mutate(seed: &str, at: usize, len: usize, op: u8, byte: u8) -> String {
    let mut b = seed.as_bytes().to_vec();
    let at = at % (b.len() + 1);
    let end = (at + len).min(b.len());
    match op % 3 {
        0 => {
            b.drain(at..end);
        }
        1 => {
            let copy = b[at..end].to_vec();
            b.splice(at..at, copy);
        }
        _ => b[at..end].iter_mut().for_each(|x| *x = byte),
    }
    String::from_utf8_lossy(&b).into_owned()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn mutated_turtle_never_panics(i in any::<usize>(), at in any::<usize>(), len in 0usize..12, op in any::<u8>(), byte in b' '..b'~') {
        let s = seeds("parse_turtle");
        turtle(&mutate(&s[i % s.len()], at, len, op, byte));
    }

    #[test]
    fn mutated_queries_never_panic(i in any::<usize>(), at in any::<usize>(), len in 0usize..12, op in any::<u8>(), byte in b' '..b'~') {
        let s = seeds("parse_query");
        query(&mutate(&s[i % s.len()], at, len, op, byte));
    }

    #[test]
    fn mutated_json_never_panics(i in any::<usize>(), at in any::<usize>(), len in 0usize..12, op in any::<u8>(), byte in b' '..b'~') {
        let mut s = seeds("manifest");
        s.extend(seeds("expected_rows"));
        json(&mutate(&s[i % s.len()], at, len, op, byte));
    }

    #[test]
    fn arbitrary_text_never_panics(text in "\\PC{0,200}") {
        turtle(&text);
        query(&text);
        json(&text);
    }
}
