#![no_main]

use libfuzzer_sys::fuzz_target;
use zamo::ontology::standard_prefixes;
use zamo::query::parse_query;
use zamo::turtle::PrefixMap;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(q) = parse_query(text, &standard_prefixes()) else { return };
    // Display is a parseable, stable form.
    let again = parse_query(&q.to_string(), &PrefixMap::new()).expect("displayed query parses");
    assert_eq!(again.to_string(), q.to_string());
});
