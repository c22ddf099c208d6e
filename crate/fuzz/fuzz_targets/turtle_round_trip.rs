#![no_main]

use libfuzzer_sys::fuzz_target;
use zamo::turtle::{parse_turtle, serialize_turtle};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(first) = parse_turtle(text, None) else { return };
    let written = serialize_turtle(&first.graph, &first.prefixes);
    let again = parse_turtle(&written, None).expect("serializer output parses");
    assert!(again.graph.equivalent(&first.graph), "{written}");
});
