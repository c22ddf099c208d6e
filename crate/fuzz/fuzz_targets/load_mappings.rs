#![no_main]

use libfuzzer_sys::fuzz_target;
use zamo::alignment::load_mappings;
use zamo::turtle::parse_turtle;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(parsed) = parse_turtle(text, None) else { return };
    let _ = load_mappings(&parsed.graph);
});
