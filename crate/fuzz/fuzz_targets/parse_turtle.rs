#![no_main]

use libfuzzer_sys::fuzz_target;
use zamo::turtle::parse_turtle;
use zamo::Iri;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let base = Iri::new("https://example.org/").unwrap();
    // Diagnostics must carry a position inside the document.
    if let Err(e) = parse_turtle(text, Some(&base)) {
        let d = e.first_error();
        assert!(d.line >= 1 && d.line <= text.lines().count().max(1) + 1);
    }
});
