use std::fs;
use std::path::{Path, PathBuf};

use zamo::turtle::{parse_turtle, serialize_turtle};
use zamo::Iri;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

/// Base for documents that use the empty prefix without declaring it.
fn base() -> Iri {
    Iri::new("https://w3id.org/zeri/samod/").unwrap()
}

fn turtle_files(dir: &Path, out: &mut Vec<PathBuf>) {
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.is_dir() {
            if path.file_name().unwrap() != "malformed" {
                turtle_files(&path, out);
            }
        } else if path.extension().is_some_and(|e| e == "ttl") {
            out.push(path);
        }
    }
}

#[test]
fn every_shipped_document_round_trips() {
    let mut files = Vec::new();
    turtle_files(&root().join("fixtures"), &mut files);
    turtle_files(&root().join("crates/core/data"), &mut files);
    assert!(files.len() > 30, "found only {} documents", files.len());
    for f in files {
        let text = fs::read_to_string(&f).unwrap();
        let first = parse_turtle(&text, Some(&base())).unwrap_or_else(|e| panic!("{}:{e}", f.display()));
        let written = serialize_turtle(&first.graph, &first.prefixes);
        let again =
            parse_turtle(&written, None).unwrap_or_else(|e| panic!("{} reserialized:{e}\n{written}", f.display()));
        assert!(again.graph.equivalent(&first.graph), "{}", f.display());
    }
}

#[test]
fn hico_snippet_yields_four_triples() {
    let text = fs::read_to_string(root().join("fixtures/turtle/hico.ttl")).unwrap();
    assert_eq!(parse_turtle(&text, Some(&base())).unwrap().graph.len(), 4);
}

#[test]
fn malformed_documents_fail_at_the_recorded_position() {
    let dir = root().join("fixtures/turtle/malformed");
    let expected: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("expected.json")).unwrap()).unwrap();
    let expected = expected.as_object().unwrap();
    assert_eq!(expected.len(), 20);
    for (file, pos) in expected {
        let text = fs::read_to_string(dir.join(file)).unwrap();
        let err = parse_turtle(&text, None).expect_err(file);
        let d = err.first_error();
        assert_eq!(
            (d.line as u64, d.column as u64),
            (pos["line"].as_u64().unwrap(), pos["column"].as_u64().unwrap()),
            "{file}: {}",
            d.message
        );
    }
}
