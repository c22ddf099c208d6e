use std::collections::BTreeMap;
use std::fmt::Write;

use crate::rdf::vocab::rdf;
use crate::rdf::Graph;

use super::prefix::PrefixMap;

/// Deterministic Turtle rendering: every prefix sorted by label, subjects
/// sorted by rendered form, `a` first and then predicates and objects sorted.
/// The base IRI is never emitted, so the output only contains absolute or
/// prefixed IRIs.
pub fn serialize_turtle(graph: &Graph, prefixes: &PrefixMap) -> String {
    let mut out = String::new();
    for (label, ns) in prefixes.iter() {
        writeln!(out, "@prefix {label}: {ns} .").expect("writing to a String");
    }

    // subject → predicate → objects, all keyed by rendered form.
    let mut subjects: BTreeMap<String, BTreeMap<(bool, String), Vec<String>>> = BTreeMap::new();
    for t in graph {
        let is_type = t.predicate().as_str() == rdf::TYPE;
        let predicate = if is_type { "a".to_owned() } else { prefixes.render_iri(t.predicate()) };
        subjects
            .entry(prefixes.render_term(t.subject()))
            .or_default()
            .entry((!is_type, predicate))
            .or_default()
            .push(prefixes.render_term(t.object()));
    }

    for (subject, predicates) in subjects {
        out.push('\n');
        out.push_str(&subject);
        let count = predicates.len();
        for (i, ((_, predicate), mut objects)) in predicates.into_iter().enumerate() {
            objects.sort();
            objects.dedup();
            let sep = if i == 0 { " " } else { "    " };
            write!(out, "{sep}{predicate} {}", objects.join(", ")).expect("writing to a String");
            out.push_str(if i + 1 == count { " .\n" } else { " ;\n" });
        }
    }
    out
}
