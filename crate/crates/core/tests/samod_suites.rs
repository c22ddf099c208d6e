use std::path::PathBuf;

use zamo::samod::{load_suite, run_regression, run_suite, ScenarioSuite};

fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(rel)
}

fn suite(module: &str) -> ScenarioSuite {
    load_suite(&fixture(&format!("{module}/manifest.json"))).unwrap_or_else(|e| panic!("{e}"))
}

#[test]
fn suites_have_the_expected_shape() {
    for (module, iterations, cqs) in [("agents", 5, 16), ("events", 2, 7), ("sources", 1, 2)] {
        let s = suite(module);
        assert_eq!(s.iterations.len(), iterations, "{module}");
        assert_eq!(s.question_count(), cqs, "{module}");
    }
}

#[test]
fn every_competency_question_passes() {
    for module in ["agents", "events", "sources"] {
        let report = run_suite(&suite(module));
        assert!(report.passed, "{}", report.to_text());
        assert_eq!(report.cq_passed, report.cq_total);
    }
}

#[test]
fn regression_reaches_the_milestone() {
    for module in ["agents", "events", "sources"] {
        let s = suite(module);
        let last = s.iterations.last().unwrap().id;
        let report = run_regression(&s, last).unwrap();
        assert_eq!(report.milestone, Some(true), "{}", report.to_text());
        assert_eq!(report.runs.len(), 2 * s.iterations.len());
    }
}

#[test]
fn modelets_are_slices_of_the_shipped_vocabulary() {
    use std::collections::BTreeSet;
    use zamo::ontology::{builtin_vocabulary, extract_schema, Module};

    for module in Module::ALL {
        let s = suite(module.name());
        let full = builtin_vocabulary(module);
        let mut covered = BTreeSet::new();
        for it in &s.iterations {
            for t in it.modelet.iter() {
                assert!(full.contains(t), "{module} iteration {}: {t} is not in the vocabulary", it.id);
            }
            covered.extend(extract_schema(&it.modelet).unwrap().schema.declared_entities());
        }
        let declared: BTreeSet<_> = extract_schema(&full)
            .unwrap()
            .schema
            .declared_entities()
            .into_iter()
            .filter(|e| Module::of_iri(e.as_str()) == Some(module))
            .collect();
        let missing: Vec<_> = declared.difference(&covered).collect();
        assert!(missing.is_empty(), "{module}: no modelet introduces {missing:?}");
    }
}

#[test]
fn every_mutation_breaks_the_milestone() {
    use zamo::samod::ModelScope;

    let cases = [
        ("agents-modelet-no-domain", 2, "NoDomain"),
        ("agents-modelet-cycle", 3, "HierarchyCycle"),
        ("agents-dataset-disjoint", 1, "DisjointnessClash"),
        ("events-dataset-datatype", 2, "DatatypeMismatch"),
        ("sources-dataset-no-owner", 1, ""),
    ];
    for (name, iteration, finding) in cases {
        let s = load_suite(&fixture(&format!("mutations/samod/{name}/manifest.json"))).unwrap();
        let report = run_regression(&s, s.iterations.last().unwrap().id).unwrap();
        assert_eq!(report.milestone, Some(false), "{name}");
        let broken = report.runs.iter().find(|r| r.scope == ModelScope::Isolated && r.iteration == iteration).unwrap();
        assert!(!broken.passed, "{name}");
        let kinds: Vec<&str> =
            broken.model_test.pitfalls.iter().chain(&broken.data_test.violations).map(|f| f.kind.as_str()).collect();
        if finding.is_empty() {
            assert!(broken.query_tests.iter().any(|q| !q.passed), "{name}");
        } else {
            assert!(kinds.contains(&finding), "{name}: {kinds:?}");
        }
        let mut others = report.runs.iter().filter(|r| r.scope == ModelScope::Isolated && r.iteration != iteration);
        assert!(others.all(|r| r.passed), "{name}");
    }
}

#[test]
fn isolated_failure_propagates_to_regression() {
    let s = load_suite(&fixture("mutations/samod/agents-modelet-no-domain/manifest.json")).unwrap();
    assert!(!zamo::samod::run_iteration(&s, 2).unwrap().passed);
    assert!(run_regression(&s, 1).unwrap().milestone == Some(true));
    for k in 2..=5 {
        assert_eq!(run_regression(&s, k).unwrap().milestone, Some(false));
    }
}

#[test]
fn reports_are_deterministic() {
    let s = suite("agents");
    let a = run_regression(&s, 5).unwrap().to_json();
    let b = run_regression(&s, 5).unwrap().to_json();
    assert_eq!(a, b);
}
