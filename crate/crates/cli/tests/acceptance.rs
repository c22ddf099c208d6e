//! Acceptance run: one line per criterion, nonzero exit if any fails.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::panic;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;

use zamo::alignment::{builtin_mappings, export_alignment_table, load_mappings, validate_mappings};
use zamo::inference::{saturate, RuleSet};
use zamo::ontology::{builtin_graph, controlled_vocabulary, extract_schema, Module};
use zamo::query::{evaluate, evaluate_with, JoinStrategy};
use zamo::samod::{load_suite, run_regression, run_suite, ScenarioSuite};
use zamo::turtle::{parse_turtle, serialize_turtle};
use zamo::{Graph, Iri, Term};
use zamo_oracle::{brute_force, is_sorted_for, naive_saturate, random_graph, random_query, random_schema_case, rng};

const RANDOM_CASES: u64 = 1000;
const SUITE_BUDGET: Duration = Duration::from_secs(5);
const MODULES: [(&str, usize); 3] = [("agents", 16), ("events", 7), ("sources", 2)];

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn fixture(rel: &str) -> PathBuf {
    root().join("fixtures").join(rel)
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn json(path: &Path) -> Result<serde_json::Value, String> {
    serde_json::from_str(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn suite(path: &Path) -> Result<ScenarioSuite, String> {
    load_suite(path).map_err(|e| e.to_string())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

type Rows = BTreeMap<BTreeMap<String, String>, usize>;

fn multiset(rows: &[&[(&str, &str)]]) -> Rows {
    let mut out = Rows::new();
    for r in rows {
        let row = r.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        *out.entry(row).or_insert(0) += 1;
    }
    out
}

/// Competency questions: every CQ exact, the answers quoted in the
/// criterion present verbatim, the three suites within the time budget.
fn competency_questions() -> Verdict {
    let quoted: [(&str, &str, Rows); 4] = [
        ("agents", "1.1", multiset(&[&[("director", "SR")]])),
        (
            "agents",
            "4.4",
            multiset(&[
                &[("director", "AQ"), ("start", "1910"), ("end", "1920")],
                &[("director", "FZ"), ("start", "1920"), ("end", "1948")],
                &[("director", "MZ"), ("start", "1948"), ("end", "1970")],
            ]),
        ),
        (
            "events",
            "2.2",
            multiset(&[
                &[("year", "1980"), ("amount", "15000")],
                &[("year", "1990"), ("amount", "35000")],
                &[("year", "1991"), ("amount", "30000")],
            ]),
        ),
        ("sources", "1.1", multiset(&[&[("owner", "Foundation SZ")]])),
    ];
    let start = Instant::now();
    let mut passed = 0;
    let mut total = 0;
    for (module, cqs) in MODULES {
        let s = suite(&fixture(&format!("{module}/manifest.json")))?;
        ensure(s.question_count() == cqs, || format!("{module}: {} CQs, want {cqs}", s.question_count()))?;
        let report = run_suite(&s);
        passed += report.cq_passed;
        total += report.cq_total;
        ensure(report.passed, || report.to_text())?;
        for (m, id, want) in quoted.iter().filter(|q| q.0 == module) {
            let cq = s
                .iterations
                .iter()
                .flat_map(|i| &i.questions)
                .find(|q| q.id == *id)
                .ok_or_else(|| format!("{m} {id} missing"))?;
            let mut got = Rows::new();
            for r in &cq.expected {
                *got.entry(r.clone()).or_insert(0) += 1;
            }
            ensure(&got == want, || format!("{m} {id} fixture is {got:?}"))?;
        }
    }
    let elapsed = start.elapsed();
    ensure(total == 25 && passed == 25, || format!("{passed}/{total} CQs"))?;
    ensure(elapsed < SUITE_BUDGET, || format!("suites took {elapsed:?}"))?;
    Ok(format!("{passed}/{total} CQs exact in {:.2}s", elapsed.as_secs_f64()))
}

/// Alignment: 77 exported rows identical to the transcribed tables, a clean
/// shipped alignment, and exactly the seeded violations in each mutation.
fn alignment() -> Verdict {
    let schema = extract_schema(&builtin_graph(&Module::ALL)).map_err(|e| e.to_string())?.schema;
    let mut rows = 0;
    for module in Module::ALL {
        let mappings = builtin_mappings(module);
        let csv = export_alignment_table(&mappings, module);
        let want = read(&fixture(&format!("alignment/{}.csv", module.name())))?;
        ensure(csv == want, || format!("{module} export differs from its fixture"))?;
        rows += csv.lines().count() - 1;
        let violations = validate_mappings(&mappings, &schema);
        ensure(violations.is_empty(), || format!("{module}: {} violations", violations.len()))?;
    }
    ensure(rows == 77, || format!("{rows} rows"))?;
    let expected = json(&fixture("mutations/alignment/expected.json"))?;
    let cases = expected.as_object().ok_or("expected.json is not an object")?;
    ensure(cases.len() == 3, || format!("{} mutation fixtures", cases.len()))?;
    for (file, case) in cases {
        let graph = parse_turtle(&read(&fixture(&format!("mutations/alignment/{file}")))?, None)
            .map_err(|e| format!("{file}:{e}"))?
            .graph;
        let mappings = load_mappings(&graph).map_err(|e| format!("{file}: {e}"))?.mappings;
        let found: Vec<(String, String)> = validate_mappings(&mappings, &schema)
            .into_iter()
            .map(|v| (v.kind.to_string(), v.entity.as_str().to_owned()))
            .collect();
        let seeded: Vec<(String, String)> = case["violations"]
            .as_array()
            .ok_or("violations is not an array")?
            .iter()
            .map(|v| (v["kind"].as_str().unwrap_or("").to_owned(), v["entity"].as_str().unwrap_or("").to_owned()))
            .collect();
        ensure(found == seeded, || format!("{file}: found {found:?}, seeded {seeded:?}"))?;
    }
    Ok(format!("{rows} rows, 0 shipped violations, {} mutations caught", cases.len()))
}

/// Every scenario model and dataset merged with the full vocabulary.
fn scenario_corpus() -> Result<Graph, String> {
    let mut g = Graph::merge(&builtin_graph(&Module::ALL), &controlled_vocabulary());
    for (module, _) in MODULES {
        let s = suite(&fixture(&format!("{module}/manifest.json")))?;
        for it in &s.iterations {
            g = Graph::merge(&Graph::merge(&g, &it.modelet), &it.dataset);
        }
    }
    Ok(g)
}

/// Inference: the indexed saturation matches the naive fixpoint on random
/// schemas, and saturating the scenario corpus twice adds nothing.
fn inference() -> Verdict {
    let mut max_triples = 0;
    let mut derived = 0;
    for seed in 0..RANDOM_CASES {
        let mut r = rng(seed);
        let case = random_schema_case(&mut r, 20, 200);
        ensure(case.data.len() <= 200, || format!("seed {seed}: {} triples", case.data.len()))?;
        ensure(case.schema.classes.len() <= 20, || format!("seed {seed}: too many classes"))?;
        max_triples = max_triples.max(case.data.len());
        let fast: BTreeSet<_> = saturate(&case.data, &case.schema, RuleSet::all()).iter().cloned().collect();
        let slow = naive_saturate(&case.data, &case.schema, RuleSet::all());
        ensure(fast == slow, || format!("seed {seed}: {} vs {} triples", fast.len(), slow.len()))?;
        derived += fast.len() - case.data.len();
    }
    let corpus = scenario_corpus()?;
    let schema = extract_schema(&corpus).map_err(|e| e.to_string())?.schema;
    let once = saturate(&corpus, &schema, RuleSet::all());
    let twice = saturate(&once, &schema, RuleSet::all());
    ensure(once.equivalent(&twice), || format!("corpus grew from {} to {}", once.len(), twice.len()))?;
    Ok(format!(
        "{RANDOM_CASES} random cases (up to {max_triples} triples, {derived} derived), corpus of {} triples idempotent",
        once.len()
    ))
}

fn bound_rows(rows: &[Vec<Option<Term>>]) -> Option<Vec<Vec<Term>>> {
    let mut out: Vec<Vec<Term>> = rows.iter().map(|r| r.iter().cloned().collect()).collect::<Option<_>>()?;
    out.sort();
    Some(out)
}

/// Queries: evaluation equals exhaustive substitution, results follow the
/// requested order, and shuffling the patterns changes nothing.
fn query_engine() -> Verdict {
    let mut answers = 0;
    for seed in 0..RANDOM_CASES {
        let mut r = rng(seed);
        let g = random_graph(&mut r, 100).frozen();
        let q = random_query(&mut r, &g);
        ensure(g.len() <= 100 && q.patterns().len() <= 4 && q.filters().len() <= 2, || {
            format!("seed {seed}: case outside bounds: {q}")
        })?;
        let table = evaluate(&q, &g);
        let got = bound_rows(table.rows()).ok_or_else(|| format!("seed {seed}: unbound cell in {q}"))?;
        ensure(got == brute_force(&q, &g), || format!("seed {seed}: differs from oracle on {q}"))?;
        ensure(is_sorted_for(table.rows(), q.projection(), q.order_by()), || format!("seed {seed}: unsorted {q}"))?;
        let mut patterns = q.patterns().to_vec();
        patterns.shuffle(&mut r);
        let permuted = q.with_patterns(patterns).map_err(|e| e.to_string())?;
        let a = evaluate_with(&q, &g, JoinStrategy::Selective);
        let b = evaluate_with(&permuted, &g, JoinStrategy::AsWritten);
        ensure(a.multiset() == b.multiset(), || format!("seed {seed}: join order changed the answer of {q}"))?;
        answers += got.len();
    }
    Ok(format!("{RANDOM_CASES} random cases, {answers} oracle rows, permutation invariant"))
}

fn turtle_files(dir: &Path, out: &mut Vec<PathBuf>) -> Result<(), String> {
    for entry in fs::read_dir(dir).map_err(|e| format!("{}: {e}", dir.display()))? {
        let path = entry.map_err(|e| e.to_string())?.path();
        if path.is_dir() {
            if path.file_name().is_some_and(|n| n != "malformed") {
                turtle_files(&path, out)?;
            }
        } else if path.extension().is_some_and(|e| e == "ttl") {
            out.push(path);
        }
    }
    Ok(())
}

/// Parser: every shipped document survives parse, serialize, parse; the
/// HICO snippet has four triples; malformed documents fail where recorded.
fn parser() -> Verdict {
    let base = Iri::new("https://w3id.org/zeri/samod/").map_err(|e| e.to_string())?;
    let mut files = Vec::new();
    turtle_files(&root().join("fixtures"), &mut files)?;
    turtle_files(&root().join("crates/core/data"), &mut files)?;
    for f in &files {
        let first = parse_turtle(&read(f)?, Some(&base)).map_err(|e| format!("{}:{e}", f.display()))?;
        let written = serialize_turtle(&first.graph, &first.prefixes);
        let again = parse_turtle(&written, None).map_err(|e| format!("{} reserialized:{e}", f.display()))?;
        ensure(again.graph.equivalent(&first.graph), || format!("{} changed on round trip", f.display()))?;
    }
    let hico = parse_turtle(&read(&fixture("turtle/hico.ttl"))?, Some(&base)).map_err(|e| e.to_string())?;
    ensure(hico.graph.len() == 4, || format!("HICO snippet has {} triples", hico.graph.len()))?;
    let dir = fixture("turtle/malformed");
    let expected = json(&dir.join("expected.json"))?;
    let expected = expected.as_object().ok_or("expected.json is not an object")?;
    ensure(expected.len() == 20, || format!("{} malformed documents", expected.len()))?;
    for (file, pos) in expected {
        let err = match parse_turtle(&read(&dir.join(file))?, None) {
            Ok(_) => return Err(format!("{file} parsed")),
            Err(e) => e,
        };
        let d = err.first_error();
        let want = (pos["line"].as_u64(), pos["column"].as_u64());
        ensure(want == (Some(d.line as u64), Some(d.column as u64)), || format!("{file}: diagnostic at {d}"))?;
    }
    Ok(format!("{} documents round-trip, HICO = 4 triples, {} malformed positioned", files.len(), expected.len()))
}

/// SAMOD: the final-iteration regression of each module reaches the
/// milestone and each mutation fixture prevents it.
fn regression() -> Verdict {
    for (module, _) in MODULES {
        let s = suite(&fixture(&format!("{module}/manifest.json")))?;
        let last = s.iterations.last().ok_or("empty suite")?.id;
        let report = run_regression(&s, last).ok_or("no final iteration")?;
        ensure(report.milestone == Some(true), || report.to_text())?;
    }
    let dir = fixture("mutations/samod");
    let mut names: Vec<String> = fs::read_dir(&dir)
        .map_err(|e| e.to_string())?
        .filter_map(|e| e.ok())
        .filter(|e| e.path().is_dir())
        .map(|e| e.file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    ensure(names.len() == 5, || format!("{} mutation fixtures", names.len()))?;
    for name in &names {
        let s = suite(&dir.join(name).join("manifest.json"))?;
        let last = s.iterations.last().ok_or("empty suite")?.id;
        let report = run_regression(&s, last).ok_or("no final iteration")?;
        ensure(report.milestone == Some(false), || format!("{name} still reaches the milestone"))?;
    }
    Ok(format!("3 milestones reached, {} mutations flip the flag", names.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 6] = [
        ("competency questions", competency_questions),
        ("alignment reproduction", alignment),
        ("inference correctness", inference),
        ("query engine correctness", query_engine),
        ("parser round trip", parser),
        ("regression semantics", regression),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let verdict = panic::catch_unwind(check).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match verdict {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
