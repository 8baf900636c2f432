//! Corpus runner, coverage and benchmark behaviour on the fixture tree and on edited copies.

mod common;

use std::collections::BTreeSet;
use std::path::Path;

use intent_shacl::harness::coverage::without_shape;
use intent_shacl::harness::{
    discover, generate_coverage, run_benchmark, run_corpus, BenchConfig, CoverageReport, Environment, SuiteResult, Tier,
};
use intent_shacl::shacl::{load_shapes, ShapesGraph};
use intent_shacl::rdf::Term;
use proptest::prelude::*;

fn run(env: &Environment, root: &Path, jobs: usize) -> SuiteResult {
    let files = discover(root, None).unwrap();
    run_corpus(root, &files, &env.validator(), &env.prefixes, jobs, &env.constraint_families())
}

fn reports(suite: &SuiteResult, env: &Environment) -> Vec<String> {
    suite.cases.iter().map(|c| c.report.as_ref().map(|r| r.to_turtle(&env.prefixes)).unwrap_or_default()).collect()
}

#[test]
fn fixture_corpus_passes_in_both_tiers() {
    for tier in Tier::ALL {
        let env = common::environment(tier);
        let suite = run(env, &common::corpus_root(), 1);
        assert!(suite.success(), "{tier}\n{}", suite.summary());
        let good = suite.cases.iter().filter(|c| c.polarity == intent_shacl::harness::Polarity::Good).count();
        assert!(good >= 30 && suite.cases.len() - good >= 30);
    }
}

#[test]
fn consecutive_runs_are_identical() {
    for tier in Tier::ALL {
        let env = common::environment(tier);
        let root = common::corpus_root();
        let (a, b, parallel) = (run(env, &root, 1), run(env, &root, 1), run(env, &root, 4));
        let verdicts = |s: &SuiteResult| s.cases.iter().map(|c| (c.name.clone(), c.passed())).collect::<Vec<_>>();
        assert_eq!(verdicts(&a), verdicts(&b));
        assert_eq!(verdicts(&a), verdicts(&parallel));
        assert_eq!(reports(&a, env), reports(&b, env));
        assert_eq!(reports(&a, env), reports(&parallel, env));
        assert_eq!(a.summary(), parallel.summary());
        assert_eq!(a.junit_xml(), b.junit_xml());
    }
}

#[test]
fn empty_corpus_runs_nothing_and_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let env = common::environment(Tier::Af);
    let suite = run(env, dir.path(), 1);
    assert!(suite.cases.is_empty());
    assert!(suite.success());
    assert!(suite.summary().ends_with("0 of 0 test files passed (0 good, 0 bad)\n"));
}

#[test]
fn missing_corpus_directory_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    assert!(discover(&dir.path().join("absent"), None).is_err());
}

fn copy_corpus() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    let root = common::corpus_root();
    for f in discover(&root, None).unwrap() {
        let target = dir.path().join(f.strip_prefix(&root).unwrap());
        std::fs::create_dir_all(target.parent().unwrap()).unwrap();
        std::fs::copy(&f, target).unwrap();
    }
    dir
}

#[test]
fn deleting_a_required_property_fails_exactly_that_file() {
    let dir = copy_corpus();
    let edited = dir.path().join("IntentCommonModel/good/video-intent.ttl");
    let text = std::fs::read_to_string(&edited).unwrap();
    let line = "    icm:deliveryType cfss:VideoCFSS .";
    assert_eq!(text.matches(line).count(), 1);
    let text = text.replace("    icm:target ex:VideoTarget ;\n    icm:deliveryType cfss:VideoCFSS .", "    icm:target ex:VideoTarget .");
    std::fs::write(&edited, text).unwrap();

    let env = common::environment(Tier::Af);
    let suite = run(env, dir.path(), 1);
    let failed: Vec<&str> = suite.cases.iter().filter(|c| !c.passed()).map(|c| c.name.as_str()).collect();
    assert_eq!(failed, ["IntentCommonModel/good/video-intent.ttl"]);
    assert!(!suite.success());
    assert!(suite.summary().contains("FAIL IntentCommonModel/good/video-intent.ttl"));
}

#[test]
fn a_family_without_bad_files_is_unbalanced() {
    let dir = copy_corpus();
    let env = common::environment(Tier::Af);
    let before = run(env, dir.path(), 1);
    let unit_bad: Vec<&str> = before
        .cases
        .iter()
        .filter(|c| c.polarity == intent_shacl::harness::Polarity::Bad && c.families.contains("QuantityUnitMatchConstraint"))
        .map(|c| c.name.as_str())
        .collect();
    assert!(!unit_bad.is_empty());
    for name in &unit_bad {
        std::fs::remove_file(dir.path().join(name)).unwrap();
    }
    let after = run(env, dir.path(), 1);
    assert_eq!(after.passed(), after.cases.len());
    assert!(!after.success());
    assert_eq!(after.unbalanced, ["QuantityUnitMatchConstraint (no bad file)"]);
    assert!(after.summary().contains("UNBALANCED QuantityUnitMatchConstraint"));
}

fn coverage_of(env: &Environment, shapes: &ShapesGraph) -> CoverageReport {
    generate_coverage(&env.catalog, shapes, &common::corpus_files())
}

fn reload(env: &Environment, graph: &intent_shacl::Graph) -> ShapesGraph {
    load_shapes(graph, &env.prefixes).unwrap()
}

/// (module, kind, covered) for every shape-coverage cell.
fn cells(report: &CoverageReport) -> Vec<(String, &'static str, usize)> {
    report
        .modules
        .iter()
        .flat_map(|m| m.shape_cells().into_iter().map(|(k, c)| (m.module.clone(), k, c.covered)))
        .collect()
}

#[test]
fn fixture_coverage_is_complete() {
    for tier in Tier::ALL {
        let env = common::environment(tier);
        let report = coverage_of(env, &env.shapes);
        for cell in [report.total_classes(), report.total_properties(), report.total_functions(), report.total_tested()] {
            assert_eq!(cell.covered, cell.total, "{tier}: {:?}", cell.uncovered);
        }
        assert!(report.summary(&env.prefixes).ends_with("overall 100%\n"));
    }
}

fn named_shapes(env: &Environment) -> Vec<Term> {
    env.shapes.shapes.iter().map(|s| s.id.clone()).filter(Term::is_iri).collect()
}

#[test]
fn deleting_one_covering_shape_drops_exactly_one_element() {
    let env = common::environment(Tier::Af);
    let full = coverage_of(env, &env.shapes).overall().covered;
    let mut dropped_elements = BTreeSet::new();
    for shape in named_shapes(env) {
        let pruned = coverage_of(env, &reload(env, &without_shape(&env.shapes.graph, &shape)));
        let drop = full - pruned.overall().covered;
        assert!(drop <= 1, "deleting {shape:?} drops {drop} elements");
        if drop == 1 {
            let lost = pruned.uncovered().into_iter().cloned().collect::<Vec<_>>();
            assert_eq!(lost.len(), 1);
            assert!(dropped_elements.insert(lost[0].clone()), "{:?} is dropped by two shapes", lost[0]);
        }
    }
    // Classes and functions each have a dedicated shape. Properties read by the shared
    // component queries stay covered through every instantiation, so they are not required here.
    for m in &env.catalog.modules {
        for e in m.classes.iter().chain(m.functions.keys()) {
            assert!(dropped_elements.contains(e), "no single shape covers {}", e.as_str());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Adding a shape back to any pruned shapes graph never lowers a coverage cell.
    #[test]
    fn adding_a_shape_never_lowers_coverage(
        tier in prop::sample::select(Tier::ALL.to_vec()),
        removed in prop::collection::vec(any::<prop::sample::Index>(), 1..6),
        extra in any::<prop::sample::Index>(),
    ) {
        let env = common::environment(tier);
        let names = named_shapes(env);
        let removed: BTreeSet<Term> = removed.iter().map(|i| i.get(&names).clone()).collect();
        let extra = extra.get(&names).clone();
        prop_assume!(!removed.contains(&extra));
        let mut smaller = env.shapes.graph.clone();
        for s in removed.iter().chain([&extra]) {
            smaller = without_shape(&smaller, s);
        }
        let mut larger = env.shapes.graph.clone();
        for s in &removed {
            larger = without_shape(&larger, s);
        }
        let (small, large) = (coverage_of(env, &reload(env, &smaller)), coverage_of(env, &reload(env, &larger)));
        for ((m, k, a), (_, _, b)) in cells(&small).into_iter().zip(cells(&large)) {
            prop_assert!(a <= b, "{m} {k}: {a} > {b} after adding {extra:?}");
        }
    }
}

#[test]
fn bench_records_only_measured_samples() {
    let root = common::corpus_root();
    let files = discover(&root, Some("Utility")).unwrap();
    let envs = [common::environment(Tier::Af), common::environment(Tier::Sparql)];

    let default = run_benchmark(&root, &files, &envs, BenchConfig::default()).unwrap();
    assert_eq!(default.samples.len(), files.len() * 2);
    assert!(default.samples.iter().all(|s| s.samples_ms.len() == 6));
    assert!(default.tier_mismatches.is_empty());
    assert_eq!(default.to_csv().lines().count(), 1 + files.len() * 2 * 6);
    assert_eq!(default.stats_csv().lines().count(), 1 + files.len() * 2);

    let single = run_benchmark(&root, &files, &envs[..1], BenchConfig { warmups: 0, repetitions: 1 }).unwrap();
    assert_eq!(single.to_csv().lines().count(), 1 + files.len());
    assert!(single.samples.iter().all(|s| s.std_dev() == 0.0 && s.samples_ms[0] >= 0.0));
    assert_eq!(single.overhead_percent(), None);
}
