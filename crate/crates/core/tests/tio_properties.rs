//! The intent-ontology payload: direct-oracle agreement, mixin additivity, the vocabulary
//! catalog, and edits to the shared constraint components.

mod common;

use std::collections::BTreeSet;
use std::path::Path;

use intent_shacl::harness::{load_case, run_corpus, Environment, FixtureLayout, Polarity, Tier};
use intent_shacl::rdf::vocab::rdf;
use intent_shacl::rdf::{parse_turtle, Graph, PrefixMap, Term, Triple};
use intent_shacl::shacl::ValidationReport;
use intent_shacl::tio::{family, family_of, Oracle};
use proptest::prelude::*;

fn load(path: &Path) -> (Graph, PrefixMap) {
    parse_turtle(&std::fs::read_to_string(path).unwrap(), None).unwrap()
}

type Row = (Term, String, Option<Term>, String);

fn flagship_rows(results: impl IntoIterator<Item = intent_shacl::ValidationResult>) -> BTreeSet<Row> {
    results
        .into_iter()
        .filter_map(|r| {
            let fam = r.source_constraint.as_ref().and_then(family_of)?.to_owned();
            family::FLAGSHIP.contains(&fam.as_str()).then_some((r.focus_node, fam, r.value, r.message))
        })
        .collect()
}

#[test]
fn oracle_agrees_with_shacl_on_every_corpus_file() {
    let namespaces: Vec<String> = common::environment(Tier::Af).catalog.namespaces().map(str::to_owned).collect();
    for tier in Tier::ALL {
        let env = common::environment(tier);
        for f in common::corpus_files() {
            let (data, file_prefixes) = load(&f);
            let shacl = flagship_rows(env.validator().with_prefixes(&file_prefixes).validate(&data).results);
            let mut prefixes = file_prefixes.clone();
            prefixes.merge_missing(&env.prefixes);
            let oracle = Oracle::new(&data, &env.ontology, &prefixes);
            let direct = flagship_rows(data.nodes().iter().flat_map(|n| oracle.check_all(n, &namespaces)));
            assert_eq!(shacl, direct, "{tier}: {}", f.display());
        }
    }
}

#[test]
fn removing_a_type_feeding_a_nested_call_cascades() {
    let env = common::environment(Tier::Af);
    let path = common::corpus_root().join("IntentCommonModel/good/video-intent.ttl");
    let (mut data, _) = load(&path);
    assert!(env.validator().validate(&data).conforms);
    let metric = Term::iri("http://example.org/dimension/Throughput");
    let declaration = Triple::new(metric, Term::iri(rdf::TYPE), Term::iri("https://tio.example.org/v3.6.0/MetricsAndObservations/Metric")).unwrap();
    let mut pruned = Graph::new();
    for t in data.iter().filter(|t| **t != declaration) {
        pruned.insert(t.clone());
    }
    assert_eq!(pruned.len() + 1, data.len());
    data = pruned;
    let report = env.validator().validate(&data);
    let argtype: Vec<_> = report
        .results
        .iter()
        .filter(|r| r.source_constraint.as_ref().and_then(family_of) == Some(family::ARGUMENT_TYPE))
        .collect();
    assert!(argtype.len() >= 2, "{}", report.to_text(&env.prefixes));
    let foci: BTreeSet<&Term> = argtype.iter().map(|r| &r.focus_node).collect();
    assert!(foci.contains(&Term::iri("http://example.org/intent/ThroughputCond")), "outer call not reported");
    assert!(foci.iter().any(|f| f.is_blank()), "inner call not reported");
}

/// (shape, source constraint) pairs the environment can report.
fn declared_constraints(env: &Environment) -> BTreeSet<(Term, Term)> {
    let mut out = BTreeSet::new();
    for shape in &env.shapes.shapes {
        for c in &shape.constraints {
            out.insert((shape.id.clone(), Term::iri(c.component_iri())));
        }
        for c in &shape.sparql {
            out.insert((shape.id.clone(), c.id.clone()));
        }
    }
    out
}

#[test]
fn removing_extensions_only_drops_extension_results() {
    let layout = common::layout();
    let root = common::corpus_root();
    let files = common::corpus_files();
    for tier in Tier::ALL {
        let full = common::environment(tier);
        let bare = Environment::load_with(&layout, tier, false).unwrap();
        let bare_constraints = declared_constraints(&bare);
        assert!(declared_constraints(full).len() > bare_constraints.len());
        let mut dropped = 0;
        for f in &files {
            let (data, _) = load(f);
            let with = full.validator().validate(&data);
            let without = bare.validator().validate(&data);
            let kept: Vec<_> = with.results.iter().filter(|r| bare_constraints.contains(&(r.source_shape.clone(), r.source_constraint.clone().unwrap()))).cloned().collect();
            assert_eq!(without.results, kept, "{tier}: {}", f.display());
            if kept.len() < with.results.len() {
                dropped += 1;
            }
        }
        assert!(dropped > 0);

        // Consequently no good file starts failing and every bad file without extension results still passes.
        let suite = run_corpus(&root, &files, &bare.validator(), &bare.prefixes, 1, &bare.constraint_families());
        for case in &suite.cases {
            if case.polarity == Polarity::Good {
                assert!(case.passed(), "{tier}: {}", case.name);
            }
        }
    }
}

#[test]
fn good_corpus_predicates_are_declared_once() {
    let env = common::environment(Tier::Af);
    for f in common::corpus_files().into_iter().filter(|f| common::is_good(f)) {
        let (data, _) = load(&f);
        for t in data.iter() {
            let Some(p) = t.predicate.as_iri() else { continue };
            let owners: Vec<&str> = env
                .catalog
                .modules
                .iter()
                .filter(|m| p.as_str().starts_with(&m.namespace))
                .filter(|m| m.properties.contains(p) || m.functions.contains_key(p))
                .map(|m| m.name.as_str())
                .collect();
            let in_catalog_namespace = env.catalog.namespaces().any(|ns| p.as_str().starts_with(ns));
            if in_catalog_namespace {
                assert_eq!(owners.len(), 1, "{}: {} declared in {owners:?}", f.display(), p.as_str());
            }
        }
    }
}

#[test]
fn shape_paths_are_catalog_properties() {
    for tier in Tier::ALL {
        let env = common::environment(tier);
        for shape in &env.shapes.shapes {
            let Some(p) = &shape.path else { continue };
            if env.catalog.namespaces().any(|ns| p.as_str().starts_with(ns)) {
                assert!(env.catalog.is_declared_property(p), "{tier}: path {} of {:?}", p.as_str(), shape.id);
            }
        }
    }
}

/// (file, triple) pairs of the good corpus whose predicate is a declared plain property.
fn spellable() -> Vec<(std::path::PathBuf, Triple)> {
    let env = common::environment(Tier::Af);
    let mut out = Vec::new();
    for f in common::corpus_files().into_iter().filter(|f| common::is_good(f)) {
        let (data, _) = load(&f);
        for t in data.iter() {
            if t.predicate.as_iri().is_some_and(|p| env.catalog.modules.iter().any(|m| m.properties.contains(p))) {
                out.push((f.clone(), t.clone()));
            }
        }
    }
    out
}

fn misspell(iri: &str, how: usize) -> String {
    let (ns, local) = iri.rsplit_once('/').unwrap();
    let mut chars: Vec<char> = local.chars().collect();
    match how % 3 {
        0 => chars.push('s'),
        1 => {
            chars.remove(chars.len() - 1);
        }
        _ => chars[0] = chars[0].to_ascii_uppercase(),
    }
    let mutated: String = chars.into_iter().collect();
    if mutated == local {
        format!("{ns}/{local}X")
    } else {
        format!("{ns}/{mutated}")
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn misspelled_properties_are_flagged(pick in any::<prop::sample::Index>(), how in 0usize..3) {
        let candidates = spellable();
        let (file, triple) = pick.get(&candidates).clone();
        let env = common::environment(Tier::Af);
        let (data, _) = load(&file);
        let wrong = misspell(triple.predicate.as_iri().unwrap().as_str(), how);
        prop_assume!(!env.catalog.is_declared_property(&intent_shacl::Iri::new(&wrong).unwrap()));
        let mut mutated = Graph::new();
        for t in data.iter() {
            if *t == triple {
                mutated.insert(Triple::new(t.subject.clone(), Term::iri(&wrong), t.object.clone()).unwrap());
            } else {
                mutated.insert(t.clone());
            }
        }
        let report = env.validator().validate(&mutated);
        let flagged = report.results.iter().any(|r| {
            r.source_constraint.as_ref().and_then(family_of) == Some(family::VOCABULARY)
                && r.focus_node == triple.subject
                && r.path.as_ref().is_some_and(|p| p.is(&wrong))
        });
        prop_assert!(flagged, "{} with {} misspelled: {}", file.display(), wrong, report.to_text(&env.prefixes));
    }
}

fn copy_dir(from: &Path, to: &Path) {
    std::fs::create_dir_all(to).unwrap();
    for entry in std::fs::read_dir(from).unwrap() {
        let entry = entry.unwrap();
        let target = to.join(entry.file_name());
        if entry.file_type().unwrap().is_dir() {
            copy_dir(&entry.path(), &target);
        } else {
            std::fs::copy(entry.path(), &target).unwrap();
        }
    }
}

/// One call per catalog function, each with an argument count inside its declared arity.
fn call_every_function(env: &Environment) -> Graph {
    let mut text = String::new();
    for (i, f) in env.catalog.functions().enumerate() {
        let args = vec!["1"; f.arity_min.max(1).min(f.arity_max.unwrap_or(u32::MAX)) as usize];
        text += &format!("<http://example.org/call{i}> <{}> ( {} ) .\n", f.id.as_str(), args.join(" "));
    }
    parse_turtle(&text, None).unwrap().0
}

fn arity_foci(report: &ValidationReport) -> BTreeSet<Term> {
    report
        .results
        .iter()
        .filter(|r| r.source_constraint.as_ref().and_then(family_of) == Some(family::ARITY))
        .map(|r| r.focus_node.clone())
        .collect()
}

#[test]
fn editing_the_arity_component_changes_every_function() {
    let dir = tempfile::tempdir().unwrap();
    copy_dir(&common::fixtures(), dir.path());
    let library = dir.path().join("shapes/af/constraint-library.ttl");
    let original = std::fs::read_to_string(&library).unwrap();
    let condition = "FILTER(?actualCount < ?arityMin || (BOUND(?arityMax) && ?actualCount > ?arityMax))";
    assert_eq!(original.matches(condition).count(), 1);
    std::fs::write(&library, original.replace(condition, "FILTER(?actualCount >= 0)")).unwrap();

    let before = common::environment(Tier::Af);
    let after = Environment::load(&FixtureLayout::new(dir.path()), Tier::Af).unwrap();
    let data = call_every_function(before);
    let calls: BTreeSet<Term> = data.iter().map(|t| t.subject.clone()).filter(Term::is_iri).collect();
    assert_eq!(calls.len(), before.catalog.functions().count());

    assert!(arity_foci(&before.validator().validate(&data)).is_empty());
    assert_eq!(arity_foci(&after.validator().validate(&data)), calls);
}

#[test]
fn corpus_modules_match_ontology_files() {
    let root = common::corpus_root();
    for f in common::corpus_files() {
        let case = load_case(&root, &f).unwrap();
        assert!(common::layout().ontology_dir().join(format!("{}.ttl", case.module)).exists(), "{}", case.name);
    }
}
