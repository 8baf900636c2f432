//! Report-level invariants checked over the whole fixture corpus.

mod common;

use std::collections::BTreeSet;

use intent_shacl::harness::{Environment, Tier};
use intent_shacl::rdf::{parse_turtle, read_turtle_files, types_of, Graph, Term};
use intent_shacl::shacl::{load_shapes, Severity, Target, ValidationReport, ValidationResult, Validator};
use intent_shacl::tio::{family_of, turtle_files};

fn corpus_graphs() -> Vec<(String, Graph)> {
    common::corpus_files()
        .into_iter()
        .map(|f| {
            let text = std::fs::read_to_string(&f).unwrap();
            (f.display().to_string(), parse_turtle(&text, None).unwrap().0)
        })
        .collect()
}

#[test]
fn reports_are_byte_identical_across_runs() {
    for tier in Tier::ALL {
        let env = common::environment(tier);
        for (name, g) in corpus_graphs() {
            let a = env.validator().validate(&g);
            let b = env.validator().validate(&g);
            assert_eq!(a.to_turtle(&env.prefixes), b.to_turtle(&env.prefixes), "{name}");
            assert_eq!(a.to_json(), b.to_json(), "{name}");
        }
    }
}

#[test]
fn conforms_iff_no_violations() {
    for tier in Tier::ALL {
        let env = common::environment(tier);
        for (name, g) in corpus_graphs() {
            let r = env.validator().validate(&g);
            assert_eq!(r.conforms, r.count(Severity::Violation) == 0, "{name}");
        }
    }
}

#[test]
fn results_point_into_the_shapes_and_the_data() {
    for tier in Tier::ALL {
        let env = common::environment(tier);
        for (name, g) in corpus_graphs() {
            for r in env.validator().validate(&g).results {
                let shape = env.shapes.shape(&r.source_shape).unwrap_or_else(|| panic!("{name}: unknown shape {:?}", r.source_shape));
                assert!(g.mentions(&r.focus_node), "{name}: focus {:?} not in data", r.focus_node);
                let declared: BTreeSet<Term> = shape
                    .constraints
                    .iter()
                    .map(|c| Term::iri(c.component_iri()))
                    .chain(shape.sparql.iter().map(|c| c.id.clone()))
                    .collect();
                let source = r.source_constraint.clone().expect("source constraint");
                assert!(declared.contains(&source), "{name}: {source:?} is not declared on {:?}", r.source_shape);
            }
        }
    }
}

type Key = BTreeSet<(Term, String, String)>;

fn key(report: &ValidationReport) -> Key {
    report
        .results
        .iter()
        .map(|r| {
            let family = r.source_constraint.as_ref().and_then(family_of).unwrap_or_default().to_owned();
            (r.focus_node.clone(), family, r.message.clone())
        })
        .collect()
}

#[test]
fn tiers_agree_on_every_corpus_file() {
    let (af, sparql) = (common::environment(Tier::Af), common::environment(Tier::Sparql));
    for (name, g) in corpus_graphs() {
        let a = key(&af.validator().validate(&g));
        let s = key(&sparql.validator().validate(&g));
        assert_eq!(a, s, "{name}");
    }
}

fn sorted(mut rs: Vec<ValidationResult>) -> Vec<String> {
    rs.sort_by(|a, b| format!("{a:?}").cmp(&format!("{b:?}")));
    rs.iter().map(|r| format!("{r:?}")).collect()
}

/// Core shapes validated all at once equal the union of validating one (shape, focus) at a time.
#[test]
fn core_validation_splits_by_focus_node() {
    let layout = common::layout();
    let env: &Environment = common::environment(Tier::Af);
    let (graph, prefixes) = read_turtle_files(&turtle_files(&layout.root.join("shapes/core")).unwrap()).unwrap();
    let mut prefixes = prefixes;
    prefixes.merge_missing(&env.prefixes);
    let core = load_shapes(&graph, &prefixes).unwrap();
    for (name, g) in corpus_graphs() {
        let whole = Validator::new(&core, &env.ontology).validate(&g).results;
        let union = g.union(&env.ontology);
        let mut pieces = Vec::new();
        for (idx, shape) in core.targeted() {
            let mut focus: BTreeSet<Term> = BTreeSet::new();
            for t in &shape.targets {
                match t {
                    Target::Class(c) => focus.extend(
                        g.nodes().into_iter().filter(|n| types_of(&g, n, &env.ontology).contains(&Term::Iri(c.clone()))),
                    ),
                    Target::SubjectsOf(p) => focus.extend(
                        union.match_triples(None, Some(&Term::Iri(p.clone())), None).map(|t| t.subject.clone()),
                    ),
                    Target::ObjectsOf(p) => focus.extend(
                        union.match_triples(None, Some(&Term::Iri(p.clone())), None).map(|t| t.object.clone()),
                    ),
                    other => panic!("core shape {:?} has an unexpected target {other:?}", shape.id),
                }
            }
            for f in focus.into_iter().filter(|f| g.mentions(f)) {
                let mut single = core.clone();
                for (i, s) in single.shapes.iter_mut().enumerate() {
                    s.targets = if i == idx { vec![Target::Node(f.clone())] } else { Vec::new() };
                }
                pieces.extend(Validator::new(&single, &env.ontology).validate(&g).results);
            }
        }
        assert_eq!(sorted(whole), sorted(pieces), "{name}");
    }
}
