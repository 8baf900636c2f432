//! Turtle round trips and graph-level invariants.

mod common;

use intent_shacl::rdf::vocab::rdf;
use intent_shacl::rdf::{is_isomorphic, parse_turtle, serialize_turtle, Graph, PrefixMap, Term, Triple};
use intent_shacl::tio::turtle_files;
use proptest::prelude::*;

fn round_trips(text: &str) -> Result<(), String> {
    let (g1, prefixes) = parse_turtle(text, None).map_err(|e| format!("first parse: {e}"))?;
    let written = serialize_turtle(&g1, &prefixes);
    let (g2, _) = parse_turtle(&written, None).map_err(|e| format!("reparse: {e}\n{written}"))?;
    if !is_isomorphic(&g1, &g2) {
        return Err(format!("not isomorphic after writing:\n{written}"));
    }
    Ok(())
}

#[test]
fn every_corpus_file_round_trips() {
    let files = common::corpus_files();
    assert!(files.len() >= 60);
    for f in files {
        let text = std::fs::read_to_string(&f).unwrap();
        round_trips(&text).unwrap_or_else(|e| panic!("{}: {e}", f.display()));
    }
}

#[test]
fn every_ontology_and_shapes_file_round_trips() {
    let root = common::fixtures();
    let dirs = ["ontology", "extensions", "shapes/core", "shapes/af", "shapes/sparql", "golden"];
    for dir in dirs {
        for f in turtle_files(&root.join(dir)).unwrap() {
            let text = std::fs::read_to_string(&f).unwrap();
            round_trips(&text).unwrap_or_else(|e| panic!("{}: {e}", f.display()));
        }
    }
}

#[test]
fn serialization_is_deterministic_across_blank_labels() {
    let a = "@prefix ex: <http://e/> . ex:s ex:p [ ex:q 1 ; ex:r ( 1 2 ) ] .";
    let b = "@prefix ex: <http://e/> . ex:s ex:p _:zz . _:zz ex:r ( 1 2 ) ; ex:q 1 .";
    let (ga, pa) = parse_turtle(a, None).unwrap();
    let (gb, _) = parse_turtle(b, None).unwrap();
    assert_eq!(serialize_turtle(&ga, &pa), serialize_turtle(&gb, &pa));
}

fn term_pool(i: usize) -> Term {
    match i {
        0..=3 => Term::iri(&format!("http://example.org/t{i}")),
        4..=6 => Term::blank(&format!("b{i}")),
        7 => Term::string("tab\there \"quoted\" \\ back"),
        8 => Term::string("line\nbreak"),
        9 => Term::typed("320kbps", "https://tio.example.org/v3.6.0/QuantityOntology/quantity"),
        10 => Term::integer(-42),
        11 => Term::typed("3.25", "http://www.w3.org/2001/XMLSchema#decimal"),
        12 => Term::boolean(true),
        13 => Term::Literal(intent_shacl::Literal::new_lang("bonjour", "fr")),
        _ => Term::string(""),
    }
}

fn random_graph() -> impl Strategy<Value = Graph> {
    prop::collection::vec((0usize..7, 0usize..4, 0usize..15), 0..=50).prop_map(|ts| {
        let mut g = Graph::new();
        for (s, p, o) in ts {
            g.insert(Triple::new(term_pool(s), term_pool(p), term_pool(o)).unwrap());
        }
        g
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn serialize_then_parse_is_isomorphic(g in random_graph(), with_prefix in any::<bool>()) {
        let mut prefixes = PrefixMap::new();
        if with_prefix {
            prefixes.insert("ex", "http://example.org/");
        }
        let text = serialize_turtle(&g, &prefixes);
        let (back, _) = parse_turtle(&text, None).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert!(is_isomorphic(&g, &back), "{}", text);
    }

    #[test]
    fn collection_of_n_members_adds_2n_plus_1_slots(members in prop::collection::vec(0i64..5, 0..8)) {
        let items: Vec<String> = members.iter().map(|m| m.to_string()).collect();
        let text = format!("<http://e/s> <http://e/p> ( {} ) .", items.join(" "));
        let (g, _) = parse_turtle(&text, None).unwrap();
        let n = members.len();
        prop_assert_eq!(g.len(), 1 + 2 * n);
        let head = g.iter().find(|t| t.predicate.is("http://e/p")).unwrap().object.clone();
        if n == 0 {
            prop_assert!(head.is(rdf::NIL));
        }
        let seq = g.list_to_sequence(&head).unwrap();
        prop_assert_eq!(seq, members.iter().map(|m| Term::integer(*m)).collect::<Vec<_>>());
    }

    #[test]
    fn list_to_sequence_terminates_on_arbitrary_rest_chains(
        edges in prop::collection::vec((0usize..6, 0usize..7, 0usize..3), 0..20),
        start in 0usize..6,
    ) {
        // Cells c0..c5 with arbitrary rdf:rest/rdf:first edges, cycles included; index 6 is rdf:nil.
        let cell = |i: usize| if i == 6 { Term::iri(rdf::NIL) } else { Term::blank(&format!("c{i}")) };
        let mut g = Graph::new();
        for (s, o, v) in edges {
            g.insert(Triple::new(cell(s), Term::iri(rdf::REST), cell(o)).unwrap());
            g.insert(Triple::new(cell(s), Term::iri(rdf::FIRST), Term::integer(v as i64)).unwrap());
        }
        let _ = g.list_to_sequence(&cell(start));
    }

    #[test]
    fn unbound_match_returns_each_triple_once(g in random_graph()) {
        let matched: Vec<&Triple> = g.match_triples(None, None, None).collect();
        prop_assert_eq!(matched.len(), g.len());
        let unique: std::collections::BTreeSet<String> = matched.iter().map(|t| format!("{t:?}")).collect();
        prop_assert_eq!(unique.len(), g.len());
        for t in g.iter() {
            prop_assert!(g.contains(t));
        }
    }
}
