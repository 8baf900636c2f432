use std::collections::BTreeMap;
use std::fmt::Write;

use crate::rdf::graph::Graph;
use crate::rdf::iso::canonical_labels;
use crate::rdf::prefix::PrefixMap;
use crate::rdf::term::{escape_string, Iri, Term};
use crate::rdf::vocab::{rdf, xsd};

/// Deterministic Turtle: IRI subjects sorted lexicographically, then blank nodes by
/// canonical label; `rdf:type` first among predicates; objects in canonical term order.
pub fn serialize_turtle(graph: &Graph, prefixes: &PrefixMap) -> String {
    let mut out = String::new();
    for (p, ns) in prefixes.iter() {
        let _ = writeln!(out, "@prefix {p}: <{ns}> .");
    }
    if graph.is_empty() {
        return out;
    }
    let labels = canonical_labels(graph);
    let relabel = |t: &Term| match t {
        Term::BlankNode(b) => Term::blank(&labels[b]),
        other => other.clone(),
    };

    #[derive(PartialEq, Eq, PartialOrd, Ord)]
    enum SubjectKey {
        Iri(String),
        Blank(usize),
    }
    let key = |t: &Term| match t {
        Term::Iri(i) => SubjectKey::Iri(i.as_str().to_owned()),
        Term::BlankNode(b) => SubjectKey::Blank(b.label()[1..].parse().expect("canonical label")),
        Term::Literal(_) => unreachable!("literal subject"),
    };
    type Predicates = BTreeMap<(bool, Iri), Vec<Term>>;
    let mut subjects: BTreeMap<SubjectKey, (Term, Predicates)> = BTreeMap::new();
    for t in graph.iter() {
        let s = relabel(&t.subject);
        let p = t.predicate.as_iri().expect("IRI predicate").clone();
        let entry = subjects.entry(key(&s)).or_insert_with(|| (s.clone(), BTreeMap::new()));
        entry.1.entry((p.as_str() != rdf::TYPE, p)).or_default().push(relabel(&t.object));
    }

    out.push('\n');
    for (subject, predicates) in subjects.into_values() {
        out.push_str(&term_text(&subject, prefixes));
        let mut first_pred = true;
        for ((_, p), mut objects) in predicates {
            objects.sort();
            out.push_str(if first_pred { " " } else { " ;\n    " });
            first_pred = false;
            if p.as_str() == rdf::TYPE {
                out.push('a');
            } else {
                out.push_str(&iri_text(&p, prefixes));
            }
            out.push(' ');
            let rendered: Vec<String> = objects.iter().map(|o| term_text(o, prefixes)).collect();
            out.push_str(&rendered.join(" , "));
        }
        out.push_str(" .\n");
    }
    out
}

pub(crate) fn iri_text(iri: &Iri, prefixes: &PrefixMap) -> String {
    prefixes.compact(iri.as_str()).unwrap_or_else(|| format!("<{}>", iri.as_str()))
}

pub(crate) fn term_text(term: &Term, prefixes: &PrefixMap) -> String {
    match term {
        Term::Iri(i) => iri_text(i, prefixes),
        Term::BlankNode(b) => format!("_:{}", b.label()),
        Term::Literal(l) => {
            let lex = l.lexical();
            if let Some(lang) = l.language() {
                return format!("\"{}\"@{lang}", escape_string(lex));
            }
            match l.datatype().as_str() {
                xsd::STRING => format!("\"{}\"", escape_string(lex)),
                xsd::INTEGER if is_bare_integer(lex) => lex.to_owned(),
                xsd::DECIMAL if is_bare_decimal(lex) => lex.to_owned(),
                xsd::BOOLEAN if lex == "true" || lex == "false" => lex.to_owned(),
                _ => format!("\"{}\"^^{}", escape_string(lex), iri_text(l.datatype(), prefixes)),
            }
        }
    }
}

fn is_bare_integer(s: &str) -> bool {
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    !digits.is_empty() && digits.chars().all(|c| c.is_ascii_digit())
}

fn is_bare_decimal(s: &str) -> bool {
    let body = s.strip_prefix(['+', '-']).unwrap_or(s);
    match body.split_once('.') {
        Some((int, frac)) => int.chars().all(|c| c.is_ascii_digit()) && !frac.is_empty() && frac.chars().all(|c| c.is_ascii_digit()),
        None => false,
    }
}
