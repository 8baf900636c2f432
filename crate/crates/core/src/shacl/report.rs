use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::model::Severity;
use crate::rdf::turtle::term_text;
use crate::rdf::vocab::sh;
use crate::rdf::{PrefixMap, Term};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ValidationResult {
    pub focus_node: Term,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<Term>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<Term>,
    pub severity: Severity,
    pub source_shape: Term,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_constraint: Option<Term>,
    pub message: String,
}

impl ValidationResult {
    fn sort_key(&self) -> impl Ord + '_ {
        (
            &self.focus_node,
            &self.source_shape,
            &self.source_constraint,
            &self.path,
            &self.value,
            &self.message,
            self.severity,
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ValidationReport {
    pub conforms: bool,
    pub results: Vec<ValidationResult>,
}

impl ValidationReport {
    /// Sorts and de-duplicates `results`; the report conforms when none has Violation severity.
    pub fn new(mut results: Vec<ValidationResult>) -> Self {
        results.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        results.dedup();
        let conforms = results.iter().all(|r| r.severity != Severity::Violation);
        ValidationReport { conforms, results }
    }

    pub fn count(&self, severity: Severity) -> usize {
        self.results.iter().filter(|r| r.severity == severity).count()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// A `sh:ValidationReport` in Turtle, one nested blank node per result in report order.
    pub fn to_turtle(&self, prefixes: &PrefixMap) -> String {
        let mut prefixes = prefixes.clone();
        prefixes.insert("sh", sh::NS);
        let t = |term: &Term| term_text(term, &prefixes);
        let mut out = String::new();
        let _ = write!(out, "[] a sh:ValidationReport ;\n    sh:conforms {}", self.conforms);
        for r in &self.results {
            out.push_str(" ;\n    sh:result [\n        a sh:ValidationResult ;\n");
            let _ = writeln!(out, "        sh:focusNode {} ;", t(&r.focus_node));
            if let Some(p) = &r.path {
                let _ = writeln!(out, "        sh:resultPath {} ;", t(p));
            }
            if let Some(v) = &r.value {
                let _ = writeln!(out, "        sh:value {} ;", t(v));
            }
            let _ = writeln!(out, "        sh:resultSeverity {} ;", t(&Term::iri(r.severity.iri())));
            let _ = writeln!(out, "        sh:sourceShape {} ;", t(&r.source_shape));
            if let Some(c) = &r.source_constraint {
                let _ = writeln!(out, "        sh:sourceConstraint {} ;", t(c));
            }
            let _ = write!(out, "        sh:resultMessage {}\n    ]", t(&Term::string(&r.message)));
        }
        out.push_str(" .\n");
        let mut head = String::new();
        for (p, ns) in prefixes.iter().filter(|(p, _)| mentions_prefix(&out, p)) {
            let _ = writeln!(head, "@prefix {p}: <{ns}> .");
        }
        head + "\n" + &out
    }

    /// One line per result, for terminals.
    pub fn to_text(&self, prefixes: &PrefixMap) -> String {
        if self.conforms {
            return "conforms\n".to_owned();
        }
        let mut out = String::new();
        for r in &self.results {
            let _ = writeln!(out, "{}: {} [{}] {}", r.severity, prefixes.render(&r.focus_node), prefixes.render(&r.source_shape), r.message);
        }
        out
    }
}

/// Whether `text` contains `prefix:` at a token start. Matches inside string literals are
/// harmless: they only add an unused declaration.
fn mentions_prefix(text: &str, prefix: &str) -> bool {
    let needle = format!("{prefix}:");
    text.match_indices(&needle).any(|(i, _)| {
        text[..i].chars().next_back().is_none_or(|c| !(c.is_alphanumeric() || c == '_' || c == '-' || c == '.'))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::{is_isomorphic, parse_turtle};

    fn sample() -> ValidationReport {
        ValidationReport::new(vec![
            ValidationResult {
                focus_node: Term::iri("http://example.org/b"),
                path: Some(Term::iri("http://example.org/p")),
                value: Some(Term::typed("5kbps", "http://example.org/q")),
                severity: Severity::Warning,
                source_shape: Term::blank("s1"),
                source_constraint: None,
                message: "line \"quoted\"\nnext".into(),
            },
            ValidationResult {
                focus_node: Term::blank("call"),
                path: None,
                value: None,
                severity: Severity::Violation,
                source_shape: Term::iri("http://example.org/S"),
                source_constraint: Some(Term::iri("http://example.org/C")),
                message: "m".into(),
            },
        ])
    }

    #[test]
    fn json_round_trip() {
        let r = sample();
        assert_eq!(ValidationReport::from_json(&r.to_json()).unwrap(), r);
    }

    #[test]
    fn results_sorted_iris_first() {
        let r = sample();
        assert!(r.results[0].focus_node.is_iri());
        assert!(!r.conforms);
    }

    #[test]
    fn warnings_alone_conform() {
        let mut r = sample();
        r.results.retain(|x| x.severity == Severity::Warning);
        let r = ValidationReport::new(r.results);
        assert_eq!(r.results.len(), 1);
        assert!(r.conforms);
    }

    #[test]
    fn turtle_parses_back() {
        let r = sample();
        let mut p = PrefixMap::new();
        p.insert("ex", "http://example.org/");
        let text = r.to_turtle(&p);
        let (g, _) = parse_turtle(&text, None).unwrap();
        let results: Vec<_> = g.match_triples(None, Some(&Term::iri(&format!("{}result", sh::NS))), None).collect();
        assert_eq!(results.len(), 2);
        let again = parse_turtle(&r.to_turtle(&p), None).unwrap().0;
        assert!(is_isomorphic(&g, &again));
    }

    #[test]
    fn empty_report_conforms() {
        let r = ValidationReport::new(Vec::new());
        assert!(r.conforms);
        let (g, _) = parse_turtle(&r.to_turtle(&PrefixMap::new()), None).unwrap();
        assert_eq!(g.len(), 2);
    }
}
