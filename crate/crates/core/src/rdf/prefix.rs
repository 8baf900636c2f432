use indexmap::IndexMap;

use super::term::{Iri, Term};
use super::vocab::xsd;

/// Prefix label to namespace IRI bindings, in declaration order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PrefixMap {
    bindings: IndexMap<String, String>,
}

impl PrefixMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// `rdf`, `rdfs`, `xsd`, `sh` and the fixture ontology namespaces.
    pub fn common() -> Self {
        use super::vocab::{rdf, rdfs, sh, tio};
        let mut m = PrefixMap::new();
        for (p, ns) in [
            ("rdf", rdf::NS),
            ("rdfs", rdfs::NS),
            ("xsd", xsd::NS),
            ("sh", sh::NS),
            ("tio", tio::SHAPES),
            ("icm", tio::ICM),
            ("log", tio::LOG),
            ("quan", tio::QUAN),
            ("fun", tio::FUN),
            ("met", tio::MET),
            ("set", tio::SET),
        ] {
            m.insert(p, ns);
        }
        m
    }

    pub fn insert(&mut self, prefix: impl Into<String>, namespace: impl Into<String>) {
        self.bindings.insert(prefix.into(), namespace.into());
    }

    pub fn get(&self, prefix: &str) -> Option<&str> {
        self.bindings.get(prefix).map(String::as_str)
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.bindings.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    /// Adds bindings from `other` whose prefix is not bound yet.
    pub fn merge_missing(&mut self, other: &PrefixMap) {
        for (p, ns) in other.iter() {
            if !self.bindings.contains_key(p) {
                self.insert(p, ns);
            }
        }
    }

    /// `prefix:local` to a full IRI. `None` when the prefix is unbound.
    pub fn expand(&self, prefixed: &str) -> Option<String> {
        let (prefix, local) = prefixed.split_once(':')?;
        self.get(prefix).map(|ns| format!("{ns}{local}"))
    }

    /// The shortest `prefix:local` form of `iri`, preferring the longest matching namespace.
    pub fn compact(&self, iri: &str) -> Option<String> {
        let mut best: Option<(&str, &str)> = None;
        for (p, ns) in self.iter() {
            if let Some(local) = iri.strip_prefix(ns) {
                if is_valid_local(local) && best.is_none_or(|(_, bns)| ns.len() > bns.len()) {
                    best = Some((p, ns));
                }
            }
        }
        best.map(|(p, ns)| format!("{p}:{}", &iri[ns.len()..]))
    }

    /// Human-readable rendering: prefixed names where possible, plain lexical
    /// forms for strings and numbers.
    pub fn render(&self, term: &Term) -> String {
        match term {
            Term::Iri(iri) => self.render_iri(iri),
            Term::BlankNode(b) => format!("_:{}", b.label()),
            Term::Literal(l) => {
                let dt = l.datatype().as_str();
                if l.language().is_some()
                    || [xsd::STRING, xsd::INTEGER, xsd::DECIMAL, xsd::BOOLEAN].contains(&dt)
                {
                    l.lexical().to_owned()
                } else {
                    format!("\"{}\"^^{}", l.lexical(), self.render_iri(l.datatype()))
                }
            }
        }
    }

    fn render_iri(&self, iri: &Iri) -> String {
        self.compact(iri.as_str()).unwrap_or_else(|| format!("<{}>", iri.as_str()))
    }
}

/// Local parts this crate is willing to emit unescaped in prefixed names.
pub(crate) fn is_valid_local(local: &str) -> bool {
    let mut chars = local.chars();
    match chars.next() {
        None => true,
        Some(c) if c.is_alphanumeric() || c == '_' => {
            local.chars().all(|c| c.is_alphanumeric() || matches!(c, '_' | '-' | '.')) && !local.ends_with('.')
        }
        _ => false,
    }
}
