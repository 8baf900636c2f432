use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::vocab::{rdf, xsd};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TermError {
    #[error("IRI must not be empty")]
    EmptyIri,
    #[error("IRI <{0}> contains whitespace")]
    WhitespaceInIri(String),
    #[error("blank node label must not be empty")]
    EmptyBlankNode,
}

/// An absolute IRI. Non-empty and whitespace free.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Iri(Arc<str>);

impl Iri {
    pub fn new(value: impl AsRef<str>) -> Result<Self, TermError> {
        let value = value.as_ref();
        if value.is_empty() {
            return Err(TermError::EmptyIri);
        }
        if value.chars().any(char::is_whitespace) {
            return Err(TermError::WhitespaceInIri(value.to_owned()));
        }
        Ok(Iri(Arc::from(value)))
    }

    /// For compile-time vocabulary constants that are known to be valid.
    pub(crate) fn new_unchecked(value: &str) -> Self {
        debug_assert!(!value.is_empty() && !value.chars().any(char::is_whitespace));
        Iri(Arc::from(value))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Everything after the last `#` or `/`.
    pub fn local_name(&self) -> &str {
        let s = self.as_str();
        match s.rfind(['#', '/']) {
            Some(i) if i + 1 < s.len() => &s[i + 1..],
            _ => s,
        }
    }
}

impl fmt::Debug for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlankNode(Arc<str>);

impl BlankNode {
    pub fn new(label: impl AsRef<str>) -> Result<Self, TermError> {
        let label = label.as_ref();
        if label.is_empty() {
            return Err(TermError::EmptyBlankNode);
        }
        Ok(BlankNode(Arc::from(label)))
    }

    pub fn label(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for BlankNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "_:{}", self.0)
    }
}

/// A literal always carries a datatype. Language-tagged literals use `rdf:langString`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    lexical: Arc<str>,
    datatype: Iri,
    language: Option<Arc<str>>,
}

impl Literal {
    pub fn new_typed(lexical: impl AsRef<str>, datatype: Iri) -> Self {
        Literal {
            lexical: Arc::from(lexical.as_ref()),
            datatype,
            language: None,
        }
    }

    pub fn new_simple(lexical: impl AsRef<str>) -> Self {
        Self::new_typed(lexical, Iri::new_unchecked(xsd::STRING))
    }

    pub fn new_lang(lexical: impl AsRef<str>, language: impl AsRef<str>) -> Self {
        Literal {
            lexical: Arc::from(lexical.as_ref()),
            datatype: Iri::new_unchecked(rdf::LANG_STRING),
            language: Some(Arc::from(language.as_ref().to_ascii_lowercase().as_str())),
        }
    }

    pub fn integer(value: i64) -> Self {
        Self::new_typed(value.to_string(), Iri::new_unchecked(xsd::INTEGER))
    }

    pub fn boolean(value: bool) -> Self {
        Self::new_typed(if value { "true" } else { "false" }, Iri::new_unchecked(xsd::BOOLEAN))
    }

    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    pub fn datatype(&self) -> &Iri {
        &self.datatype
    }

    pub fn language(&self) -> Option<&str> {
        self.language.as_deref()
    }
}

impl fmt::Debug for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.lexical)?;
        match &self.language {
            Some(lang) => write!(f, "@{lang}"),
            None => write!(f, "^^{}", self.datatype),
        }
    }
}

/// An RDF term. The derived ordering (IRIs, then blank nodes, then literals) is the
/// canonical term order used wherever output must be deterministic.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "TermRepr", try_from = "TermRepr")]
pub enum Term {
    Iri(Iri),
    BlankNode(BlankNode),
    Literal(Literal),
}

impl Term {
    /// Convenience constructor for IRIs known to be valid (vocabulary constants, test data).
    ///
    /// Panics on an invalid IRI.
    pub fn iri(value: &str) -> Term {
        Term::Iri(Iri::new(value).expect("valid IRI"))
    }

    pub fn blank(label: &str) -> Term {
        Term::BlankNode(BlankNode::new(label).expect("non-empty label"))
    }

    pub fn string(value: &str) -> Term {
        Term::Literal(Literal::new_simple(value))
    }

    pub fn typed(lexical: &str, datatype: &str) -> Term {
        Term::Literal(Literal::new_typed(lexical, Iri::new_unchecked(datatype)))
    }

    pub fn integer(value: i64) -> Term {
        Term::Literal(Literal::integer(value))
    }

    pub fn boolean(value: bool) -> Term {
        Term::Literal(Literal::boolean(value))
    }

    pub fn is_iri(&self) -> bool {
        matches!(self, Term::Iri(_))
    }

    pub fn is_blank(&self) -> bool {
        matches!(self, Term::BlankNode(_))
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Term::Literal(_))
    }

    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Term::Iri(iri) => Some(iri),
            _ => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Term::Literal(lit) => Some(lit),
            _ => None,
        }
    }

    /// True when this is exactly the IRI `iri`.
    pub fn is(&self, iri: &str) -> bool {
        matches!(self, Term::Iri(i) if i.as_str() == iri)
    }
}

impl From<Iri> for Term {
    fn from(iri: Iri) -> Self {
        Term::Iri(iri)
    }
}

impl From<BlankNode> for Term {
    fn from(b: BlankNode) -> Self {
        Term::BlankNode(b)
    }
}

impl From<Literal> for Term {
    fn from(l: Literal) -> Self {
        Term::Literal(l)
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(i) => fmt::Debug::fmt(i, f),
            Term::BlankNode(b) => fmt::Debug::fmt(b, f),
            Term::Literal(l) => fmt::Debug::fmt(l, f),
        }
    }
}

/// N-Triples style rendering.
impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(i) => write!(f, "<{}>", i.as_str()),
            Term::BlankNode(b) => write!(f, "_:{}", b.label()),
            Term::Literal(l) => {
                write!(f, "\"{}\"", escape_string(l.lexical()))?;
                if let Some(lang) = l.language() {
                    write!(f, "@{lang}")
                } else if l.datatype().as_str() != xsd::STRING {
                    write!(f, "^^<{}>", l.datatype().as_str())
                } else {
                    Ok(())
                }
            }
        }
    }
}

pub(crate) fn escape_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum TermRepr {
    Iri {
        value: String,
    },
    Bnode {
        value: String,
    },
    Literal {
        value: String,
        datatype: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        language: Option<String>,
    },
}

impl From<Term> for TermRepr {
    fn from(t: Term) -> Self {
        match t {
            Term::Iri(i) => TermRepr::Iri { value: i.as_str().to_owned() },
            Term::BlankNode(b) => TermRepr::Bnode { value: b.label().to_owned() },
            Term::Literal(l) => TermRepr::Literal {
                value: l.lexical().to_owned(),
                datatype: l.datatype().as_str().to_owned(),
                language: l.language().map(str::to_owned),
            },
        }
    }
}

impl TryFrom<TermRepr> for Term {
    type Error = TermError;

    fn try_from(r: TermRepr) -> Result<Self, Self::Error> {
        Ok(match r {
            TermRepr::Iri { value } => Term::Iri(Iri::new(value)?),
            TermRepr::Bnode { value } => Term::BlankNode(BlankNode::new(value)?),
            TermRepr::Literal { value, datatype, language } => match language {
                Some(lang) => Term::Literal(Literal::new_lang(value, lang)),
                None => Term::Literal(Literal::new_typed(value, Iri::new(datatype)?)),
            },
        })
    }
}
