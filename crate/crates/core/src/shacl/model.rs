use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::af::{ConstraintComponent, SparqlConstraint, SparqlTargetType};
use crate::rdf::vocab::sh;
use crate::rdf::{Graph, Iri, PrefixMap, Term};
use crate::sparql::{Query, Solution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
pub enum Severity {
    #[default]
    Violation,
    Warning,
    Info,
}

impl Severity {
    pub fn iri(&self) -> &'static str {
        match self {
            Severity::Violation => sh::VIOLATION,
            Severity::Warning => sh::WARNING,
            Severity::Info => sh::INFO,
        }
    }

    pub fn from_iri(iri: &str) -> Option<Severity> {
        match iri {
            sh::VIOLATION => Some(Severity::Violation),
            sh::WARNING => Some(Severity::Warning),
            sh::INFO => Some(Severity::Info),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Iri,
    BlankNode,
    Literal,
    BlankNodeOrIri,
    BlankNodeOrLiteral,
    IriOrLiteral,
}

impl NodeKind {
    pub fn from_iri(iri: &str) -> Option<NodeKind> {
        Some(match iri {
            sh::IRI => NodeKind::Iri,
            sh::BLANK_NODE => NodeKind::BlankNode,
            sh::LITERAL => NodeKind::Literal,
            sh::BLANK_NODE_OR_IRI => NodeKind::BlankNodeOrIri,
            sh::BLANK_NODE_OR_LITERAL => NodeKind::BlankNodeOrLiteral,
            sh::IRI_OR_LITERAL => NodeKind::IriOrLiteral,
            _ => return None,
        })
    }

    pub fn iri(&self) -> &'static str {
        match self {
            NodeKind::Iri => sh::IRI,
            NodeKind::BlankNode => sh::BLANK_NODE,
            NodeKind::Literal => sh::LITERAL,
            NodeKind::BlankNodeOrIri => sh::BLANK_NODE_OR_IRI,
            NodeKind::BlankNodeOrLiteral => sh::BLANK_NODE_OR_LITERAL,
            NodeKind::IriOrLiteral => sh::IRI_OR_LITERAL,
        }
    }

    pub fn matches(&self, t: &Term) -> bool {
        match self {
            NodeKind::Iri => t.is_iri(),
            NodeKind::BlankNode => t.is_blank(),
            NodeKind::Literal => t.is_literal(),
            NodeKind::BlankNodeOrIri => !t.is_literal(),
            NodeKind::BlankNodeOrLiteral => !t.is_iri(),
            NodeKind::IriOrLiteral => !t.is_blank(),
        }
    }
}

/// Index of a shape inside its [`ShapesGraph`].
pub type ShapeIdx = usize;

#[derive(Debug, Clone)]
pub enum CoreConstraint {
    Class(Iri),
    Datatype(Iri),
    NodeKind(NodeKind),
    MinCount(usize),
    MaxCount(usize),
    In(Vec<Term>),
    Pattern { regex: Regex, source: String },
    HasValue(Term),
    MinInclusive(Term),
    Or(Vec<ShapeIdx>),
    And(Vec<ShapeIdx>),
}

impl CoreConstraint {
    /// The `sh:*ConstraintComponent` IRI reported as source constraint.
    pub fn component_iri(&self) -> &'static str {
        match self {
            CoreConstraint::Class(_) => "http://www.w3.org/ns/shacl#ClassConstraintComponent",
            CoreConstraint::Datatype(_) => "http://www.w3.org/ns/shacl#DatatypeConstraintComponent",
            CoreConstraint::NodeKind(_) => "http://www.w3.org/ns/shacl#NodeKindConstraintComponent",
            CoreConstraint::MinCount(_) => "http://www.w3.org/ns/shacl#MinCountConstraintComponent",
            CoreConstraint::MaxCount(_) => "http://www.w3.org/ns/shacl#MaxCountConstraintComponent",
            CoreConstraint::In(_) => "http://www.w3.org/ns/shacl#InConstraintComponent",
            CoreConstraint::Pattern { .. } => "http://www.w3.org/ns/shacl#PatternConstraintComponent",
            CoreConstraint::HasValue(_) => "http://www.w3.org/ns/shacl#HasValueConstraintComponent",
            CoreConstraint::MinInclusive(_) => "http://www.w3.org/ns/shacl#MinInclusiveConstraintComponent",
            CoreConstraint::Or(_) => "http://www.w3.org/ns/shacl#OrConstraintComponent",
            CoreConstraint::And(_) => "http://www.w3.org/ns/shacl#AndConstraintComponent",
        }
    }
}

#[derive(Debug, Clone)]
pub enum Target {
    Class(Iri),
    Node(Term),
    SubjectsOf(Iri),
    ObjectsOf(Iri),
    Sparql(Arc<Query>),
    /// An instance of a declared SPARQL target type with its parameter values.
    TypeInstance { target_type: Term, bindings: Solution },
}

#[derive(Debug, Clone)]
pub struct Shape {
    pub id: Term,
    /// `Some` for property shapes.
    pub path: Option<Iri>,
    pub targets: Vec<Target>,
    pub constraints: Vec<CoreConstraint>,
    pub sparql: Vec<SparqlConstraint>,
    pub properties: Vec<ShapeIdx>,
    pub severity: Severity,
    pub message: Option<String>,
}

impl Shape {
    pub fn is_property_shape(&self) -> bool {
        self.path.is_some()
    }
}

/// A compiled shapes graph.
#[derive(Debug, Clone, Default)]
pub struct ShapesGraph {
    pub shapes: Vec<Shape>,
    pub index: HashMap<Term, ShapeIdx>,
    pub components: Vec<ConstraintComponent>,
    pub target_types: HashMap<Term, SparqlTargetType>,
    pub prefixes: PrefixMap,
    /// The source triples, kept for coverage analysis.
    pub graph: Graph,
}

impl ShapesGraph {
    pub fn shape(&self, id: &Term) -> Option<&Shape> {
        self.index.get(id).map(|&i| &self.shapes[i])
    }

    pub fn is_empty(&self) -> bool {
        self.shapes.is_empty()
    }

    /// Shapes with at least one target declaration.
    pub fn targeted(&self) -> impl Iterator<Item = (ShapeIdx, &Shape)> {
        self.shapes.iter().enumerate().filter(|(_, s)| !s.targets.is_empty())
    }
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Violation => "Violation",
            Severity::Warning => "Warning",
            Severity::Info => "Info",
        })
    }
}
