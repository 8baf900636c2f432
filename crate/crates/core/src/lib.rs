//! SHACL validation of intent graphs with a SPARQL-based extension layer.

pub mod af;
pub mod rdf;
pub mod shacl;
pub mod sparql;
pub mod harness;
pub mod tio;

pub use rdf::{Graph, Iri, Literal, PrefixMap, Term, Triple};
pub use shacl::{validate_graph, Severity, ShapesGraph, ValidationReport, ValidationResult, Validator};
