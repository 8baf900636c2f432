//! RDF data model, Turtle I/O and graph comparison.

pub mod graph;
pub mod iso;
pub mod prefix;
pub mod term;
pub mod turtle;
pub mod vocab;

pub use graph::{types_of, ClassHierarchy, Graph, GraphError, ListError, Triple};
pub use iso::{canonical_labels, canonicalize, is_isomorphic};
pub use prefix::PrefixMap;
pub use term::{BlankNode, Iri, Literal, Term, TermError};
pub use turtle::{parse_turtle, read_turtle_file, read_turtle_files, serialize_turtle, FileError, TurtleError};
