//! SHACL Core subset: shapes loading, focus-node selection, constraint checking
//! and validation reports.

mod load;
mod model;
mod report;
mod validate;

use thiserror::Error;

pub use load::{load_shape_files, load_shapes};
pub use model::{CoreConstraint, NodeKind, Severity, Shape, ShapeIdx, ShapesGraph, Target};
pub use report::{ValidationReport, ValidationResult};
pub use validate::{validate_graph, ValidationOutcome, Validator};

use crate::af::AfError;
use crate::rdf::FileError;

#[derive(Debug, Error)]
pub enum ShapeError {
    #[error("shape {shape}: {message}")]
    Malformed { shape: String, message: String },
    #[error("shape {shape}: unsupported SHACL parameter {param}")]
    UnknownParameter { shape: String, param: String },
    #[error("shape reference cycle through {0}")]
    Cycle(String),
    #[error(transparent)]
    Af(#[from] AfError),
    #[error(transparent)]
    File(#[from] FileError),
}
