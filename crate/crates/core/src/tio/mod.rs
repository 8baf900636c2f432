//! Intent-ontology payload: the vocabulary catalog, the quantity shorthand and
//! direct Rust implementations of the flagship constraint components.

pub mod catalog;
pub mod oracle;
pub mod quantity;

pub use catalog::{turtle_files, CatalogError, FunctionSignature, ModuleCatalog, VocabularyCatalog};
pub use oracle::{Oracle, INFERENCE_DEPTH};
pub use quantity::{parse_quantity, unit_of, QuantityError, QuantityValue, QUANTITY_PATTERN};

use crate::rdf::vocab::tio;
use crate::rdf::Term;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Module {
    pub name: &'static str,
    pub prefix: &'static str,
}

impl Module {
    pub fn namespace(&self) -> String {
        format!("{}{}/", tio::BASE, self.name)
    }
}

/// The fifteen ontology modules. The first six are modelled in full, the rest are stubs.
pub const MODULES: [Module; 15] = [
    Module { name: "IntentCommonModel", prefix: "icm" },
    Module { name: "LogicalOperators", prefix: "log" },
    Module { name: "QuantityOntology", prefix: "quan" },
    Module { name: "FunctionOntology", prefix: "fun" },
    Module { name: "MetricsAndObservations", prefix: "met" },
    Module { name: "SetOperators", prefix: "set" },
    Module { name: "IntentManagementOntology", prefix: "imo" },
    Module { name: "PreferenceOfHandlingOutcomes", prefix: "pho" },
    Module { name: "IntentValidityOntology", prefix: "iv" },
    Module { name: "IntentSpecification", prefix: "ispec" },
    Module { name: "IntentGuaranteeOntology", prefix: "ig" },
    Module { name: "Utility", prefix: "util" },
    Module { name: "MathFunctions", prefix: "math" },
    Module { name: "ProposalBestIntent", prefix: "pbi" },
    Module { name: "IntentProbing", prefix: "ip" },
];

/// Index and entry of the module whose namespace prefixes `iri`.
pub fn module_of(iri: &str) -> Option<(usize, &'static Module)> {
    let rest = iri.strip_prefix(tio::BASE)?;
    let (name, _) = rest.split_once('/')?;
    MODULES.iter().enumerate().find(|(_, m)| m.name == name)
}

/// Local names of the flagship constraint components. Inline SPARQL constraints use
/// `<Family>.<suffix>` local names so both tiers map to the same family.
pub mod family {
    pub const ARITY: &str = "FunctionUsageArityConstraint";
    pub const ARGUMENT_TYPE: &str = "FunctionUsageArgumentTypeObjectConstraint";
    pub const LOGICAL_OPERATOR: &str = "LogicalOperatorArgumentConstraint";
    pub const VOCABULARY: &str = "VocabularyUsageConstraint";
    pub const ACTIONABLE: &str = "ActionableBooleanEvaluableConstraint";
    pub const OPERAND_HIERARCHY: &str = "OperandHierarchyConstraint";
    pub const UNIT_MATCH: &str = "QuantityUnitMatchConstraint";

    pub const FLAGSHIP: [&str; 7] =
        [ARITY, ARGUMENT_TYPE, LOGICAL_OPERATOR, VOCABULARY, ACTIONABLE, OPERAND_HIERARCHY, UNIT_MATCH];
}

pub fn component_iri(family: &str) -> String {
    format!("{}{family}", tio::SHAPES)
}

/// Constraint family of a `sh:sourceConstraint`: its local name up to the first `.`.
pub fn family_of(constraint: &Term) -> Option<&str> {
    let local = constraint.as_iri()?.local_name();
    Some(local.split('.').next().unwrap_or(local))
}

pub const COMPARISONS: [&str; 4] = [
    "https://tio.example.org/v3.6.0/QuantityOntology/atLeast",
    "https://tio.example.org/v3.6.0/QuantityOntology/atMost",
    "https://tio.example.org/v3.6.0/QuantityOntology/exactly",
    "https://tio.example.org/v3.6.0/QuantityOntology/between",
];
