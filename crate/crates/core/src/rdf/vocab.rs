//! IRI constants for the vocabularies the engine interprets directly.

pub mod rdf {
    pub const NS: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
    pub const TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
    pub const FIRST: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#first";
    pub const REST: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#rest";
    pub const NIL: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#nil";
    pub const PROPERTY: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#Property";
    pub const LANG_STRING: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString";
    /// The polymorphic result-type marker used by function declarations.
    pub const RESOURCE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#Resource";
}

pub mod rdfs {
    pub const NS: &str = "http://www.w3.org/2000/01/rdf-schema#";
    pub const SUB_CLASS_OF: &str = "http://www.w3.org/2000/01/rdf-schema#subClassOf";
    pub const CLASS: &str = "http://www.w3.org/2000/01/rdf-schema#Class";
    pub const DATATYPE: &str = "http://www.w3.org/2000/01/rdf-schema#Datatype";
    pub const RANGE: &str = "http://www.w3.org/2000/01/rdf-schema#range";
    pub const LABEL: &str = "http://www.w3.org/2000/01/rdf-schema#label";
    pub const COMMENT: &str = "http://www.w3.org/2000/01/rdf-schema#comment";
}

pub mod owl {
    pub const CLASS: &str = "http://www.w3.org/2002/07/owl#Class";
}

pub mod xsd {
    pub const NS: &str = "http://www.w3.org/2001/XMLSchema#";
    pub const STRING: &str = "http://www.w3.org/2001/XMLSchema#string";
    pub const INTEGER: &str = "http://www.w3.org/2001/XMLSchema#integer";
    pub const DECIMAL: &str = "http://www.w3.org/2001/XMLSchema#decimal";
    pub const BOOLEAN: &str = "http://www.w3.org/2001/XMLSchema#boolean";
    pub const DOUBLE: &str = "http://www.w3.org/2001/XMLSchema#double";
}

pub mod sh {
    pub const NS: &str = "http://www.w3.org/ns/shacl#";
    pub const NODE_SHAPE: &str = "http://www.w3.org/ns/shacl#NodeShape";
    pub const PROPERTY_SHAPE: &str = "http://www.w3.org/ns/shacl#PropertyShape";
    pub const TARGET_CLASS: &str = "http://www.w3.org/ns/shacl#targetClass";
    pub const TARGET_NODE: &str = "http://www.w3.org/ns/shacl#targetNode";
    pub const TARGET_SUBJECTS_OF: &str = "http://www.w3.org/ns/shacl#targetSubjectsOf";
    pub const TARGET_OBJECTS_OF: &str = "http://www.w3.org/ns/shacl#targetObjectsOf";
    pub const TARGET: &str = "http://www.w3.org/ns/shacl#target";
    pub const PROPERTY: &str = "http://www.w3.org/ns/shacl#property";
    pub const PATH: &str = "http://www.w3.org/ns/shacl#path";
    pub const CLASS: &str = "http://www.w3.org/ns/shacl#class";
    pub const DATATYPE: &str = "http://www.w3.org/ns/shacl#datatype";
    pub const NODE_KIND: &str = "http://www.w3.org/ns/shacl#nodeKind";
    pub const MIN_COUNT: &str = "http://www.w3.org/ns/shacl#minCount";
    pub const MAX_COUNT: &str = "http://www.w3.org/ns/shacl#maxCount";
    pub const IN: &str = "http://www.w3.org/ns/shacl#in";
    pub const PATTERN: &str = "http://www.w3.org/ns/shacl#pattern";
    pub const FLAGS: &str = "http://www.w3.org/ns/shacl#flags";
    pub const HAS_VALUE: &str = "http://www.w3.org/ns/shacl#hasValue";
    pub const MIN_INCLUSIVE: &str = "http://www.w3.org/ns/shacl#minInclusive";
    pub const OR: &str = "http://www.w3.org/ns/shacl#or";
    pub const AND: &str = "http://www.w3.org/ns/shacl#and";
    pub const SPARQL: &str = "http://www.w3.org/ns/shacl#sparql";
    pub const SELECT: &str = "http://www.w3.org/ns/shacl#select";
    pub const MESSAGE: &str = "http://www.w3.org/ns/shacl#message";
    pub const SEVERITY: &str = "http://www.w3.org/ns/shacl#severity";
    pub const NAME: &str = "http://www.w3.org/ns/shacl#name";
    pub const DESCRIPTION: &str = "http://www.w3.org/ns/shacl#description";
    pub const ORDER: &str = "http://www.w3.org/ns/shacl#order";
    pub const GROUP: &str = "http://www.w3.org/ns/shacl#group";
    pub const PARAMETER: &str = "http://www.w3.org/ns/shacl#parameter";
    pub const OPTIONAL: &str = "http://www.w3.org/ns/shacl#optional";
    pub const VALIDATOR: &str = "http://www.w3.org/ns/shacl#validator";
    pub const NODE_VALIDATOR: &str = "http://www.w3.org/ns/shacl#nodeValidator";
    pub const SPARQL_CONSTRAINT: &str = "http://www.w3.org/ns/shacl#SPARQLConstraint";
    pub const SPARQL_TARGET: &str = "http://www.w3.org/ns/shacl#SPARQLTarget";
    pub const SPARQL_TARGET_TYPE: &str = "http://www.w3.org/ns/shacl#SPARQLTargetType";
    pub const SPARQL_SELECT_VALIDATOR: &str = "http://www.w3.org/ns/shacl#SPARQLSelectValidator";
    pub const CONSTRAINT_COMPONENT: &str = "http://www.w3.org/ns/shacl#ConstraintComponent";

    pub const IRI: &str = "http://www.w3.org/ns/shacl#IRI";
    pub const BLANK_NODE: &str = "http://www.w3.org/ns/shacl#BlankNode";
    pub const LITERAL: &str = "http://www.w3.org/ns/shacl#Literal";
    pub const BLANK_NODE_OR_IRI: &str = "http://www.w3.org/ns/shacl#BlankNodeOrIRI";
    pub const BLANK_NODE_OR_LITERAL: &str = "http://www.w3.org/ns/shacl#BlankNodeOrLiteral";
    pub const IRI_OR_LITERAL: &str = "http://www.w3.org/ns/shacl#IRIOrLiteral";

    pub const VIOLATION: &str = "http://www.w3.org/ns/shacl#Violation";
    pub const WARNING: &str = "http://www.w3.org/ns/shacl#Warning";
    pub const INFO: &str = "http://www.w3.org/ns/shacl#Info";

    pub const VALIDATION_REPORT: &str = "http://www.w3.org/ns/shacl#ValidationReport";
}

/// Stand-in namespaces for the fixture intent ontology modules.
pub mod tio {
    pub const BASE: &str = "https://tio.example.org/v3.6.0/";
    pub const ICM: &str = "https://tio.example.org/v3.6.0/IntentCommonModel/";
    pub const LOG: &str = "https://tio.example.org/v3.6.0/LogicalOperators/";
    pub const QUAN: &str = "https://tio.example.org/v3.6.0/QuantityOntology/";
    pub const FUN: &str = "https://tio.example.org/v3.6.0/FunctionOntology/";
    pub const MET: &str = "https://tio.example.org/v3.6.0/MetricsAndObservations/";
    pub const SET: &str = "https://tio.example.org/v3.6.0/SetOperators/";

    /// Namespace of the shape library itself (components, target types, shapes).
    pub const SHAPES: &str = "https://tio.example.org/shacl#";

    pub const FUNCTION: &str = "https://tio.example.org/v3.6.0/FunctionOntology/Function";
    pub const RESULT_TYPE: &str = "https://tio.example.org/v3.6.0/FunctionOntology/resultType";
    pub const ARGUMENT_TYPES: &str = "https://tio.example.org/v3.6.0/FunctionOntology/argumentTypes";
    pub const ARITY_MIN: &str = "https://tio.example.org/v3.6.0/FunctionOntology/arityMin";
    pub const ARITY_MAX: &str = "https://tio.example.org/v3.6.0/FunctionOntology/arityMax";
    pub const BOOLEAN_FUNCTION: &str = "https://tio.example.org/v3.6.0/FunctionOntology/BooleanFunction";
    pub const EVALUABLE: &str = "https://tio.example.org/v3.6.0/FunctionOntology/Evaluable";
    pub const ACTIONABLE: &str = "https://tio.example.org/v3.6.0/FunctionOntology/Actionable";

    pub const INTENT: &str = "https://tio.example.org/v3.6.0/IntentCommonModel/Intent";
    pub const EXPECTATION: &str = "https://tio.example.org/v3.6.0/IntentCommonModel/Expectation";
    pub const INTENT_OPERAND: &str = "https://tio.example.org/v3.6.0/IntentCommonModel/IntentOperand";
    pub const EXPECTATION_OPERAND: &str = "https://tio.example.org/v3.6.0/IntentCommonModel/ExpectationOperand";

    pub const ALL_OF: &str = "https://tio.example.org/v3.6.0/LogicalOperators/allOf";
    pub const ANY_OF: &str = "https://tio.example.org/v3.6.0/LogicalOperators/anyOf";

    pub const QUANTITY: &str = "https://tio.example.org/v3.6.0/QuantityOntology/Quantity";
    pub const QUANTITY_DATATYPE: &str = "https://tio.example.org/v3.6.0/QuantityOntology/quantity";

    pub const CONTAINER_TYPED: &str = "https://tio.example.org/v3.6.0/FunctionOntology/ContainerTyped";
    pub const VALIDITY_CANDIDATE: &str = "https://tio.example.org/v3.6.0/IntentValidityOntology/ValidityCandidate";
}
