use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use super::{module_of, MODULES};
use crate::rdf::vocab::{owl, rdf, rdfs, tio};
use crate::rdf::{read_turtle_files, FileError, Graph, Iri, PrefixMap, Term};

#[derive(Debug, thiserror::Error)]
pub enum CatalogError {
    #[error(transparent)]
    File(#[from] FileError),
    #[error("cannot list {path}: {source}")]
    Dir { path: String, source: std::io::Error },
    #[error("function {function}: {message}")]
    Signature { function: String, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionSignature {
    pub id: Iri,
    /// `rdf:Resource` marks a polymorphic result.
    pub result_type: Iri,
    pub argument_types: Vec<Iri>,
    pub arity_min: u32,
    pub arity_max: Option<u32>,
}

impl FunctionSignature {
    pub fn is_polymorphic(&self) -> bool {
        self.result_type.as_str() == rdf::RESOURCE
    }

    pub fn accepts_count(&self, n: u32) -> bool {
        n >= self.arity_min && self.arity_max.is_none_or(|max| n <= max)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ModuleCatalog {
    pub name: String,
    pub namespace: String,
    pub classes: BTreeSet<Iri>,
    pub properties: BTreeSet<Iri>,
    pub functions: BTreeMap<Iri, FunctionSignature>,
    pub subclass_axioms: Vec<(Iri, Iri)>,
}

/// Classes, properties and functions of the fixture ontology, grouped by module namespace.
/// Functions are kept apart from plain properties even though they are also `rdf:Property`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VocabularyCatalog {
    pub modules: Vec<ModuleCatalog>,
}

impl VocabularyCatalog {
    pub fn from_graph(ontology: &Graph) -> Result<Self, CatalogError> {
        let mut modules: Vec<ModuleCatalog> = MODULES
            .iter()
            .map(|m| ModuleCatalog { name: m.name.to_owned(), namespace: m.namespace(), ..Default::default() })
            .collect();
        let ty = Term::iri(rdf::TYPE);
        let slot = |iri: &Iri| module_of(iri.as_str()).map(|(i, _)| i);

        let function_class = Term::iri(tio::FUNCTION);
        let mut functions = BTreeSet::new();
        for t in ontology.match_triples(None, Some(&ty), Some(&function_class)) {
            if let Some(iri) = t.subject.as_iri() {
                functions.insert(iri.clone());
            }
        }
        for f in &functions {
            if let Some(i) = slot(f) {
                let sig = signature(ontology, f)?;
                modules[i].functions.insert(f.clone(), sig);
            }
        }

        for class in [rdfs::CLASS, owl::CLASS] {
            for t in ontology.match_triples(None, Some(&ty), Some(&Term::iri(class))) {
                if let (Some(iri), Some(i)) = (t.subject.as_iri(), t.subject.as_iri().and_then(slot)) {
                    modules[i].classes.insert(iri.clone());
                }
            }
        }
        for t in ontology.match_triples(None, Some(&ty), Some(&Term::iri(rdf::PROPERTY))) {
            if let Some(iri) = t.subject.as_iri() {
                if let (false, Some(i)) = (functions.contains(iri), slot(iri)) {
                    modules[i].properties.insert(iri.clone());
                }
            }
        }
        for t in ontology.match_triples(None, Some(&Term::iri(rdfs::SUB_CLASS_OF)), None) {
            if let (Some(sub), Some(sup)) = (t.subject.as_iri(), t.object.as_iri()) {
                if let Some(i) = slot(sub) {
                    modules[i].subclass_axioms.push((sub.clone(), sup.clone()));
                }
            }
        }
        Ok(VocabularyCatalog { modules })
    }

    /// Loads every `*.ttl` file in `dir` (sorted by name).
    pub fn load_dir(dir: impl AsRef<Path>) -> Result<(Self, Graph, PrefixMap), CatalogError> {
        let files = turtle_files(dir.as_ref())?;
        let (graph, prefixes) = read_turtle_files(&files)?;
        Ok((Self::from_graph(&graph)?, graph, prefixes))
    }

    pub fn module(&self, name: &str) -> Option<&ModuleCatalog> {
        self.modules.iter().find(|m| m.name == name)
    }

    pub fn function(&self, id: &Iri) -> Option<&FunctionSignature> {
        self.modules.iter().find_map(|m| m.functions.get(id))
    }

    pub fn functions(&self) -> impl Iterator<Item = &FunctionSignature> {
        self.modules.iter().flat_map(|m| m.functions.values())
    }

    pub fn is_declared_property(&self, iri: &Iri) -> bool {
        self.modules.iter().any(|m| m.properties.contains(iri) || m.functions.contains_key(iri))
    }

    pub fn namespaces(&self) -> impl Iterator<Item = &str> {
        self.modules.iter().map(|m| m.namespace.as_str())
    }
}

/// `*.ttl` files directly inside `dir`, sorted. A missing directory is an error.
pub fn turtle_files(dir: &Path) -> Result<Vec<std::path::PathBuf>, CatalogError> {
    let entries = std::fs::read_dir(dir).map_err(|source| CatalogError::Dir { path: dir.display().to_string(), source })?;
    let mut files: Vec<_> = entries
        .filter_map(Result::ok)
        .map(|e| e.path())
        .filter(|p| p.is_file() && p.extension().is_some_and(|e| e == "ttl"))
        .collect();
    files.sort();
    Ok(files)
}

fn signature(ontology: &Graph, f: &Iri) -> Result<FunctionSignature, CatalogError> {
    let node = Term::Iri(f.clone());
    let err = |message: String| CatalogError::Signature { function: f.to_string(), message };
    let result_type = match ontology.object(&node, &Term::iri(tio::RESULT_TYPE)) {
        Some(Term::Iri(i)) => i.clone(),
        Some(_) => return Err(err("fun:resultType must be an IRI".into())),
        None => Iri::new(rdf::RESOURCE).expect("constant IRI"),
    };
    let argument_types = match ontology.object(&node, &Term::iri(tio::ARGUMENT_TYPES)) {
        Some(head) => ontology
            .list_to_sequence(head)
            .map_err(|e| err(format!("fun:argumentTypes: {e}")))?
            .into_iter()
            .map(|t| t.as_iri().cloned().ok_or_else(|| err("argument types must be IRIs".into())))
            .collect::<Result<Vec<_>, _>>()?,
        None => Vec::new(),
    };
    let count = |p: &str| -> Result<Option<u32>, CatalogError> {
        match ontology.object(&node, &Term::iri(p)) {
            None => Ok(None),
            Some(Term::Literal(l)) => l.lexical().parse().map(Some).map_err(|_| err(format!("{p} is not a non-negative integer"))),
            Some(_) => Err(err(format!("{p} must be a literal"))),
        }
    };
    let explicit_min = count(tio::ARITY_MIN)?;
    let explicit_max = count(tio::ARITY_MAX)?;
    let (arity_min, arity_max) = match (explicit_min, explicit_max) {
        (None, None) => (argument_types.len() as u32, Some(argument_types.len() as u32)),
        (min, max) => (min.unwrap_or(0), max),
    };
    if arity_max.is_some_and(|max| max < arity_min) {
        return Err(err(format!("arityMax {} below arityMin {arity_min}", arity_max.unwrap_or_default())));
    }
    Ok(FunctionSignature { id: f.clone(), result_type, argument_types, arity_min, arity_max })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::parse_turtle;

    const ONTO: &str = r#"
@prefix rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#> .
@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .
@prefix xsd: <http://www.w3.org/2001/XMLSchema#> .
@prefix fun: <https://tio.example.org/v3.6.0/FunctionOntology/> .
@prefix quan: <https://tio.example.org/v3.6.0/QuantityOntology/> .
@prefix log: <https://tio.example.org/v3.6.0/LogicalOperators/> .
quan:Quantity a rdfs:Class .
quan:unit a rdf:Property .
quan:atLeast a fun:Function, rdf:Property ; fun:resultType xsd:boolean ;
    fun:argumentTypes ( quan:Quantity quan:Quantity ) .
log:allOf a fun:Function, rdf:Property ; fun:argumentTypes ( rdf:Resource ) ; fun:arityMin 1 .
<http://example.org/Other> a rdfs:Class .
"#;

    #[test]
    fn groups_by_module_and_derives_arity() {
        let (g, _) = parse_turtle(ONTO, None).unwrap();
        let c = VocabularyCatalog::from_graph(&g).unwrap();
        let quan = c.module("QuantityOntology").unwrap();
        assert_eq!(quan.classes.len(), 1);
        assert_eq!(quan.properties.len(), 1, "functions are not counted as plain properties");
        let at_least = c.function(&Iri::new(format!("{}atLeast", tio::QUAN)).unwrap()).unwrap();
        assert_eq!((at_least.arity_min, at_least.arity_max), (2, Some(2)));
        assert!(!at_least.is_polymorphic());
        let all_of = c.function(&Iri::new(tio::ALL_OF).unwrap()).unwrap();
        assert_eq!((all_of.arity_min, all_of.arity_max), (1, None));
        assert!(all_of.accepts_count(7) && !all_of.accepts_count(0));
        assert!(all_of.is_polymorphic());
        assert_eq!(c.modules.iter().map(|m| m.classes.len()).sum::<usize>(), 1);
    }

    #[test]
    fn inconsistent_arity_rejected() {
        let text = format!("{ONTO}\nquan:atLeast fun:arityMin 3 ; fun:arityMax 2 .");
        let (g, _) = parse_turtle(&text, None).unwrap();
        assert!(matches!(VocabularyCatalog::from_graph(&g), Err(CatalogError::Signature { .. })));
    }
}
