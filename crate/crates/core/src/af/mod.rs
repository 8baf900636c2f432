//! SPARQL-based constraints, constraint components and target types.
//!
//! A constraint component declares parameters (`sh:parameter [ sh:path ex:p ]`)
//! and a SELECT validator. Every shape carrying values for all mandatory
//! parameters instantiates the component; the values are pre-bound to the
//! `$` variables named after the parameter path's local name.

use std::sync::Arc;

use indexmap::IndexSet;
use thiserror::Error;

use crate::rdf::vocab::{rdf, sh};
use crate::rdf::{Graph, Iri, PrefixMap, Term};
use crate::sparql::{evaluate, parse_query, Query, Solution, SparqlError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AfError {
    #[error("{node}: {message}")]
    Malformed { node: String, message: String },
    #[error("{node}: {source}")]
    Query {
        node: String,
        #[source]
        source: SparqlError,
    },
    #[error("component {component} is missing mandatory parameter ${param}")]
    MissingParameter { component: String, param: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parameter {
    pub path: Iri,
    /// Variable name: the local name of `path`.
    pub name: String,
    pub optional: bool,
}

#[derive(Debug, Clone)]
pub struct ConstraintComponent {
    pub id: Term,
    pub parameters: Vec<Parameter>,
    pub select: Arc<Query>,
    pub query_text: String,
    pub message: Option<String>,
}

#[derive(Debug, Clone)]
pub struct SparqlTargetType {
    pub id: Term,
    pub parameters: Vec<Parameter>,
    pub select: Arc<Query>,
    pub query_text: String,
}

/// A SELECT constraint ready to run against a focus node.
#[derive(Debug, Clone)]
pub struct SparqlConstraint {
    /// Reported as `sh:sourceConstraint`: the component for instantiations, the
    /// `sh:sparql` node for inline constraints.
    pub id: Term,
    pub select: Arc<Query>,
    pub query_text: String,
    pub message: Option<String>,
    pub bindings: Solution,
}

impl SparqlConstraint {
    /// Solutions for `focus` with `$this` and the parameter values pre-bound.
    pub fn run(&self, focus: &Term, graph: &Graph) -> Vec<Solution> {
        let mut pre = self.bindings.clone();
        pre.insert("this", focus.clone());
        evaluate(&self.select, graph, &pre)
    }
}

fn describe(node: &Term, prefixes: &PrefixMap) -> String {
    prefixes.render(node)
}

fn string_value(graph: &Graph, node: &Term, pred: &str, prefixes: &PrefixMap) -> Result<Option<String>, AfError> {
    match graph.object(node, &Term::iri(pred)) {
        None => Ok(None),
        Some(Term::Literal(l)) => Ok(Some(l.lexical().to_owned())),
        Some(other) => Err(AfError::Malformed {
            node: describe(node, prefixes),
            message: format!("{} must be a literal, found {}", prefixes.render(&Term::iri(pred)), prefixes.render(other)),
        }),
    }
}

/// Parses the mandatory `sh:select` text on `node` and checks that it projects `project`.
pub(crate) fn load_select(
    graph: &Graph,
    node: &Term,
    prefixes: &PrefixMap,
    project: &str,
) -> Result<(Arc<Query>, String), AfError> {
    let text = string_value(graph, node, sh::SELECT, prefixes)?.ok_or_else(|| AfError::Malformed {
        node: describe(node, prefixes),
        message: "missing sh:select".into(),
    })?;
    let query = parse_query(&text, prefixes).map_err(|source| AfError::Query { node: describe(node, prefixes), source })?;
    if !query.projected_vars().any(|v| &**v == project) {
        return Err(AfError::Malformed {
            node: describe(node, prefixes),
            message: format!("sh:select must project ?{project}"),
        });
    }
    Ok((Arc::new(query), text))
}

pub(crate) fn load_message(graph: &Graph, node: &Term, prefixes: &PrefixMap) -> Result<Option<String>, AfError> {
    pick_message(graph.objects(node, &Term::iri(sh::MESSAGE)), node, prefixes)
}

/// The first `sh:message`, preferring untagged or English literals.
pub(crate) fn pick_message<'a>(
    values: impl Iterator<Item = &'a Term>,
    node: &Term,
    prefixes: &PrefixMap,
) -> Result<Option<String>, AfError> {
    let mut best: Option<(bool, String)> = None;
    for v in values {
        let Term::Literal(l) = v else {
            return Err(AfError::Malformed {
                node: describe(node, prefixes),
                message: format!("sh:message must be a literal, found {}", prefixes.render(v)),
            });
        };
        let preferred = matches!(l.language(), None | Some("en"));
        if best.as_ref().is_none_or(|(p, _)| preferred && !p) {
            best = Some((preferred, l.lexical().to_owned()));
        }
    }
    Ok(best.map(|(_, m)| m))
}

fn load_parameters(graph: &Graph, node: &Term, prefixes: &PrefixMap) -> Result<Vec<Parameter>, AfError> {
    let mut out = Vec::new();
    for p in graph.objects(node, &Term::iri(sh::PARAMETER)) {
        let path = match graph.object(p, &Term::iri(sh::PATH)) {
            Some(Term::Iri(i)) => i.clone(),
            _ => {
                return Err(AfError::Malformed {
                    node: describe(node, prefixes),
                    message: "sh:parameter needs an IRI sh:path".into(),
                })
            }
        };
        let optional = graph.object(p, &Term::iri(sh::OPTIONAL)).is_some_and(|t| t == &Term::boolean(true));
        out.push(Parameter { name: path.local_name().to_owned(), path, optional });
    }
    out.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(out)
}

/// Reads every `sh:ConstraintComponent` in `graph`.
pub fn load_components(graph: &Graph, prefixes: &PrefixMap) -> Result<Vec<ConstraintComponent>, AfError> {
    let mut out = Vec::new();
    for id in graph.subjects(&Term::iri(rdf::TYPE), &Term::iri(sh::CONSTRAINT_COMPONENT)) {
        let parameters = load_parameters(graph, id, prefixes)?;
        let validator = graph
            .object(id, &Term::iri(sh::NODE_VALIDATOR))
            .or_else(|| graph.object(id, &Term::iri(sh::VALIDATOR)))
            .ok_or_else(|| AfError::Malformed {
                node: describe(id, prefixes),
                message: "component has no sh:validator or sh:nodeValidator".into(),
            })?;
        let (select, query_text) = load_select(graph, validator, prefixes, "this")?;
        for p in &parameters {
            if !select.prebindable.contains(p.name.as_str()) {
                log::warn!("component {} never uses ${}", describe(id, prefixes), p.name);
            }
        }
        let message = match load_message(graph, validator, prefixes)? {
            Some(m) => Some(m),
            None => load_message(graph, id, prefixes)?,
        };
        out.push(ConstraintComponent { id: id.clone(), parameters, select, query_text, message });
    }
    Ok(out)
}

/// Reads every `sh:SPARQLTargetType` in `graph`.
pub fn load_target_types(graph: &Graph, prefixes: &PrefixMap) -> Result<Vec<SparqlTargetType>, AfError> {
    let mut out = Vec::new();
    for id in graph.subjects(&Term::iri(rdf::TYPE), &Term::iri(sh::SPARQL_TARGET_TYPE)) {
        let parameters = load_parameters(graph, id, prefixes)?;
        let (select, query_text) = load_select(graph, id, prefixes, "this")?;
        out.push(SparqlTargetType { id: id.clone(), parameters, select, query_text });
    }
    Ok(out)
}

fn check_bindings(id: &Term, parameters: &[Parameter], bindings: &Solution) -> Result<(), AfError> {
    for p in parameters {
        if !p.optional && bindings.get(&p.name).is_none() {
            return Err(AfError::MissingParameter { component: id.to_string(), param: p.name.clone() });
        }
    }
    Ok(())
}

/// Binds a component's parameters. `bindings` maps parameter names (without `$`)
/// to values; every mandatory parameter must be present.
pub fn instantiate_component(
    component: &ConstraintComponent,
    bindings: &Solution,
    message_override: Option<String>,
) -> Result<SparqlConstraint, AfError> {
    check_bindings(&component.id, &component.parameters, bindings)?;
    let bindings: Solution = component
        .parameters
        .iter()
        .filter_map(|p| bindings.get(&p.name).map(|t| (p.name.as_str().into(), t.clone())))
        .collect();
    Ok(SparqlConstraint {
        id: component.id.clone(),
        select: component.select.clone(),
        query_text: component.query_text.clone(),
        message: message_override.or_else(|| component.message.clone()),
        bindings,
    })
}

impl SparqlTargetType {
    /// Focus nodes selected by this target type with `bindings` substituted.
    pub fn resolve(&self, bindings: &Solution, graph: &Graph) -> Result<IndexSet<Term>, AfError> {
        check_bindings(&self.id, &self.parameters, bindings)?;
        Ok(select_this(&self.select, bindings, graph))
    }
}

/// Distinct `?this` values of a target query.
pub fn select_this(query: &Query, bindings: &Solution, graph: &Graph) -> IndexSet<Term> {
    evaluate(query, graph, bindings).into_iter().filter_map(|s| s.get("this").cloned()).collect()
}

/// Reads parameter values for `parameters` from the triples of `node`, one
/// solution per combination of values. Empty when a mandatory parameter has no value.
pub fn parameter_bindings(graph: &Graph, node: &Term, parameters: &[Parameter]) -> Vec<Solution> {
    let mut combos = vec![Solution::new()];
    for p in parameters {
        let values: Vec<&Term> = graph.objects(node, &Term::Iri(p.path.clone())).collect();
        if values.is_empty() {
            if p.optional {
                continue;
            }
            return Vec::new();
        }
        combos = combos
            .into_iter()
            .flat_map(|c| {
                values.iter().map(move |v| {
                    let mut next = c.clone();
                    next.insert(p.name.as_str(), (*v).clone());
                    next
                })
            })
            .collect();
    }
    combos
}

/// Substitutes `{$var}` and `{?var}` placeholders with the rendered bindings of
/// `row`. Placeholders of unbound variables are left as written.
pub fn render_message(template: &str, row: &Solution, prefixes: &PrefixMap) -> String {
    let mut out = String::with_capacity(template.len());
    let mut rest = template;
    while let Some(start) = rest.find('{') {
        out.push_str(&rest[..start]);
        let tail = &rest[start..];
        let sigil = tail[1..].chars().next();
        let close = tail.find('}');
        match (sigil, close) {
            (Some('$' | '?'), Some(end)) if end > 2 && is_var_name(&tail[2..end]) => {
                match row.get(&tail[2..end]) {
                    Some(t) => out.push_str(&prefixes.render(t)),
                    None => out.push_str(&tail[..=end]),
                }
                rest = &tail[end + 1..];
            }
            _ => {
                out.push('{');
                rest = &tail[1..];
            }
        }
    }
    out.push_str(rest);
    out
}

fn is_var_name(s: &str) -> bool {
    s.chars().all(|c| c.is_alphanumeric() || c == '_')
}
