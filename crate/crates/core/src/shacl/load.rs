use std::collections::HashMap;
use std::path::Path;

use indexmap::IndexSet;
use regex::RegexBuilder;

use super::model::*;
use super::ShapeError;
use crate::af::{self, load_select};
use crate::rdf::vocab::{owl, rdf, rdfs, sh, xsd};
use crate::rdf::{read_turtle_files, Graph, Iri, PrefixMap, Term};
use crate::sparql::numeric::Decimal;
use crate::sparql::Solution;

/// Every `sh:` predicate a shape may carry. Anything else in the SHACL
/// namespace is rejected so unsupported features never pass silently.
const KNOWN: &[&str] = &[
    sh::TARGET_CLASS,
    sh::TARGET_NODE,
    sh::TARGET_SUBJECTS_OF,
    sh::TARGET_OBJECTS_OF,
    sh::TARGET,
    sh::PROPERTY,
    sh::PATH,
    sh::CLASS,
    sh::DATATYPE,
    sh::NODE_KIND,
    sh::MIN_COUNT,
    sh::MAX_COUNT,
    sh::IN,
    sh::PATTERN,
    sh::FLAGS,
    sh::HAS_VALUE,
    sh::MIN_INCLUSIVE,
    sh::OR,
    sh::AND,
    sh::SPARQL,
    sh::MESSAGE,
    sh::SEVERITY,
    sh::NAME,
    sh::DESCRIPTION,
    sh::ORDER,
    sh::GROUP,
];

const TARGET_PREDICATES: &[&str] =
    &[sh::TARGET_CLASS, sh::TARGET_NODE, sh::TARGET_SUBJECTS_OF, sh::TARGET_OBJECTS_OF, sh::TARGET];

/// Reads and merges Turtle shape files.
pub fn load_shape_files<P: AsRef<Path>>(paths: &[P]) -> Result<ShapesGraph, ShapeError> {
    let (graph, prefixes) = read_turtle_files(paths)?;
    load_shapes(&graph, &prefixes)
}

/// Compiles the shapes, components and target types found in `graph`.
/// SPARQL texts resolve prefixed names against `prefixes`.
pub fn load_shapes(graph: &Graph, prefixes: &PrefixMap) -> Result<ShapesGraph, ShapeError> {
    let mut prefixes = prefixes.clone();
    prefixes.merge_missing(&PrefixMap::common());
    let components = af::load_components(graph, &prefixes)?;
    let target_types: HashMap<Term, af::SparqlTargetType> =
        af::load_target_types(graph, &prefixes)?.into_iter().map(|t| (t.id.clone(), t)).collect();

    let nodes = discover(graph, &prefixes)?;
    let index: HashMap<Term, ShapeIdx> = nodes.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
    let loader = Loader { graph, prefixes: &prefixes, index: &index, components: &components, target_types: &target_types };
    let shapes = nodes.iter().map(|n| loader.shape(n)).collect::<Result<Vec<_>, _>>()?;
    check_cycles(&shapes, &prefixes)?;
    Ok(ShapesGraph { shapes, index, components, target_types, prefixes, graph: graph.clone() })
}

fn discover(graph: &Graph, prefixes: &PrefixMap) -> Result<IndexSet<Term>, ShapeError> {
    let ty = Term::iri(rdf::TYPE);
    let mut found: IndexSet<Term> = IndexSet::new();
    for t in graph.iter() {
        let declared = t.predicate == ty && (t.object.is(sh::NODE_SHAPE) || t.object.is(sh::PROPERTY_SHAPE));
        let targeted = TARGET_PREDICATES.iter().any(|p| t.predicate.is(p));
        if declared || targeted {
            found.insert(t.subject.clone());
        }
    }
    let mut i = 0;
    while i < found.len() {
        let node = found[i].clone();
        for p in graph.objects(&node, &Term::iri(sh::PROPERTY)) {
            found.insert(p.clone());
        }
        for op in [sh::OR, sh::AND] {
            for head in graph.objects(&node, &Term::iri(op)) {
                let members = graph.list_to_sequence(head).map_err(|e| ShapeError::Malformed {
                    shape: prefixes.render(&node),
                    message: format!("{} is not a well-formed list: {e}", prefixes.render(&Term::iri(op))),
                })?;
                found.extend(members);
            }
        }
        i += 1;
    }
    Ok(found)
}

struct Loader<'a> {
    graph: &'a Graph,
    prefixes: &'a PrefixMap,
    index: &'a HashMap<Term, ShapeIdx>,
    components: &'a [af::ConstraintComponent],
    target_types: &'a HashMap<Term, af::SparqlTargetType>,
}

impl Loader<'_> {
    fn name(&self, t: &Term) -> String {
        self.prefixes.render(t)
    }

    fn malformed(&self, node: &Term, message: impl Into<String>) -> ShapeError {
        ShapeError::Malformed { shape: self.name(node), message: message.into() }
    }

    fn values(&self, node: &Term, pred: &str) -> Vec<Term> {
        self.graph.objects(node, &Term::iri(pred)).cloned().collect()
    }

    fn iri_values(&self, node: &Term, pred: &str) -> Result<Vec<Iri>, ShapeError> {
        self.values(node, pred)
            .into_iter()
            .map(|v| match v {
                Term::Iri(i) => Ok(i),
                other => Err(self.malformed(
                    node,
                    format!("{} expects an IRI, found {}", self.name(&Term::iri(pred)), self.name(&other)),
                )),
            })
            .collect()
    }

    fn single(&self, node: &Term, pred: &str) -> Result<Option<Term>, ShapeError> {
        let mut vals = self.values(node, pred);
        match vals.len() {
            0 => Ok(None),
            1 => Ok(vals.pop()),
            n => Err(self.malformed(node, format!("{} given {n} times", self.name(&Term::iri(pred))))),
        }
    }

    fn count(&self, node: &Term, pred: &str) -> Result<Option<usize>, ShapeError> {
        let Some(v) = self.single(node, pred)? else {
            return Ok(None);
        };
        match v.as_literal() {
            Some(l) if l.datatype().as_str() == xsd::INTEGER => l
                .lexical()
                .trim_start_matches('+')
                .parse::<usize>()
                .map(Some)
                .map_err(|_| self.malformed(node, format!("{} must be a non-negative integer", self.name(&Term::iri(pred))))),
            _ => Err(self.malformed(node, format!("{} must be an xsd:integer", self.name(&Term::iri(pred))))),
        }
    }

    fn list(&self, node: &Term, head: &Term, pred: &str) -> Result<Vec<Term>, ShapeError> {
        self.graph
            .list_to_sequence(head)
            .map_err(|e| self.malformed(node, format!("{} is not a well-formed list: {e}", self.name(&Term::iri(pred)))))
    }

    fn shape(&self, node: &Term) -> Result<Shape, ShapeError> {
        for t in self.graph.match_triples(Some(node), None, None) {
            let p = t.predicate.as_iri().map(Iri::as_str).unwrap_or_default();
            if p.starts_with(sh::NS) && !KNOWN.contains(&p) {
                return Err(ShapeError::UnknownParameter { shape: self.name(node), param: self.name(&t.predicate) });
            }
        }

        let path = match self.single(node, sh::PATH)? {
            None => None,
            Some(Term::Iri(i)) => Some(i),
            Some(_) => return Err(self.malformed(node, "only predicate paths (IRIs) are supported for sh:path")),
        };
        if path.is_none() && self.graph.has(node, &Term::iri(rdf::TYPE), &Term::iri(sh::PROPERTY_SHAPE)) {
            return Err(self.malformed(node, "property shape without sh:path"));
        }

        let severity = match self.single(node, sh::SEVERITY)? {
            None => Severity::Violation,
            Some(t) => t
                .as_iri()
                .and_then(|i| Severity::from_iri(i.as_str()))
                .ok_or_else(|| self.malformed(node, format!("unknown severity {}", self.name(&t))))?,
        };
        let message = af::load_message(self.graph, node, self.prefixes)?;

        let mut shape = Shape {
            id: node.clone(),
            path,
            targets: self.targets(node)?,
            constraints: self.core_constraints(node)?,
            sparql: Vec::new(),
            properties: self.values(node, sh::PROPERTY).iter().map(|p| self.index[p]).collect(),
            severity,
            message,
        };
        shape.sparql = self.sparql_constraints(node, shape.message.as_ref())?;
        Ok(shape)
    }

    fn targets(&self, node: &Term) -> Result<Vec<Target>, ShapeError> {
        let mut out = Vec::new();
        out.extend(self.iri_values(node, sh::TARGET_CLASS)?.into_iter().map(Target::Class));
        out.extend(self.values(node, sh::TARGET_NODE).into_iter().map(Target::Node));
        out.extend(self.iri_values(node, sh::TARGET_SUBJECTS_OF)?.into_iter().map(Target::SubjectsOf));
        out.extend(self.iri_values(node, sh::TARGET_OBJECTS_OF)?.into_iter().map(Target::ObjectsOf));
        let ty = Term::iri(rdf::TYPE);
        if let Term::Iri(iri) = node {
            let is_class = [rdfs::CLASS, owl::CLASS].iter().any(|c| self.graph.has(node, &ty, &Term::iri(c)));
            if is_class {
                out.push(Target::Class(iri.clone()));
            }
        }
        for target in self.values(node, sh::TARGET) {
            if self.graph.has(&target, &ty, &Term::iri(sh::SPARQL_TARGET)) {
                let (query, _) = load_select(self.graph, &target, self.prefixes, "this")?;
                out.push(Target::Sparql(query));
                continue;
            }
            let Some(tt) = self.graph.objects(&target, &ty).find_map(|c| self.target_types.get(c)) else {
                return Err(self.malformed(node, format!("sh:target {} has no known target type", self.name(&target))));
            };
            let combos = af::parameter_bindings(self.graph, &target, &tt.parameters);
            if combos.is_empty() {
                let missing = tt
                    .parameters
                    .iter()
                    .find(|p| !p.optional && self.graph.object(&target, &Term::Iri(p.path.clone())).is_none())
                    .map(|p| p.name.clone())
                    .unwrap_or_default();
                return Err(af::AfError::MissingParameter { component: self.name(&tt.id), param: missing }.into());
            }
            out.extend(combos.into_iter().map(|bindings| Target::TypeInstance { target_type: tt.id.clone(), bindings }));
        }
        Ok(out)
    }

    fn core_constraints(&self, node: &Term) -> Result<Vec<CoreConstraint>, ShapeError> {
        let mut out = Vec::new();
        out.extend(self.iri_values(node, sh::CLASS)?.into_iter().map(CoreConstraint::Class));
        out.extend(self.iri_values(node, sh::DATATYPE)?.into_iter().map(CoreConstraint::Datatype));
        for k in self.iri_values(node, sh::NODE_KIND)? {
            let kind = NodeKind::from_iri(k.as_str())
                .ok_or_else(|| self.malformed(node, format!("unknown node kind {}", self.name(&Term::Iri(k.clone())))))?;
            out.push(CoreConstraint::NodeKind(kind));
        }
        if let Some(n) = self.count(node, sh::MIN_COUNT)? {
            out.push(CoreConstraint::MinCount(n));
        }
        if let Some(n) = self.count(node, sh::MAX_COUNT)? {
            out.push(CoreConstraint::MaxCount(n));
        }
        for head in self.values(node, sh::IN) {
            out.push(CoreConstraint::In(self.list(node, &head, sh::IN)?));
        }
        let flags = match self.single(node, sh::FLAGS)? {
            None => String::new(),
            Some(Term::Literal(l)) => l.lexical().to_owned(),
            Some(_) => return Err(self.malformed(node, "sh:flags must be a string")),
        };
        for p in self.values(node, sh::PATTERN) {
            let Term::Literal(l) = &p else {
                return Err(self.malformed(node, "sh:pattern must be a string"));
            };
            let mut builder = RegexBuilder::new(l.lexical());
            for f in flags.chars() {
                match f {
                    'i' => builder.case_insensitive(true),
                    's' => builder.dot_matches_new_line(true),
                    'm' => builder.multi_line(true),
                    'x' => builder.ignore_whitespace(true),
                    other => return Err(self.malformed(node, format!("unsupported regex flag '{other}'"))),
                };
            }
            let regex = builder.build().map_err(|e| self.malformed(node, format!("invalid sh:pattern: {e}")))?;
            out.push(CoreConstraint::Pattern { regex, source: l.lexical().to_owned() });
        }
        for v in self.values(node, sh::HAS_VALUE) {
            out.push(CoreConstraint::HasValue(v));
        }
        if let Some(v) = self.single(node, sh::MIN_INCLUSIVE)? {
            if v.as_literal().and_then(Decimal::from_literal).is_none() {
                return Err(self.malformed(node, "sh:minInclusive must be an integer or decimal literal"));
            }
            out.push(CoreConstraint::MinInclusive(v));
        }
        for (pred, build) in [(sh::OR, CoreConstraint::Or as fn(_) -> _), (sh::AND, CoreConstraint::And)] {
            for head in self.values(node, pred) {
                let members = self.list(node, &head, pred)?;
                if members.is_empty() {
                    return Err(self.malformed(node, format!("empty {} list", self.name(&Term::iri(pred)))));
                }
                out.push(build(members.iter().map(|m| self.index[m]).collect()));
            }
        }
        Ok(out)
    }

    fn sparql_constraints(&self, node: &Term, shape_message: Option<&String>) -> Result<Vec<af::SparqlConstraint>, ShapeError> {
        let mut out = Vec::new();
        for c in self.values(node, sh::SPARQL) {
            let (select, query_text) = load_select(self.graph, &c, self.prefixes, "this")?;
            let message = af::load_message(self.graph, &c, self.prefixes)?.or_else(|| shape_message.cloned());
            out.push(af::SparqlConstraint { id: c, select, query_text, message, bindings: Solution::new() });
        }
        for component in self.components {
            for bindings in af::parameter_bindings(self.graph, node, &component.parameters) {
                if bindings.is_empty() {
                    continue;
                }
                out.push(af::instantiate_component(component, &bindings, shape_message.cloned())?);
            }
        }
        Ok(out)
    }
}

/// Rejects shapes that reach themselves through `sh:or`, `sh:and` or `sh:property`.
fn check_cycles(shapes: &[Shape], prefixes: &PrefixMap) -> Result<(), ShapeError> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Active,
        Done,
    }
    fn edges(s: &Shape) -> Vec<ShapeIdx> {
        let mut out = s.properties.clone();
        for c in &s.constraints {
            if let CoreConstraint::Or(m) | CoreConstraint::And(m) = c {
                out.extend(m);
            }
        }
        out
    }
    let mut marks = vec![Mark::New; shapes.len()];
    for root in 0..shapes.len() {
        if marks[root] != Mark::New {
            continue;
        }
        let mut stack = vec![(root, edges(&shapes[root]), 0usize)];
        marks[root] = Mark::Active;
        while let Some((node, next, pos)) = stack.last_mut() {
            if *pos == next.len() {
                marks[*node] = Mark::Done;
                stack.pop();
                continue;
            }
            let child = next[*pos];
            *pos += 1;
            match marks[child] {
                Mark::Active => return Err(ShapeError::Cycle(prefixes.render(&shapes[child].id))),
                Mark::New => {
                    marks[child] = Mark::Active;
                    let e = edges(&shapes[child]);
                    stack.push((child, e, 0));
                }
                Mark::Done => {}
            }
        }
    }
    Ok(())
}
