use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap};

use indexmap::IndexSet;

use super::model::*;
use super::report::{ValidationReport, ValidationResult};
use crate::af::{render_message, select_this};
use crate::rdf::vocab::{rdf, xsd};
use crate::rdf::{ClassHierarchy, Graph, PrefixMap, Term};
use crate::sparql::numeric::Decimal;
use crate::sparql::Solution;

/// Report plus the source constraints that were evaluated on at least one focus node.
#[derive(Debug, Clone, Default)]
pub struct ValidationOutcome {
    pub report: ValidationReport,
    pub exercised: BTreeSet<Term>,
}

/// Validates data graphs against a compiled shapes graph. Class membership and
/// SPARQL queries see the data together with `ontology`; focus nodes are limited
/// to nodes the data graph mentions.
#[derive(Clone)]
pub struct Validator<'a> {
    shapes: &'a ShapesGraph,
    ontology: &'a Graph,
    prefixes: PrefixMap,
}

impl<'a> Validator<'a> {
    pub fn new(shapes: &'a ShapesGraph, ontology: &'a Graph) -> Self {
        let mut prefixes = shapes.prefixes.clone();
        prefixes.merge_missing(&PrefixMap::common());
        Validator { shapes, ontology, prefixes }
    }

    /// Prefixes used when rendering messages; earlier bindings win.
    pub fn with_prefixes(mut self, prefixes: &PrefixMap) -> Self {
        let mut merged = prefixes.clone();
        merged.merge_missing(&self.prefixes);
        self.prefixes = merged;
        self
    }

    pub fn validate(&self, data: &Graph) -> ValidationReport {
        self.validate_traced(data).report
    }

    pub fn validate_traced(&self, data: &Graph) -> ValidationOutcome {
        let union = data.union(self.ontology);
        let run = Run {
            shapes: self.shapes,
            hierarchy: ClassHierarchy::new(&[&union]),
            union: &union,
            prefixes: &self.prefixes,
            exercised: RefCell::new(BTreeSet::new()),
            conformance: RefCell::new(HashMap::new()),
        };
        let mut results = Vec::new();
        for (idx, shape) in self.shapes.targeted() {
            for focus in run.focus_nodes(shape, data) {
                run.check(idx, &focus, &mut results);
            }
        }
        ValidationOutcome { report: ValidationReport::new(results), exercised: run.exercised.into_inner() }
    }
}

/// Validates `data` against `shapes` with `ontology` supplying class hierarchy and declarations.
pub fn validate_graph(data: &Graph, shapes: &ShapesGraph, ontology: &Graph) -> ValidationReport {
    Validator::new(shapes, ontology).validate(data)
}

struct Run<'a> {
    shapes: &'a ShapesGraph,
    hierarchy: ClassHierarchy,
    union: &'a Graph,
    prefixes: &'a PrefixMap,
    exercised: RefCell<BTreeSet<Term>>,
    conformance: RefCell<HashMap<(ShapeIdx, Term), bool>>,
}

impl Run<'_> {
    fn instances_of(&self, class: &Term) -> IndexSet<Term> {
        let ty = Term::iri(rdf::TYPE);
        self.union
            .match_triples(None, Some(&ty), None)
            .filter(|t| self.hierarchy.is_subclass(&t.object, class))
            .map(|t| t.subject.clone())
            .collect()
    }

    fn focus_nodes(&self, shape: &Shape, data: &Graph) -> Vec<Term> {
        let mut nodes: IndexSet<Term> = IndexSet::new();
        for target in &shape.targets {
            match target {
                Target::Class(c) => nodes.extend(self.instances_of(&Term::Iri(c.clone()))),
                Target::Node(n) => {
                    nodes.insert(n.clone());
                }
                Target::SubjectsOf(p) => nodes.extend(
                    self.union.match_triples(None, Some(&Term::Iri(p.clone())), None).map(|t| t.subject.clone()),
                ),
                Target::ObjectsOf(p) => nodes.extend(
                    self.union.match_triples(None, Some(&Term::Iri(p.clone())), None).map(|t| t.object.clone()),
                ),
                Target::Sparql(q) => nodes.extend(select_this(q, &Solution::new(), self.union)),
                Target::TypeInstance { target_type, bindings } => {
                    let tt = &self.shapes.target_types[target_type];
                    // Bindings were checked against the parameter list at load time.
                    nodes.extend(tt.resolve(bindings, self.union).unwrap_or_default());
                }
            }
        }
        let mut out: Vec<Term> = nodes.into_iter().filter(|n| data.mentions(n)).collect();
        out.sort();
        out.dedup();
        out
    }

    fn value_nodes(&self, shape: &Shape, focus: &Term) -> Vec<Term> {
        match &shape.path {
            None => vec![focus.clone()],
            Some(p) => {
                let vals: IndexSet<Term> = self.union.objects(focus, &Term::Iri(p.clone())).cloned().collect();
                vals.into_iter().collect()
            }
        }
    }

    fn conforms(&self, idx: ShapeIdx, node: &Term) -> bool {
        let key = (idx, node.clone());
        if let Some(&c) = self.conformance.borrow().get(&key) {
            return c;
        }
        let mut results = Vec::new();
        self.check(idx, node, &mut results);
        let c = results.is_empty();
        self.conformance.borrow_mut().insert(key, c);
        c
    }

    fn check(&self, idx: ShapeIdx, focus: &Term, out: &mut Vec<ValidationResult>) {
        let shape = &self.shapes.shapes[idx];
        let values = self.value_nodes(shape, focus);
        let path = shape.path.clone().map(Term::Iri);
        for c in &shape.constraints {
            self.exercised.borrow_mut().insert(Term::iri(c.component_iri()));
            for (value, default) in self.core_failures(c, &values, path.as_ref()) {
                let mut row = Solution::new();
                row.insert("this", focus.clone());
                if let Some(v) = &value {
                    row.insert("value", v.clone());
                }
                if let Some(p) = &path {
                    row.insert("path", p.clone());
                }
                let template = shape.message.as_deref().unwrap_or(&default);
                out.push(ValidationResult {
                    focus_node: focus.clone(),
                    path: path.clone(),
                    value,
                    severity: shape.severity,
                    source_shape: shape.id.clone(),
                    source_constraint: Some(Term::iri(c.component_iri())),
                    message: render_message(template, &row, self.prefixes),
                });
            }
        }
        for c in &shape.sparql {
            self.exercised.borrow_mut().insert(c.id.clone());
            for mut row in c.run(focus, self.union) {
                row.insert("this", focus.clone());
                for (k, v) in c.bindings.iter() {
                    if row.get(k).is_none() {
                        row.insert(k.clone(), v.clone());
                    }
                }
                let template = match row.get("message") {
                    Some(Term::Literal(l)) => l.lexical().to_owned(),
                    _ => c.message.clone().unwrap_or_else(|| format!("Constraint {} reported {{?value}}.", self.prefixes.render(&c.id))),
                };
                out.push(ValidationResult {
                    focus_node: focus.clone(),
                    path: row.get("path").filter(|p| p.is_iri()).cloned().or_else(|| path.clone()),
                    value: Some(row.get("value").cloned().unwrap_or_else(|| focus.clone())),
                    severity: shape.severity,
                    source_shape: shape.id.clone(),
                    source_constraint: Some(c.id.clone()),
                    message: render_message(&template, &row, self.prefixes),
                });
            }
        }
        for &p in &shape.properties {
            self.check(p, focus, out);
        }
    }

    /// Failing value nodes of one core constraint with the default message for each.
    fn core_failures(&self, c: &CoreConstraint, values: &[Term], path: Option<&Term>) -> Vec<(Option<Term>, String)> {
        let r = |t: &Term| self.prefixes.render(t);
        let each = |ok: &dyn Fn(&Term) -> bool, msg: &dyn Fn(&Term) -> String| -> Vec<(Option<Term>, String)> {
            values.iter().filter(|v| !ok(v)).map(|v| (Some(v.clone()), msg(v))).collect()
        };
        let on_path = || path.map(|p| format!(" on {}", r(p))).unwrap_or_default();
        match c {
            CoreConstraint::Class(cls) => {
                let cls = Term::Iri(cls.clone());
                each(
                    &|v| !v.is_literal() && self.instance_of(v, &cls),
                    &|v| format!("Value {} is not an instance of {}.", r(v), r(&cls)),
                )
            }
            CoreConstraint::Datatype(dt) => each(
                &|v| v.as_literal().is_some_and(|l| l.datatype() == dt && well_formed(l.lexical(), dt.as_str())),
                &|v| format!("Value {} does not have datatype {}.", r(v), r(&Term::Iri(dt.clone()))),
            ),
            CoreConstraint::NodeKind(k) => each(
                &|v| k.matches(v),
                &|v| format!("Value {} is not of node kind {}.", r(v), r(&Term::iri(k.iri()))),
            ),
            CoreConstraint::MinCount(n) if values.len() < *n => {
                vec![(None, format!("Expected at least {n} value(s){}, found {}.", on_path(), values.len()))]
            }
            CoreConstraint::MaxCount(n) if values.len() > *n => {
                vec![(None, format!("Expected at most {n} value(s){}, found {}.", on_path(), values.len()))]
            }
            CoreConstraint::MinCount(_) | CoreConstraint::MaxCount(_) => Vec::new(),
            CoreConstraint::In(allowed) => each(
                &|v| allowed.contains(v),
                &|v| format!("Value {} is not one of the allowed values.", r(v)),
            ),
            CoreConstraint::Pattern { regex, source } => each(
                &|v| !v.is_blank() && regex.is_match(&lexical(v)),
                &|v| format!("Value {} does not match pattern \"{source}\".", r(v)),
            ),
            CoreConstraint::HasValue(expected) if !values.contains(expected) => {
                vec![(None, format!("Missing expected value {}{}.", r(expected), on_path()))]
            }
            CoreConstraint::HasValue(_) => Vec::new(),
            CoreConstraint::MinInclusive(min) => {
                let min_d = min.as_literal().and_then(Decimal::from_literal);
                each(
                    &|v| {
                        let d = v.as_literal().and_then(Decimal::from_literal);
                        matches!((d, min_d), (Some(d), Some(m)) if d.compare(&m).is_some_and(|o| o.is_ge()))
                    },
                    &|v| format!("Value {} is less than {}.", r(v), r(min)),
                )
            }
            CoreConstraint::Or(members) => each(
                &|v| members.iter().any(|&m| self.conforms(m, v)),
                &|v| format!("Value {} conforms to none of the sh:or alternatives.", r(v)),
            ),
            CoreConstraint::And(members) => each(
                &|v| members.iter().all(|&m| self.conforms(m, v)),
                &|v| format!("Value {} does not conform to every sh:and member.", r(v)),
            ),
        }
    }

    fn instance_of(&self, node: &Term, class: &Term) -> bool {
        let ty = Term::iri(rdf::TYPE);
        self.union.objects(node, &ty).any(|t| self.hierarchy.is_subclass(t, class))
    }
}

fn lexical(t: &Term) -> String {
    match t {
        Term::Iri(i) => i.as_str().to_owned(),
        Term::Literal(l) => l.lexical().to_owned(),
        Term::BlankNode(b) => b.label().to_owned(),
    }
}

/// Lexical-form check for the datatypes the crate interprets.
fn well_formed(lexical: &str, datatype: &str) -> bool {
    match datatype {
        xsd::INTEGER | xsd::DECIMAL => Decimal::parse(lexical).is_some_and(|_| datatype != xsd::INTEGER || !lexical.contains('.')),
        xsd::BOOLEAN => matches!(lexical, "true" | "false" | "1" | "0"),
        _ => true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::parse_turtle;
    use crate::rdf::vocab::sh;
    use crate::shacl::load_shapes;

    const PRE: &str = "@prefix sh: <http://www.w3.org/ns/shacl#> .\n@prefix ex: <http://example.org/> .\n@prefix xsd: <http://www.w3.org/2001/XMLSchema#> .\n@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .\n";

    fn run(shapes: &str, data: &str, ontology: &str) -> ValidationReport {
        let (sg, sp) = parse_turtle(&format!("{PRE}{shapes}"), None).unwrap();
        let shapes = load_shapes(&sg, &sp).unwrap();
        let data = parse_turtle(&format!("{PRE}{data}"), None).unwrap().0;
        let onto = parse_turtle(&format!("{PRE}{ontology}"), None).unwrap().0;
        Validator::new(&shapes, &onto).with_prefixes(&sp).validate(&data)
    }

    #[test]
    fn empty_data_conforms() {
        let r = run("ex:S a sh:NodeShape ; sh:targetClass ex:T ; sh:property [ sh:path ex:p ; sh:minCount 1 ] .", "", "");
        assert!(r.conforms);
    }

    #[test]
    fn min_count_and_class_through_ontology() {
        let shapes = "ex:S a sh:NodeShape ; sh:targetClass ex:T ;
            sh:property [ sh:path ex:p ; sh:minCount 1 ] ;
            sh:property [ sh:path ex:q ; sh:class ex:Metric ] .";
        let onto = "ex:Sub rdfs:subClassOf ex:T . ex:m1 a ex:Metric .";
        let r = run(shapes, "ex:a a ex:Sub ; ex:q ex:m1 , ex:m2 .", onto);
        assert_eq!(r.results.len(), 2);
        let msgs: Vec<_> = r.results.iter().map(|r| r.message.as_str()).collect();
        assert!(msgs.contains(&"Expected at least 1 value(s) on ex:p, found 0."), "{msgs:?}");
        assert!(msgs.contains(&"Value ex:m2 is not an instance of ex:Metric."), "{msgs:?}");
    }

    #[test]
    fn targets_limited_to_data_nodes() {
        let r = run("ex:S a sh:NodeShape ; sh:targetClass ex:T ; sh:hasValue ex:never .", "ex:x ex:p 1 .", "ex:o a ex:T .");
        assert!(r.conforms);
    }

    #[test]
    fn or_datatype_pattern_and_in() {
        let shapes = r#"ex:S a sh:NodeShape ; sh:targetSubjectsOf ex:v ;
            sh:property [ sh:path ex:v ; sh:or ( [ sh:datatype xsd:integer ] [ sh:datatype xsd:decimal ] ) ] ;
            sh:property [ sh:path ex:u ; sh:pattern "^[a-z]+$" ; sh:in ( "kbps" "ms" ) ] ."#;
        let r = run(shapes, r#"ex:a ex:v 1 , 2.5 , "x" ; ex:u "kbps" , "Mbps" , "s" ."#, "");
        let vals: Vec<_> = r.results.iter().map(|r| r.value.clone().unwrap()).collect();
        assert_eq!(r.results.len(), 4, "{:?}", r.results);
        assert!(vals.contains(&Term::string("x")));
        assert!(vals.contains(&Term::string("Mbps")));
    }

    #[test]
    fn shape_message_template_and_severity() {
        let shapes = "ex:S a sh:NodeShape ; sh:targetNode ex:n ; sh:nodeKind sh:Literal ;
            sh:severity sh:Warning ; sh:message \"{$this} must be a literal\" .";
        assert!(run(shapes, "", "").results.is_empty());
        let r = run(shapes, "ex:n ex:p 1 .", "");
        assert_eq!(r.results.len(), 1);
        assert_eq!(r.results[0].severity, Severity::Warning);
        assert_eq!(r.results[0].message, "ex:n must be a literal");
        assert!(r.conforms);
    }

    #[test]
    fn sparql_constraint_with_message_variable() {
        let shapes = r#"ex:S a sh:NodeShape ; sh:targetClass ex:T ;
            sh:sparql [ sh:message "{$this} points at {?value}" ; sh:select """
                SELECT $this ?value ?message WHERE {
                    $this ex:p ?value .
                    OPTIONAL { ?value ex:bad true . BIND("override {?value}" AS ?message) }
                }""" ] ."#;
        let r = run(shapes, "ex:a a ex:T ; ex:p ex:b , ex:c . ex:c ex:bad true .", "");
        let msgs: Vec<_> = r.results.iter().map(|r| r.message.clone()).collect();
        assert_eq!(msgs, ["ex:a points at ex:b", "override ex:c"]);
    }

    #[test]
    fn min_inclusive_numeric() {
        let shapes = "ex:S a sh:NodeShape ; sh:targetSubjectsOf ex:n ; sh:property [ sh:path ex:n ; sh:minInclusive 0 ] .";
        let r = run(shapes, "ex:a ex:n 0 , -1 , 2.5 , \"z\" .", "");
        assert_eq!(r.results.len(), 2);
        assert!(r.results.iter().all(|x| x.source_constraint == Some(Term::iri(&format!("{}MinInclusiveConstraintComponent", sh::NS)))));
    }

    #[test]
    fn exercised_constraints_tracked() {
        let (sg, sp) = parse_turtle(&format!("{PRE}ex:S a sh:NodeShape ; sh:targetClass ex:T ; sh:nodeKind sh:IRI ."), None).unwrap();
        let shapes = load_shapes(&sg, &sp).unwrap();
        let empty = Graph::new();
        let v = Validator::new(&shapes, &empty);
        assert!(v.validate_traced(&Graph::new()).exercised.is_empty());
        let data = parse_turtle(&format!("{PRE}ex:a a ex:T ."), None).unwrap().0;
        assert_eq!(v.validate_traced(&data).exercised.len(), 1);
    }
}
