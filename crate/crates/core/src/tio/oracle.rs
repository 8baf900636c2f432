//! Reference implementations of the flagship constraints, written directly against the
//! graph API. They read `data` together with the ontology, exactly as the validator does,
//! and produce the same results (focus, value, message) as the SHACL components.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::sync::LazyLock;

use regex::Regex;

use super::{component_iri, family, COMPARISONS};
use crate::rdf::vocab::{rdf, rdfs, tio, xsd};
use crate::rdf::{ClassHierarchy, Graph, Literal, PrefixMap, Term};
use crate::shacl::{Severity, ValidationResult};

/// How many nested calls result-type inference follows before giving up.
pub const INFERENCE_DEPTH: usize = 8;

static MAGNITUDE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^[+-]?[0-9]+([.][0-9]+)?").expect("valid pattern"));

pub struct Oracle {
    union: Graph,
    hierarchy: ClassHierarchy,
    prefixes: PrefixMap,
}

/// How an argument list looks when walked the way the SPARQL queries walk it.
enum ListWalk {
    /// `rdf:nil` is unreachable or some cell lacks `rdf:first`.
    Malformed,
    /// Cells in walk order with their `rdf:first` values.
    Cells(Vec<(Term, Vec<Term>)>),
}

impl Oracle {
    pub fn new(data: &Graph, ontology: &Graph, prefixes: &PrefixMap) -> Self {
        let union = data.union(ontology);
        let hierarchy = ClassHierarchy::new(&[&union]);
        let mut prefixes = prefixes.clone();
        prefixes.merge_missing(&PrefixMap::common());
        Oracle { union, hierarchy, prefixes }
    }

    fn render(&self, t: &Term) -> String {
        self.prefixes.render(t)
    }

    fn result(&self, family: &str, focus: &Term, value: Option<Term>, path: Option<Term>, message: String) -> ValidationResult {
        let component = Term::iri(&component_iri(family));
        ValidationResult {
            focus_node: focus.clone(),
            path,
            value,
            severity: Severity::Violation,
            source_shape: component.clone(),
            source_constraint: Some(component),
            message,
        }
    }

    fn asserted_types<'a>(&'a self, node: &Term) -> impl Iterator<Item = &'a Term> + use<'a> {
        self.union.objects(node, &Term::iri(rdf::TYPE))
    }

    /// Some asserted type of `node` is `class` or one of its subclasses.
    fn has_type(&self, node: &Term, class: &Term) -> bool {
        self.asserted_types(node).any(|t| self.hierarchy.is_subclass(t, class))
    }

    fn is_function(&self, f: &Term) -> bool {
        self.union.has(f, &Term::iri(rdf::TYPE), &Term::iri(tio::FUNCTION))
    }

    /// `(function, argument list)` pairs hanging off `node`.
    fn calls(&self, node: &Term) -> Vec<(Term, Term)> {
        if node.is_literal() {
            return Vec::new();
        }
        self.union
            .match_triples(Some(node), None, None)
            .filter(|t| self.is_function(&t.predicate))
            .map(|t| (t.predicate.clone(), t.object.clone()))
            .collect()
    }

    fn carries_boolean_function(&self, node: &Term) -> bool {
        let boolean = Term::iri(tio::BOOLEAN_FUNCTION);
        !node.is_literal() && self.union.match_triples(Some(node), None, None).any(|t| self.has_type(&t.predicate, &boolean))
    }

    fn rest_closure(&self, head: &Term) -> Vec<Term> {
        let rest = Term::iri(rdf::REST);
        let mut seen = HashSet::new();
        let mut order = Vec::new();
        let mut queue = VecDeque::from([head.clone()]);
        while let Some(n) = queue.pop_front() {
            if !seen.insert(n.clone()) {
                continue;
            }
            if !n.is_literal() {
                queue.extend(self.union.objects(&n, &rest).cloned());
            }
            order.push(n);
        }
        order
    }

    fn walk(&self, head: &Term) -> ListWalk {
        let first = Term::iri(rdf::FIRST);
        let nil = Term::iri(rdf::NIL);
        let reach = self.rest_closure(head);
        if !reach.contains(&nil) {
            return ListWalk::Malformed;
        }
        let mut cells = Vec::new();
        for cell in reach.into_iter().filter(|c| *c != nil) {
            let values: Vec<Term> = if cell.is_literal() { Vec::new() } else { self.union.objects(&cell, &first).cloned().collect() };
            if values.is_empty() {
                return ListWalk::Malformed;
            }
            cells.push((cell, values));
        }
        ListWalk::Cells(cells)
    }

    /// Members reached by `rdf:rest*/rdf:first`, regardless of whether the list is well formed.
    fn members(&self, head: &Term) -> Vec<Term> {
        let first = Term::iri(rdf::FIRST);
        let mut out: Vec<Term> = Vec::new();
        for cell in self.rest_closure(head) {
            if !cell.is_literal() {
                out.extend(self.union.objects(&cell, &first).cloned());
            }
        }
        out
    }

    /// 1-based position of each cell: the number of cells from `head` up to and including it.
    fn positions(&self, head: &Term, cells: &[(Term, Vec<Term>)]) -> Vec<usize> {
        let reach = self.rest_closure(head);
        let closures: Vec<Vec<Term>> = reach.iter().map(|p| self.rest_closure(p)).collect();
        cells.iter().map(|(c, _)| closures.iter().filter(|cl| cl.contains(c)).count()).collect()
    }

    pub fn check_function_arity(&self, focus: &Term) -> Vec<ValidationResult> {
        let mut out = Vec::new();
        for (f, args) in self.calls(focus) {
            let Some(Term::Literal(min)) = self.union.object(&f, &Term::iri(tio::ARITY_MIN)) else { continue };
            let max = self.union.object(&f, &Term::iri(tio::ARITY_MAX));
            match self.walk(&args) {
                ListWalk::Malformed => {
                    let msg = format!("Function {} has a malformed argument list {}.", self.render(&f), self.render(&args));
                    out.push(self.result(family::ARITY, focus, Some(args.clone()), None, msg));
                }
                ListWalk::Cells(cells) => {
                    let count: usize = cells.iter().map(|(_, v)| v.len()).sum();
                    let min_n: i64 = min.lexical().parse().unwrap_or(0);
                    let max_n: Option<i64> = max.and_then(|m| m.as_literal()).and_then(|l| l.lexical().parse().ok());
                    if (count as i64) < min_n || max_n.is_some_and(|m| count as i64 > m) {
                        let shown = max.map(|m| self.render(m)).unwrap_or_else(|| "unbounded".into());
                        let msg = format!(
                            "Function {} expects between {} and {} arguments, got {}.",
                            self.render(&f),
                            min.lexical(),
                            shown,
                            count
                        );
                        out.push(self.result(family::ARITY, focus, Some(focus.clone()), None, msg));
                    }
                }
            }
        }
        out
    }

    /// Result type of a call node, or `None` when it cannot be determined.
    pub fn infer_result_type(&self, call: &Term) -> Option<Term> {
        self.result_types(call, 0).into_iter().next()
    }

    fn result_types(&self, call: &Term, depth: usize) -> Vec<Term> {
        if depth >= INFERENCE_DEPTH {
            return Vec::new();
        }
        let resource = Term::iri(rdf::RESOURCE);
        let mut out = Vec::new();
        for (f, args) in self.calls(call) {
            for rt in self.union.objects(&f, &Term::iri(tio::RESULT_TYPE)) {
                if *rt != resource {
                    out.push(rt.clone());
                    continue;
                }
                // Polymorphic accessor: the range of a first argument that fits the declared type.
                let Some(first_type) = self.first_argument_type(&f) else { continue };
                let Some(a0) = self.union.object(&args, &Term::iri(rdf::FIRST)).cloned() else { continue };
                if self.satisfies(&a0, &first_type, depth + 1) {
                    out.extend(self.union.objects(&a0, &Term::iri(rdfs::RANGE)).cloned());
                }
            }
        }
        out
    }

    fn first_argument_type(&self, f: &Term) -> Option<Term> {
        let head = self.union.object(f, &Term::iri(tio::ARGUMENT_TYPES))?;
        self.union.object(head, &Term::iri(rdf::FIRST)).cloned()
    }

    fn satisfies(&self, value: &Term, ty: &Term, depth: usize) -> bool {
        if self.has_type(value, ty) {
            return true;
        }
        if let Term::Literal(l) = value {
            return self.hierarchy.is_subclass(&Term::Iri(l.datatype().clone()), ty);
        }
        self.result_types(value, depth).iter().any(|rt| self.hierarchy.is_subclass(rt, ty))
    }

    pub fn check_argument_types(&self, focus: &Term) -> Vec<ValidationResult> {
        let resource = Term::iri(rdf::RESOURCE);
        let mut out = Vec::new();
        for (f, args) in self.calls(focus) {
            let ListWalk::Cells(arg_cells) = self.walk(&args) else { continue };
            let arg_pos = self.positions(&args, &arg_cells);
            for type_list in self.union.objects(&f, &Term::iri(tio::ARGUMENT_TYPES)) {
                let type_cells: Vec<(Term, Vec<Term>)> = self
                    .rest_closure(type_list)
                    .into_iter()
                    .filter_map(|c| {
                        let v: Vec<Term> = if c.is_literal() { Vec::new() } else { self.union.objects(&c, &Term::iri(rdf::FIRST)).cloned().collect() };
                        (!v.is_empty()).then_some((c, v))
                    })
                    .collect();
                let type_pos = self.positions(type_list, &type_cells);
                for ((_, values), p) in arg_cells.iter().zip(&arg_pos) {
                    for ((_, types), q) in type_cells.iter().zip(&type_pos) {
                        if p != q {
                            continue;
                        }
                        for ty in types.iter().filter(|t| **t != resource) {
                            for v in values {
                                if !self.satisfies(v, ty, 0) {
                                    let msg = format!("Function {} expects {}.", self.render(&f), self.render(ty));
                                    out.push(self.result(family::ARGUMENT_TYPE, focus, Some(v.clone()), None, msg));
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }

    fn boolean_evaluable(&self, v: &Term) -> bool {
        if let Term::Literal(l) = v {
            return l.datatype().as_str() == xsd::BOOLEAN;
        }
        self.has_type(v, &Term::iri(tio::EVALUABLE)) || self.carries_boolean_function(v)
    }

    pub fn check_boolean_operands(&self, focus: &Term) -> Vec<ValidationResult> {
        let mut out = Vec::new();
        for op in [tio::ALL_OF, tio::ANY_OF].map(Term::iri) {
            for list in self.union.objects(focus, &op) {
                for v in self.members(list) {
                    if !self.boolean_evaluable(&v) {
                        let msg = format!("Operator {} argument {} is not boolean-evaluable.", self.render(&op), self.render(&v));
                        out.push(self.result(family::LOGICAL_OPERATOR, focus, Some(v), None, msg));
                    }
                }
            }
        }
        out
    }

    pub fn check_actionable(&self, focus: &Term) -> Vec<ValidationResult> {
        if self.carries_boolean_function(focus) {
            return Vec::new();
        }
        let actionable = Term::iri(tio::ACTIONABLE);
        let classes: BTreeSet<&Term> = self.asserted_types(focus).filter(|c| self.hierarchy.is_subclass(c, &actionable)).collect();
        classes
            .into_iter()
            .map(|c| {
                let msg = format!(
                    "Actionable instance of class {} missing BooleanFunction property. Add log:allOf, log:anyOf, etc.",
                    self.render(c)
                );
                self.result(family::ACTIONABLE, focus, Some(focus.clone()), None, msg)
            })
            .collect()
    }

    pub fn check_operand_hierarchy(&self, focus: &Term) -> Vec<ValidationResult> {
        let mut out = Vec::new();
        let checks = [(tio::INTENT, tio::INTENT_OPERAND), (tio::EXPECTATION, tio::EXPECTATION_OPERAND)];
        for (owner, operand) in checks.map(|(a, b)| (Term::iri(a), Term::iri(b))) {
            if !self.has_type(focus, &owner) {
                continue;
            }
            for (op, list) in self.boolean_calls(focus) {
                for v in self.members(&list) {
                    if self.has_type(&v, &operand) {
                        continue;
                    }
                    let msg = if owner.is(tio::INTENT) {
                        format!(
                            "Intent {} references non-IntentOperand in {}. Wrap Conditions in PropertyExpectation.",
                            self.render(focus),
                            self.render(&op)
                        )
                    } else {
                        format!("{} references non-{} {} in {}.", self.render(focus), self.render(&operand), self.render(&v), self.render(&op))
                    };
                    out.push(self.result(family::OPERAND_HIERARCHY, focus, Some(v), None, msg));
                }
            }
        }
        out
    }

    fn boolean_calls(&self, node: &Term) -> Vec<(Term, Term)> {
        let boolean = Term::iri(tio::BOOLEAN_FUNCTION);
        if node.is_literal() {
            return Vec::new();
        }
        self.union
            .match_triples(Some(node), None, None)
            .filter(|t| self.has_type(&t.predicate, &boolean))
            .map(|t| (t.predicate.clone(), t.object.clone()))
            .collect()
    }

    pub fn check_vocabulary_usage(&self, focus: &Term, namespace: &str) -> Vec<ValidationResult> {
        if focus.is_literal() {
            return Vec::new();
        }
        let ty = Term::iri(rdf::TYPE);
        let property = Term::iri(rdf::PROPERTY);
        self.union
            .match_triples(Some(focus), None, None)
            .filter(|t| t.predicate.as_iri().is_some_and(|p| p.as_str().starts_with(namespace)))
            .filter(|t| !self.union.has(&t.predicate, &ty, &property))
            .map(|t| {
                let msg = format!("Property {} is not declared in the ontology.", self.render(&t.predicate));
                self.result(family::VOCABULARY, focus, Some(t.object.clone()), Some(t.predicate.clone()), msg)
            })
            .collect()
    }

    pub fn check_unit_match(&self, focus: &Term) -> Vec<ValidationResult> {
        let mut out = Vec::new();
        for f in COMPARISONS.map(Term::iri) {
            for list in self.union.objects(focus, &f) {
                let quantities: Vec<Literal> = self
                    .members(list)
                    .into_iter()
                    .filter_map(|m| m.as_literal().cloned())
                    .filter(|l| l.datatype().as_str() == tio::QUANTITY_DATATYPE)
                    .collect();
                for a in &quantities {
                    for b in &quantities {
                        let (ua, ub) = (strip_magnitude(a.lexical()), strip_magnitude(b.lexical()));
                        if ua != ub && a.lexical() < b.lexical() {
                            let msg = format!(
                                "Function {} compares quantities with mismatched units {} and {}.",
                                self.render(&f),
                                ua,
                                ub
                            );
                            out.push(self.result(family::UNIT_MATCH, focus, Some(Term::Literal(b.clone())), None, msg));
                        }
                    }
                }
            }
        }
        out
    }

    /// Every flagship check that needs no extra parameter, plus the vocabulary check for each namespace.
    pub fn check_all(&self, focus: &Term, namespaces: &[String]) -> Vec<ValidationResult> {
        let mut out = self.check_function_arity(focus);
        out.extend(self.check_argument_types(focus));
        out.extend(self.check_boolean_operands(focus));
        out.extend(self.check_actionable(focus));
        out.extend(self.check_operand_hierarchy(focus));
        out.extend(self.check_unit_match(focus));
        for ns in namespaces {
            out.extend(self.check_vocabulary_usage(focus, ns));
        }
        out
    }
}

/// What remains of a quantity lexical form after removing the leading magnitude.
fn strip_magnitude(lexical: &str) -> String {
    MAGNITUDE.replace(lexical, "").into_owned()
}
