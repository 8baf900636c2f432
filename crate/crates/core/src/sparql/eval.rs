//! Left-to-right evaluation with sideways binding propagation.
//!
//! Each group element is evaluated once per incoming solution with that
//! solution's bindings already substituted, so pre-bound variables (such as
//! `$this`) restrict matching from the first pattern on. FILTER and
//! FILTER NOT EXISTS are applied after the last element of their group.
//! Sub-selects receive only the bound variables they group by (or project,
//! without aggregation) and are joined back afterwards.

use std::cell::{OnceCell, RefCell};
use std::collections::HashMap;
use std::rc::Rc;

use indexmap::{IndexMap, IndexSet};

use super::ast::*;
use super::expr::{ebv, eval_expr};
use super::Solution;
use crate::rdf::{Graph, Term};

/// Runs `query` over `graph` with `pre` injected before pattern matching.
pub fn evaluate(query: &Query, graph: &Graph, pre: &Solution) -> Vec<Solution> {
    Evaluator::new(graph).query(query, pre)
}

/// Nodes reachable from `start` along `path`, each once, in discovery order.
pub fn eval_path(graph: &Graph, start: &Term, path: &PathExpr) -> IndexSet<Term> {
    Evaluator::new(graph).forward(path, start).into_iter().collect()
}

/// Sub-select results keyed by query address and injected bindings.
type SubselectCache = RefCell<HashMap<(usize, Solution), Rc<Vec<Solution>>>>;

struct Evaluator<'g> {
    graph: &'g Graph,
    nodes: OnceCell<Vec<Term>>,
    subselect_cache: SubselectCache,
}

impl<'g> Evaluator<'g> {
    fn new(graph: &'g Graph) -> Self {
        Evaluator { graph, nodes: OnceCell::new(), subselect_cache: RefCell::new(HashMap::new()) }
    }

    fn nodes(&self) -> &[Term] {
        self.nodes.get_or_init(|| self.graph.nodes())
    }

    fn query(&self, q: &Query, pre: &Solution) -> Vec<Solution> {
        let solutions = self.group(&q.pattern, vec![pre.clone()]);
        if q.has_aggregate() {
            return aggregate(q, solutions);
        }
        solutions
            .into_iter()
            .map(|s| s.project(q.projected_vars()))
            .collect()
    }

    fn group(&self, g: &GroupPattern, input: Vec<Solution>) -> Vec<Solution> {
        let mut sols = input;
        let mut filters: Vec<&Element> = Vec::new();
        for el in &g.elements {
            if sols.is_empty() {
                break;
            }
            sols = match el {
                Element::Triple(tp) => sols.iter().flat_map(|s| self.triple(tp, s)).collect(),
                Element::Optional(inner) => sols
                    .into_iter()
                    .flat_map(|s| {
                        let ext = self.group(inner, vec![s.clone()]);
                        if ext.is_empty() {
                            vec![s]
                        } else {
                            ext
                        }
                    })
                    .collect(),
                Element::Union(branches) => sols
                    .iter()
                    .flat_map(|s| branches.iter().flat_map(move |b| self.group(b, vec![s.clone()])))
                    .collect(),
                Element::Group(inner) => self.group(inner, sols),
                Element::Filter(_) | Element::NotExists(_) => {
                    filters.push(el);
                    sols
                }
                Element::Bind(expr, var) => sols
                    .into_iter()
                    .map(|mut s| {
                        if s.get(var).is_none() {
                            if let Ok(t) = eval_expr(expr, &s) {
                                s.insert(var.clone(), t);
                            }
                        }
                        s
                    })
                    .collect(),
                Element::SubSelect(q) => sols.iter().flat_map(|s| self.subselect(q, s)).collect(),
            };
        }
        if !filters.is_empty() {
            sols.retain(|s| {
                filters.iter().all(|f| match f {
                    Element::Filter(e) => eval_expr(e, s).and_then(|t| ebv(&t)) == Ok(true),
                    Element::NotExists(inner) => self.group(inner, vec![s.clone()]).is_empty(),
                    _ => unreachable!(),
                })
            });
        }
        sols
    }

    fn subselect(&self, q: &Query, s: &Solution) -> Vec<Solution> {
        let mut keys: Vec<&Var> = if q.has_aggregate() { q.group_by.iter().collect() } else { q.projected_vars().collect() };
        // `$` variables act as substitutions and reach into nested queries too.
        keys.extend(q.prebindable.iter().filter(|v| q.mentions(v)));
        let mut inject = Solution::new();
        for k in keys {
            if let Some(t) = s.get(k) {
                inject.insert(k.clone(), t.clone());
            }
        }
        let key = (q as *const Query as usize, inject);
        let cached = self.subselect_cache.borrow().get(&key).cloned();
        let results = match cached {
            Some(r) => r,
            None => {
                let r = Rc::new(self.query(q, &key.1));
                self.subselect_cache.borrow_mut().insert(key, r.clone());
                r
            }
        };
        results.iter().filter_map(|r| s.merge(r)).collect()
    }

    fn triple(&self, tp: &TriplePattern, s: &Solution) -> Vec<Solution> {
        let subject = resolve(&tp.subject, s);
        let object = resolve(&tp.object, s);
        let predicate = match &tp.verb {
            Verb::Var(v) => s.get(v).cloned(),
            Verb::Path(PathExpr::Predicate(i)) => Some(Term::Iri(i.clone())),
            Verb::Path(path) => return self.path_pattern(tp, path, subject, object, s),
        };
        if subject.as_ref().is_some_and(Term::is_literal) {
            return Vec::new();
        }
        let mut out = Vec::new();
        for t in self.graph.match_triples(subject.as_ref(), predicate.as_ref(), object.as_ref()) {
            let mut next = s.clone();
            let ok = bind(&mut next, &tp.subject, &t.subject)
                && match &tp.verb {
                    Verb::Var(v) => bind_var(&mut next, v, &t.predicate),
                    Verb::Path(_) => true,
                }
                && bind(&mut next, &tp.object, &t.object);
            if ok {
                out.push(next);
            }
        }
        out
    }

    fn path_pattern(
        &self,
        tp: &TriplePattern,
        path: &PathExpr,
        subject: Option<Term>,
        object: Option<Term>,
        s: &Solution,
    ) -> Vec<Solution> {
        // With variables at both ends, a zero-length match only ranges over graph nodes, even
        // when an earlier pattern bound the variable to a term the graph never mentions.
        let both_vars = matches!((&tp.subject, &tp.object), (VarOrTerm::Var(_), VarOrTerm::Var(_)));
        let mut out = Vec::new();
        let mut emit = |from: &Term, to: &Term| {
            if both_vars && from == to && !self.graph.mentions(from) {
                return;
            }
            let mut next = s.clone();
            if bind(&mut next, &tp.subject, from) && bind(&mut next, &tp.object, to) {
                out.push(next);
            }
        };
        match (subject, object) {
            (Some(from), _) => {
                for to in self.forward(path, &from) {
                    emit(&from, &to);
                }
            }
            (None, Some(to)) => {
                for from in self.backward(path, &to) {
                    emit(&from, &to);
                }
            }
            (None, None) => {
                for from in self.nodes() {
                    for to in self.forward(path, from) {
                        emit(from, &to);
                    }
                }
            }
        }
        out
    }

    /// Multiset of path end points: sequences keep duplicates, `*` yields each node once.
    fn forward(&self, path: &PathExpr, start: &Term) -> Vec<Term> {
        match path {
            PathExpr::Predicate(p) => {
                if start.is_literal() {
                    return Vec::new();
                }
                self.graph.objects(start, &Term::Iri(p.clone())).cloned().collect()
            }
            PathExpr::Sequence(a, b) => self.forward(a, start).iter().flat_map(|x| self.forward(b, x)).collect(),
            PathExpr::ZeroOrMore(inner) => closure(start, |n| self.forward(inner, n)),
        }
    }

    fn backward(&self, path: &PathExpr, end: &Term) -> Vec<Term> {
        match path {
            PathExpr::Predicate(p) => self.graph.subjects(&Term::Iri(p.clone()), end).cloned().collect(),
            PathExpr::Sequence(a, b) => self.backward(b, end).iter().flat_map(|x| self.backward(a, x)).collect(),
            PathExpr::ZeroOrMore(inner) => closure(end, |n| self.backward(inner, n)),
        }
    }
}

/// Breadth-first reachability including the start node.
fn closure(start: &Term, step: impl Fn(&Term) -> Vec<Term>) -> Vec<Term> {
    let mut seen: IndexSet<Term> = IndexSet::new();
    seen.insert(start.clone());
    let mut i = 0;
    while i < seen.len() {
        let node = seen[i].clone();
        for n in step(&node) {
            seen.insert(n);
        }
        i += 1;
    }
    seen.into_iter().collect()
}

fn resolve(vt: &VarOrTerm, s: &Solution) -> Option<Term> {
    match vt {
        VarOrTerm::Var(v) => s.get(v).cloned(),
        VarOrTerm::Term(t) => Some(t.clone()),
    }
}

fn bind(s: &mut Solution, vt: &VarOrTerm, value: &Term) -> bool {
    match vt {
        VarOrTerm::Var(v) => bind_var(s, v, value),
        VarOrTerm::Term(t) => t == value,
    }
}

fn bind_var(s: &mut Solution, v: &Var, value: &Term) -> bool {
    match s.get(v) {
        Some(existing) => existing == value,
        None => {
            s.insert(v.clone(), value.clone());
            true
        }
    }
}

fn aggregate(q: &Query, solutions: Vec<Solution>) -> Vec<Solution> {
    let mut groups: IndexMap<Vec<Option<Term>>, Vec<Solution>> = IndexMap::new();
    if q.group_by.is_empty() {
        groups.insert(Vec::new(), Vec::new());
    }
    for s in solutions {
        let key = q.group_by.iter().map(|v| s.get(v).cloned()).collect();
        groups.entry(key).or_default().push(s);
    }
    groups
        .into_iter()
        .map(|(key, members)| {
            let mut out = Solution::new();
            for (v, t) in q.group_by.iter().zip(key) {
                if let Some(t) = t {
                    out.insert(v.clone(), t);
                }
            }
            for p in &q.projection {
                if let Projection::Count { var, alias } = p {
                    let n = match var {
                        Some(v) => members.iter().filter(|m| m.get(v).is_some()).count(),
                        None => members.len(),
                    };
                    out.insert(alias.clone(), Term::integer(n as i64));
                }
            }
            out
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::vocab::rdf;
    use crate::rdf::{parse_turtle, PrefixMap};
    use crate::sparql::parse_query;

    const PREFIX: &str = "@prefix ex: <http://example.org/> .\n@prefix rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#> .\n";

    fn graph(src: &str) -> (Graph, PrefixMap) {
        let (g, mut p) = parse_turtle(&format!("{PREFIX}{src}"), None).unwrap();
        p.merge_missing(&PrefixMap::common());
        (g, p)
    }

    fn run(src: &str, query: &str, pre: &[(&str, Term)]) -> Vec<Solution> {
        let (g, p) = graph(src);
        let q = parse_query(query, &p).unwrap();
        let pre: Solution = pre.iter().map(|(k, v)| (Var::from(*k), v.clone())).collect();
        evaluate(&q, &g, &pre)
    }

    #[test]
    fn empty_graph_yields_nothing() {
        assert!(run("", "SELECT ?s WHERE { ?s ?p ?o }", &[]).is_empty());
    }

    #[test]
    fn zero_or_more_includes_start() {
        let (g, _) = graph("ex:a ex:q ex:b .");
        let p = PathExpr::star(PathExpr::Predicate(crate::rdf::Iri::new("http://example.org/p").unwrap()));
        let out = eval_path(&g, &Term::iri("http://example.org/a"), &p);
        assert_eq!(out.into_iter().collect::<Vec<_>>(), vec![Term::iri("http://example.org/a")]);
    }

    #[test]
    fn list_members_via_rest_star_first() {
        let (g, _) = graph("ex:s ex:p ( ex:x ex:y ex:z ) .");
        let head = g.object(&Term::iri("http://example.org/s"), &Term::iri("http://example.org/p")).unwrap().clone();
        let iri = |s: &str| crate::rdf::Iri::new(s).unwrap();
        let path = PathExpr::seq(PathExpr::star(PathExpr::Predicate(iri(rdf::REST))), PathExpr::Predicate(iri(rdf::FIRST)));
        let members: Vec<Term> = eval_path(&g, &head, &path).into_iter().collect();
        assert_eq!(members, g.list_to_sequence(&head).unwrap());
    }

    #[test]
    fn single_member_nested_list() {
        let out = run(
            "ex:c ex:allOf ( ex:C1 ) .",
            "SELECT ?arg WHERE { ex:c ex:allOf/rdf:rest*/rdf:first ?arg }",
            &[],
        );
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].get("arg"), Some(&Term::iri("http://example.org/C1")));
    }

    #[test]
    fn count_subselect_counts_duplicates() {
        let out = run(
            "ex:s ex:p ( 1 1 2 ) .",
            "SELECT ?n WHERE { ex:s ex:p ?l { SELECT ?l (COUNT(?i) AS ?n) WHERE { ?l rdf:rest*/rdf:first ?i } GROUP BY ?l } }",
            &[],
        );
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].get("n"), Some(&Term::integer(3)));
    }

    #[test]
    fn optional_leaves_unbound() {
        let out = run(
            "ex:a ex:p 1 . ex:b ex:p 2 . ex:a ex:q 3 .",
            "SELECT ?s ?q WHERE { ?s ex:p ?v OPTIONAL { ?s ex:q ?q } }",
            &[],
        );
        assert_eq!(out.len(), 2);
        assert!(out[0].get("q").is_some());
        assert!(out[1].get("q").is_none());
    }

    #[test]
    fn prebinding_restricts() {
        let out = run(
            "ex:a ex:p 1 . ex:b ex:p 2 .",
            "SELECT $this ?v WHERE { $this ex:p ?v }",
            &[("this", Term::iri("http://example.org/b"))],
        );
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].get("v"), Some(&Term::integer(2)));
    }

    #[test]
    fn not_exists_and_union() {
        let out = run(
            "ex:a a ex:Good . ex:b a ex:Fine . ex:c a ex:Other . ex:l ex:has ex:a , ex:b , ex:c , true .",
            "SELECT ?x WHERE { ex:l ex:has ?x FILTER NOT EXISTS { { ?x a ex:Good } UNION { ?x a ex:Fine } UNION { FILTER(isLiteral(?x)) } } }",
            &[],
        );
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].get("x"), Some(&Term::iri("http://example.org/c")));
    }

    #[test]
    fn bind_if_over_nil() {
        let out = run(
            "ex:f ex:args rdf:nil .",
            "SELECT ?n WHERE { ex:f ex:args ?l OPTIONAL { SELECT ?l (COUNT(?i) AS ?c) WHERE { ?l rdf:rest*/rdf:first ?i } GROUP BY ?l } BIND(IF(?l = rdf:nil, 0, ?c) AS ?n) }",
            &[],
        );
        assert_eq!(out[0].get("n"), Some(&Term::integer(0)));
    }
}
