//! Random graphs and queries for the SPARQL dialect, and a brute-force nested-loop
//! evaluator to compare `evaluate` against.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use intent_shacl::rdf::{Graph, PrefixMap, Term, Triple};
use intent_shacl::sparql::{evaluate, parse_query, Solution};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

pub const EX: &str = "http://example.org/";

pub fn node(i: usize) -> Term {
    match i {
        0..=4 => Term::iri(&format!("{EX}n{i}")),
        5 => Term::blank("b5"),
        _ => Term::blank("b6"),
    }
}

pub fn pred(i: usize) -> Term {
    Term::iri(&format!("{EX}p{i}"))
}

pub fn object(i: usize) -> Term {
    match i {
        0..=6 => node(i),
        7 => Term::integer(1),
        8 => Term::integer(2),
        _ => Term::string("x"),
    }
}

pub fn graph_strategy() -> impl Strategy<Value = Graph> {
    prop::collection::vec((0usize..7, 0usize..3, 0usize..10), 0..=50).prop_map(|ts| {
        let mut g = Graph::new();
        for (s, p, o) in ts {
            g.insert(Triple::new(node(s), pred(p), object(o)).unwrap());
        }
        g
    })
}

/// A position in a triple pattern: a variable or a constant IRI.
#[derive(Debug, Clone)]
pub enum Slot {
    Var(usize),
    Const(Term),
}

impl Slot {
    pub fn text(&self) -> String {
        match self {
            Slot::Var(v) => format!("?v{v}"),
            Slot::Const(t) => match t.as_iri() {
                Some(i) => format!("<{}>", i.as_str()),
                None => t.to_string(),
            },
        }
    }
}

#[derive(Debug, Clone)]
pub enum Verb {
    Pred(usize),
    /// `p/q`
    Seq(usize, usize),
    /// `p*`
    Star(usize),
}

impl Verb {
    pub fn text(&self) -> String {
        match self {
            Verb::Pred(p) => format!("<{EX}p{p}>"),
            Verb::Seq(a, b) => format!("<{EX}p{a}>/<{EX}p{b}>"),
            Verb::Star(p) => format!("<{EX}p{p}>*"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Pattern {
    pub s: Slot,
    pub verb: Verb,
    pub o: Slot,
}

#[derive(Debug, Clone)]
pub enum Filter {
    EqIri(usize, usize),
    NeqIri(usize, usize),
    Bound(usize),
    NotBound(usize),
    IsLiteral(usize),
    IsIri(usize),
}

impl Filter {
    pub fn text(&self) -> String {
        match self {
            Filter::EqIri(v, n) => format!("FILTER(?v{v} = <{EX}n{n}>)"),
            Filter::NeqIri(v, n) => format!("FILTER(?v{v} != <{EX}n{n}>)"),
            Filter::Bound(v) => format!("FILTER(BOUND(?v{v}))"),
            Filter::NotBound(v) => format!("FILTER(!BOUND(?v{v}))"),
            Filter::IsLiteral(v) => format!("FILTER(isLiteral(?v{v}))"),
            Filter::IsIri(v) => format!("FILTER(isIRI(?v{v}))"),
        }
    }

    /// SPARQL effective boolean value, with errors (unbound operands) as false.
    pub fn holds(&self, s: &BTreeMap<usize, Term>) -> bool {
        match self {
            Filter::EqIri(v, n) => s.get(v).is_some_and(|t| *t == node(*n)),
            Filter::NeqIri(v, n) => s.get(v).is_some_and(|t| *t != node(*n)),
            Filter::Bound(v) => s.contains_key(v),
            Filter::NotBound(v) => !s.contains_key(v),
            Filter::IsLiteral(v) => s.get(v).is_some_and(Term::is_literal),
            Filter::IsIri(v) => s.get(v).is_some_and(Term::is_iri),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Group {
    pub patterns: Vec<Pattern>,
    pub optional: Option<Vec<Pattern>>,
    pub union: Option<(Vec<Pattern>, Vec<Pattern>)>,
    pub filters: Vec<Filter>,
}

#[derive(Debug, Clone)]
pub struct GenQuery {
    pub project: Vec<usize>,
    pub group: Group,
}

impl Group {
    pub fn variables(&self) -> BTreeSet<usize> {
        let mut all: Vec<&Pattern> = self.patterns.iter().collect();
        all.extend(self.optional.iter().flatten());
        if let Some((a, b)) = &self.union {
            all.extend(a.iter().chain(b));
        }
        all.iter()
            .flat_map(|p| [&p.s, &p.o])
            .filter_map(|s| match s {
                Slot::Var(v) => Some(*v),
                Slot::Const(_) => None,
            })
            .collect()
    }
}

pub fn patterns_text(ps: &[Pattern]) -> String {
    ps.iter().map(|p| format!("{} {} {} .", p.s.text(), p.verb.text(), p.o.text())).collect::<Vec<_>>().join(" ")
}

impl GenQuery {
    pub fn text(&self) -> String {
        let vars: Vec<String> = self.project.iter().map(|v| format!("?v{v}")).collect();
        let g = &self.group;
        let mut body = patterns_text(&g.patterns);
        if let Some((a, b)) = &g.union {
            body += &format!(" {{ {} }} UNION {{ {} }}", patterns_text(a), patterns_text(b));
        }
        if let Some(o) = &g.optional {
            body += &format!(" OPTIONAL {{ {} }}", patterns_text(o));
        }
        for f in &g.filters {
            body += " ";
            body += &f.text();
        }
        format!("SELECT {} WHERE {{ {body} }}", vars.join(" "))
    }
}

pub fn slot() -> impl Strategy<Value = Slot> {
    prop_oneof![3 => (0usize..4).prop_map(Slot::Var), 1 => (0usize..5).prop_map(|n| Slot::Const(node(n)))]
}

pub fn object_slot() -> impl Strategy<Value = Slot> {
    prop_oneof![
        3 => (0usize..4).prop_map(Slot::Var),
        1 => (0usize..10).prop_filter("constants are IRIs or literals", |i| !(5..7).contains(i)).prop_map(|i| Slot::Const(object(i)))
    ]
}

pub fn verb() -> impl Strategy<Value = Verb> {
    prop_oneof![
        6 => (0usize..3).prop_map(Verb::Pred),
        1 => (0usize..3, 0usize..3).prop_map(|(a, b)| Verb::Seq(a, b)),
        1 => (0usize..3).prop_map(Verb::Star),
    ]
}

pub fn pattern() -> impl Strategy<Value = Pattern> {
    (slot(), verb(), object_slot()).prop_map(|(s, verb, o)| Pattern { s, verb, o })
}

pub fn filter() -> impl Strategy<Value = Filter> {
    prop_oneof![
        (0usize..4, 0usize..5).prop_map(|(v, n)| Filter::EqIri(v, n)),
        (0usize..4, 0usize..5).prop_map(|(v, n)| Filter::NeqIri(v, n)),
        (0usize..4).prop_map(Filter::Bound),
        (0usize..4).prop_map(Filter::NotBound),
        (0usize..4).prop_map(Filter::IsLiteral),
        (0usize..4).prop_map(Filter::IsIri),
    ]
}

pub fn query_strategy() -> impl Strategy<Value = GenQuery> {
    let patterns = prop::collection::vec(pattern(), 1..=3);
    let optional = prop::option::weighted(0.3, prop::collection::vec(pattern(), 1..=2));
    let union = prop::option::weighted(0.3, (prop::collection::vec(pattern(), 1..=2), prop::collection::vec(pattern(), 1..=2)));
    let filters = prop::collection::vec(filter(), 0..=2);
    let project = prop::collection::btree_set(0usize..4, 1..=4);
    (patterns, optional, union, filters, project).prop_map(|(mut patterns, optional, union, filters, project)| {
        patterns[0].s = Slot::Var(0);
        let group = Group { patterns, optional, union, filters };
        let occurring = group.variables();
        let mut project: Vec<usize> = project.intersection(&occurring).copied().collect();
        if project.is_empty() {
            project.push(0);
        }
        GenQuery { project, group }
    })
}

pub type Binding = BTreeMap<usize, Term>;

pub fn bind(slot: &Slot, term: &Term, b: &mut Binding) -> bool {
    match slot {
        Slot::Const(c) => c == term,
        Slot::Var(v) => match b.get(v) {
            Some(t) => t == term,
            None => {
                b.insert(*v, term.clone());
                true
            }
        },
    }
}

/// Pairs (start, end) connected by `verb`, as a multiset for `Seq` and a set for `Star`.
pub fn verb_pairs(g: &Graph, verb: &Verb) -> Vec<(Term, Term)> {
    let edges = |p: usize| -> Vec<(Term, Term)> {
        g.iter().filter(|t| t.predicate == pred(p)).map(|t| (t.subject.clone(), t.object.clone())).collect()
    };
    match verb {
        Verb::Pred(p) => edges(*p),
        Verb::Seq(a, b) => {
            let (ea, eb) = (edges(*a), edges(*b));
            let mut out = Vec::new();
            for (s, m) in &ea {
                for (m2, o) in &eb {
                    if m == m2 {
                        out.push((s.clone(), o.clone()));
                    }
                }
            }
            out
        }
        Verb::Star(p) => {
            // Every graph term reaches itself; constants not in the graph are handled in `extend`.
            let e = edges(*p);
            let mut nodes: BTreeSet<Term> = BTreeSet::new();
            for t in g.iter() {
                nodes.insert(t.subject.clone());
                nodes.insert(t.object.clone());
            }
            let mut out = Vec::new();
            for start in &nodes {
                let mut seen = BTreeSet::from([start.clone()]);
                let mut frontier = vec![start.clone()];
                while let Some(n) = frontier.pop() {
                    for (s, o) in &e {
                        if *s == n && seen.insert(o.clone()) {
                            frontier.push(o.clone());
                        }
                    }
                }
                out.extend(seen.into_iter().map(|o| (start.clone(), o)));
            }
            out
        }
    }
}

pub fn extend(g: &Graph, p: &Pattern, input: Vec<Binding>) -> Vec<Binding> {
    let mut pairs = verb_pairs(g, &p.verb);
    if matches!(p.verb, Verb::Star(_)) {
        // Zero-length matches for constants outside the graph.
        for c in [&p.s, &p.o] {
            if let Slot::Const(t) = c {
                if !pairs.iter().any(|(s, _)| s == t) {
                    pairs.push((t.clone(), t.clone()));
                }
            }
        }
    }
    let mut out = Vec::new();
    for b in input {
        for (s, o) in &pairs {
            let mut nb = b.clone();
            if bind(&p.s, s, &mut nb) && bind(&p.o, o, &mut nb) {
                out.push(nb);
            }
        }
    }
    out
}

pub fn bgp(g: &Graph, ps: &[Pattern], input: Vec<Binding>) -> Vec<Binding> {
    ps.iter().fold(input, |acc, p| extend(g, p, acc))
}

pub fn reference(g: &Graph, q: &GenQuery) -> Vec<Binding> {
    let grp = &q.group;
    let mut sols = bgp(g, &grp.patterns, vec![Binding::new()]);
    if let Some((a, b)) = &grp.union {
        sols = sols.into_iter().flat_map(|s| {
            let mut r = bgp(g, a, vec![s.clone()]);
            r.extend(bgp(g, b, vec![s]));
            r
        }).collect();
    }
    if let Some(o) = &grp.optional {
        sols = sols
            .into_iter()
            .flat_map(|s| {
                let ext = bgp(g, o, vec![s.clone()]);
                if ext.is_empty() { vec![s] } else { ext }
            })
            .collect();
    }
    sols.retain(|s| grp.filters.iter().all(|f| f.holds(s)));
    let mut out: Vec<Binding> = sols
        .into_iter()
        .map(|s| s.into_iter().filter(|(v, _)| q.project.contains(v)).collect())
        .collect();
    out.sort();
    out
}

pub fn engine(g: &Graph, q: &GenQuery) -> Vec<Binding> {
    let query = parse_query(&q.text(), &PrefixMap::new()).unwrap_or_else(|e| panic!("{}: {e}", q.text()));
    let mut out: Vec<Binding> = evaluate(&query, g, &Solution::new())
        .into_iter()
        .map(|s| s.iter().map(|(v, t)| (v[1..].parse::<usize>().unwrap(), t.clone())).collect())
        .collect();
    out.sort();
    out
}

/// Runs `cases` random (graph, query) pairs and reports the first disagreement.
pub fn check_random_cases(cases: u32) -> Result<(), String> {
    let mut runner = TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() });
    runner
        .run(&(graph_strategy(), query_strategy()), |(g, q)| {
            prop_assert_eq!(engine(&g, &q), reference(&g, &q), "query: {}", q.text());
            Ok(())
        })
        .map_err(|e| e.to_string())
}
