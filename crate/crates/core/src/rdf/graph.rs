use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use super::term::{BlankNode, Term};
use super::vocab::{rdf, rdfs};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("literal {0:?} cannot appear in subject position")]
    LiteralSubject(Term),
    #[error("predicate must be an IRI, found {0:?}")]
    NonIriPredicate(Term),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ListError {
    #[error("list node {node:?} has {count} rdf:first values (expected exactly one)")]
    BadFirst { node: Term, count: usize },
    #[error("list node {node:?} has {count} rdf:rest values (expected exactly one)")]
    BadRest { node: Term, count: usize },
    #[error("list starting at {head:?} contains a cycle at {node:?}")]
    Cycle { head: Term, node: Term },
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    pub subject: Term,
    pub predicate: Term,
    pub object: Term,
}

impl Triple {
    pub fn new(subject: Term, predicate: Term, object: Term) -> Result<Self, GraphError> {
        if subject.is_literal() {
            return Err(GraphError::LiteralSubject(subject));
        }
        if !predicate.is_iri() {
            return Err(GraphError::NonIriPredicate(predicate));
        }
        Ok(Triple { subject, predicate, object })
    }
}

impl std::fmt::Debug for Triple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}

/// An insertion-ordered set of triples with subject, predicate and object indexes.
///
/// Graphs are built once and then only read; every query method takes `&self`,
/// so a loaded graph can be shared across validation threads.
#[derive(Debug, Clone, Default)]
pub struct Graph {
    triples: Vec<Triple>,
    members: HashSet<Triple>,
    by_subject: HashMap<Term, Vec<usize>>,
    by_predicate: HashMap<Term, Vec<usize>>,
    by_object: HashMap<Term, Vec<usize>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members
    }
}

impl Eq for Graph {}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    /// Returns false when the triple was already present.
    pub fn insert(&mut self, triple: Triple) -> bool {
        if self.members.contains(&triple) {
            return false;
        }
        let idx = self.triples.len();
        self.by_subject.entry(triple.subject.clone()).or_default().push(idx);
        self.by_predicate.entry(triple.predicate.clone()).or_default().push(idx);
        self.by_object.entry(triple.object.clone()).or_default().push(idx);
        self.members.insert(triple.clone());
        self.triples.push(triple);
        true
    }

    pub fn add(&mut self, s: Term, p: Term, o: Term) -> Result<bool, GraphError> {
        Ok(self.insert(Triple::new(s, p, o)?))
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.members.contains(triple)
    }

    pub fn has(&self, s: &Term, p: &Term, o: &Term) -> bool {
        self.members.contains(&Triple { subject: s.clone(), predicate: p.clone(), object: o.clone() })
    }

    pub fn iter(&self) -> impl Iterator<Item = &Triple> {
        self.triples.iter()
    }

    /// Triples matching every bound position, in insertion order.
    pub fn match_triples<'a>(
        &'a self,
        s: Option<&Term>,
        p: Option<&Term>,
        o: Option<&Term>,
    ) -> impl Iterator<Item = &'a Triple> + use<'a> {
        let mut best: Option<&[usize]> = None;
        let mut empty = false;
        for (bound, index) in [(s, &self.by_subject), (p, &self.by_predicate), (o, &self.by_object)] {
            if let Some(term) = bound {
                match index.get(term) {
                    Some(ids) => {
                        if best.is_none_or(|b| ids.len() < b.len()) {
                            best = Some(ids);
                        }
                    }
                    None => empty = true,
                }
            }
        }
        let candidates: Box<dyn Iterator<Item = &'a Triple> + 'a> = if empty {
            Box::new(std::iter::empty())
        } else if let Some(ids) = best {
            Box::new(ids.iter().map(move |&i| &self.triples[i]))
        } else {
            Box::new(self.triples.iter())
        };
        let (s, p, o) = (s.cloned(), p.cloned(), o.cloned());
        candidates.filter(move |t| {
            s.as_ref().is_none_or(|s| &t.subject == s)
                && p.as_ref().is_none_or(|p| &t.predicate == p)
                && o.as_ref().is_none_or(|o| &t.object == o)
        })
    }

    pub fn objects<'a>(&'a self, s: &Term, p: &Term) -> impl Iterator<Item = &'a Term> + use<'a> {
        self.match_triples(Some(s), Some(p), None).map(|t| &t.object)
    }

    pub fn subjects<'a>(&'a self, p: &Term, o: &Term) -> impl Iterator<Item = &'a Term> + use<'a> {
        self.match_triples(None, Some(p), Some(o)).map(|t| &t.subject)
    }

    pub fn object(&self, s: &Term, p: &Term) -> Option<&Term> {
        let ids = self.by_subject.get(s)?;
        ids.iter().map(|&i| &self.triples[i]).find(|t| &t.predicate == p).map(|t| &t.object)
    }

    /// Every subject and object, first-seen order, each once.
    pub fn nodes(&self) -> Vec<Term> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for t in &self.triples {
            for term in [&t.subject, &t.object] {
                if seen.insert(term) {
                    out.push(term.clone());
                }
            }
        }
        out
    }

    pub fn mentions(&self, term: &Term) -> bool {
        self.by_subject.contains_key(term) || self.by_object.contains_key(term)
    }

    pub fn blank_nodes(&self) -> BTreeSet<BlankNode> {
        let mut out = BTreeSet::new();
        for t in &self.triples {
            for term in [&t.subject, &t.object] {
                if let Term::BlankNode(b) = term {
                    out.insert(b.clone());
                }
            }
        }
        out
    }

    /// Adds every triple of `other`, renaming its blank nodes where their labels
    /// are already used here so the two graphs never share blank nodes by accident.
    pub fn extend_disjoint(&mut self, other: &Graph) {
        let ours: HashSet<String> = self.blank_nodes().into_iter().map(|b| b.label().to_owned()).collect();
        let mut renames: HashMap<BlankNode, Term> = HashMap::new();
        let mut taken = ours.clone();
        taken.extend(other.blank_nodes().into_iter().map(|b| b.label().to_owned()));
        let mut counter = 0usize;
        for b in other.blank_nodes() {
            if ours.contains(b.label()) {
                let fresh = loop {
                    let candidate = format!("{}_m{}", b.label(), counter);
                    counter += 1;
                    if taken.insert(candidate.clone()) {
                        break candidate;
                    }
                };
                renames.insert(b, Term::blank(&fresh));
            }
        }
        let rename = |t: &Term| match t {
            Term::BlankNode(b) => renames.get(b).cloned().unwrap_or_else(|| t.clone()),
            _ => t.clone(),
        };
        for t in &other.triples {
            self.insert(Triple {
                subject: rename(&t.subject),
                predicate: t.predicate.clone(),
                object: rename(&t.object),
            });
        }
    }

    /// A new graph holding the triples of `self` followed by `other` (blank nodes kept apart).
    pub fn union(&self, other: &Graph) -> Graph {
        let mut g = self.clone();
        g.extend_disjoint(other);
        g
    }

    /// Walks an RDF collection from `head` to `rdf:nil`.
    pub fn list_to_sequence(&self, head: &Term) -> Result<Vec<Term>, ListError> {
        let first = Term::iri(rdf::FIRST);
        let rest = Term::iri(rdf::REST);
        let mut out = Vec::new();
        let mut visited = HashSet::new();
        let mut node = head.clone();
        while !node.is(rdf::NIL) {
            if !visited.insert(node.clone()) {
                return Err(ListError::Cycle { head: head.clone(), node });
            }
            let firsts: Vec<&Term> = self.objects(&node, &first).collect();
            if firsts.len() != 1 {
                return Err(ListError::BadFirst { node: node.clone(), count: firsts.len() });
            }
            let rests: Vec<&Term> = self.objects(&node, &rest).collect();
            if rests.len() != 1 {
                return Err(ListError::BadRest { node: node.clone(), count: rests.len() });
            }
            out.push(firsts[0].clone());
            node = rests[0].clone();
        }
        Ok(out)
    }
}

impl FromIterator<Triple> for Graph {
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> Self {
        let mut g = Graph::new();
        for t in iter {
            g.insert(t);
        }
        g
    }
}

impl Extend<Triple> for Graph {
    fn extend<I: IntoIterator<Item = Triple>>(&mut self, iter: I) {
        for t in iter {
            self.insert(t);
        }
    }
}

/// `rdfs:subClassOf` closure over a set of graphs. No domain/range inference.
#[derive(Debug, Clone, Default)]
pub struct ClassHierarchy {
    supers: HashMap<Term, Vec<Term>>,
}

impl ClassHierarchy {
    pub fn new(graphs: &[&Graph]) -> Self {
        let sub = Term::iri(rdfs::SUB_CLASS_OF);
        let mut supers: HashMap<Term, Vec<Term>> = HashMap::new();
        for g in graphs {
            for t in g.match_triples(None, Some(&sub), None) {
                let entry = supers.entry(t.subject.clone()).or_default();
                if !entry.contains(&t.object) {
                    entry.push(t.object.clone());
                }
            }
        }
        ClassHierarchy { supers }
    }

    /// `class` plus every transitive superclass.
    pub fn closure_of(&self, class: &Term) -> BTreeSet<Term> {
        let mut out = BTreeSet::new();
        let mut queue = VecDeque::from([class.clone()]);
        while let Some(c) = queue.pop_front() {
            if !out.insert(c.clone()) {
                continue;
            }
            if let Some(sup) = self.supers.get(&c) {
                queue.extend(sup.iter().cloned());
            }
        }
        out
    }

    pub fn is_subclass(&self, class: &Term, of: &Term) -> bool {
        class == of || self.closure_of(class).contains(of)
    }
}

/// Asserted `rdf:type`s of `node` (in `graph` or `ontology`) closed under `rdfs:subClassOf`
/// taken from both graphs.
pub fn types_of(graph: &Graph, node: &Term, ontology: &Graph) -> BTreeSet<Term> {
    let hierarchy = ClassHierarchy::new(&[ontology, graph]);
    types_with(&hierarchy, &[graph, ontology], node)
}

pub(crate) fn types_with(hierarchy: &ClassHierarchy, graphs: &[&Graph], node: &Term) -> BTreeSet<Term> {
    let ty = Term::iri(rdf::TYPE);
    let mut out = BTreeSet::new();
    for g in graphs {
        for class in g.objects(node, &ty) {
            out.extend(hierarchy.closure_of(class));
        }
    }
    out
}
