//! Blank-node canonical labelling and graph isomorphism.
//!
//! Labels come from an iterative hash of each blank node's neighbourhood: every
//! round folds the sorted multiset of `(direction, predicate, neighbour hash)`
//! signatures into the node's previous hash. Ties after the last round are
//! broken by the original label, which makes the labelling a heuristic for
//! highly symmetric graphs. Isomorphism uses the hashes only to partition
//! candidates and then searches for an exact bijection.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::hash::{Hash, Hasher};

use super::graph::{Graph, Triple};
use super::term::{BlankNode, Term};

/// Rounds used for serialization labels.
pub const CANONICAL_ROUNDS: usize = 3;

fn hash_of<T: Hash>(value: &T) -> u64 {
    let mut h = DefaultHasher::new();
    value.hash(&mut h);
    h.finish()
}

/// Neighbourhood hash per blank node after `rounds` refinement rounds.
pub fn blank_node_hashes(graph: &Graph, rounds: usize) -> HashMap<BlankNode, u64> {
    let blanks: Vec<BlankNode> = graph.blank_nodes().into_iter().collect();
    let mut hashes: HashMap<BlankNode, u64> = blanks.iter().map(|b| (b.clone(), hash_of(&"blank"))).collect();
    let mut adjacency: HashMap<&BlankNode, Vec<&Triple>> = HashMap::new();
    for t in graph.iter() {
        if let Term::BlankNode(b) = &t.subject {
            adjacency.entry(b).or_default().push(t);
        }
        if let Term::BlankNode(b) = &t.object {
            if t.subject != t.object {
                adjacency.entry(b).or_default().push(t);
            }
        }
    }
    let term_hash = |term: &Term, hashes: &HashMap<BlankNode, u64>| match term {
        Term::BlankNode(b) => hashes[b],
        other => hash_of(other),
    };
    for _ in 0..rounds {
        let mut next = HashMap::with_capacity(hashes.len());
        for b in &blanks {
            let me = Term::BlankNode(b.clone());
            let mut sigs: Vec<(u8, u64, u64)> = Vec::new();
            for t in adjacency.get(b).map(Vec::as_slice).unwrap_or(&[]) {
                let p = hash_of(&t.predicate);
                if t.subject == me {
                    let o = if t.object == me { 0 } else { term_hash(&t.object, &hashes) };
                    sigs.push((0, p, o));
                }
                if t.object == me && t.subject != me {
                    sigs.push((1, p, term_hash(&t.subject, &hashes)));
                }
            }
            sigs.sort_unstable();
            next.insert(b.clone(), hash_of(&(hashes[b], sigs)));
        }
        hashes = next;
    }
    hashes
}

/// Canonical labels `b0, b1, ...` ordered by (hash, original label).
pub fn canonical_labels(graph: &Graph) -> BTreeMap<BlankNode, String> {
    let hashes = blank_node_hashes(graph, CANONICAL_ROUNDS);
    let mut order: Vec<(u64, BlankNode)> = hashes.into_iter().map(|(b, h)| (h, b)).collect();
    order.sort();
    order.into_iter().enumerate().map(|(i, (_, b))| (b, format!("b{i}"))).collect()
}

/// Copy of `graph` with blank nodes renamed to their canonical labels.
pub fn canonicalize(graph: &Graph) -> Graph {
    let labels = canonical_labels(graph);
    let map = |t: &Term| match t {
        Term::BlankNode(b) => Term::blank(&labels[b]),
        other => other.clone(),
    };
    graph
        .iter()
        .map(|t| Triple { subject: map(&t.subject), predicate: t.predicate.clone(), object: map(&t.object) })
        .collect()
}

/// Exact RDF graph isomorphism (bijection on blank nodes).
pub fn is_isomorphic(a: &Graph, b: &Graph) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let ground = |g: &Graph| -> HashSet<Triple> {
        g.iter().filter(|t| !t.subject.is_blank() && !t.object.is_blank()).cloned().collect()
    };
    if ground(a) != ground(b) {
        return false;
    }
    let rounds = a.blank_nodes().len().max(1);
    let ha = blank_node_hashes(a, rounds);
    let hb = blank_node_hashes(b, rounds);
    let mut classes_a: BTreeMap<u64, Vec<BlankNode>> = BTreeMap::new();
    let mut classes_b: BTreeMap<u64, Vec<BlankNode>> = BTreeMap::new();
    for (n, h) in &ha {
        classes_a.entry(*h).or_default().push(n.clone());
    }
    for (n, h) in &hb {
        classes_b.entry(*h).or_default().push(n.clone());
    }
    if classes_a.len() != classes_b.len()
        || classes_a.iter().zip(&classes_b).any(|((ka, va), (kb, vb))| ka != kb || va.len() != vb.len())
    {
        return false;
    }
    for v in classes_a.values_mut().chain(classes_b.values_mut()) {
        v.sort();
    }
    let order: Vec<BlankNode> = classes_a.values().flatten().cloned().collect();
    let mut search = Search { a, b, ha: &ha, classes_b: &classes_b, mapping: HashMap::new(), used: HashSet::new() };
    search.assign(&order, 0)
}

struct Search<'a> {
    a: &'a Graph,
    b: &'a Graph,
    ha: &'a HashMap<BlankNode, u64>,
    classes_b: &'a BTreeMap<u64, Vec<BlankNode>>,
    mapping: HashMap<BlankNode, BlankNode>,
    used: HashSet<BlankNode>,
}

impl Search<'_> {
    fn assign(&mut self, order: &[BlankNode], i: usize) -> bool {
        if i == order.len() {
            return true;
        }
        let node = &order[i];
        for candidate in &self.classes_b[&self.ha[node]] {
            if self.used.contains(candidate) {
                continue;
            }
            self.mapping.insert(node.clone(), candidate.clone());
            self.used.insert(candidate.clone());
            if self.consistent(node) && self.assign(order, i + 1) {
                return true;
            }
            self.mapping.remove(node);
            self.used.remove(candidate);
        }
        false
    }

    /// Every triple touching `node` whose blank nodes are all mapped must exist in `b`.
    fn consistent(&self, node: &BlankNode) -> bool {
        let term = Term::BlankNode(node.clone());
        let map = |t: &Term| -> Option<Term> {
            match t {
                Term::BlankNode(x) => self.mapping.get(x).map(|y| Term::BlankNode(y.clone())),
                other => Some(other.clone()),
            }
        };
        let touching = self.a.match_triples(Some(&term), None, None).chain(self.a.match_triples(None, None, Some(&term)));
        for t in touching {
            if let (Some(s), Some(o)) = (map(&t.subject), map(&t.object)) {
                if !self.b.has(&s, &t.predicate, &o) {
                    return false;
                }
            }
        }
        true
    }
}
