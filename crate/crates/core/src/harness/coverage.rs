//! Vocabulary coverage: which catalog classes, properties and functions the shapes reach,
//! and which ones the test corpus mentions at all.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::sync::LazyLock;

use regex::Regex;

use crate::rdf::{parse_turtle, Graph, Iri, PrefixMap, Term};
use crate::shacl::{ShapesGraph, Target};
use crate::tio::{family, family_of, VocabularyCatalog};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CoverageCell {
    pub covered: usize,
    pub total: usize,
    pub uncovered: Vec<Iri>,
}

impl CoverageCell {
    fn tally<'a>(elements: impl IntoIterator<Item = &'a Iri>, mut is_covered: impl FnMut(&Iri) -> bool) -> Self {
        let mut cell = CoverageCell::default();
        for e in elements {
            cell.total += 1;
            if is_covered(e) {
                cell.covered += 1;
            } else {
                cell.uncovered.push(e.clone());
            }
        }
        cell
    }

    /// 100 for an empty cell.
    pub fn percent(&self) -> f64 {
        if self.total == 0 {
            100.0
        } else {
            100.0 * self.covered as f64 / self.total as f64
        }
    }

    fn add(&mut self, other: &CoverageCell) {
        self.covered += other.covered;
        self.total += other.total;
        self.uncovered.extend(other.uncovered.iter().cloned());
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ModuleCoverage {
    pub module: String,
    pub classes: CoverageCell,
    pub properties: CoverageCell,
    pub functions: CoverageCell,
    /// Elements mentioned by at least one test file, over all three kinds.
    pub tested: CoverageCell,
}

impl ModuleCoverage {
    pub fn shape_cells(&self) -> [(&'static str, &CoverageCell); 3] {
        [("classes", &self.classes), ("properties", &self.properties), ("functions", &self.functions)]
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CoverageReport {
    pub modules: Vec<ModuleCoverage>,
}

impl CoverageReport {
    pub fn total_classes(&self) -> CoverageCell {
        self.sum(|m| &m.classes)
    }

    pub fn total_properties(&self) -> CoverageCell {
        self.sum(|m| &m.properties)
    }

    pub fn total_functions(&self) -> CoverageCell {
        self.sum(|m| &m.functions)
    }

    pub fn total_tested(&self) -> CoverageCell {
        self.sum(|m| &m.tested)
    }

    /// Shape coverage over classes, properties and functions together.
    pub fn overall(&self) -> CoverageCell {
        let mut all = self.total_classes();
        all.add(&self.total_properties());
        all.add(&self.total_functions());
        all
    }

    fn sum(&self, pick: impl Fn(&ModuleCoverage) -> &CoverageCell) -> CoverageCell {
        let mut total = CoverageCell::default();
        for m in &self.modules {
            total.add(pick(m));
        }
        total
    }

    /// Every uncovered element, in module order.
    pub fn uncovered(&self) -> Vec<&Iri> {
        self.modules
            .iter()
            .flat_map(|m| m.classes.uncovered.iter().chain(&m.properties.uncovered).chain(&m.functions.uncovered))
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("module,kind,covered,total,percent,tested_covered,tested_total\n");
        for m in &self.modules {
            for (kind, cell) in m.shape_cells() {
                let _ = writeln!(out, "{},{kind},{},{},{:.1},,", m.module, cell.covered, cell.total, cell.percent());
            }
            let _ = writeln!(out, "{},tested,,,,{},{}", m.module, m.tested.covered, m.tested.total);
        }
        let o = self.overall();
        let t = self.total_tested();
        let _ = writeln!(out, "overall,all,{},{},{:.1},{},{}", o.covered, o.total, o.percent(), t.covered, t.total);
        out
    }

    pub fn summary(&self, prefixes: &PrefixMap) -> String {
        let mut out = String::new();
        let frac = |c: &CoverageCell| format!("{}/{}", c.covered, c.total);
        let _ = writeln!(out, "{:<30} {:>9} {:>11} {:>10} {:>9}", "module", "classes", "properties", "functions", "tested");
        for m in &self.modules {
            let _ = writeln!(
                out,
                "{:<30} {:>9} {:>11} {:>10} {:>9}",
                m.module,
                frac(&m.classes),
                frac(&m.properties),
                frac(&m.functions),
                frac(&m.tested)
            );
        }
        for iri in self.uncovered() {
            let _ = writeln!(out, "uncovered {}", prefixes.render(&Term::from(iri.clone())));
        }
        let (c, p, f, t) = (self.total_classes(), self.total_properties(), self.total_functions(), self.total_tested());
        let _ = writeln!(
            out,
            "classes {:.0}% ({}), properties {:.0}% ({}), functions {:.0}% ({}), tested {:.0}% ({})",
            c.percent(),
            frac(&c),
            p.percent(),
            frac(&p),
            f.percent(),
            frac(&f),
            t.percent(),
            frac(&t)
        );
        let _ = writeln!(out, "overall {:.0}%", self.overall().percent());
        out
    }
}

static PREFIX_DECL: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?i)PREFIX\s+([A-Za-z][\w-]*)?:\s*<([^>\s]*)>").expect("valid regex"));
static NAME: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"<([^>\s]+)>|(?:^|[^\w?$:-])([A-Za-z][\w-]*)?:([A-Za-z_][\w-]*(?:\.[\w-]+)*)").expect("valid regex")
});

/// IRIs written in a query, either as `<iri>` or as prefixed names resolved against the
/// query's own PREFIX lines and then `prefixes`.
fn query_references(text: &str, prefixes: &PrefixMap) -> BTreeSet<String> {
    let mut local = PrefixMap::new();
    for c in PREFIX_DECL.captures_iter(text) {
        local.insert(c.get(1).map_or("", |m| m.as_str()), &c[2]);
    }
    local.merge_missing(prefixes);
    let mut out = BTreeSet::new();
    for c in NAME.captures_iter(text) {
        if let Some(iri) = c.get(1) {
            out.insert(iri.as_str().to_owned());
        } else if let Some(ns) = local.get(c.get(2).map_or("", |m| m.as_str())) {
            out.insert(format!("{ns}{}", &c[3]));
        }
    }
    out
}

/// Computes shape coverage over `catalog` and test-exercise coverage over `corpus` files.
/// Corpus files that cannot be read or parsed are skipped.
pub fn generate_coverage(catalog: &VocabularyCatalog, shapes: &ShapesGraph, corpus: &[PathBuf]) -> CoverageReport {
    let mut targeted_classes = BTreeSet::new();
    let mut pathed = BTreeSet::new();
    let mut referenced = BTreeSet::new();
    // Functions reached by each component: `None` for a constraint that applies to every function.
    let mut arity: BTreeSet<Option<Term>> = BTreeSet::new();
    let mut argument_type: BTreeSet<Option<Term>> = BTreeSet::new();
    for shape in &shapes.shapes {
        for t in &shape.targets {
            if let Target::Class(c) = t {
                targeted_classes.insert(c.clone());
            }
        }
        if let Some(p) = &shape.path {
            pathed.insert(p.clone());
        }
        for c in &shape.sparql {
            referenced.extend(query_references(&c.query_text, &shapes.prefixes));
            let reach = c.bindings.get("function").cloned();
            match family_of(&c.id) {
                Some(family::ARITY) => {
                    arity.insert(reach);
                }
                Some(family::ARGUMENT_TYPE) => {
                    argument_type.insert(reach);
                }
                _ => {}
            }
        }
    }
    let reaches = |set: &BTreeSet<Option<Term>>, f: &Iri| set.contains(&None) || set.contains(&Some(Term::from(f.clone())));

    let mut mentioned: BTreeSet<Term> = BTreeSet::new();
    for path in corpus {
        let Ok(text) = std::fs::read_to_string(path) else { continue };
        let Ok((graph, _)) = parse_turtle(&text, None) else {
            log::warn!("coverage skips unparseable {}", path.display());
            continue;
        };
        collect_terms(&graph, &mut mentioned);
    }
    let is_mentioned = |i: &Iri| mentioned.contains(&Term::from(i.clone()));

    let modules = catalog
        .modules
        .iter()
        .map(|m| ModuleCoverage {
            module: m.name.clone(),
            classes: CoverageCell::tally(&m.classes, |c| targeted_classes.contains(c)),
            properties: CoverageCell::tally(&m.properties, |p| pathed.contains(p) || referenced.contains(p.as_str())),
            functions: CoverageCell::tally(m.functions.keys(), |f| reaches(&arity, f) && reaches(&argument_type, f)),
            tested: CoverageCell::tally(
                m.classes.iter().chain(&m.properties).chain(m.functions.keys()),
                is_mentioned,
            ),
        })
        .collect();
    CoverageReport { modules }
}

fn collect_terms(graph: &Graph, into: &mut BTreeSet<Term>) {
    for t in graph.iter() {
        for term in [&t.subject, &t.predicate, &t.object] {
            if term.is_iri() {
                into.insert(term.clone());
            }
        }
    }
}

/// The shapes triples with every triple about `shape`, or pointing at it, removed.
pub fn without_shape(graph: &Graph, shape: &Term) -> Graph {
    let mut out = Graph::new();
    for t in graph.iter() {
        if &t.subject != shape && &t.object != shape {
            out.insert(t.clone());
        }
    }
    out
}
