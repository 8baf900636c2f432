//! Fixture loading, the expected-outcome corpus runner, coverage and timing.

pub mod bench;
pub mod corpus;
pub mod coverage;

use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

pub use bench::{run_benchmark, BenchConfig, BenchResult, FileSamples};
pub use corpus::{
    discover, load_case, parse_expectations, run_corpus, CaseOutcome, CaseStatus, Expectation, ExpectedViolation, Polarity,
    SuiteResult, TestCase,
};
pub use coverage::{generate_coverage, CoverageCell, CoverageReport, ModuleCoverage};

use crate::rdf::{read_turtle_files, FileError, Graph, PrefixMap, Term};
use crate::shacl::{load_shapes, ShapeError, ShapesGraph, Validator};
use crate::tio::{family_of, turtle_files, CatalogError, VocabularyCatalog};

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error(transparent)]
    File(#[from] FileError),
    #[error(transparent)]
    Shapes(#[from] ShapeError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error("{0}")]
    Layout(String),
    #[error("cannot write {path}: {source}")]
    Write { path: String, source: std::io::Error },
}

/// Which realisation of the constraint library to load next to the core shapes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum Tier {
    /// Custom constraint components and SPARQL target types.
    #[default]
    Af,
    /// Plain `sh:sparql` constraints with inline targets only.
    Sparql,
}

impl Tier {
    pub const ALL: [Tier; 2] = [Tier::Af, Tier::Sparql];

    pub fn dir_name(self) -> &'static str {
        match self {
            Tier::Af => "af",
            Tier::Sparql => "sparql",
        }
    }
}

impl fmt::Display for Tier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.dir_name())
    }
}

impl FromStr for Tier {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "af" => Ok(Tier::Af),
            "sparql" => Ok(Tier::Sparql),
            other => Err(format!("unknown tier `{other}` (expected af or sparql)")),
        }
    }
}

/// Paths inside a fixture root:
/// `ontology/`, `extensions/`, `shapes/{core,af,sparql}/` and `tests/<Module>/{good,bad}/`.
#[derive(Debug, Clone)]
pub struct FixtureLayout {
    pub root: PathBuf,
}

/// Shape files whose constraints consume the mixin vocabulary carry this file name.
pub const EXTENSION_SHAPES_FILE: &str = "extension-shapes.ttl";

impl FixtureLayout {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        FixtureLayout { root: root.into() }
    }

    pub fn ontology_dir(&self) -> PathBuf {
        self.root.join("ontology")
    }

    pub fn extensions_dir(&self) -> PathBuf {
        self.root.join("extensions")
    }

    pub fn tests_dir(&self) -> PathBuf {
        self.root.join("tests")
    }

    pub fn ontology_files(&self, with_extensions: bool) -> Result<Vec<PathBuf>, HarnessError> {
        let mut files = turtle_files(&self.ontology_dir())?;
        if with_extensions {
            files.extend(turtle_files(&self.extensions_dir())?);
        }
        Ok(files)
    }

    pub fn shape_files(&self, tier: Tier, with_extensions: bool) -> Result<Vec<PathBuf>, HarnessError> {
        let shapes = self.root.join("shapes");
        let mut files = turtle_files(&shapes.join("core"))?;
        files.extend(turtle_files(&shapes.join(tier.dir_name()))?);
        if !with_extensions {
            files.retain(|p| p.file_name().is_none_or(|n| n != EXTENSION_SHAPES_FILE));
        }
        Ok(files)
    }
}

/// Everything needed to validate corpus files for one tier.
#[derive(Debug, Clone)]
pub struct Environment {
    pub tier: Tier,
    pub catalog: VocabularyCatalog,
    /// Baseline modules plus, when loaded, the extension files.
    pub ontology: Graph,
    pub shapes: ShapesGraph,
    pub prefixes: PrefixMap,
}

impl Environment {
    pub fn load(layout: &FixtureLayout, tier: Tier) -> Result<Self, HarnessError> {
        Self::load_with(layout, tier, true)
    }

    pub fn load_with(layout: &FixtureLayout, tier: Tier, with_extensions: bool) -> Result<Self, HarnessError> {
        let (baseline, mut prefixes) = read_turtle_files(&turtle_files(&layout.ontology_dir())?)?;
        let catalog = VocabularyCatalog::from_graph(&baseline)?;
        let mut ontology = baseline;
        if with_extensions {
            let (ext, p) = read_turtle_files(&turtle_files(&layout.extensions_dir())?)?;
            ontology.extend_disjoint(&ext);
            prefixes.merge_missing(&p);
        }
        Self::from_parts(tier, catalog, ontology, &layout.shape_files(tier, with_extensions)?, prefixes)
    }

    /// Builds an environment from explicit shape files; the ontology prefixes fill gaps
    /// left by the shapes prologues.
    pub fn from_parts(
        tier: Tier,
        catalog: VocabularyCatalog,
        ontology: Graph,
        shape_files: &[PathBuf],
        ontology_prefixes: PrefixMap,
    ) -> Result<Self, HarnessError> {
        let (shapes_graph, mut prefixes) = read_turtle_files(shape_files)?;
        prefixes.merge_missing(&ontology_prefixes);
        let shapes = load_shapes(&shapes_graph, &prefixes)?;
        Ok(Environment { tier, catalog, ontology, shapes, prefixes })
    }

    pub fn validator(&self) -> Validator<'_> {
        Validator::new(&self.shapes, &self.ontology).with_prefixes(&self.prefixes)
    }

    /// Constraint families the loaded shapes can report, core components included.
    pub fn constraint_families(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for shape in &self.shapes.shapes {
            let core = shape.constraints.iter().map(|c| Term::iri(c.component_iri()));
            for id in core.chain(shape.sparql.iter().map(|c| c.id.clone())) {
                if let Some(f) = family_of(&id) {
                    out.insert(f.to_owned());
                }
            }
        }
        out
    }
}

/// A path relative to `base`, with `/` separators, for stable output.
pub fn display_path(path: &Path, base: &Path) -> String {
    let rel = path.strip_prefix(base).unwrap_or(path);
    rel.components().map(|c| c.as_os_str().to_string_lossy()).collect::<Vec<_>>().join("/")
}
