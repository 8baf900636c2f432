//! Shared setup for the criterion benches: the fixture environments and the parsed corpus.

use std::path::{Path, PathBuf};

use intent_shacl::harness::{discover, load_case, Environment, FixtureLayout, HarnessError, Tier};
use intent_shacl::rdf::parse_turtle;
use intent_shacl::Graph;

/// The repository's fixture root, independent of the working directory.
pub fn fixtures_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn environment(tier: Tier) -> Result<Environment, HarnessError> {
    Environment::load(&FixtureLayout::new(fixtures_root()), tier)
}

/// Every corpus file as (relative name, data graph), sorted by name.
pub fn corpus() -> Result<Vec<(String, Graph)>, HarnessError> {
    let root = FixtureLayout::new(fixtures_root()).tests_dir();
    let mut out = Vec::new();
    for path in discover(&root, None)? {
        let case = load_case(&root, &path).map_err(HarnessError::Layout)?;
        let (graph, _) = parse_turtle(&case.source, None).map_err(|e| HarnessError::Layout(format!("{}: {e}", case.name)))?;
        out.push((case.name, graph));
    }
    Ok(out)
}
