#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::OnceLock;

use intent_shacl::harness::{discover, Environment, FixtureLayout, Tier};

pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn layout() -> FixtureLayout {
    FixtureLayout::new(fixtures())
}

pub fn corpus_root() -> PathBuf {
    layout().tests_dir()
}

pub fn corpus_files() -> Vec<PathBuf> {
    discover(&corpus_root(), None).expect("fixture corpus")
}

pub fn environment(tier: Tier) -> &'static Environment {
    static AF: OnceLock<Environment> = OnceLock::new();
    static SPARQL: OnceLock<Environment> = OnceLock::new();
    let cell = match tier {
        Tier::Af => &AF,
        Tier::Sparql => &SPARQL,
    };
    cell.get_or_init(|| Environment::load(&layout(), tier).expect("fixture environment"))
}

/// Files under `tests/<Module>/good/`.
pub fn is_good(path: &std::path::Path) -> bool {
    path.parent().and_then(|p| p.file_name()).is_some_and(|n| n == "good")
}
