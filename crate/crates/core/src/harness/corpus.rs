//! Expected-outcome test corpus.
//!
//! Files live under `<root>/<Module>/{good,bad}/*.ttl`. A good file must conform. A bad file
//! declares what it must trigger in its leading comment block:
//!
//! ```text
//! # expect: tio:FunctionUsageArgumentTypeObjectConstraint _:lastValueCall "expects met:Metric."
//! ```
//!
//! Each expectation names a source constraint, optionally a focus node and optionally a
//! message substring. Extra results are allowed in bad files.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::{display_path, HarnessError};
use crate::rdf::{parse_turtle, Graph, PrefixMap, Term};
use crate::shacl::{ValidationOutcome, ValidationReport, Validator};
use crate::tio::family_of;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Polarity {
    Good,
    Bad,
}

impl Polarity {
    pub fn as_str(self) -> &'static str {
        match self {
            Polarity::Good => "good",
            Polarity::Bad => "bad",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpectedViolation {
    /// Written as in the file (prefixed name or `<iri>`).
    pub constraint: String,
    pub focus: Option<String>,
    pub message: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expectation {
    Conforms,
    Violations(Vec<ExpectedViolation>),
}

#[derive(Debug, Clone)]
pub struct TestCase {
    pub path: PathBuf,
    /// Path relative to the corpus root, `/`-separated.
    pub name: String,
    pub module: String,
    pub polarity: Polarity,
    pub source: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CaseStatus {
    Passed,
    Failed(Vec<String>),
}

#[derive(Debug, Clone)]
pub struct CaseOutcome {
    pub name: String,
    pub module: String,
    pub polarity: Polarity,
    pub status: CaseStatus,
    pub report: Option<ValidationReport>,
    /// Constraint families this file demonstrates: evaluated (good) or expected (bad).
    pub families: BTreeSet<String>,
}

impl CaseOutcome {
    pub fn passed(&self) -> bool {
        self.status == CaseStatus::Passed
    }
}

#[derive(Debug, Clone)]
pub struct SuiteResult {
    pub cases: Vec<CaseOutcome>,
    /// Families of the loaded shapes lacking a good or a bad exercising file.
    pub unbalanced: Vec<String>,
}

/// Parses the `# expect:` lines of the leading comment block.
pub fn parse_expectations(source: &str) -> Result<Vec<ExpectedViolation>, String> {
    let mut out = Vec::new();
    for line in source.lines().map(str::trim) {
        if line.is_empty() {
            continue;
        }
        let Some(comment) = line.strip_prefix('#') else { break };
        let Some(spec) = comment.trim_start().strip_prefix("expect:") else { continue };
        out.push(parse_expectation(spec.trim())?);
    }
    Ok(out)
}

fn parse_expectation(spec: &str) -> Result<ExpectedViolation, String> {
    let (head, message) = match spec.find('"') {
        Some(q) => {
            let rest = &spec[q + 1..];
            let end = rest.rfind('"').ok_or_else(|| format!("unterminated message in `{spec}`"))?;
            if !rest[end + 1..].trim().is_empty() {
                return Err(format!("unexpected text after the message in `{spec}`"));
            }
            (&spec[..q], Some(rest[..end].replace("\\\"", "\"")))
        }
        None => (spec, None),
    };
    let mut words = head.split_whitespace();
    let constraint = words.next().ok_or_else(|| "expect line names no constraint".to_owned())?.to_owned();
    let focus = words.next().map(str::to_owned);
    if let Some(extra) = words.next() {
        return Err(format!("unexpected `{extra}` in expect line"));
    }
    Ok(ExpectedViolation { constraint, focus, message })
}

/// All test files under `root`, sorted by path. `module` restricts the scan to one module.
pub fn discover(root: &Path, module: Option<&str>) -> Result<Vec<PathBuf>, HarnessError> {
    if !root.is_dir() {
        return Err(HarnessError::Layout(format!("corpus directory {} does not exist", root.display())));
    }
    let read = |dir: &Path| -> Result<Vec<PathBuf>, HarnessError> {
        let entries = std::fs::read_dir(dir).map_err(|e| HarnessError::Layout(format!("{}: {e}", dir.display())))?;
        let mut v: Vec<PathBuf> = entries.filter_map(Result::ok).map(|e| e.path()).collect();
        v.sort();
        Ok(v)
    };
    let mut files = Vec::new();
    for module_dir in read(root)?.into_iter().filter(|p| p.is_dir()) {
        let name = module_dir.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        if module.is_some_and(|m| m != name) {
            continue;
        }
        for polarity in ["good", "bad"] {
            let dir = module_dir.join(polarity);
            if dir.is_dir() {
                files.extend(read(&dir)?.into_iter().filter(|p| p.extension().is_some_and(|e| e == "ttl")));
            }
        }
    }
    files.sort();
    Ok(files)
}

/// Reads one test file. Module and polarity come from the directory names.
pub fn load_case(root: &Path, path: &Path) -> Result<TestCase, String> {
    let polarity = match path.parent().and_then(Path::file_name).and_then(|n| n.to_str()) {
        Some("good") => Polarity::Good,
        Some("bad") => Polarity::Bad,
        _ => return Err(format!("{} is not inside a good/ or bad/ directory", path.display())),
    };
    let module = path
        .parent()
        .and_then(Path::parent)
        .and_then(Path::file_name)
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let source = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    Ok(TestCase { path: path.to_owned(), name: display_path(path, root), module, polarity, source })
}

fn resolve(text: &str, prefixes: &PrefixMap) -> Option<Term> {
    if let Some(iri) = text.strip_prefix('<').and_then(|t| t.strip_suffix('>')) {
        return Some(Term::iri(iri));
    }
    if let Some(label) = text.strip_prefix("_:") {
        return Some(Term::blank(label));
    }
    prefixes.expand(text).map(|iri| Term::iri(&iri))
}

/// Runs one case against `validator`. `prefixes` resolves names in expect lines that the
/// test file itself does not declare.
pub fn run_case(case: &TestCase, validator: &Validator<'_>, prefixes: &PrefixMap) -> CaseOutcome {
    let mut outcome = CaseOutcome {
        name: case.name.clone(),
        module: case.module.clone(),
        polarity: case.polarity,
        status: CaseStatus::Passed,
        report: None,
        families: BTreeSet::new(),
    };
    let fail = |mut o: CaseOutcome, msg: String| {
        o.status = CaseStatus::Failed(vec![msg]);
        o
    };
    let expectations = match parse_expectations(&case.source) {
        Ok(e) => e,
        Err(e) => return fail(outcome, format!("bad expect line: {e}")),
    };
    let (data, file_prefixes): (Graph, PrefixMap) = match parse_turtle(&case.source, None) {
        Ok(x) => x,
        Err(e) => return fail(outcome, format!("parse error: {e}")),
    };
    let mut names = file_prefixes.clone();
    names.merge_missing(prefixes);
    let ValidationOutcome { report, exercised } = validator.clone().with_prefixes(&file_prefixes).validate_traced(&data);

    let mut problems = Vec::new();
    match case.polarity {
        Polarity::Good => {
            outcome.families = exercised.iter().filter_map(|c| family_of(c).map(str::to_owned)).collect();
            if !expectations.is_empty() {
                problems.push("good files must not carry expect lines".to_owned());
            }
            if !report.conforms {
                for r in &report.results {
                    problems.push(format!("unexpected: {} on {}", r.message, names.render(&r.focus_node)));
                }
            }
        }
        Polarity::Bad => {
            if expectations.is_empty() {
                problems.push("bad files need at least one `# expect:` line".to_owned());
            }
            for e in &expectations {
                let Some(constraint) = resolve(&e.constraint, &names) else {
                    problems.push(format!("cannot resolve constraint `{}`", e.constraint));
                    continue;
                };
                let Some(family) = family_of(&constraint).map(str::to_owned) else {
                    problems.push(format!("`{}` is not an IRI", e.constraint));
                    continue;
                };
                let focus = match &e.focus {
                    Some(f) => match resolve(f, &names) {
                        Some(t) => Some(t),
                        None => {
                            problems.push(format!("cannot resolve focus `{f}`"));
                            continue;
                        }
                    },
                    None => None,
                };
                let hit = report.results.iter().any(|r| {
                    r.source_constraint.as_ref().and_then(family_of) == Some(family.as_str())
                        && focus.as_ref().is_none_or(|f| &r.focus_node == f)
                        && e.message.as_ref().is_none_or(|m| r.message.contains(m.as_str()))
                });
                if !hit {
                    let mut msg = format!("missing expected {}", e.constraint);
                    if let Some(f) = &e.focus {
                        let _ = write!(msg, " on {f}");
                    }
                    if let Some(m) = &e.message {
                        let _ = write!(msg, " with \"{m}\"");
                    }
                    problems.push(msg);
                }
                outcome.families.insert(family);
            }
        }
    }
    outcome.report = Some(report);
    if !problems.is_empty() {
        outcome.status = CaseStatus::Failed(problems);
    }
    outcome
}

/// Runs every file on `jobs` worker threads. Results keep the order of `files`; a file that
/// cannot be read or parsed fails on its own.
pub fn run_corpus(
    root: &Path,
    files: &[PathBuf],
    validator: &Validator<'_>,
    prefixes: &PrefixMap,
    jobs: usize,
    families: &BTreeSet<String>,
) -> SuiteResult {
    let run = |path: &PathBuf| match load_case(root, path) {
        Ok(case) => run_case(&case, validator, prefixes),
        Err(e) => CaseOutcome {
            name: display_path(path, root),
            module: String::new(),
            polarity: Polarity::Bad,
            status: CaseStatus::Failed(vec![e]),
            report: None,
            families: BTreeSet::new(),
        },
    };
    let cases: Vec<CaseOutcome> = if jobs <= 1 {
        files.iter().map(run).collect()
    } else {
        match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
            Ok(pool) => pool.install(|| files.par_iter().map(run).collect()),
            Err(e) => {
                log::warn!("falling back to sequential run: {e}");
                files.iter().map(run).collect()
            }
        }
    };
    let unbalanced = if cases.is_empty() { Vec::new() } else { unbalanced_families(&cases, families) };
    SuiteResult { cases, unbalanced }
}

fn unbalanced_families(cases: &[CaseOutcome], families: &BTreeSet<String>) -> Vec<String> {
    let seen = |p: Polarity| -> BTreeSet<&str> {
        cases.iter().filter(|c| c.polarity == p).flat_map(|c| c.families.iter().map(String::as_str)).collect()
    };
    let (good, bad) = (seen(Polarity::Good), seen(Polarity::Bad));
    families
        .iter()
        .filter(|f| !good.contains(f.as_str()) || !bad.contains(f.as_str()))
        .map(|f| {
            let missing: Vec<&str> = [("good", &good), ("bad", &bad)]
                .into_iter()
                .filter(|(_, s)| !s.contains(f.as_str()))
                .map(|(n, _)| n)
                .collect();
            format!("{f} (no {} file)", missing.join(" or "))
        })
        .collect()
}

impl SuiteResult {
    pub fn passed(&self) -> usize {
        self.cases.iter().filter(|c| c.passed()).count()
    }

    pub fn success(&self) -> bool {
        self.passed() == self.cases.len() && self.unbalanced.is_empty()
    }

    /// Human-readable summary: failures, then one row per module, then totals.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for c in &self.cases {
            if let CaseStatus::Failed(problems) = &c.status {
                let _ = writeln!(out, "FAIL {}", c.name);
                for p in problems {
                    let _ = writeln!(out, "     {p}");
                }
            }
        }
        let mut modules: BTreeMap<&str, [usize; 4]> = BTreeMap::new();
        for c in &self.cases {
            let row = modules.entry(c.module.as_str()).or_default();
            let i = if c.polarity == Polarity::Good { 0 } else { 2 };
            row[i + 1] += 1;
            if c.passed() {
                row[i] += 1;
            }
        }
        let _ = writeln!(out, "{:<30} {:>9} {:>9}", "module", "good", "bad");
        for (m, [gp, gt, bp, bt]) in &modules {
            let _ = writeln!(out, "{:<30} {:>9} {:>9}", m, format!("{gp}/{gt}"), format!("{bp}/{bt}"));
        }
        for u in &self.unbalanced {
            let _ = writeln!(out, "UNBALANCED {u}");
        }
        let good = self.cases.iter().filter(|c| c.polarity == Polarity::Good).count();
        let _ = writeln!(
            out,
            "{} of {} test files passed ({} good, {} bad)",
            self.passed(),
            self.cases.len(),
            good,
            self.cases.len() - good
        );
        out
    }

    /// JUnit-style XML: one test suite per module.
    pub fn junit_xml(&self) -> String {
        let mut by_module: BTreeMap<&str, Vec<&CaseOutcome>> = BTreeMap::new();
        for c in &self.cases {
            by_module.entry(c.module.as_str()).or_default().push(c);
        }
        let failures = self.cases.len() - self.passed();
        let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
        let _ = writeln!(out, "<testsuites tests=\"{}\" failures=\"{failures}\">", self.cases.len());
        for (m, cases) in by_module {
            let f = cases.iter().filter(|c| !c.passed()).count();
            let _ = writeln!(out, "  <testsuite name=\"{}\" tests=\"{}\" failures=\"{f}\">", xml_escape(m), cases.len());
            for c in cases {
                let _ = write!(out, "    <testcase classname=\"{}\" name=\"{}\"", xml_escape(m), xml_escape(&c.name));
                match &c.status {
                    CaseStatus::Passed => out.push_str("/>\n"),
                    CaseStatus::Failed(p) => {
                        let _ = writeln!(out, ">\n      <failure message=\"{}\"/>\n    </testcase>", xml_escape(&p.join("; ")));
                    }
                }
            }
            out.push_str("  </testsuite>\n");
        }
        if !self.unbalanced.is_empty() {
            let _ = writeln!(
                out,
                "  <testsuite name=\"corpus-balance\" tests=\"1\" failures=\"1\">\n    <testcase name=\"balance\">\n      <failure message=\"{}\"/>\n    </testcase>\n  </testsuite>",
                xml_escape(&self.unbalanced.join("; "))
            );
        }
        out.push_str("</testsuites>\n");
        out
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}
