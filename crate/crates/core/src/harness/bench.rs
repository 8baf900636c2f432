//! Timing of the validation call alone, file by file and tier by tier.
//!
//! Files are parsed once up front. Each (file, tier) pair then runs `warmups` untimed
//! validations followed by `repetitions` timed ones, strictly sequentially.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use super::corpus::load_case;
use super::{Environment, HarnessError, Tier};
use crate::rdf::{parse_turtle, Graph, Term};
use crate::shacl::ValidationReport;
use crate::tio::family_of;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchConfig {
    pub warmups: usize,
    pub repetitions: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig { warmups: 2, repetitions: 6 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FileSamples {
    pub file: String,
    pub module: String,
    pub tier: Tier,
    pub triples: usize,
    /// Milliseconds, captured at microsecond resolution.
    pub samples_ms: Vec<f64>,
    pub violations: usize,
}

impl FileSamples {
    pub fn mean(&self) -> f64 {
        mean(&self.samples_ms)
    }

    pub fn std_dev(&self) -> f64 {
        std_dev(&self.samples_ms)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchResult {
    pub config: BenchConfig,
    pub samples: Vec<FileSamples>,
    /// Files whose (focus, family, message) result sets differ between tiers.
    pub tier_mismatches: Vec<String>,
}

fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        0.0
    } else {
        xs.iter().sum::<f64>() / xs.len() as f64
    }
}

/// Sample standard deviation; zero below two samples.
fn std_dev(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}

type ResultKey = BTreeSet<(Term, String, String)>;

fn result_key(report: &ValidationReport) -> ResultKey {
    report
        .results
        .iter()
        .map(|r| {
            let fam = r.source_constraint.as_ref().and_then(family_of).unwrap_or_default().to_owned();
            (r.focus_node.clone(), fam, r.message.clone())
        })
        .collect()
}

/// Benchmarks every file against every environment. Unparseable files are an error here:
/// the corpus is expected to have passed a test run first.
pub fn run_benchmark(
    root: &Path,
    files: &[PathBuf],
    environments: &[&Environment],
    config: BenchConfig,
) -> Result<BenchResult, HarnessError> {
    let mut parsed: Vec<(String, String, Graph)> = Vec::with_capacity(files.len());
    for path in files {
        let case = load_case(root, path).map_err(HarnessError::Layout)?;
        let (graph, _) =
            parse_turtle(&case.source, None).map_err(|e| HarnessError::Layout(format!("{}: {e}", case.name)))?;
        parsed.push((case.name, case.module, graph));
    }

    let mut samples = Vec::new();
    let mut keys: BTreeMap<&str, Vec<ResultKey>> = BTreeMap::new();
    for (name, module, graph) in &parsed {
        for env in environments {
            let validator = env.validator();
            for _ in 0..config.warmups {
                std::hint::black_box(validator.validate(graph));
            }
            let mut times = Vec::with_capacity(config.repetitions);
            let mut last = None;
            for _ in 0..config.repetitions {
                let start = Instant::now();
                let report = validator.validate(graph);
                let micros = start.elapsed().as_micros();
                times.push(micros as f64 / 1000.0);
                last = Some(report);
            }
            let report = last.unwrap_or_else(|| validator.validate(graph));
            keys.entry(name.as_str()).or_default().push(result_key(&report));
            samples.push(FileSamples {
                file: name.clone(),
                module: module.clone(),
                tier: env.tier,
                triples: graph.len(),
                samples_ms: times,
                violations: report.results.len(),
            });
        }
    }
    let tier_mismatches =
        keys.into_iter().filter(|(_, k)| k.windows(2).any(|w| w[0] != w[1])).map(|(f, _)| f.to_owned()).collect();
    Ok(BenchResult { config, samples, tier_mismatches })
}

impl BenchResult {
    pub fn tiers(&self) -> Vec<Tier> {
        self.samples.iter().map(|s| s.tier).collect::<BTreeSet<_>>().into_iter().collect()
    }

    /// Sum over files of the per-file mean, in ms.
    pub fn total_ms(&self, tier: Tier) -> f64 {
        self.samples.iter().filter(|s| s.tier == tier).map(FileSamples::mean).sum()
    }

    pub fn mean_per_file_ms(&self, tier: Tier) -> f64 {
        let means: Vec<f64> = self.samples.iter().filter(|s| s.tier == tier).map(FileSamples::mean).collect();
        mean(&means)
    }

    /// Standard deviation of the per-file means for one tier.
    pub fn std_per_file_ms(&self, tier: Tier) -> f64 {
        let means: Vec<f64> = self.samples.iter().filter(|s| s.tier == tier).map(FileSamples::mean).collect();
        std_dev(&means)
    }

    /// Relative cost of the AF tier over the SPARQL tier, when both were run.
    pub fn overhead_percent(&self) -> Option<f64> {
        let tiers = self.tiers();
        if !(tiers.contains(&Tier::Af) && tiers.contains(&Tier::Sparql)) {
            return None;
        }
        let base = self.total_ms(Tier::Sparql);
        (base > 0.0).then(|| 100.0 * (self.total_ms(Tier::Af) - base) / base)
    }

    /// (module, tier) -> (files, summed mean ms).
    pub fn module_rollups(&self) -> BTreeMap<(String, Tier), (usize, f64)> {
        let mut out: BTreeMap<(String, Tier), (usize, f64)> = BTreeMap::new();
        for s in &self.samples {
            let e = out.entry((s.module.clone(), s.tier)).or_default();
            e.0 += 1;
            e.1 += s.mean();
        }
        out
    }

    /// One row per measured sample: `file,tier,triples,sample,ms`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("file,tier,triples,sample,ms\n");
        for s in &self.samples {
            for (i, x) in s.samples_ms.iter().enumerate() {
                let _ = writeln!(out, "{},{},{},{},{x:.3}", s.file, s.tier, s.triples, i + 1);
            }
        }
        out
    }

    /// One row per (file, tier) with mean and standard deviation in ms.
    pub fn stats_csv(&self) -> String {
        let mut out = String::from("file,module,tier,triples,violations,mean_ms,std_ms\n");
        for s in &self.samples {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{:.3},{:.3}",
                s.file,
                s.module,
                s.tier,
                s.triples,
                s.violations,
                s.mean(),
                s.std_dev()
            );
        }
        out
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} warmup(s), {} measured repetition(s) per file and tier", self.config.warmups, self.config.repetitions);
        let _ = writeln!(out, "{:<30} {:<7} {:>6} {:>12}", "module", "tier", "files", "total ms");
        for ((module, tier), (n, ms)) in self.module_rollups() {
            let _ = writeln!(out, "{module:<30} {tier:<7} {n:>6} {ms:>12.3}");
        }
        for tier in self.tiers() {
            let _ = writeln!(
                out,
                "{tier}: total {:.3} ms, mean {:.3} ms/file, std {:.3} ms",
                self.total_ms(tier),
                self.mean_per_file_ms(tier),
                self.std_per_file_ms(tier)
            );
        }
        if let Some(p) = self.overhead_percent() {
            let _ = writeln!(out, "af overhead over sparql: {p:+.2}%");
        }
        if self.tier_mismatches.is_empty() {
            if self.tiers().len() > 1 {
                let _ = writeln!(out, "tiers agree on every file");
            }
        } else {
            for f in &self.tier_mismatches {
                let _ = writeln!(out, "tier results differ: {f}");
            }
        }
        out
    }
}
