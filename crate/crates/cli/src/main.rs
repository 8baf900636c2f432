use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context as _, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use intent_shacl::harness::{
    discover, generate_coverage, run_benchmark, run_corpus, BenchConfig, Environment, FixtureLayout, Tier,
};
use intent_shacl::rdf::{read_turtle_file, read_turtle_files, PrefixMap};
use intent_shacl::shacl::ValidationReport;
use intent_shacl::tio::{turtle_files, VocabularyCatalog};

#[derive(Parser)]
#[command(name = "intent-shacl", version, about = "Validate intent graphs against SHACL shapes")]
struct Cli {
    /// Fixture root with ontology/, extensions/, shapes/ and tests/.
    #[arg(long, global = true, default_value = "fixtures")]
    fixtures: PathBuf,
    /// Log diagnostics to stderr (repeat for more detail).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate data files and print one report per file.
    Validate(ValidateArgs),
    /// Run the good/bad test corpus.
    Test(TestArgs),
    /// Report vocabulary coverage of the shapes and the corpus.
    Coverage(CoverageArgs),
    /// Time validation of every corpus file.
    Bench(BenchArgs),
}

#[derive(Args)]
struct ShapeArgs {
    #[arg(long, value_enum, default_value_t = TierArg::Af)]
    tier: TierArg,
    /// Shape files or directories to use instead of the fixture shapes for the tier.
    #[arg(long = "shapes", value_name = "PATH")]
    shapes: Vec<PathBuf>,
    /// Ontology files or directories to use instead of the fixture ontology.
    #[arg(long = "ontology", value_name = "PATH")]
    ontology: Vec<PathBuf>,
    /// Leave out the mixin extension files and the shapes that depend on them.
    #[arg(long)]
    no_extensions: bool,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(required = true, value_name = "DATA")]
    data: Vec<PathBuf>,
    #[command(flatten)]
    shapes: ShapeArgs,
    #[arg(long, value_enum, default_value_t = Format::Turtle)]
    format: Format,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args)]
struct TestArgs {
    #[command(flatten)]
    shapes: ShapeArgs,
    /// Corpus root; defaults to the fixture tests/ directory.
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Only run this module's files.
    #[arg(long)]
    module: Option<String>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Write JUnit-style XML here.
    #[arg(long, value_name = "FILE")]
    junit: Option<PathBuf>,
    /// Write each file's validation report (Turtle) under this directory.
    #[arg(long, value_name = "DIR")]
    report_dir: Option<PathBuf>,
}

#[derive(Args)]
struct CoverageArgs {
    #[command(flatten)]
    shapes: ShapeArgs,
    #[arg(long)]
    corpus: Option<PathBuf>,
    #[arg(long, value_name = "FILE", default_value = "coverage.csv")]
    csv: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    /// Tier to time; both tiers when omitted.
    #[arg(long, value_enum)]
    tier: Option<TierArg>,
    #[arg(long)]
    corpus: Option<PathBuf>,
    #[arg(long)]
    module: Option<String>,
    #[arg(long, default_value_t = 6)]
    reps: usize,
    #[arg(long, default_value_t = 2)]
    warmups: usize,
    #[arg(long, value_name = "FILE", default_value = "bench.csv")]
    csv: PathBuf,
    /// Also write per-file mean and standard deviation here.
    #[arg(long, value_name = "FILE")]
    stats: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum TierArg {
    Af,
    Sparql,
}

impl From<TierArg> for Tier {
    fn from(t: TierArg) -> Tier {
        match t {
            TierArg::Af => Tier::Af,
            TierArg::Sparql => Tier::Sparql,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Turtle,
    Json,
    Text,
}

/// Failures that map to exit code 2.
struct UsageError(anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.into())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).target(env_logger::Target::Stderr).init();
    let layout = FixtureLayout::new(&cli.fixtures);
    let outcome = match cli.command {
        Command::Validate(a) => validate(&layout, a),
        Command::Test(a) => test(&layout, a),
        Command::Coverage(a) => coverage(&layout, a),
        Command::Bench(a) => bench(&layout, a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(UsageError(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// Expands directories to their sorted `.ttl` files.
fn expand(paths: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for p in paths {
        if p.is_dir() {
            out.extend(turtle_files(p)?);
        } else if p.exists() {
            out.push(p.clone());
        } else {
            return Err(anyhow!("{} does not exist", p.display()));
        }
    }
    Ok(out)
}

fn environment(layout: &FixtureLayout, args: &ShapeArgs) -> Result<Environment> {
    let tier = Tier::from(args.tier);
    let with_ext = !args.no_extensions;
    if args.shapes.is_empty() && args.ontology.is_empty() {
        return Environment::load_with(layout, tier, with_ext).context("cannot load fixtures");
    }
    let (ontology, prefixes, catalog) = if args.ontology.is_empty() {
        let (baseline, mut prefixes) = read_turtle_files(&turtle_files(&layout.ontology_dir())?)?;
        let catalog = VocabularyCatalog::from_graph(&baseline)?;
        let mut ontology = baseline;
        if with_ext {
            let (ext, p) = read_turtle_files(&turtle_files(&layout.extensions_dir())?)?;
            ontology.extend_disjoint(&ext);
            prefixes.merge_missing(&p);
        }
        (ontology, prefixes, catalog)
    } else {
        let (ontology, prefixes) = read_turtle_files(&expand(&args.ontology)?)?;
        let catalog = VocabularyCatalog::from_graph(&ontology)?;
        (ontology, prefixes, catalog)
    };
    let shape_files = if args.shapes.is_empty() { layout.shape_files(tier, with_ext)? } else { expand(&args.shapes)? };
    Ok(Environment::from_parts(tier, catalog, ontology, &shape_files, prefixes)?)
}

fn serialize(report: &ValidationReport, format: Format, prefixes: &PrefixMap) -> String {
    match format {
        Format::Turtle => report.to_turtle(prefixes),
        Format::Json => report.to_json() + "\n",
        Format::Text => report.to_text(prefixes),
    }
}

fn validate(layout: &FixtureLayout, args: ValidateArgs) -> Result<bool, UsageError> {
    let env = environment(layout, &args.shapes)?;
    let mut inputs = Vec::with_capacity(args.data.len());
    for path in &args.data {
        inputs.push(read_turtle_file(path)?);
    }
    let run = |(graph, file_prefixes): &(intent_shacl::Graph, PrefixMap)| {
        let mut prefixes = file_prefixes.clone();
        prefixes.merge_missing(&env.prefixes);
        let report = env.validator().with_prefixes(file_prefixes).validate(graph);
        (serialize(&report, args.format, &prefixes), report.conforms)
    };
    let outputs: Vec<(String, bool)> = if args.jobs > 1 {
        rayon::ThreadPoolBuilder::new().num_threads(args.jobs).build()?.install(|| inputs.par_iter().map(run).collect())
    } else {
        inputs.iter().map(run).collect()
    };
    let mut stdout = std::io::stdout().lock();
    let many = outputs.len() > 1;
    for (path, (text, _)) in args.data.iter().zip(&outputs) {
        if many {
            let marker = match args.format {
                Format::Json => String::new(),
                _ => format!("# {}\n", path.display()),
            };
            write!(stdout, "{marker}")?;
        }
        write!(stdout, "{text}")?;
    }
    Ok(outputs.iter().all(|(_, c)| *c))
}

fn corpus_root(layout: &FixtureLayout, corpus: &Option<PathBuf>) -> PathBuf {
    corpus.clone().unwrap_or_else(|| layout.tests_dir())
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    }
    std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn test(layout: &FixtureLayout, args: TestArgs) -> Result<bool, UsageError> {
    let env = environment(layout, &args.shapes)?;
    let root = corpus_root(layout, &args.corpus);
    let files = discover(&root, args.module.as_deref())?;
    // Balance is a property of the whole corpus, so a single-module run skips it.
    let families = if args.module.is_some() { Default::default() } else { env.constraint_families() };
    let suite = run_corpus(&root, &files, &env.validator(), &env.prefixes, args.jobs, &families);
    if let Some(path) = &args.junit {
        write_file(path, &suite.junit_xml())?;
    }
    if let Some(dir) = &args.report_dir {
        for case in &suite.cases {
            if let Some(report) = &case.report {
                let name = Path::new(&case.name).with_extension("report.ttl");
                write_file(&dir.join(name), &report.to_turtle(&env.prefixes))?;
            }
        }
    }
    print!("{}", suite.summary());
    Ok(suite.success())
}

fn coverage(layout: &FixtureLayout, args: CoverageArgs) -> Result<bool, UsageError> {
    let env = environment(layout, &args.shapes)?;
    let root = corpus_root(layout, &args.corpus);
    let files = if root.is_dir() { discover(&root, None)? } else { Vec::new() };
    let report = generate_coverage(&env.catalog, &env.shapes, &files);
    write_file(&args.csv, &report.to_csv())?;
    print!("{}", report.summary(&env.prefixes));
    Ok(true)
}

fn bench(layout: &FixtureLayout, args: BenchArgs) -> Result<bool, UsageError> {
    let tiers: Vec<Tier> = match args.tier {
        Some(t) => vec![t.into()],
        None => Tier::ALL.to_vec(),
    };
    let envs = tiers.iter().map(|t| Environment::load(layout, *t)).collect::<Result<Vec<_>, _>>()?;
    let root = corpus_root(layout, &args.corpus);
    let files = discover(&root, args.module.as_deref())?;
    let config = BenchConfig { warmups: args.warmups, repetitions: args.reps };
    let result = run_benchmark(&root, &files, &envs.iter().collect::<Vec<_>>(), config)?;
    write_file(&args.csv, &result.to_csv())?;
    if let Some(path) = &args.stats {
        write_file(path, &result.stats_csv())?;
    }
    print!("{}", result.summary());
    Ok(true)
}
