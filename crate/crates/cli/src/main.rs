use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lrbm::dataset::{generate_negatives, parse_examples, parse_facts, parse_modes, split_folds, ExampleSet, Schema};
use lrbm::eval::{cross_validate_with, CvOptions, Variant};
use lrbm::explain::{distill_single_tree, network_to_dot, network_to_json, network_to_text, paths_to_lrbm};
use lrbm::logic::{Atom, KnowledgeBase, Predicate};
use lrbm::lrbm::{model_from_json, model_to_json, save_model, train_with, BoostedModel, TrainConfig};
use lrbm::synthetic::{generate, SyntheticConfig};
use lrbm::Error;

#[derive(Parser)]
#[command(
    name = "lrbm-boost",
    version,
    about = "Boosted relational trees mapped to lifted RBMs"
)]
struct Cli {
    /// Worker threads (defaults to one per core).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Log progress to stderr.
    #[arg(long, short, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train a boosted model and write it as JSON.
    Train(TrainArgs),
    /// Score query atoms with a trained model.
    Predict(PredictArgs),
    /// Map a model to a lifted RBM and export it as JSON and DOT.
    Explain(ExplainArgs),
    /// Cross-validate on a dataset and report AUC-ROC and AUC-PR.
    Eval(EvalArgs),
    /// Write the synthetic movie dataset to a directory.
    Synth(SynthArgs),
}

#[derive(Args)]
struct DataArgs {
    /// Background facts, one ground atom per line.
    #[arg(long)]
    facts: PathBuf,
    /// Mode declarations.
    #[arg(long)]
    modes: PathBuf,
    /// Positive examples of the target.
    #[arg(long)]
    pos: PathBuf,
    /// Negative examples; sampled under the closed world when absent.
    #[arg(long)]
    neg: Option<PathBuf>,
    /// Sampled negatives per positive when no negative file is given.
    #[arg(long, default_value_t = 2.0)]
    neg_ratio: f64,
    /// Target predicate (defaults to the first declared mode).
    #[arg(long)]
    target: Option<String>,
    /// Seed for negative sampling, fold assignment and tie breaking.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct HyperArgs {
    /// Number of boosted trees.
    #[arg(long, default_value_t = 20)]
    trees: usize,
    /// Maximum leaves per tree.
    #[arg(long, default_value_t = 4)]
    leaves: usize,
    /// Coordinate-descent step size for leaf parameters.
    #[arg(long, default_value_t = 0.05, allow_negative_numbers = true)]
    lr: f64,
}

#[derive(Args)]
struct TrainArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    hyper: HyperArgs,
    /// Where to write the model.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PredictArgs {
    /// Trained model.
    #[arg(long)]
    model: PathBuf,
    /// Background facts.
    #[arg(long)]
    facts: PathBuf,
    /// Query atoms, one per line.
    #[arg(long, alias = "queries")]
    pos: PathBuf,
    /// Write predictions here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExplainMode {
    Paths,
    Distill,
}

#[derive(Args)]
struct ExplainArgs {
    /// Trained model.
    #[arg(long)]
    model: PathBuf,
    #[arg(long, value_enum, default_value_t = ExplainMode::Paths)]
    mode: ExplainMode,
    /// Depth bound of the distilled tree.
    #[arg(long, default_value_t = 10)]
    depth: usize,
    /// Background facts (distill only).
    #[arg(long)]
    facts: Option<PathBuf>,
    /// Positive examples (distill only).
    #[arg(long)]
    pos: Option<PathBuf>,
    /// Negative examples (distill only); sampled when absent.
    #[arg(long)]
    neg: Option<PathBuf>,
    #[arg(long, default_value_t = 2.0)]
    neg_ratio: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output prefix; writes PREFIX.json and PREFIX.dot.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    Boosted,
    Noboost,
    Distilled,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    hyper: HyperArgs,
    /// Number of stratified folds.
    #[arg(long, default_value_t = 5)]
    folds: usize,
    #[arg(long, value_enum, default_value_t = VariantArg::Boosted)]
    variant: VariantArg,
    /// Depth bound for the noboost and distilled variants.
    #[arg(long, default_value_t = 10)]
    depth: usize,
    /// Atoms known to be true; held-out examples are scored against this
    /// set instead of their labels.
    #[arg(long)]
    truth: Option<PathBuf>,
    /// Where to write the JSON report.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    persons: usize,
    #[arg(long, default_value_t = 20)]
    directors: usize,
    #[arg(long, default_value_t = 60)]
    movies: usize,
    /// Fraction of labels flipped.
    #[arg(long, default_value_t = 0.05)]
    noise: f64,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

/// A reportable failure with its process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }

    fn data(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: lib_code(&e),
            message: e.to_string(),
        }
    }
}

fn lib_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) => 1,
        Error::Invariant(_) => 3,
        Error::Fold { source, .. } => lib_code(source),
        _ => 2,
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn read(path: &Path) -> CliResult<String> {
    if !path.exists() {
        return Err(Failure::usage(format!("{}: no such file", path.display())));
    }
    fs::read_to_string(path).map_err(|e| Failure::data(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| Failure::data(format!("{}: {e}", path.display())))
}

/// Prefixes errors from a loader with the file they came from.
fn in_file<T>(path: &Path, r: lrbm::Result<T>) -> CliResult<T> {
    r.map_err(|e| Failure {
        code: lib_code(&e),
        message: format!("{}: {e}", path.display()),
    })
}

fn target_of(schema: &Schema, name: Option<&str>) -> CliResult<Arc<Predicate>> {
    let name = match name {
        Some(n) => n.to_string(),
        None => schema
            .modes()
            .first()
            .map(|m| m.predicate.name().to_string())
            .ok_or_else(|| Failure::usage("mode file declares no predicates"))?,
    };
    schema
        .predicate(&name)
        .cloned()
        .ok_or_else(|| Failure::usage(format!("target `{name}` has no mode declaration")))
}

struct Loaded {
    schema: Schema,
    kb: KnowledgeBase,
    examples: ExampleSet,
}

fn load_examples(
    schema: &Schema,
    kb: &mut KnowledgeBase,
    target: Arc<Predicate>,
    pos: &Path,
    neg: Option<&Path>,
    neg_ratio: f64,
    seed: u64,
) -> CliResult<ExampleSet> {
    let positives = in_file(pos, parse_examples(&read(pos)?, schema, &target))?;
    let negatives = match neg {
        Some(path) => in_file(path, parse_examples(&read(path)?, schema, &target))?,
        None => {
            let sample = generate_negatives(kb, &target, &positives, neg_ratio, seed)?;
            if sample.shortfall() > 0 {
                log::warn!(
                    "only {} of {} negatives could be sampled",
                    sample.atoms.len(),
                    sample.requested
                );
            }
            sample.atoms
        }
    };
    let examples = ExampleSet::new(target, positives, negatives)?;
    examples.register_constants(kb)?;
    Ok(examples)
}

fn load_data(args: &DataArgs) -> CliResult<Loaded> {
    let schema = in_file(&args.modes, parse_modes(&read(&args.modes)?))?;
    let target = target_of(&schema, args.target.as_deref())?;
    let mut kb = in_file(&args.facts, parse_facts(&read(&args.facts)?, &schema))?;
    let examples = load_examples(
        &schema,
        &mut kb,
        target,
        &args.pos,
        args.neg.as_deref(),
        args.neg_ratio,
        args.seed,
    )?;
    Ok(Loaded { schema, kb, examples })
}

fn train_config(hyper: &HyperArgs, seed: u64) -> TrainConfig<f64> {
    TrainConfig {
        n_trees: hyper.trees,
        max_leaves: hyper.leaves,
        learning_rate: hyper.lr,
        seed,
        ..TrainConfig::default()
    }
}

fn run_train(args: &TrainArgs) -> CliResult<()> {
    let data = load_data(&args.data)?;
    let config = train_config(&args.hyper, args.data.seed);
    println!(
        "target {} with {} positives, {} negatives, {} facts",
        data.examples.target,
        data.examples.positives.len(),
        data.examples.negatives.len(),
        data.kb.len()
    );
    println!(
        "trees {} leaves {} lr {} seed {}",
        config.n_trees, config.max_leaves, config.learning_rate, config.seed
    );
    let model = train_with(&data.kb, &data.schema, &data.examples, &config, |s| {
        println!(
            "tree {:>3}: leaves {}, sse {:.6}, mean |delta| {:.6}",
            s.tree, s.leaves, s.sse, s.mean_abs_gradient
        );
    })?;
    save_model(&model, &args.out)?;
    println!("model written to {}", args.out.display());
    Ok(())
}

/// Rewrites a single-line parse error with the line it came from.
fn at_line(e: Error, line: usize) -> String {
    match e {
        Error::Parse { message, .. } => format!("line {line}: {message}"),
        Error::TypeConflict { .. } => format!("line {line}: {}", e.to_string().split_once(": ").map_or("", |x| x.1)),
        e => format!("line {line}: {e}"),
    }
}

fn predict_line(
    model: &BoostedModel<f64>,
    kb: &KnowledgeBase,
    text: &str,
    verbose: bool,
) -> lrbm::Result<Option<String>> {
    let Some(query) = parse_examples(text, &model.schema, &model.target)?.pop() else {
        return Ok(None);
    };
    let p = model.predict(&query, kb)?;
    let mut line = format!("{query}\t{:.6}\t{:.6}", p.probability, p.psi);
    if verbose {
        let per_tree: Vec<String> = p.per_tree.iter().map(|v| format!("{v:.6}")).collect();
        line.push('\t');
        line.push_str(&per_tree.join(","));
    }
    Ok(Some(line))
}

fn run_predict(args: &PredictArgs, verbose: bool) -> CliResult<()> {
    let model: BoostedModel<f64> = in_file(&args.model, model_from_json(&read(&args.model)?))?;
    let kb = in_file(&args.facts, parse_facts(&read(&args.facts)?, &model.schema))?;
    let queries = read(&args.pos)?;
    let mut out = String::new();
    let mut errors = 0usize;
    for (i, text) in queries.lines().enumerate() {
        match predict_line(&model, &kb, text, verbose) {
            Ok(Some(line)) => {
                out.push_str(&line);
                out.push('\n');
            }
            Ok(None) => {}
            Err(e) => {
                errors += 1;
                eprintln!("{}: {}", args.pos.display(), at_line(e, i + 1));
            }
        }
    }
    match &args.out {
        Some(path) => write(path, &out)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(out.as_bytes())
                .map_err(|e| Failure::data(e.to_string()))?;
        }
    }
    if errors > 0 {
        return Err(Failure::data(format!("{errors} queries could not be scored")));
    }
    Ok(())
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut name = prefix.as_os_str().to_owned();
    name.push(suffix);
    PathBuf::from(name)
}

fn run_explain(args: &ExplainArgs, verbose: bool) -> CliResult<()> {
    let model: BoostedModel<f64> = in_file(&args.model, model_from_json(&read(&args.model)?))?;
    let model = match args.mode {
        ExplainMode::Paths => model,
        ExplainMode::Distill => {
            let (Some(facts), Some(pos)) = (&args.facts, &args.pos) else {
                return Err(Failure::usage("--mode distill needs --facts and --pos"));
            };
            let mut kb = in_file(facts, parse_facts(&read(facts)?, &model.schema))?;
            let examples = load_examples(
                &model.schema,
                &mut kb,
                Arc::clone(&model.target),
                pos,
                args.neg.as_deref(),
                args.neg_ratio,
                args.seed,
            )?;
            let distilled = distill_single_tree(&model, &examples, &kb, args.depth)?;
            let single = distilled.to_model(&model);
            let path = with_suffix(&args.out, ".model.json");
            write(&path, &model_to_json(&single)?)?;
            println!(
                "distilled tree: depth {}, {} leaves, written to {}",
                distilled.tree.depth(),
                distilled.tree.leaf_count(),
                path.display()
            );
            single
        }
    };
    let net = paths_to_lrbm(&model)?;
    let json = with_suffix(&args.out, ".json");
    let dot = with_suffix(&args.out, ".dot");
    write(&json, &network_to_json(&net)?)?;
    write(&dot, &network_to_dot(&net))?;
    println!(
        "hidden units {}, visible units {}, edges {}",
        net.hidden.len(),
        net.visible.len(),
        net.edges.len()
    );
    println!("wrote {} and {}", json.display(), dot.display());
    if verbose {
        print!("{}", network_to_text(&net));
    }
    Ok(())
}

fn read_truth(path: &Path, schema: &Schema, target: &Arc<Predicate>) -> CliResult<std::collections::HashSet<Atom>> {
    Ok(in_file(path, parse_examples(&read(path)?, schema, target))?
        .into_iter()
        .collect())
}

fn run_eval(args: &EvalArgs) -> CliResult<()> {
    let data = load_data(&args.data)?;
    let config = train_config(&args.hyper, args.data.seed);
    let folds = split_folds(&data.examples, args.folds, args.data.seed)?;
    let variant = match args.variant {
        VariantArg::Boosted => Variant::Boosted,
        VariantArg::Noboost => Variant::NoBoost { max_depth: args.depth },
        VariantArg::Distilled => Variant::Distilled { max_depth: args.depth },
    };
    let truth = match &args.truth {
        Some(path) => Some(read_truth(path, &data.schema, &data.examples.target)?),
        None => None,
    };
    let oracle = |a: &Atom| truth.as_ref().is_some_and(|t| t.contains(a));
    let options = CvOptions {
        variant,
        truth: truth.as_ref().map(|_| &oracle as lrbm::eval::Truth),
    };
    let report = cross_validate_with(&data.kb, &data.schema, &data.examples, &folds, &config, options)?;
    print!("{}", report.to_text());
    if let Some(path) = &args.out {
        write(path, &report.to_json()?)?;
        println!("report written to {}", path.display());
    }
    Ok(())
}

fn run_synth(args: &SynthArgs) -> CliResult<()> {
    let config = SyntheticConfig {
        persons: args.persons,
        directors: args.directors,
        movies: args.movies,
        label_noise: args.noise,
        seed: args.seed,
        ..SyntheticConfig::default()
    };
    let data = generate(&config)?;
    fs::create_dir_all(&args.out).map_err(|e| Failure::data(e.to_string()))?;
    let mut truth: Vec<String> = data.truth.iter().map(ToString::to_string).collect();
    truth.sort();
    let mut truth_text = truth.join(".\n");
    if !truth_text.is_empty() {
        truth_text.push_str(".\n");
    }
    let files = [
        ("modes.txt", data.modes_text()),
        ("facts.txt", data.facts_text()),
        ("pos.txt", data.positives_text()),
        ("neg.txt", data.negatives_text()),
        ("truth.txt", truth_text),
        ("target", format!("{}\n", data.examples.target.name())),
    ];
    for (name, text) in files {
        write(&args.out.join(name), &text)?;
    }
    println!(
        "{} facts, {} positives, {} negatives ({} labels flipped) in {}",
        data.kb.len(),
        data.examples.positives.len(),
        data.examples.negatives.len(),
        data.flipped,
        args.out.display()
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let level = if cli.verbose { "info" } else { "warn" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(1);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    }
    let result = match &cli.command {
        Command::Train(args) => run_train(args),
        Command::Predict(args) => run_predict(args, cli.verbose),
        Command::Explain(args) => run_explain(args, cli.verbose),
        Command::Eval(args) => run_eval(args),
        Command::Synth(args) => run_synth(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
