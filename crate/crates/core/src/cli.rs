//! The `nerforge` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;

use crate::assemble::{concat, deduplicate, drop_all_outside, split, SplitRatios};
use crate::conll::{parse_conll, write_conll, Dataset};
use crate::gazetteer::{build_index, AnnotateOptions};
use crate::label::Label;
use crate::metrics::{evaluate, unify_labels};
use crate::pipeline::{unify_datasets, Annotator};
use crate::textproc::{Abbreviations, CaseFold, LemmaTable, Lemmatizer};
use crate::wiki::{
    corpus_text, filter_vocabulary, harvest_entities, merge_external_entities, traverse, ArticleGraph,
    FilterConfig,
};

#[derive(Debug, Parser)]
#[command(name = "nerforge", version, about = "Build weakly supervised NER datasets from a gazetteer and a general-domain tagger")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mine an entity vocabulary from a category-graph snapshot.
    BuildVocab(BuildVocabArgs),
    /// Tag vocabulary mentions in text or pre-tokenized CoNLL.
    Annotate(AnnotateArgs),
    /// Merge a general-model layer with a dictionary layer.
    Unify(UnifyArgs),
    /// Filter, concatenate and optionally split CoNLL files.
    Assemble(AssembleArgs),
    /// Token-level precision/recall/F1 of predictions against gold.
    Eval(EvalArgs),
    /// Sentence, token and label counts of a CoNLL file.
    Stats(StatsArgs),
    /// Download a snapshot from a MediaWiki API (network access).
    FetchSnapshot(FetchArgs),
}

#[derive(Debug, Args)]
pub struct Threads {
    /// Worker threads; output does not depend on it.
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
}

#[derive(Debug, Args)]
pub struct BuildVocabArgs {
    #[arg(long)]
    pub snapshot: PathBuf,
    /// Seed categories, one per line.
    #[arg(long)]
    pub seeds: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub depth: usize,
    #[arg(long, default_value_t = 2)]
    pub min_interlink: u64,
    #[arg(long, default_value_t = 3)]
    pub min_category: u64,
    /// Category-name fragments, one per line.
    #[arg(long)]
    pub seed_words: Option<PathBuf>,
    /// Extra entity surfaces, one per line; exempt from the frequency filters.
    #[arg(long)]
    pub extra_entities: Option<PathBuf>,
    /// Lemma table used to fill the `lemmas` field.
    #[arg(long)]
    pub lemmas: Option<PathBuf>,
    /// Also write the traversed articles' summaries as a text corpus.
    #[arg(long)]
    pub corpus_out: Option<PathBuf>,
    /// Include article bodies in `--corpus-out`.
    #[arg(long, requires = "corpus_out")]
    pub with_bodies: bool,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub threads: Threads,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputFormat {
    Text,
    Conll,
}

#[derive(Debug, Args)]
pub struct AnnotateArgs {
    #[arg(long)]
    pub vocab: PathBuf,
    #[arg(long)]
    pub lemmas: Option<PathBuf>,
    /// Abbreviations that do not end a sentence, one per line.
    #[arg(long)]
    pub abbrev: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = InputFormat::Text)]
    pub input_format: InputFormat,
    /// Use per-entry label sequences from the vocabulary when present.
    #[arg(long)]
    pub predefined_labels: bool,
    pub input: PathBuf,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub threads: Threads,
}

#[derive(Debug, Args)]
pub struct UnifyArgs {
    pub general: PathBuf,
    pub dict: PathBuf,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub threads: Threads,
}

#[derive(Debug, Args)]
pub struct AssembleArgs {
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    #[arg(long)]
    pub dedup: bool,
    #[arg(long)]
    pub drop_all_o: bool,
    /// Train/dev/test ratios, e.g. `0.8,0.1,0.1`. `-o` is then a directory.
    #[arg(long)]
    pub split: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    pub gold: PathBuf,
    pub pred: PathBuf,
    /// Collapse every entity type to MISC before scoring.
    #[arg(long)]
    pub unify_labels: bool,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub threads: Threads,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    pub file: PathBuf,
}

#[derive(Debug, Args)]
pub struct FetchArgs {
    #[arg(long)]
    pub seeds: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub depth: usize,
    #[arg(long)]
    pub api: Option<String>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

fn read(path: &Path) -> anyhow::Result<Vec<u8>> {
    std::fs::read(path).with_context(|| format!("reading {}", path.display()))
}

fn read_lines(path: &Path) -> anyhow::Result<Vec<String>> {
    let text = String::from_utf8(read(path)?).with_context(|| format!("{} is not UTF-8", path.display()))?;
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(str::to_owned)
        .collect())
}

fn read_conll(path: &Path) -> anyhow::Result<Dataset> {
    parse_conll(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn emit(output: Option<&Path>, bytes: &[u8]) -> anyhow::Result<()> {
    match output {
        Some(path) if path != Path::new("-") => {
            std::fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
        }
        _ => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()?;
            Ok(())
        }
    }
}

fn with_threads<T: Send>(threads: &Threads, f: impl FnOnce() -> T + Send) -> anyhow::Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.threads.max(1))
        .build()
        .context("building thread pool")?;
    Ok(pool.install(f))
}

fn load_lemmatizer(path: Option<&Path>) -> anyhow::Result<Box<dyn Lemmatizer>> {
    Ok(match path {
        Some(p) => Box::new(LemmaTable::from_file(p)?),
        None => Box::new(CaseFold),
    })
}

fn build_vocab(args: &BuildVocabArgs) -> anyhow::Result<()> {
    let graph = ArticleGraph::load(&args.snapshot)?;
    let seeds = read_lines(&args.seeds)?;
    let traversal = traverse(&graph, &seeds, args.depth)?;
    info!(
        "traversed {} categories, {} articles",
        traversal.categories_visited.len(),
        traversal.articles.len()
    );
    let raw = with_threads(&args.threads, || harvest_entities(&graph, &traversal.articles))?;
    let config = FilterConfig {
        min_interlink: args.min_interlink,
        min_category: args.min_category,
        seed_words: match &args.seed_words {
            Some(p) => read_lines(p)?,
            None => Vec::new(),
        },
    };
    let mut vocab = filter_vocabulary(&raw, &config);
    info!("{} of {} candidate entities kept", vocab.len(), raw.len());
    if let Some(path) = &args.extra_entities {
        let (merged, report) = merge_external_entities(&vocab, &read_lines(path)?);
        if !report.duplicates.is_empty() {
            log::warn!("{} extra entities already present: {:?}", report.duplicates.len(), report.duplicates);
        }
        vocab = merged;
    }
    let lem = load_lemmatizer(args.lemmas.as_deref())?;
    vocab.fill_lemmas(lem.as_ref());

    if let Some(path) = &args.corpus_out {
        let text = corpus_text(&graph, &traversal.articles, args.with_bodies);
        std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    }
    emit(args.output.as_deref(), &vocab.to_jsonl())
}

fn annotate_cmd(args: &AnnotateArgs) -> anyhow::Result<()> {
    let vocab = crate::wiki::Vocabulary::load(&args.vocab)?;
    let lem = load_lemmatizer(args.lemmas.as_deref())?;
    let (index, report) = build_index(&vocab, lem.as_ref())?;
    info!(
        "index: {} patterns, {} collisions, {} skipped",
        index.len(),
        report.collisions.len(),
        report.skipped_empty.len()
    );
    let annotator = Annotator {
        index: &index,
        lemmatizer: lem.as_ref(),
        options: AnnotateOptions {
            predefined_labels: args.predefined_labels,
        },
    };
    let ds = match args.input_format {
        InputFormat::Text => {
            let bytes = read(&args.input)?;
            let text = std::str::from_utf8(&bytes).with_context(|| format!("{} is not UTF-8", args.input.display()))?;
            let abbrev = match &args.abbrev {
                Some(p) => Abbreviations::from_file(p)?,
                None => Abbreviations::default(),
            };
            with_threads(&args.threads, || annotator.annotate_text(text, &abbrev))??
        }
        InputFormat::Conll => {
            let input = read_conll(&args.input)?;
            with_threads(&args.threads, || annotator.annotate_dataset(&input))??
        }
    };
    emit(args.output.as_deref(), &write_conll(&ds))
}

fn unify_cmd(args: &UnifyArgs) -> anyhow::Result<()> {
    let general = read_conll(&args.general)?;
    let dict = read_conll(&args.dict)?;
    let merged = with_threads(&args.threads, || unify_datasets(&general, &dict))?
        .with_context(|| format!("unifying {} with {}", args.general.display(), args.dict.display()))?;
    emit(args.output.as_deref(), &write_conll(&merged))
}

fn assemble_cmd(args: &AssembleArgs) -> anyhow::Result<()> {
    let mut ds = Dataset::new();
    for path in &args.inputs {
        let source = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        let part = read_conll(path)?.with_source(&source);
        info!("{}: {} sentences", path.display(), part.len());
        ds = concat(&ds, &part);
    }
    // Drop before dedup so an annotated copy of a sentence wins over an
    // all-O copy of the same text.
    if args.drop_all_o {
        let before = ds.len();
        ds = drop_all_outside(&ds);
        info!("dropped {} all-O sentences", before - ds.len());
    }
    if args.dedup {
        let (out, report) = deduplicate(&ds);
        info!("removed {} duplicates ({} with conflicting tags)", report.removed, report.tag_conflicts);
        ds = out;
    }
    match &args.split {
        None => emit(args.output.as_deref(), &write_conll(&ds)),
        Some(ratios) => {
            let ratios = SplitRatios::parse(ratios)?;
            let Some(dir) = &args.output else {
                bail!("--split needs -o <directory>");
            };
            std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            let parts = split(&ds, ratios, args.seed);
            for (name, part) in [("train", &parts.train), ("dev", &parts.dev), ("test", &parts.test)] {
                let path = dir.join(format!("{name}.conll"));
                std::fs::write(&path, write_conll(part)).with_context(|| format!("writing {}", path.display()))?;
                info!("{}: {} sentences", path.display(), part.len());
            }
            Ok(())
        }
    }
}

fn eval_cmd(args: &EvalArgs) -> anyhow::Result<()> {
    let mut gold = read_conll(&args.gold)?;
    let mut pred = read_conll(&args.pred)?;
    if args.unify_labels {
        gold = unify_labels(&gold);
        pred = unify_labels(&pred);
    }
    let report = with_threads(&args.threads, || evaluate(&gold, &pred))??;
    let mut json = report.to_json();
    json.push('\n');
    match &args.output {
        Some(path) => {
            emit(Some(path), json.as_bytes())?;
            println!("{report}");
            Ok(())
        }
        None => emit(None, json.as_bytes()),
    }
}

fn stats_cmd(args: &StatsArgs) -> anyhow::Result<()> {
    let ds = read_conll(&args.file)?;
    let mut out = String::new();
    out.push_str(&format!("sentences\t{}\n", ds.len()));
    out.push_str(&format!("tokens\t{}\n", ds.token_count()));
    out.push_str(&format!("iob_invalid\t{}\n", ds.iob_invalid().len()));
    out.push_str(&format!(
        "all_o\t{}\n",
        ds.sentences().iter().filter(|s| s.is_all_outside()).count()
    ));
    for label in Label::ALL {
        let n = ds
            .sentences()
            .iter()
            .flat_map(|s| s.tags())
            .filter(|&&t| t == label)
            .count();
        out.push_str(&format!("{label}\t{n}\n"));
    }
    emit(None, out.as_bytes())
}

#[cfg(feature = "fetch")]
fn fetch_cmd(args: &FetchArgs) -> anyhow::Result<()> {
    use crate::wiki::fetch::{Fetcher, DEFAULT_API};

    let seeds = read_lines(&args.seeds)?;
    let fetcher = Fetcher::new(args.api.as_deref().unwrap_or(DEFAULT_API))?;
    let graph = fetcher.fetch(&seeds, args.depth)?;
    let mut out = Vec::new();
    for record in graph.to_records() {
        serde_json::to_writer(&mut out, &record)?;
        out.push(b'\n');
    }
    emit(args.output.as_deref(), &out)
}

#[cfg(not(feature = "fetch"))]
fn fetch_cmd(_: &FetchArgs) -> anyhow::Result<()> {
    bail!("this build has no network support; rebuild with the `fetch` feature")
}

pub fn dispatch(cli: &Cli) -> anyhow::Result<()> {
    match &cli.command {
        Command::BuildVocab(a) => build_vocab(a),
        Command::Annotate(a) => annotate_cmd(a),
        Command::Unify(a) => unify_cmd(a),
        Command::Assemble(a) => assemble_cmd(a),
        Command::Eval(a) => eval_cmd(a),
        Command::Stats(a) => stats_cmd(a),
        Command::FetchSnapshot(a) => fetch_cmd(a),
    }
}

/// Parse `argv`, run, and return the process exit status: 0 on success,
/// 1 on a pipeline error, 2 on a usage error.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}
