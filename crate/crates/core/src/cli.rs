//! Command-line front end. `main.rs` only forwards to [`main_with_args`].

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::augment::{AugmentConfig, Augmenter, Method, StopWords, SynonymLexicon};
use crate::corpus::{classify_mention, corpus_statistics, AnnotatedSentence, OverlapCategory};
use crate::error::{Error, Result};
use crate::eval::{
    breakdown, evaluate, restrict_to, subset_disc_only, subset_disc_sentences, Axis,
};
use crate::io::{
    file_stem, parse_plain_sentences, parse_standoff, read_conll, read_standoff, read_utf8,
    write_conll, write_file, write_standoff, Warning,
};
use crate::schemas::{flat_merge, Schema};
use crate::scorer::{train_with_log, PerceptronModel};
use crate::similarity::{rank_sources, ContentFilter, PplMode, SimilarityOptions, Source};
use crate::transition::{decode, oracle, reference_oracle, write_trace, REFERENCE_MAX_LEN};

/// Discontinuous and overlapping mention recognition toolkit.
#[derive(Debug, Parser)]
#[command(name = "discner", version, args_override_self = true)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Seed for every random choice (shuffling, augmentation).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Worker threads for per-sentence work; defaults to all cores.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    /// File of `key=value` lines supplying default flag values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// More diagnostics on standard error (repeatable).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Descriptive statistics of an annotated corpus.
    Stats(StatsArgs),
    /// Convert between CoNLL and standoff files.
    Convert(ConvertArgs),
    /// Augment a training corpus.
    Augment(AugmentArgs),
    /// Rank candidate corpora by similarity to a target corpus.
    Similarity(SimilarityArgs),
    /// Train a transition model.
    Train(TrainArgs),
    /// Tag sentences with a trained model.
    Tag(TagArgs),
    /// Strict-match precision, recall and F1.
    Evaluate(EvaluateArgs),
    /// Report which gold mentions the oracle can reach.
    OracleCheck(OracleCheckArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Two columns, token and tag.
    Conll,
    /// Tokenized text file plus an annotation file.
    Standoff,
    /// Tokenized text only, one sentence per line.
    Plain,
}

#[derive(Debug, Args)]
pub struct CorpusArgs {
    /// Corpus file (CoNLL file or standoff/plain text file).
    #[arg(long, short)]
    pub input: PathBuf,
    /// Standoff annotation file.
    #[arg(long)]
    pub ann: Option<PathBuf>,
    /// Input format; standoff when --ann is given, else conll.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Tag schema of CoNLL input.
    #[arg(long, default_value = "bio")]
    pub schema: Schema,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output file (CoNLL file or standoff text); standard output if absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Standoff annotation output.
    #[arg(long)]
    pub output_ann: Option<PathBuf>,
    /// Output format; standoff when --output-ann is given, else conll.
    #[arg(long, value_enum)]
    pub to: Option<Format>,
    /// Tag schema of CoNLL output.
    #[arg(long, default_value = "bio")]
    pub to_schema: Schema,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConvertArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    #[command(flatten)]
    pub out: OutputArgs,
    /// Replace discontinuous and overlapping mentions by merged flat spans.
    #[arg(long)]
    pub flat_merge: bool,
}

#[derive(Debug, Args)]
pub struct AugmentArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    #[command(flatten)]
    pub out: OutputArgs,
    /// lwtr, sr, mr, sis or all.
    #[arg(long, default_value = "all")]
    pub method: Method,
    /// Per-token (or per-mention) replacement probability.
    #[arg(long, default_value_t = 0.3)]
    pub p: f64,
    /// Augmented instances per original and method.
    #[arg(long, default_value_t = 1)]
    pub per_instance: usize,
    /// Synonym lexicon: `token<TAB>synonym|synonym...` lines.
    #[arg(long)]
    pub lexicon: Option<PathBuf>,
    /// Stop word list replacing the packaged one.
    #[arg(long)]
    pub stopwords: Option<PathBuf>,
    /// Let mention replacement rewrite discontinuous mentions too.
    #[arg(long)]
    pub mr_discontinuous: bool,
}

#[derive(Debug, Args)]
pub struct SimilarityArgs {
    /// Candidate corpus as NAME=PATH (repeatable).
    #[arg(long = "source", required = true)]
    pub sources: Vec<String>,
    /// Target corpus.
    #[arg(long)]
    pub target: PathBuf,
    /// Format of source and target files.
    #[arg(long, value_enum, default_value = "plain")]
    pub format: Format,
    /// summed or mean.
    #[arg(long, default_value = "mean")]
    pub ppl_mode: PplMode,
    /// Additive smoothing for JSD term distributions.
    #[arg(long, default_value_t = 0.0)]
    pub jsd_epsilon: f64,
    /// Stop word list replacing the packaged one.
    #[arg(long)]
    pub stopwords: Option<PathBuf>,
    /// Shortest content word.
    #[arg(long, default_value_t = 2)]
    pub min_len: usize,
    /// Tokens are `word/TAG`; keep nouns, verbs and adjectives.
    #[arg(long)]
    pub pos_tagged: bool,
    /// Print `key=value` lines instead of a table.
    #[arg(long)]
    pub key_values: bool,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    /// Where to write the model.
    #[arg(long, short)]
    pub model: PathBuf,
    #[arg(long, default_value_t = 20)]
    pub epochs: usize,
}

#[derive(Debug, Args)]
pub struct TagArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    #[command(flatten)]
    pub out: OutputArgs,
    /// Trained model file.
    #[arg(long, short)]
    pub model: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Gold corpus file.
    #[arg(long)]
    pub gold: PathBuf,
    /// Gold standoff annotations.
    #[arg(long)]
    pub gold_ann: Option<PathBuf>,
    /// Predicted corpus file.
    #[arg(long)]
    pub pred: PathBuf,
    /// Predicted standoff annotations.
    #[arg(long)]
    pub pred_ann: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long, default_value = "bio")]
    pub schema: Schema,
    /// Also score sentences with discontinuous gold and discontinuous mentions alone.
    #[arg(long)]
    pub disc: bool,
    /// Recall per bucket: mention_length, interval_length or overlap_category.
    #[arg(long)]
    pub breakdown: Vec<Axis>,
}

#[derive(Debug, Args)]
pub struct OracleCheckArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    /// Write each sentence's oracle actions here.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// List unreachable mentions per sentence.
    #[arg(long)]
    pub per_sentence: bool,
    /// Compare with the exhaustive search oracle on short sentences.
    #[arg(long)]
    pub reference: bool,
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code: 0 on success, 1 on usage errors, 2 on data errors.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let args = match with_config_defaults(args) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    init_logging(config.verbose);
    match run(&config) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_) => 1,
                _ => 2,
            }
        }
    }
}

fn init_logging(verbose: u8) {
    let level = match verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    let _ = env_logger::Builder::new()
        .filter_level(level)
        .format_timestamp(None)
        .target(env_logger::Target::Stderr)
        .try_init();
}

fn subcommand_names() -> Vec<String> {
    RunConfig::command()
        .get_subcommands()
        .map(|c| c.get_name().to_string())
        .collect()
}

/// Turns a `key=value` file into flags. Keys are flag names without the
/// leading dashes; `true`/`false` switch boolean flags.
pub fn parse_config_file(text: &str, origin: &str) -> Result<Vec<OsString>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("{origin}:{}: expected `key=value`", i + 1)))?;
        let key = key.trim().replace('_', "-");
        if key.is_empty() || key == "config" {
            return Err(Error::Config(format!(
                "{origin}:{}: bad key `{key}`",
                i + 1
            )));
        }
        match value.trim() {
            "true" => out.push(format!("--{key}").into()),
            "false" => {}
            v => {
                out.push(format!("--{key}").into());
                out.push(v.into());
            }
        }
    }
    Ok(out)
}

/// Rewrites the arguments so that config file values come right after the
/// subcommand and before every explicit flag, which therefore wins.
fn with_config_defaults(args: Vec<OsString>) -> Result<Vec<OsString>> {
    let mut path = None;
    for (i, a) in args.iter().enumerate() {
        let s = a.to_string_lossy();
        if s == "--config" {
            path = args.get(i + 1).map(PathBuf::from);
        } else if let Some(p) = s.strip_prefix("--config=") {
            path = Some(PathBuf::from(p));
        }
    }
    let Some(path) = path else {
        return Ok(args);
    };
    let names = subcommand_names();
    let Some(sub) = args
        .iter()
        .skip(1)
        .position(|a| names.iter().any(|n| a.to_str() == Some(n)))
        .map(|p| p + 1)
    else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| Error::Config(format!("reading config {}: {e}", path.display())))?;
    let defaults = parse_config_file(&text, &path.display().to_string())?;
    let mut out = vec![args[0].clone(), args[sub].clone()];
    out.extend(defaults);
    out.extend(
        args.iter()
            .enumerate()
            .filter(|&(i, _)| i != 0 && i != sub)
            .map(|(_, a)| a.clone()),
    );
    Ok(out)
}

pub fn run(config: &RunConfig) -> Result<()> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = config.jobs {
        if jobs == 0 {
            return Err(Error::Config("--jobs must be at least 1".into()));
        }
        builder = builder.num_threads(jobs);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    pool.install(|| match &config.command {
        Command::Stats(a) => cmd_stats(a),
        Command::Convert(a) => cmd_convert(a),
        Command::Augment(a) => cmd_augment(a, config.seed),
        Command::Similarity(a) => cmd_similarity(a),
        Command::Train(a) => cmd_train(a, config.seed),
        Command::Tag(a) => cmd_tag(a),
        Command::Evaluate(a) => cmd_evaluate(a),
        Command::OracleCheck(a) => cmd_oracle_check(a),
    })
}

fn report_warnings(warnings: &[Warning]) {
    for w in warnings {
        log::warn!("{w}");
    }
}

fn load(
    path: &Path,
    ann: Option<&Path>,
    format: Option<Format>,
    schema: Schema,
) -> Result<Vec<AnnotatedSentence>> {
    let format = format.unwrap_or(if ann.is_some() {
        Format::Standoff
    } else {
        Format::Conll
    });
    let (corpus, warnings) = match format {
        Format::Conll => read_conll(path, schema)?,
        Format::Standoff => match ann {
            Some(ann) => read_standoff(path, ann)?,
            None => {
                let text = read_utf8(path)?;
                parse_standoff(&text, &path.display().to_string(), "", "", &file_stem(path))?
            }
        },
        Format::Plain => {
            let text = read_utf8(path)?;
            parse_standoff(&text, &path.display().to_string(), "", "", &file_stem(path))?
        }
    };
    report_warnings(&warnings);
    Ok(corpus)
}

fn load_corpus(args: &CorpusArgs) -> Result<Vec<AnnotatedSentence>> {
    load(&args.input, args.ann.as_deref(), args.format, args.schema)
}

fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(p) => write_file(p, text),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Error::io("writing standard output", e)),
    }
}

fn store(corpus: &[AnnotatedSentence], out: &OutputArgs) -> Result<()> {
    let format = out.to.unwrap_or(if out.output_ann.is_some() {
        Format::Standoff
    } else {
        Format::Conll
    });
    match format {
        Format::Conll => {
            let (text, warnings) = write_conll(corpus, out.to_schema)?;
            report_warnings(&warnings);
            emit(out.output.as_deref(), &text)
        }
        Format::Standoff => {
            let ann_path = out
                .output_ann
                .as_deref()
                .ok_or_else(|| Error::Config("standoff output needs --output-ann".into()))?;
            let (text, ann) = write_standoff(corpus);
            emit(out.output.as_deref(), &text)?;
            write_file(ann_path, &ann)
        }
        Format::Plain => {
            let text: String = corpus
                .iter()
                .map(|a| a.sentence.tokens.join(" ") + "\n")
                .collect();
            emit(out.output.as_deref(), &text)
        }
    }
}

fn cmd_stats(args: &StatsArgs) -> Result<()> {
    let corpus = load_corpus(&args.corpus)?;
    let report = corpus_statistics(&corpus)?;
    emit(args.output.as_deref(), &report.to_string())
}

fn cmd_convert(args: &ConvertArgs) -> Result<()> {
    let mut corpus = load_corpus(&args.corpus)?;
    if args.flat_merge {
        corpus = corpus.iter().map(flat_merge).collect();
    }
    store(&corpus, &args.out)
}

fn cmd_augment(args: &AugmentArgs, seed: u64) -> Result<()> {
    let corpus = load_corpus(&args.corpus)?;
    let stopwords = match &args.stopwords {
        Some(p) => StopWords::from_file(p)?,
        None => StopWords::default(),
    };
    let lexicon = args
        .lexicon
        .as_deref()
        .map(SynonymLexicon::from_file)
        .transpose()?;
    let config = AugmentConfig {
        method: args.method,
        p: args.p,
        per_instance: args.per_instance,
        seed,
        mr_discontinuous: args.mr_discontinuous,
    };
    let augmenter = Augmenter::new(config, &corpus, stopwords, lexicon)?;
    let out = augmenter.augment_corpus(&corpus)?;
    log::info!(
        "{} originals, {} augmented",
        corpus.len(),
        out.len() - corpus.len()
    );
    store(&out, &args.out)
}

fn read_sentences(path: &Path, format: Format) -> Result<Vec<Vec<String>>> {
    Ok(match format {
        Format::Plain => parse_plain_sentences(&read_utf8(path)?),
        other => load(path, None, Some(other), Schema::Bio)?
            .into_iter()
            .map(|a| a.sentence.tokens)
            .collect(),
    })
}

fn cmd_similarity(args: &SimilarityArgs) -> Result<()> {
    let mut sources = Vec::new();
    for spec in &args.sources {
        let (name, path) = spec
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("--source expects NAME=PATH, got `{spec}`")))?;
        sources.push(Source {
            name: name.to_string(),
            sentences: read_sentences(Path::new(path), args.format)?,
        });
    }
    let target = read_sentences(&args.target, args.format)?;
    let stopwords = match &args.stopwords {
        Some(p) => StopWords::from_file(p)?,
        None => StopWords::default(),
    };
    let options = SimilarityOptions {
        filter: ContentFilter {
            stopwords,
            min_len: args.min_len,
            pos_tagged: args.pos_tagged,
        },
        ppl_mode: args.ppl_mode,
        jsd_epsilon: args.jsd_epsilon,
    };
    let report = rank_sources(&sources, &target, &options)?;
    let text = if args.key_values {
        report.key_values().into_iter().map(|l| l + "\n").collect()
    } else {
        report.to_string()
    };
    emit(args.output.as_deref(), &text)
}

fn cmd_train(args: &TrainArgs, seed: u64) -> Result<()> {
    let corpus = load_corpus(&args.corpus)?;
    let (model, log) = train_with_log(&corpus, args.epochs, seed)?;
    if log.unreachable_mentions > 0 {
        log::warn!(
            "{} gold mentions are unreachable by the oracle and were left out of training",
            log.unreachable_mentions
        );
    }
    write_model(&model, &args.model)
}

fn write_model(model: &PerceptronModel, path: &Path) -> Result<()> {
    std::fs::write(path, model.to_bytes())
        .map_err(|e| Error::io(format!("writing {}", path.display()), e))
}

fn cmd_tag(args: &TagArgs) -> Result<()> {
    let bytes = std::fs::read(&args.model)
        .map_err(|e| Error::io(format!("reading {}", args.model.display()), e))?;
    let model = PerceptronModel::from_bytes(&bytes)?;
    let corpus = load_corpus(&args.corpus)?;
    let tagged: Vec<AnnotatedSentence> = corpus
        .par_iter()
        .map(|a| {
            let (mentions, _) = decode(&a.sentence, &model);
            AnnotatedSentence::new(a.sentence.clone(), mentions)
        })
        .collect::<Result<_>>()?;
    store(&tagged, &args.out)
}

fn cmd_evaluate(args: &EvaluateArgs) -> Result<()> {
    let gold = load(
        &args.gold,
        args.gold_ann.as_deref(),
        args.format,
        args.schema,
    )?;
    let pred = load(
        &args.pred,
        args.pred_ann.as_deref(),
        args.format,
        args.schema,
    )?;
    let mut lines = evaluate(&gold, &pred)?.key_values("");
    if args.disc {
        let gold_sub = subset_disc_sentences(&gold);
        let pred_sub = restrict_to(&gold_sub, &pred);
        lines.extend(evaluate(&gold_sub, &pred_sub)?.key_values("disc_sentences."));
        lines.extend(subset_disc_only(&gold, &pred)?.key_values("disc_mentions."));
    }
    for &axis in &args.breakdown {
        lines.extend(breakdown(&gold, &pred, axis)?.key_values());
    }
    emit(
        None,
        &lines.into_iter().map(|l| l + "\n").collect::<String>(),
    )
}

fn cmd_oracle_check(args: &OracleCheckArgs) -> Result<()> {
    let corpus = load_corpus(&args.corpus)?;
    let results: Vec<_> = corpus.par_iter().map(oracle).collect();
    let mut per_category: BTreeMap<OverlapCategory, (usize, usize)> = BTreeMap::new();
    let mut lines = Vec::new();
    let mut trace = String::new();
    for (a, r) in corpus.iter().zip(&results) {
        for m in &a.mentions {
            let shape = classify_mention(m, a)?;
            let entry = per_category.entry(shape.overlap_category).or_default();
            if r.unreachable.contains(m) {
                entry.1 += 1;
            } else {
                entry.0 += 1;
            }
        }
        if args.per_sentence && !r.unreachable.is_empty() {
            let ms: Vec<String> = r.unreachable.iter().map(|m| m.to_string()).collect();
            lines.push(format!(
                "sentence {} unreachable={} {}",
                a.sentence.key(),
                r.unreachable.len(),
                ms.join(" ")
            ));
        }
        if args.trace.is_some() {
            trace.push_str(&format!("# {}\n", a.sentence.key()));
            trace.push_str(&write_trace(&r.actions));
            trace.push('\n');
        }
    }
    for (cat, (reach, unreach)) in &per_category {
        lines.push(format!("{cat} reachable={reach} unreachable={unreach}"));
    }
    let reachable: usize = results.iter().map(|r| r.reachable.len()).sum();
    let unreachable: usize = results.iter().map(|r| r.unreachable.len()).sum();
    lines.push(format!("sentences={}", corpus.len()));
    lines.push(format!("mentions={}", reachable + unreachable));
    lines.push(format!("reachable={reachable}"));
    lines.push(format!("unreachable={unreachable}"));
    if args.reference {
        let short: Vec<usize> = (0..corpus.len())
            .filter(|&i| corpus[i].sentence.len() <= REFERENCE_MAX_LEN)
            .collect();
        let reference: Vec<_> = short
            .par_iter()
            .map(|&i| reference_oracle(&corpus[i], REFERENCE_MAX_LEN))
            .collect::<Result<_>>()?;
        let mut greedy_total = 0;
        let mut reference_total = 0;
        for (&i, rr) in short.iter().zip(&reference) {
            let g = results[i].reachable.len();
            greedy_total += g;
            reference_total += rr.reachable.len();
            if g < rr.reachable.len() {
                lines.push(format!(
                    "discrepancy {} greedy={g} reference={}",
                    corpus[i].sentence.key(),
                    rr.reachable.len()
                ));
            }
        }
        lines.push(format!("reference_sentences={}", short.len()));
        lines.push(format!("greedy_reachable={greedy_total}"));
        lines.push(format!("reference_reachable={reference_total}"));
    }
    if let Some(path) = &args.trace {
        write_file(path, &trace)?;
    }
    emit(
        None,
        &lines.into_iter().map(|l| l + "\n").collect::<String>(),
    )
}
