//! Command-line driver behind the `aggro` binary.

use std::collections::HashMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::config::{preset, RunConfig};
use crate::corpus::{
    escape_field, load_corpus, read_predictions, write_predictions, Corpus, CorpusFormat, Label,
    Language,
};
use crate::error::{Error, Result};
use crate::evaluate::{confusion, random_baseline_with, render_report, BaselineMode, EvalReport};
use crate::featurize::FeaturePipeline;
use crate::model::{load_model_with, save_model, train_ovr, LoadOptions, OvRModel};
use crate::preprocess::{translit, Preprocessor};

#[derive(Debug, Parser)]
#[command(name = "aggro", version, about = "Aggression identification (NAG / CAG / OAG) for social-media comments")]
pub struct Cli {
    /// Only log errors.
    #[arg(long, global = true)]
    pub quiet: bool,

    /// Corpus file format.
    #[arg(long, global = true, value_name = "tsv|csv")]
    pub format: Option<CorpusFormat>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count cleaned training tokens into a spelling dictionary.
    BuildDict {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "english")]
        language: Language,
        /// Drop tokens seen fewer times.
        #[arg(long, default_value_t = 1)]
        min_count: u64,
    },
    /// Fit features and the one-vs-rest model, then save it.
    Train(TrainArgs),
    /// Label a corpus with a saved model.
    Predict {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Sentence-sentiment file for this corpus (models with sidecar sentiment).
        #[arg(long)]
        sentiment_sidecar: Option<PathBuf>,
        /// Fail unless the model was trained for this language.
        #[arg(long)]
        language: Option<Language>,
    },
    /// Score predictions against gold labels and write report files.
    Evaluate {
        #[arg(long)]
        gold: PathBuf,
        #[arg(long)]
        predictions: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
        /// Random-labeling baseline, e.g. `trials=10000,seed=7[,mode=prior]`.
        #[arg(long)]
        baseline: Option<String>,
        /// Add the model's top features to the report.
        #[arg(long)]
        model: Option<PathBuf>,
        #[arg(long, default_value_t = 10)]
        top_k: usize,
    },
    /// List the highest-weighted features of each class.
    Inspect {
        #[arg(long)]
        model: PathBuf,
        #[arg(short, long, default_value_t = 10)]
        k: usize,
        /// One `class rank feature weight` row per feature instead of columns.
        #[arg(long)]
        long: bool,
    },
    /// Print the Devanagari romanization table.
    DumpTranslitTable {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// Config file (`key = value` lines).
    #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
    pub config: Option<PathBuf>,
    /// Built-in config, e.g. `hi-U+C3+C4+C5` or `en-system-3`.
    #[arg(long)]
    pub preset: Option<String>,
    /// Override a config key, e.g. `--set embeddings=vectors.txt`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
    #[arg(long)]
    pub train: PathBuf,
    #[arg(long)]
    pub validation: Option<PathBuf>,
    #[arg(long)]
    pub model: PathBuf,
    /// Train on train + validation (no validation report).
    #[arg(long)]
    pub merge_validation: bool,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Write validation report files here.
    #[arg(long)]
    pub report_dir: Option<PathBuf>,
}

/// Parses arguments, runs the command and returns the exit code:
/// 0 success, 1 usage, 2 data, 3 resource.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    init_logging(cli.quiet);
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            log::error!("{e}");
            if cli.quiet {
                eprintln!("error: {e}");
            }
            e.exit_code()
        }
    }
}

fn init_logging(quiet: bool) {
    let level = if quiet { "error" } else { "info" };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .try_init();
}

pub fn execute(cli: &Cli) -> Result<()> {
    let format = cli.format;
    match &cli.command {
        Command::BuildDict {
            corpus,
            out,
            language,
            min_count,
        } => cmd_build_dict(corpus, out, *language, *min_count, format.unwrap_or_default()),
        Command::Train(args) => cmd_train(args, format).map(|_| ()),
        Command::Predict {
            model,
            corpus,
            out,
            sentiment_sidecar,
            language,
        } => cmd_predict(
            model,
            corpus,
            out,
            sentiment_sidecar.clone(),
            *language,
            format.unwrap_or_default(),
        ),
        Command::Evaluate {
            gold,
            predictions,
            out_dir,
            baseline,
            model,
            top_k,
        } => {
            let report = cmd_evaluate(
                gold,
                predictions,
                out_dir,
                baseline.as_deref(),
                model.as_deref(),
                *top_k,
                format.unwrap_or_default(),
            )?;
            print!("{}", report.summary());
            Ok(())
        }
        Command::Inspect { model, k, long } => {
            let model = load_model_with(model, &LoadOptions::default())?;
            let mut stdout = std::io::stdout().lock();
            let text = if *long { inspect_long(&model, *k) } else { inspect_table(&model, *k) };
            stdout.write_all(text.as_bytes()).map_err(|e| Error::io("<stdout>", e))
        }
        Command::DumpTranslitTable { out } => {
            let table = translit::dump_table();
            match out {
                Some(path) => std::fs::write(path, table).map_err(|e| Error::io(path, e)),
                None => {
                    print!("{table}");
                    Ok(())
                }
            }
        }
    }
}

pub fn cmd_build_dict(
    corpus: &Path,
    out: &Path,
    language: Language,
    min_count: u64,
    format: CorpusFormat,
) -> Result<()> {
    let corpus = load_corpus(corpus, false, language, format)?;
    let pre = Preprocessor::new(language);
    let dict = pre.build_dictionary(corpus.iter().map(|d| d.text.as_str()), min_count);
    dict.save(out)?;
    log::info!("wrote {} dictionary entries to {}", dict.len(), out.display());
    Ok(())
}

/// Resolves the config from `--config`/`--preset`, `--set` and flags.
pub fn resolve_config(args: &TrainArgs, format: Option<CorpusFormat>) -> Result<RunConfig> {
    let mut config = match (&args.config, &args.preset) {
        (Some(path), _) => RunConfig::load(path)?,
        (None, Some(name)) => preset(name)?,
        (None, None) => return Err(Error::Config("give --config or --preset".into())),
    };
    for o in &args.overrides {
        config.apply_override(o)?;
    }
    if args.merge_validation {
        config.merge_validation = true;
    }
    if let Some(seed) = args.seed {
        config.train.seed = seed;
    }
    if let Some(f) = format {
        config.format = f;
    }
    config.validate()?;
    Ok(config)
}

/// Trains and saves a model; returns the validation report when a separate
/// validation corpus was scored.
pub fn cmd_train(args: &TrainArgs, format: Option<CorpusFormat>) -> Result<Option<EvalReport>> {
    let config = resolve_config(args, format)?;
    // Resources first: a bad path must fail before any corpus work.
    let resources = config.load_resources()?;
    let train = load_corpus(&args.train, true, config.language, config.format)?;
    let validation = args
        .validation
        .as_ref()
        .map(|p| load_corpus(p, true, config.language, config.format))
        .transpose()?;
    if config.merge_validation && validation.is_none() {
        log::warn!("merge_validation is set but no validation corpus was given");
    }
    let (training, held_out) = match validation {
        Some(v) if config.merge_validation => {
            let merged = train.merged(&v)?;
            log::info!(
                "training on {} documents (train {} + validation {})",
                merged.len(),
                train.len(),
                v.len()
            );
            (merged, None)
        }
        v => {
            log::info!("training on {} documents", train.len());
            (train, v)
        }
    };
    let labels = gold_of(&training)?;
    let preprocessor = config.preprocessor(training.documents())?;
    let pipeline = FeaturePipeline::fit(
        preprocessor,
        config.block_specs()?,
        resources,
        training.documents(),
    )?;
    for (name, range) in pipeline.block_ranges() {
        log::info!("block {name}: {} features", range.len());
    }
    if let Some(cov) = pipeline.embedding_coverage(training.documents()) {
        log::info!("mean embedding coverage {cov:.4}");
    }
    let x = pipeline.transform_all(training.documents());
    let model = train_ovr(&x, &labels, &config.train)?.with_pipeline(pipeline)?;
    save_model(&model, &args.model)?;
    log::info!("model written to {}", args.model.display());

    let Some(validation) = held_out else {
        return Ok(None);
    };
    let gold = gold_of(&validation)?;
    let pred = model.predict_documents(validation.documents())?;
    let report = EvalReport::new(confusion(&gold, &pred)?);
    println!("validation weighted F1 {:.4}", report.weighted_f1);
    if let Some(dir) = &args.report_dir {
        let report = report.clone().with_top_features(top_features(&model, 10));
        render_report(&report, dir)?;
    }
    Ok(Some(report))
}

fn gold_of(corpus: &Corpus) -> Result<Vec<Label>> {
    corpus
        .iter()
        .map(|d| {
            d.gold.ok_or_else(|| Error::MalformedRecord {
                line: 0,
                message: format!("document {} has no label", d.id),
            })
        })
        .collect()
}

pub fn cmd_predict(
    model: &Path,
    corpus: &Path,
    out: &Path,
    sentiment_sidecar: Option<PathBuf>,
    language: Option<Language>,
    format: CorpusFormat,
) -> Result<()> {
    let model = load_model_with(model, &LoadOptions { sentiment_sidecar })?;
    let model_language = model.pipeline.as_ref().ok_or(Error::NotFitted)?.preprocessor().language;
    if let Some(l) = language {
        if l != model_language {
            return Err(Error::Config(format!(
                "model was trained for {model_language}, corpus is {l}"
            )));
        }
    }
    let corpus = load_corpus(corpus, false, model_language, format)?;
    let predictions = model.predict_documents(corpus.documents())?;
    write_predictions(&corpus, &predictions, out)?;
    log::info!("wrote {} predictions to {}", predictions.len(), out.display());
    Ok(())
}

/// Parses `trials=N,seed=S[,mode=uniform|prior]`.
pub fn parse_baseline(spec: &str) -> Result<(usize, u64, BaselineMode)> {
    let (mut trials, mut seed, mut mode) = (1000usize, 0u64, BaselineMode::Uniform);
    for part in spec.split([',', ' ']).filter(|p| !p.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("baseline: expected key=value, got {part:?}")))?;
        let bad = || Error::Config(format!("baseline: bad value for {k}: {v:?}"));
        match k {
            "trials" => trials = v.parse().map_err(|_| bad())?,
            "seed" => seed = v.parse().map_err(|_| bad())?,
            "mode" => mode = v.parse()?,
            _ => return Err(Error::Config(format!("baseline: unknown key {k:?}"))),
        }
    }
    Ok((trials, seed, mode))
}

pub fn cmd_evaluate(
    gold: &Path,
    predictions: &Path,
    out_dir: &Path,
    baseline: Option<&str>,
    model: Option<&Path>,
    top_k: usize,
    format: CorpusFormat,
) -> Result<EvalReport> {
    let gold = load_corpus(gold, true, Language::English, format)?;
    let gold_labels = gold_of(&gold)?;
    let predicted: HashMap<String, Label> = read_predictions(predictions)?.into_iter().collect();
    let mut pred = Vec::with_capacity(gold.len());
    for d in &gold {
        let label = predicted
            .get(&d.id)
            .ok_or_else(|| Error::IdMismatch(format!("no prediction for id {}", d.id)))?;
        pred.push(*label);
    }
    if predicted.len() != gold.len() {
        let ids: std::collections::HashSet<&str> = gold.iter().map(|d| d.id.as_str()).collect();
        let mut extra: Vec<&String> = predicted.keys().filter(|k| !ids.contains(k.as_str())).collect();
        extra.sort();
        return Err(Error::IdMismatch(format!(
            "prediction for unknown id {}",
            extra.first().map(|s| s.as_str()).unwrap_or("?")
        )));
    }
    let mut report = EvalReport::new(confusion(&gold_labels, &pred)?);
    if let Some(spec) = baseline {
        let (trials, seed, mode) = parse_baseline(spec)?;
        report = report.with_baseline(random_baseline_with(&gold_labels, seed, trials, mode)?);
    }
    if let Some(path) = model {
        let model = load_model_with(path, &LoadOptions::default())?;
        report = report.with_top_features(top_features(&model, top_k));
    }
    render_report(&report, out_dir)?;
    Ok(report)
}

pub fn top_features(model: &OvRModel, k: usize) -> [Vec<(String, f64)>; 3] {
    Label::ALL.map(|c| model.top_features(c, k))
}

/// `rank<TAB>NAG<TAB>CAG<TAB>OAG`, one row per rank; short columns leave
/// empty cells.
pub fn inspect_table(model: &OvRModel, k: usize) -> String {
    let cols = top_features(model, k);
    let rows = cols.iter().map(Vec::len).max().unwrap_or(0);
    let mut out = String::from("rank\tNAG\tCAG\tOAG\n");
    for r in 0..rows {
        let cells: Vec<String> = cols
            .iter()
            .map(|c| c.get(r).map(|(n, _)| escape_field(n)).unwrap_or_default())
            .collect();
        out.push_str(&format!("{}\t{}\n", r + 1, cells.join("\t")));
    }
    out
}

/// `class<TAB>rank<TAB>feature<TAB>weight` rows.
pub fn inspect_long(model: &OvRModel, k: usize) -> String {
    let mut out = String::from("class\trank\tfeature\tweight\n");
    for (label, col) in Label::ALL.iter().zip(top_features(model, k)) {
        for (r, (name, w)) in col.iter().enumerate() {
            out.push_str(&format!("{label}\t{}\t{}\t{w}\n", r + 1, escape_field(name)));
        }
    }
    out
}
