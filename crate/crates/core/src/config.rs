//! Run configuration: a flat `key = value` file naming the language, the
//! feature blocks and, optionally, preprocessing switches, resource paths
//! and optimizer settings. A minimal file is two lines:
//!
//! ```text
//! language = hindi
//! blocks = U+C3+C4+C5
//! ```
//!
//! Named presets cover every single-block and combination row of the
//! validation grid for both languages, plus the submitted systems.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::corpus::{CorpusFormat, Document, Language};
use crate::error::{Error, Result};
use crate::featurize::{DenseResources, FeatureBlockSpec, SentimentSource, Shared, DEFAULT_MIN_DF};
use crate::lexfeatures::{
    load_embeddings, CategoryLexicon, SentimentLexicon, SentimentSidecar, WeightedLexicon,
};
use crate::model::TrainConfig;
use crate::preprocess::{CleanConfig, Preprocessor, SpellDictionary};
use crate::resource::ResourceRef;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SentimentKind {
    #[default]
    Builtin,
    Sidecar,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub language: Language,
    /// Canonical block names in concatenation order.
    pub blocks: Vec<String>,
    pub min_df: u64,
    pub train: TrainConfig,
    pub spell_correct: bool,
    /// Dictionary file; when absent and `spell_correct` is on, one is
    /// built from the training corpus.
    pub spell_dict: Option<PathBuf>,
    /// Defaults by language when unset.
    pub transliterate: Option<bool>,
    pub stemming: Option<bool>,
    pub expansions: Option<bool>,
    pub embeddings: Option<PathBuf>,
    pub normalize_embeddings: bool,
    pub liwc_lexicon: Option<PathBuf>,
    pub gender_lexicon: Option<PathBuf>,
    pub sentiment: SentimentKind,
    pub sentiment_pos: Option<PathBuf>,
    pub sentiment_neg: Option<PathBuf>,
    pub sentiment_sidecar: Option<PathBuf>,
    pub sentiment_mild_share: f64,
    pub merge_validation: bool,
    pub format: CorpusFormat,
}

impl RunConfig {
    pub fn new(language: Language, blocks: &str) -> Result<RunConfig> {
        let mut c = RunConfig {
            language,
            blocks: Vec::new(),
            min_df: DEFAULT_MIN_DF,
            train: TrainConfig::default(),
            spell_correct: false,
            spell_dict: None,
            transliterate: None,
            stemming: None,
            expansions: None,
            embeddings: None,
            normalize_embeddings: false,
            liwc_lexicon: None,
            gender_lexicon: None,
            sentiment: SentimentKind::Builtin,
            sentiment_pos: None,
            sentiment_neg: None,
            sentiment_sidecar: None,
            sentiment_mild_share: 0.7,
            merge_validation: false,
            format: CorpusFormat::Tsv,
        };
        c.set("blocks", blocks, Path::new(""))?;
        Ok(c)
    }

    /// Parses config text; relative paths resolve against `base_dir`.
    pub fn parse(text: &str, base_dir: &Path) -> Result<RunConfig> {
        let mut language = None;
        let mut blocks = None;
        let mut rest = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", i + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "language" => language = Some(value.to_string()),
                "blocks" => blocks = Some(value.to_string()),
                _ => rest.push((i + 1, key.to_string(), value.to_string())),
            }
        }
        let language: Language = language
            .ok_or_else(|| Error::Config("missing `language`".into()))?
            .parse()
            .map_err(|_| Error::Config("language must be english or hindi".into()))?;
        let blocks = blocks.ok_or_else(|| Error::Config("missing `blocks`".into()))?;
        let mut config = RunConfig::new(language, &blocks)?;
        for (line, key, value) in rest {
            config
                .set(&key, &value, base_dir)
                .map_err(|e| Error::Config(format!("line {line}: {e}")))?;
        }
        Ok(config)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<RunConfig> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new(""));
        RunConfig::parse(&text, base).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str, base_dir: &Path) -> Result<()> {
        fn flag(key: &str, v: &str) -> Result<bool> {
            match v.to_ascii_lowercase().as_str() {
                "true" | "on" | "yes" | "1" => Ok(true),
                "false" | "off" | "no" | "0" => Ok(false),
                _ => Err(Error::Config(format!("{key}: expected a boolean, got {v:?}"))),
            }
        }
        fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
            v.parse()
                .map_err(|_| Error::Config(format!("{key}: cannot parse {v:?}")))
        }
        let path = || Some(base_dir.join(value));
        match key {
            "language" => {
                self.language = value
                    .parse()
                    .map_err(|_| Error::Config("language must be english or hindi".into()))?
            }
            "blocks" => {
                self.blocks = FeatureBlockSpec::parse_list(value, DEFAULT_MIN_DF)?
                    .into_iter()
                    .map(|s| s.name)
                    .collect()
            }
            "min_df" => self.min_df = num(key, value)?,
            "reg_lambda" => self.train.reg_lambda = num(key, value)?,
            "learning_rate" => self.train.learning_rate = num(key, value)?,
            "max_iters" => self.train.max_iters = num(key, value)?,
            "grad_tol" => self.train.grad_tol = num(key, value)?,
            "seed" => self.train.seed = num(key, value)?,
            "spell_correct" => self.spell_correct = flag(key, value)?,
            "spell_dict" => self.spell_dict = path(),
            "transliterate" => self.transliterate = Some(flag(key, value)?),
            "stemming" => self.stemming = Some(flag(key, value)?),
            "expansions" => self.expansions = Some(flag(key, value)?),
            "embeddings" => self.embeddings = path(),
            "normalize_embeddings" => self.normalize_embeddings = flag(key, value)?,
            "liwc_lexicon" => self.liwc_lexicon = path(),
            "gender_lexicon" => self.gender_lexicon = path(),
            "sentiment" => {
                self.sentiment = match value {
                    "builtin" => SentimentKind::Builtin,
                    "sidecar" => SentimentKind::Sidecar,
                    _ => return Err(Error::Config("sentiment must be builtin or sidecar".into())),
                }
            }
            "sentiment_pos" => self.sentiment_pos = path(),
            "sentiment_neg" => self.sentiment_neg = path(),
            "sentiment_sidecar" => self.sentiment_sidecar = path(),
            "sentiment_mild_share" => self.sentiment_mild_share = num(key, value)?,
            "merge_validation" => self.merge_validation = flag(key, value)?,
            "format" => self.format = value.parse()?,
            other => return Err(Error::Config(format!("unknown key {other:?}"))),
        }
        Ok(())
    }

    /// Applies a `key=value` override from the command line.
    pub fn apply_override(&mut self, assignment: &str) -> Result<()> {
        let (k, v) = assignment
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("expected key=value, got {assignment:?}")))?;
        self.set(k.trim(), v.trim(), Path::new(""))
    }

    pub fn block_specs(&self) -> Result<Vec<FeatureBlockSpec>> {
        self.blocks
            .iter()
            .map(|b| FeatureBlockSpec::named(b, self.min_df))
            .collect()
    }

    fn has_block(&self, name: &str) -> bool {
        self.blocks.iter().any(|b| b == name)
    }

    /// Static checks: language/block compatibility, required resource
    /// keys, value ranges.
    pub fn validate(&self) -> Result<()> {
        self.train.validate()?;
        self.block_specs()?;
        if self.language == Language::Hindi {
            for b in ["W2V", "S", "LIWC", "GP"] {
                if self.has_block(b) {
                    return Err(Error::Config(format!(
                        "block {b} is only available for english"
                    )));
                }
            }
        }
        let need = |block: &str, key: &str, value: &Option<PathBuf>| {
            if self.has_block(block) && value.is_none() {
                Err(Error::Config(format!("block {block} needs `{key}`")))
            } else {
                Ok(())
            }
        };
        need("W2V", "embeddings", &self.embeddings)?;
        need("LIWC", "liwc_lexicon", &self.liwc_lexicon)?;
        need("GP", "gender_lexicon", &self.gender_lexicon)?;
        if self.has_block("S") && self.sentiment == SentimentKind::Sidecar {
            need("S", "sentiment_sidecar", &self.sentiment_sidecar)?;
        }
        if self.sentiment_pos.is_some() != self.sentiment_neg.is_some() {
            return Err(Error::Config(
                "sentiment_pos and sentiment_neg must be given together".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.sentiment_mild_share) {
            return Err(Error::Config("sentiment_mild_share must lie in [0, 1]".into()));
        }
        Ok(())
    }

    /// Every path the config references.
    pub fn referenced_paths(&self) -> Vec<&Path> {
        [
            &self.spell_dict,
            &self.embeddings,
            &self.liwc_lexicon,
            &self.gender_lexicon,
            &self.sentiment_pos,
            &self.sentiment_neg,
            &self.sentiment_sidecar,
        ]
        .into_iter()
        .flatten()
        .map(PathBuf::as_path)
        .collect()
    }

    /// Loads and parses everything the blocks need; other referenced files
    /// must at least exist. Run before any training work.
    pub fn load_resources(&self) -> Result<DenseResources> {
        self.validate()?;
        for p in self.referenced_paths() {
            if !p.is_file() {
                return Err(Error::resource(p, "file not found"));
            }
        }
        let mut r = DenseResources {
            normalize_embeddings: self.normalize_embeddings,
            ..Default::default()
        };
        if self.has_block("W2V") {
            let path = self.embeddings.as_deref().expect("validated");
            let table = Shared::load(path, |p| load_embeddings(p))?;
            log::info!(
                "embeddings: {} words, dimension {}",
                table.value.len(),
                table.value.dimension()
            );
            r.embeddings = Some(table);
        }
        if self.has_block("LIWC") {
            let path = self.liwc_lexicon.as_deref().expect("validated");
            r.liwc = Some(Shared::load(path, |p| CategoryLexicon::load(p))?);
        }
        if self.has_block("GP") {
            let path = self.gender_lexicon.as_deref().expect("validated");
            r.gender = Some(Shared::load(path, |p| WeightedLexicon::load(p))?);
        }
        if self.has_block("S") {
            r.sentiment = match self.sentiment {
                SentimentKind::Sidecar => {
                    let path = self.sentiment_sidecar.as_deref().expect("validated");
                    SentimentSource::Sidecar(Shared::load(path, |p| SentimentSidecar::load(p))?)
                }
                SentimentKind::Builtin => {
                    let (mut lexicon, files) = match (&self.sentiment_pos, &self.sentiment_neg) {
                        (Some(p), Some(n)) => (
                            SentimentLexicon::load(p, n)?,
                            Some([ResourceRef::of(p)?, ResourceRef::of(n)?]),
                        ),
                        _ => (SentimentLexicon::builtin(), None),
                    };
                    lexicon.mild_share = self.sentiment_mild_share;
                    SentimentSource::Builtin {
                        lexicon: Arc::new(lexicon),
                        files,
                    }
                }
            };
        }
        Ok(r)
    }

    /// Preprocessor for this config. With spell correction on and no
    /// dictionary file, the dictionary is counted from `training`.
    pub fn preprocessor(&self, training: &[Document]) -> Result<Preprocessor> {
        let mut clean = CleanConfig::for_language(self.language);
        if let Some(s) = self.stemming {
            clean.minor_stemming = s;
        }
        match self.expansions {
            Some(false) => clean.expansions.clear(),
            Some(true) if clean.expansions.is_empty() => {
                clean.expansions = CleanConfig::english().expansions
            }
            _ => {}
        }
        let mut p = Preprocessor::new(self.language);
        p.clean = clean;
        if let Some(t) = self.transliterate {
            p.transliterate = t;
        }
        if self.spell_correct {
            let dict = match &self.spell_dict {
                Some(path) => SpellDictionary::load(path)?,
                None => p.build_dictionary(training.iter().map(|d| d.text.as_str()), 1),
            };
            log::info!("spell correction with {} dictionary words", dict.len());
            p = p.with_spell(dict);
        }
        Ok(p)
    }

    /// Canonical text form; parsing it back yields an equal config for
    /// configs without paths.
    pub fn to_text(&self) -> String {
        let d = RunConfig::new(self.language, "U").expect("valid");
        let mut out = format!("language = {}\nblocks = {}\n", self.language, self.blocks.join("+"));
        let mut kv = |k: &str, v: String| {
            out.push_str(&format!("{k} = {v}\n"));
        };
        if self.min_df != d.min_df {
            kv("min_df", self.min_df.to_string());
        }
        if self.train != d.train {
            kv("reg_lambda", self.train.reg_lambda.to_string());
            kv("learning_rate", self.train.learning_rate.to_string());
            kv("max_iters", self.train.max_iters.to_string());
            kv("grad_tol", format!("{:e}", self.train.grad_tol));
            kv("seed", self.train.seed.to_string());
        }
        if self.spell_correct {
            kv("spell_correct", "true".into());
        }
        for (k, v) in [
            ("transliterate", self.transliterate),
            ("stemming", self.stemming),
            ("expansions", self.expansions),
        ] {
            if let Some(v) = v {
                kv(k, v.to_string());
            }
        }
        if self.normalize_embeddings {
            kv("normalize_embeddings", "true".into());
        }
        if self.sentiment == SentimentKind::Sidecar {
            kv("sentiment", "sidecar".into());
        }
        if self.sentiment_mild_share != d.sentiment_mild_share {
            kv("sentiment_mild_share", self.sentiment_mild_share.to_string());
        }
        if self.merge_validation {
            kv("merge_validation", "true".into());
        }
        if self.format != d.format {
            kv("format", "csv".into());
        }
        for (k, v) in [
            ("spell_dict", &self.spell_dict),
            ("embeddings", &self.embeddings),
            ("liwc_lexicon", &self.liwc_lexicon),
            ("gender_lexicon", &self.gender_lexicon),
            ("sentiment_pos", &self.sentiment_pos),
            ("sentiment_neg", &self.sentiment_neg),
            ("sentiment_sidecar", &self.sentiment_sidecar),
        ] {
            if let Some(p) = v {
                kv(k, p.display().to_string());
            }
        }
        out
    }
}

const EN_ROWS: &[&str] = &[
    "U", "B", "T", "C3", "C4", "C5", "W2V", "S", "LIWC", "GP", "BU+U+C4+C5+W2V", "C3+C4+C5",
    "U+C3+C4+C5",
];
const HI_ROWS: &[&str] = &["U", "B", "T", "C3", "C4", "C5", "C3+C4+C5", "U+C3+C4+C5"];

/// All preset names: `en-<blocks>` / `hi-<blocks>` grid rows and the
/// submitted systems `en-system-{1,2,3}`, `hi-system-{1,2}`.
pub fn preset_names() -> Vec<String> {
    let mut names: Vec<String> = EN_ROWS.iter().map(|r| format!("en-{r}")).collect();
    names.extend(HI_ROWS.iter().map(|r| format!("hi-{r}")));
    names.extend(["en-system-1", "en-system-2", "en-system-3", "hi-system-1", "hi-system-2"].map(String::from));
    names
}

/// Looks up a preset. Presets carry no resource paths; blocks such as W2V
/// need them supplied separately.
pub fn preset(name: &str) -> Result<RunConfig> {
    let unknown = || Error::Config(format!("unknown preset {name:?}; try one of {}", preset_names().join(", ")));
    let (lang, rest) = name.split_once('-').ok_or_else(unknown)?;
    let language = match lang {
        "en" => Language::English,
        "hi" => Language::Hindi,
        _ => return Err(unknown()),
    };
    let mut c = match (language, rest) {
        (Language::English, "system-1") => {
            let mut c = RunConfig::new(language, "BU+U+C4+C5+W2V")?;
            c.merge_validation = true;
            c
        }
        (Language::English, "system-2") => RunConfig::new(language, "BU+U+C4+C5+W2V")?,
        (Language::English, "system-3") => {
            let mut c = RunConfig::new(language, "BU+U+C4+C5+W2V")?;
            c.spell_correct = true;
            c
        }
        (Language::Hindi, "system-1") => RunConfig::new(language, "U+C3+C4+C5")?,
        (Language::Hindi, "system-2") => {
            let mut c = RunConfig::new(language, "U+C3+C4+C5")?;
            c.merge_validation = true;
            c
        }
        (Language::English, row) if EN_ROWS.contains(&row) => RunConfig::new(language, row)?,
        (Language::Hindi, row) if HI_ROWS.contains(&row) => RunConfig::new(language, row)?,
        _ => return Err(unknown()),
    };
    c.format = CorpusFormat::Tsv;
    Ok(c)
}
