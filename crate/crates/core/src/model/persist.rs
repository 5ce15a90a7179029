//! Versioned text model files.
//!
//! ```text
//! aggro-model
//! [meta]            format version, labels, dimension, training settings
//! [preprocess]      cleaning flags, transliteration table, expansion rows
//! [spell]           embedded dictionary rows (only when spell correction is on)
//! [pipeline]        block rows `name<TAB>min_df`, dense-block settings
//! [resource:NAME]   path and SHA-256 of each external file
//! [vocab:BLOCK]     `term<TAB>df` rows of each lexical block
//! [weights:CLASS]   bias, training metadata, `index<TAB>weight` rows
//! [end]
//! ```
//!
//! Lines containing a tab are data rows (fields escaped like corpus files);
//! all other lines are `key = value`. Floats use the shortest form that
//! parses back to the same value.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use sha2::{Digest, Sha256};

use super::logreg::{BinaryLogReg, TrainConfig, TrainMeta};
use super::ovr::OvRModel;
use crate::corpus::{escape_field, unescape_field, Label, Language};
use crate::error::{Error, Result};
use crate::featurize::{
    DenseResources, FeatureBlockSpec, FeaturePipeline, SentimentSource, Shared, Vocabulary,
};
use crate::lexfeatures::{
    load_embeddings, CategoryLexicon, SentimentLexicon, SentimentSidecar, WeightedLexicon,
};
use crate::preprocess::{CleanConfig, Preprocessor, SpellDictionary, TABLE_VERSION};
use crate::resource::ResourceRef;

pub const MAGIC: &str = "aggro-model";
pub const FORMAT_VERSION: u32 = 1;

/// Options applied when reading a model back.
#[derive(Debug, Clone, Default)]
pub struct LoadOptions {
    /// Sentence-sentiment sidecar for the corpus being scored, replacing the
    /// one recorded at training time.
    pub sentiment_sidecar: Option<PathBuf>,
}

/// Checksum of a dictionary's canonical `token<TAB>count` listing.
pub fn spell_checksum(dict: &SpellDictionary) -> String {
    let mut h = Sha256::new();
    for (token, count) in dict.iter() {
        h.update(format!("{token}\t{count}\n").as_bytes());
    }
    hex::encode(h.finalize())
}

pub fn save_model(model: &OvRModel, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let text = model_to_string(model)?;
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn load_model(path: impl AsRef<Path>) -> Result<OvRModel> {
    load_model_with(path, &LoadOptions::default())
}

pub fn load_model_with(path: impl AsRef<Path>, options: &LoadOptions) -> Result<OvRModel> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    model_from_str(&text, options)
}

fn float(x: f64) -> String {
    format!("{x:?}")
}

fn resource_section(out: &mut String, name: &str, r: &ResourceRef) {
    let path = std::fs::canonicalize(&r.path).unwrap_or_else(|_| r.path.clone());
    let _ = writeln!(out, "[resource:{name}]");
    let _ = writeln!(out, "path = {}", escape_field(&path.to_string_lossy()));
    let _ = writeln!(out, "sha256 = {}", r.sha256);
}

fn origin<'a, T>(shared: &'a Shared<T>, name: &str) -> Result<&'a ResourceRef> {
    shared.origin.as_ref().ok_or_else(|| {
        Error::model(
            format!("resource:{name}"),
            "resource was built in memory and has no file to reference",
        )
    })
}

/// Serializes a model with its attached pipeline.
pub fn model_to_string(model: &OvRModel) -> Result<String> {
    let pipeline = model.pipeline.as_ref().ok_or(Error::NotFitted)?;
    let mut out = String::new();
    let w = &mut out;
    let _ = writeln!(w, "{MAGIC}");

    let c = &model.config;
    let _ = writeln!(w, "[meta]");
    let _ = writeln!(w, "format_version = {FORMAT_VERSION}");
    let _ = writeln!(w, "labels = NAG,CAG,OAG");
    let _ = writeln!(w, "dimension = {}", model.dimension());
    let _ = writeln!(w, "single_class = {}", model.single_class);
    let _ = writeln!(w, "reg_lambda = {}", float(c.reg_lambda));
    let _ = writeln!(w, "learning_rate = {}", float(c.learning_rate));
    let _ = writeln!(w, "max_iters = {}", c.max_iters);
    let _ = writeln!(w, "grad_tol = {}", float(c.grad_tol));
    let _ = writeln!(w, "seed = {}", c.seed);

    let p = &pipeline.preprocessor;
    let _ = writeln!(w, "[preprocess]");
    let _ = writeln!(w, "language = {}", p.language);
    let _ = writeln!(w, "transliterate = {}", p.transliterate);
    let _ = writeln!(w, "translit_table = {TABLE_VERSION}");
    let _ = writeln!(w, "lowercase = {}", p.clean.lowercase);
    let _ = writeln!(w, "strip_urls = {}", p.clean.strip_urls);
    let _ = writeln!(w, "strip_emails = {}", p.clean.strip_emails);
    let _ = writeln!(w, "strip_numbers = {}", p.clean.strip_numbers);
    let _ = writeln!(w, "minor_stemming = {}", p.clean.minor_stemming);
    let _ = writeln!(w, "spell_correct = {}", p.spell.is_some());
    let _ = writeln!(w, "expansions = {}", p.clean.expansions.len());
    for (k, v) in &p.clean.expansions {
        let _ = writeln!(w, "{}\t{}", escape_field(k), escape_field(v));
    }

    if let Some(dict) = &p.spell {
        let _ = writeln!(w, "[spell]");
        let _ = writeln!(w, "entries = {}", dict.len());
        let _ = writeln!(w, "sha256 = {}", spell_checksum(dict));
        for (token, count) in dict.iter() {
            let _ = writeln!(w, "{}\t{count}", escape_field(token));
        }
    }

    let r = &pipeline.resources;
    let _ = writeln!(w, "[pipeline]");
    let _ = writeln!(w, "blocks = {}", pipeline.blocks.len());
    let _ = writeln!(w, "normalize_embeddings = {}", r.normalize_embeddings);
    match &r.sentiment {
        SentimentSource::Builtin { lexicon, .. } => {
            let _ = writeln!(w, "sentiment = builtin");
            let _ = writeln!(w, "sentiment_mild_share = {}", float(lexicon.mild_share));
        }
        SentimentSource::Sidecar(_) => {
            let _ = writeln!(w, "sentiment = sidecar");
        }
    }
    for b in &pipeline.blocks {
        let _ = writeln!(w, "{}\t{}", b.spec.name, b.spec.min_df);
    }

    let mut resources: Vec<(&str, &ResourceRef)> = Vec::new();
    if let Some(e) = &r.embeddings {
        resources.push(("embeddings", origin(e, "embeddings")?));
    }
    match &r.sentiment {
        SentimentSource::Builtin {
            files: Some([pos, neg]),
            ..
        } => {
            resources.push(("sentiment_pos", pos));
            resources.push(("sentiment_neg", neg));
        }
        SentimentSource::Builtin { .. } => {}
        SentimentSource::Sidecar(s) => resources.push(("sentiment_sidecar", origin(s, "sentiment_sidecar")?)),
    }
    if let Some(l) = &r.liwc {
        resources.push(("liwc", origin(l, "liwc")?));
    }
    if let Some(g) = &r.gender {
        resources.push(("gender", origin(g, "gender")?));
    }
    for (name, rr) in resources {
        resource_section(w, name, rr);
    }

    for b in pipeline.blocks.iter().filter(|b| b.spec.is_lexical()) {
        let _ = writeln!(w, "[vocab:{}]", b.spec.name);
        let _ = writeln!(w, "size = {}", b.vocab.len());
        let _ = writeln!(w, "n_documents = {}", b.vocab.n_documents());
        for (term, df) in b.vocab.iter() {
            let _ = writeln!(w, "{}\t{df}", escape_field(term));
        }
    }

    for (label, clf) in Label::ALL.iter().zip(&model.classifiers) {
        let _ = writeln!(w, "[weights:{label}]");
        let _ = writeln!(w, "bias = {}", float(clf.bias));
        let _ = writeln!(w, "reg_lambda = {}", float(clf.reg_lambda));
        let _ = writeln!(w, "iterations = {}", clf.meta.iterations);
        let _ = writeln!(w, "grad_norm = {}", float(clf.meta.grad_norm));
        let _ = writeln!(w, "final_loss = {}", float(clf.meta.final_loss));
        let _ = writeln!(w, "converged = {}", clf.meta.converged);
        let nonzero: Vec<(usize, f64)> = clf
            .weights
            .iter()
            .copied()
            .enumerate()
            .filter(|(_, x)| *x != 0.0)
            .collect();
        let _ = writeln!(w, "nnz = {}", nonzero.len());
        for (i, x) in nonzero {
            let _ = writeln!(w, "{i}\t{}", float(x));
        }
    }
    let _ = writeln!(w, "[end]");
    Ok(out)
}

struct Section {
    name: String,
    keys: BTreeMap<String, String>,
    rows: Vec<Vec<String>>,
}

impl Section {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::model(self.name.clone(), message)
    }

    fn raw(&self, key: &str) -> Result<&str> {
        self.keys
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| self.err(format!("missing key {key:?}")))
    }

    fn get<T: std::str::FromStr>(&self, key: &str) -> Result<T> {
        let raw = self.raw(key)?;
        raw.parse()
            .map_err(|_| self.err(format!("bad value {raw:?} for {key:?}")))
    }

    fn rows_expected(&self, key: &str) -> Result<usize> {
        let n: usize = self.get(key)?;
        if self.rows.len() != n {
            return Err(self.err(format!(
                "{key} = {n} but {} rows present (file truncated?)",
                self.rows.len()
            )));
        }
        Ok(n)
    }

    fn row_field<T: std::str::FromStr>(&self, row: &[String], i: usize) -> Result<T> {
        row.get(i)
            .and_then(|f| f.parse().ok())
            .ok_or_else(|| self.err(format!("malformed row {:?}", row.join("\t"))))
    }
}

fn split_sections(text: &str) -> Result<Vec<Section>> {
    let mut lines = text.lines();
    if lines.next().map(str::trim_end) != Some(MAGIC) {
        return Err(Error::model("header", format!("not a model file (expected {MAGIC:?})")));
    }
    let mut sections: Vec<Section> = Vec::new();
    for line in lines {
        let line = line.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            sections.push(Section {
                name: name.to_string(),
                keys: BTreeMap::new(),
                rows: Vec::new(),
            });
            continue;
        }
        let Some(section) = sections.last_mut() else {
            return Err(Error::model("header", "content before the first section"));
        };
        if line.contains('\t') {
            section.rows.push(line.split('\t').map(unescape_field).collect());
        } else if let Some((k, v)) = line.split_once(" = ") {
            section.keys.insert(k.to_string(), v.to_string());
        } else {
            return Err(section.err(format!("unparseable line {line:?}")));
        }
    }
    match sections.last() {
        Some(s) if s.name == "end" => {
            sections.pop();
            Ok(sections)
        }
        Some(s) => Err(s.err("file ends before [end] (truncated?)")),
        None => Err(Error::model("meta", "no sections (truncated?)")),
    }
}

fn load_resource<T>(
    sections: &BTreeMap<&str, &Section>,
    name: &str,
    parse: impl FnOnce(&Path) -> Result<T>,
) -> Result<Option<Shared<T>>> {
    let Some(s) = sections.get(format!("resource:{name}").as_str()) else {
        return Ok(None);
    };
    let r = ResourceRef {
        path: PathBuf::from(unescape_field(s.raw("path")?)),
        sha256: s.raw("sha256")?.to_string(),
    };
    r.verify()?;
    Ok(Some(Shared {
        value: Arc::new(parse(&r.path)?),
        origin: Some(r),
    }))
}

pub fn model_from_str(text: &str, options: &LoadOptions) -> Result<OvRModel> {
    let list = split_sections(text)?;
    let mut sections: BTreeMap<&str, &Section> = BTreeMap::new();
    for s in &list {
        if sections.insert(s.name.as_str(), s).is_some() {
            return Err(s.err("section appears twice"));
        }
    }
    let section = |name: &str| {
        sections
            .get(name)
            .copied()
            .ok_or_else(|| Error::model(name, "section missing (truncated?)"))
    };

    let meta = section("meta")?;
    let version: u32 = meta.get("format_version")?;
    if version != FORMAT_VERSION {
        return Err(meta.err(format!(
            "format version {version} is not supported (expected {FORMAT_VERSION})"
        )));
    }
    if meta.raw("labels")? != "NAG,CAG,OAG" {
        return Err(meta.err("unexpected label order"));
    }
    let dimension: usize = meta.get("dimension")?;
    let config = TrainConfig {
        reg_lambda: meta.get("reg_lambda")?,
        learning_rate: meta.get("learning_rate")?,
        max_iters: meta.get("max_iters")?,
        grad_tol: meta.get("grad_tol")?,
        seed: meta.get("seed")?,
    };

    let pre = section("preprocess")?;
    let table: String = pre.get("translit_table")?;
    if table != TABLE_VERSION {
        return Err(pre.err(format!(
            "model uses transliteration table {table}, this build has {TABLE_VERSION}"
        )));
    }
    pre.rows_expected("expansions")?;
    let mut expansions = BTreeMap::new();
    for row in &pre.rows {
        let [k, v] = row.as_slice() else {
            return Err(pre.err("expansion rows need two fields"));
        };
        expansions.insert(k.clone(), v.clone());
    }
    let language: Language = pre
        .raw("language")?
        .parse()
        .map_err(|_| pre.err("bad language"))?;
    let mut preprocessor = Preprocessor {
        language,
        clean: CleanConfig {
            lowercase: pre.get("lowercase")?,
            strip_urls: pre.get("strip_urls")?,
            strip_emails: pre.get("strip_emails")?,
            strip_numbers: pre.get("strip_numbers")?,
            minor_stemming: pre.get("minor_stemming")?,
            expansions,
        },
        transliterate: pre.get("transliterate")?,
        spell: None,
    };
    if pre.get::<bool>("spell_correct")? {
        let spell = section("spell")?;
        spell.rows_expected("entries")?;
        let counts = spell
            .rows
            .iter()
            .map(|r| Ok((r[0].clone(), spell.row_field::<u64>(r, 1)?)))
            .collect::<Result<Vec<_>>>()?;
        let dict = SpellDictionary::from_counts(counts).map_err(|e| spell.err(e.to_string()))?;
        if spell_checksum(&dict) != spell.raw("sha256")? {
            return Err(spell.err("dictionary rows do not match the recorded checksum"));
        }
        preprocessor.spell = Some(Arc::new(dict));
    }

    let pipe = section("pipeline")?;
    pipe.rows_expected("blocks")?;
    let mut resources = DenseResources {
        normalize_embeddings: pipe.get("normalize_embeddings")?,
        embeddings: load_resource(&sections, "embeddings", |p| load_embeddings(p))?,
        liwc: load_resource(&sections, "liwc", |p| CategoryLexicon::load(p))?,
        gender: load_resource(&sections, "gender", |p| WeightedLexicon::load(p))?,
        ..Default::default()
    };
    resources.sentiment = match pipe.raw("sentiment")? {
        "builtin" => {
            let pos = load_resource(&sections, "sentiment_pos", |_| Ok(()))?;
            let neg = load_resource(&sections, "sentiment_neg", |_| Ok(()))?;
            let (mut lexicon, files) = match (pos, neg) {
                (Some(p), Some(n)) => {
                    let (p, n) = (p.origin.expect("loaded"), n.origin.expect("loaded"));
                    (SentimentLexicon::load(&p.path, &n.path)?, Some([p, n]))
                }
                (None, None) => (SentimentLexicon::builtin(), None),
                _ => return Err(pipe.err("sentiment word lists must be given as a pair")),
            };
            lexicon.mild_share = pipe.get("sentiment_mild_share")?;
            SentimentSource::Builtin {
                lexicon: Arc::new(lexicon),
                files,
            }
        }
        "sidecar" => {
            let shared = match &options.sentiment_sidecar {
                Some(path) => Shared::load(path, |p| SentimentSidecar::load(p))?,
                None => load_resource(&sections, "sentiment_sidecar", |p| SentimentSidecar::load(p))?
                    .ok_or_else(|| Error::model("resource:sentiment_sidecar", "section missing"))?,
            };
            SentimentSource::Sidecar(shared)
        }
        other => return Err(pipe.err(format!("unknown sentiment source {other:?}"))),
    };

    let mut blocks = Vec::new();
    for row in &pipe.rows {
        let name = &row[0];
        let min_df: u64 = pipe.row_field(row, 1)?;
        let spec = FeatureBlockSpec::named(name, min_df).map_err(|e| pipe.err(e.to_string()))?;
        let vocab = if spec.is_lexical() {
            let v = section(&format!("vocab:{name}"))?;
            v.rows_expected("size")?;
            let rows = v
                .rows
                .iter()
                .map(|r| Ok((r[0].clone(), v.row_field::<u64>(r, 1)?)))
                .collect::<Result<Vec<_>>>()?;
            Vocabulary::from_parts(rows, v.get("n_documents")?).map_err(|e| v.err(e.to_string()))?
        } else {
            Vocabulary::default()
        };
        blocks.push((spec, vocab));
    }
    let pipeline = FeaturePipeline::from_parts(preprocessor, blocks, resources)
        .map_err(|e| pipe.err(e.to_string()))?;
    if pipeline.total_dimension() != dimension {
        return Err(pipe.err(format!(
            "blocks span {} features, [meta] says {dimension}",
            pipeline.total_dimension()
        )));
    }

    let mut classifiers = Vec::with_capacity(3);
    for label in Label::ALL {
        let s = section(&format!("weights:{label}"))?;
        s.rows_expected("nnz")?;
        let mut weights = vec![0.0; dimension];
        for row in &s.rows {
            let i: usize = s.row_field(row, 0)?;
            let x: f64 = s.row_field(row, 1)?;
            if i >= dimension {
                return Err(s.err(format!("weight index {i} out of range")));
            }
            weights[i] = x;
        }
        classifiers.push(BinaryLogReg {
            weights,
            bias: s.get("bias")?,
            reg_lambda: s.get("reg_lambda")?,
            meta: TrainMeta {
                iterations: s.get("iterations")?,
                grad_norm: s.get("grad_norm")?,
                final_loss: s.get("final_loss")?,
                converged: s.get("converged")?,
            },
        });
    }
    let model = OvRModel {
        classifiers: classifiers.try_into().expect("three labels"),
        pipeline: None,
        config,
        single_class: meta.get("single_class")?,
    };
    model.with_pipeline(pipeline)
}
