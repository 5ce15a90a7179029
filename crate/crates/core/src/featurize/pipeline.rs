use std::fmt;
use std::ops::Range;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;

use super::sparse::SparseVector;
use super::text::{char_ngrams, skip_grams, word_ngrams};
use super::vocab::{binary_transform, fit_vocabulary, tfidf_transform, Vocabulary};
use crate::corpus::Document;
use crate::error::{Error, Result};
use crate::lexfeatures::{
    builtin_sentence_sentiment, embed_average, gender_features, liwc_features,
    sentiment_features, CategoryLexicon, EmbeddingTable, SentimentLexicon, SentimentSidecar,
    WeightedLexicon, SENTIMENT_CLASSES,
};
use crate::preprocess::Preprocessor;
use crate::resource::ResourceRef;

/// Canonical block names accepted in configs, in documentation order.
pub const BLOCK_NAMES: [&str; 15] = [
    "U", "B", "T", "BU", "BB", "BT", "C3", "C4", "C5", "SK2", "SK3", "W2V", "S", "LIWC", "GP",
];

pub const DEFAULT_MIN_DF: u64 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockKind {
    WordNgram(usize),
    BinaryWordNgram(usize),
    CharNgram(usize),
    SkipGram { k: usize, n: usize },
    Embedding,
    Sentiment,
    Liwc,
    Gender,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureBlockSpec {
    pub name: String,
    pub kind: BlockKind,
    pub min_df: u64,
}

impl FeatureBlockSpec {
    /// Looks up a canonical block name (`U`, `C4`, `W2V`, …).
    pub fn named(name: &str, min_df: u64) -> Result<FeatureBlockSpec> {
        if min_df == 0 {
            return Err(Error::Config("min_df must be at least 1".into()));
        }
        let kind = match name {
            "U" => BlockKind::WordNgram(1),
            "B" => BlockKind::WordNgram(2),
            "T" => BlockKind::WordNgram(3),
            "BU" => BlockKind::BinaryWordNgram(1),
            "BB" => BlockKind::BinaryWordNgram(2),
            "BT" => BlockKind::BinaryWordNgram(3),
            "C3" => BlockKind::CharNgram(3),
            "C4" => BlockKind::CharNgram(4),
            "C5" => BlockKind::CharNgram(5),
            "SK2" => BlockKind::SkipGram { k: 2, n: 2 },
            "SK3" => BlockKind::SkipGram { k: 2, n: 3 },
            "W2V" => BlockKind::Embedding,
            "S" => BlockKind::Sentiment,
            "LIWC" => BlockKind::Liwc,
            "GP" => BlockKind::Gender,
            other => {
                return Err(Error::Config(format!(
                    "unknown feature block {other:?}; expected one of {}",
                    BLOCK_NAMES.join(",")
                )))
            }
        };
        Ok(FeatureBlockSpec {
            name: name.to_string(),
            kind,
            min_df,
        })
    }

    /// Parses `U+C3+C4` or `U,C3,C4`.
    pub fn parse_list(list: &str, min_df: u64) -> Result<Vec<FeatureBlockSpec>> {
        let specs: Vec<FeatureBlockSpec> = list
            .split(['+', ','])
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| FeatureBlockSpec::named(s, min_df))
            .collect::<Result<_>>()?;
        if specs.is_empty() {
            return Err(Error::Config("no feature blocks given".into()));
        }
        Ok(specs)
    }

    pub fn is_lexical(&self) -> bool {
        matches!(
            self.kind,
            BlockKind::WordNgram(_)
                | BlockKind::BinaryWordNgram(_)
                | BlockKind::CharNgram(_)
                | BlockKind::SkipGram { .. }
        )
    }

    /// Feature-name prefix, e.g. `unigram` or `char_tri_gram`.
    pub fn prefix(&self) -> &'static str {
        match self.kind {
            BlockKind::WordNgram(1) => "unigram",
            BlockKind::WordNgram(2) => "bigram",
            BlockKind::WordNgram(_) => "trigram",
            BlockKind::BinaryWordNgram(1) => "binary_unigram",
            BlockKind::BinaryWordNgram(2) => "binary_bigram",
            BlockKind::BinaryWordNgram(_) => "binary_trigram",
            BlockKind::CharNgram(3) => "char_tri_gram",
            BlockKind::CharNgram(4) => "char_4_gram",
            BlockKind::CharNgram(_) => "char_5_gram",
            BlockKind::SkipGram { n: 2, .. } => "skip_bigram",
            BlockKind::SkipGram { .. } => "skip_trigram",
            BlockKind::Embedding => "w2v",
            BlockKind::Sentiment => "sentiment",
            BlockKind::Liwc => "liwc",
            BlockKind::Gender => "gender",
        }
    }

    fn terms(&self, text: &str, tokens: &[String]) -> Vec<String> {
        match self.kind {
            BlockKind::WordNgram(n) | BlockKind::BinaryWordNgram(n) => word_ngrams(tokens, n),
            BlockKind::CharNgram(n) => char_ngrams(text, n),
            BlockKind::SkipGram { k, n } => skip_grams(tokens, k, n),
            _ => Vec::new(),
        }
    }
}

impl fmt::Display for FeatureBlockSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// A loaded resource together with the file it came from, if any.
#[derive(Debug, Clone)]
pub struct Shared<T> {
    pub value: Arc<T>,
    pub origin: Option<ResourceRef>,
}

impl<T> Shared<T> {
    pub fn in_memory(value: T) -> Shared<T> {
        Shared {
            value: Arc::new(value),
            origin: None,
        }
    }

    /// Hashes then parses the file at `path`.
    pub fn load(path: &Path, parse: impl FnOnce(&Path) -> Result<T>) -> Result<Shared<T>> {
        let origin = ResourceRef::of(path)?;
        Ok(Shared {
            value: Arc::new(parse(path)?),
            origin: Some(origin),
        })
    }
}

/// Where sentence sentiment distributions come from.
#[derive(Debug, Clone)]
pub enum SentimentSource {
    /// Lexicon scorer; `files` holds the positive and negative list files
    /// when not using the built-in lists.
    Builtin {
        lexicon: Arc<SentimentLexicon>,
        files: Option<[ResourceRef; 2]>,
    },
    Sidecar(Shared<SentimentSidecar>),
}

impl Default for SentimentSource {
    fn default() -> Self {
        SentimentSource::Builtin {
            lexicon: Arc::new(SentimentLexicon::builtin()),
            files: None,
        }
    }
}

/// Tables and lexicons needed by the dense blocks.
#[derive(Debug, Clone, Default)]
pub struct DenseResources {
    pub embeddings: Option<Shared<EmbeddingTable>>,
    pub normalize_embeddings: bool,
    pub sentiment: SentimentSource,
    pub liwc: Option<Shared<CategoryLexicon>>,
    pub gender: Option<Shared<WeightedLexicon>>,
}

#[derive(Debug, Clone)]
pub(crate) struct FittedBlock {
    pub(crate) spec: FeatureBlockSpec,
    /// Empty for dense blocks.
    pub(crate) vocab: Vocabulary,
    pub(crate) dimension: usize,
}

/// Ordered feature blocks with their fitted state. Block `i` occupies the
/// index range right after block `i - 1`.
#[derive(Debug, Clone)]
pub struct FeaturePipeline {
    pub(crate) preprocessor: Preprocessor,
    pub(crate) blocks: Vec<FittedBlock>,
    pub(crate) resources: DenseResources,
}

struct Prepared {
    text: String,
    tokens: Vec<String>,
}

impl FeaturePipeline {
    /// Fits vocabularies of the lexical blocks on `docs`.
    pub fn fit(
        preprocessor: Preprocessor,
        specs: Vec<FeatureBlockSpec>,
        resources: DenseResources,
        docs: &[Document],
    ) -> Result<FeaturePipeline> {
        check_specs(&specs)?;
        let prepared: Vec<Prepared> = docs
            .par_iter()
            .map(|d| prepare(&preprocessor, &d.text))
            .collect();
        let fitted = specs
            .into_iter()
            .map(|spec| {
                let vocab = if spec.is_lexical() {
                    let terms: Vec<Vec<String>> = prepared
                        .par_iter()
                        .map(|p| spec.terms(&p.text, &p.tokens))
                        .collect();
                    fit_vocabulary(&terms, spec.min_df)
                } else {
                    Vocabulary::default()
                };
                (spec, vocab)
            })
            .collect();
        FeaturePipeline::from_parts(preprocessor, fitted, resources)
    }

    /// Assembles a pipeline from already-fitted vocabularies; dense blocks
    /// take their dimensions from `resources`.
    pub fn from_parts(
        preprocessor: Preprocessor,
        blocks: Vec<(FeatureBlockSpec, Vocabulary)>,
        resources: DenseResources,
    ) -> Result<FeaturePipeline> {
        check_specs(&blocks.iter().map(|(s, _)| s.clone()).collect::<Vec<_>>())?;
        let mut fitted = Vec::with_capacity(blocks.len());
        for (spec, vocab) in blocks {
            let dimension = match spec.kind {
                _ if spec.is_lexical() => vocab.len(),
                BlockKind::Embedding => resources
                    .embeddings
                    .as_ref()
                    .ok_or_else(|| Error::Config("block W2V needs an embeddings file".into()))?
                    .value
                    .dimension(),
                BlockKind::Sentiment => 10,
                BlockKind::Liwc => resources
                    .liwc
                    .as_ref()
                    .ok_or_else(|| Error::Config("block LIWC needs a category lexicon".into()))?
                    .value
                    .len(),
                BlockKind::Gender => {
                    if resources.gender.is_none() {
                        return Err(Error::Config("block GP needs a gender lexicon".into()));
                    }
                    2
                }
                _ => unreachable!("lexical kinds handled above"),
            };
            fitted.push(FittedBlock {
                spec,
                vocab,
                dimension,
            });
        }
        Ok(FeaturePipeline {
            preprocessor,
            blocks: fitted,
            resources,
        })
    }

    pub fn preprocessor(&self) -> &Preprocessor {
        &self.preprocessor
    }

    pub fn resources(&self) -> &DenseResources {
        &self.resources
    }

    pub fn specs(&self) -> impl Iterator<Item = &FeatureBlockSpec> {
        self.blocks.iter().map(|b| &b.spec)
    }

    /// Fitted vocabulary of a lexical block.
    pub fn vocabulary(&self, block: &str) -> Option<&Vocabulary> {
        self.blocks
            .iter()
            .find(|b| b.spec.name == block && b.spec.is_lexical())
            .map(|b| &b.vocab)
    }

    pub fn total_dimension(&self) -> usize {
        self.blocks.iter().map(|b| b.dimension).sum()
    }

    /// `(block name, index range)` in declaration order.
    pub fn block_ranges(&self) -> Vec<(&str, Range<usize>)> {
        let mut start = 0;
        self.blocks
            .iter()
            .map(|b| {
                let r = start..start + b.dimension;
                start = r.end;
                (b.spec.name.as_str(), r)
            })
            .collect()
    }

    /// Human-readable name of a global feature index, e.g. `unigram_idiot`.
    pub fn feature_name(&self, index: usize) -> Option<String> {
        let mut start = 0;
        for b in &self.blocks {
            if index < start + b.dimension {
                let local = index - start;
                let prefix = b.spec.prefix();
                let suffix = match b.spec.kind {
                    _ if b.spec.is_lexical() => b.vocab.term(local)?.to_string(),
                    BlockKind::Embedding => local.to_string(),
                    BlockKind::Sentiment if local < 5 => format!("mean_{}", SENTIMENT_CLASSES[local]),
                    BlockKind::Sentiment => format!("std_{}", SENTIMENT_CLASSES[local - 5]),
                    BlockKind::Liwc => self.resources.liwc.as_ref()?.value.names().nth(local)?.to_string(),
                    BlockKind::Gender if local == 0 => "probability".to_string(),
                    BlockKind::Gender => "binary".to_string(),
                    _ => unreachable!(),
                };
                return Some(format!("{prefix}_{suffix}"));
            }
            start += b.dimension;
        }
        None
    }

    /// Feature vector of one document. Documents whose normalized text is
    /// empty map to the zero vector.
    pub fn transform(&self, doc: &Document) -> SparseVector {
        let prepared = prepare(&self.preprocessor, &doc.text);
        if prepared.text.trim().is_empty() {
            return SparseVector::zeros(self.total_dimension());
        }
        let words: Vec<&str> = prepared
            .tokens
            .iter()
            .map(String::as_str)
            .filter(|t| t.chars().any(char::is_alphanumeric))
            .collect();
        let blocks: Vec<SparseVector> = self
            .blocks
            .iter()
            .map(|b| self.block_vector(b, doc, &prepared, &words))
            .collect();
        SparseVector::concat(&blocks)
    }

    /// Transforms documents in parallel, preserving order.
    pub fn transform_all(&self, docs: &[Document]) -> Vec<SparseVector> {
        docs.par_iter().map(|d| self.transform(d)).collect()
    }

    /// Mean embedding coverage over documents with at least one word, when a
    /// W2V block is present.
    pub fn embedding_coverage(&self, docs: &[Document]) -> Option<f64> {
        let table = &self.resources.embeddings.as_ref()?.value;
        if !self.blocks.iter().any(|b| b.spec.kind == BlockKind::Embedding) {
            return None;
        }
        let covs: Vec<f64> = docs
            .par_iter()
            .filter_map(|d| {
                let tokens = self.preprocessor.tokens(&d.text);
                (!tokens.is_empty()).then(|| embed_average(&tokens, table).1)
            })
            .collect();
        (!covs.is_empty()).then(|| covs.iter().sum::<f64>() / covs.len() as f64)
    }

    fn block_vector(
        &self,
        block: &FittedBlock,
        doc: &Document,
        prepared: &Prepared,
        words: &[&str],
    ) -> SparseVector {
        let dense = |values: &[f64]| {
            debug_assert_eq!(values.len(), block.dimension);
            SparseVector::from_dense(values)
        };
        match block.spec.kind {
            BlockKind::WordNgram(_) | BlockKind::CharNgram(_) | BlockKind::SkipGram { .. } => {
                tfidf_transform(&block.spec.terms(&prepared.text, &prepared.tokens), &block.vocab)
            }
            BlockKind::BinaryWordNgram(_) => {
                binary_transform(&block.spec.terms(&prepared.text, &prepared.tokens), &block.vocab)
            }
            BlockKind::Embedding => {
                let shared = self.resources.embeddings.as_ref().expect("checked at construction");
                let (mut v, _) = embed_average(words, &shared.value);
                if self.resources.normalize_embeddings {
                    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                    if n > 0.0 {
                        v.iter_mut().for_each(|x| *x /= n);
                    }
                }
                dense(&v)
            }
            BlockKind::Sentiment => {
                let sentences = match &self.resources.sentiment {
                    SentimentSource::Builtin { lexicon, .. } => self
                        .preprocessor
                        .sentence_tokens(&doc.text)
                        .iter()
                        .map(|s| builtin_sentence_sentiment(s, lexicon))
                        .collect(),
                    SentimentSource::Sidecar(sc) => sc.value.sentences(&doc.id),
                };
                dense(&sentiment_features(&sentences))
            }
            BlockKind::Liwc => {
                let lex = self.resources.liwc.as_ref().expect("checked at construction");
                dense(&liwc_features(words, &lex.value))
            }
            BlockKind::Gender => {
                let lex = self.resources.gender.as_ref().expect("checked at construction");
                dense(&gender_features(words, &lex.value))
            }
        }
    }
}

fn prepare(preprocessor: &Preprocessor, raw: &str) -> Prepared {
    let text = preprocessor.normalize(raw);
    let tokens = super::text::tokenize(&text);
    Prepared { text, tokens }
}

fn check_specs(specs: &[FeatureBlockSpec]) -> Result<()> {
    if specs.is_empty() {
        return Err(Error::Config("a pipeline needs at least one block".into()));
    }
    for (i, s) in specs.iter().enumerate() {
        if specs[..i].iter().any(|p| p.name == s.name) {
            return Err(Error::Config(format!("block {} listed twice", s.name)));
        }
    }
    Ok(())
}

impl FromStr for FeatureBlockSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FeatureBlockSpec::named(s.trim(), DEFAULT_MIN_DF)
    }
}
