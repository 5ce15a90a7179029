//! Lexical features: tokenization, word/char/skip n-grams, vocabularies with
//! TF-IDF or binary weighting, and the block pipeline that concatenates them
//! with the dense lexicon features.

pub mod pipeline;
pub mod sparse;
pub mod text;
pub mod vocab;

pub use pipeline::{
    BlockKind, DenseResources, FeatureBlockSpec, FeaturePipeline, SentimentSource, Shared,
    BLOCK_NAMES, DEFAULT_MIN_DF,
};
pub use sparse::SparseVector;
pub use text::{char_ngrams, skip_grams, tokenize, word_ngrams};
pub use vocab::{binary_transform, fit_vocabulary, tfidf_transform, Vocabulary};
