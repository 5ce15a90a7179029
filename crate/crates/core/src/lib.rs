//! Aggression identification for social-media comments.
//!
//! Comments are labelled non-aggressive (`NAG`), covertly aggressive (`CAG`)
//! or overtly aggressive (`OAG`). The pipeline:
//!
//! 1. [`preprocess`] — cleaning, minor stemming, Devanagari romanization,
//!    dictionary spell correction;
//! 2. [`featurize`] and [`lexfeatures`] — word/char/skip n-grams with TF-IDF
//!    or binary weights, averaged embeddings, sentence sentiment statistics,
//!    category-lexicon proportions and lexicon gender probability,
//!    concatenated by a [`featurize::FeaturePipeline`];
//! 3. [`model`] — one-vs-rest L2-regularized logistic regression with
//!    versioned model files;
//! 4. [`evaluate`] — confusion matrices, weighted F1, random baselines and
//!    report files.
//!
//! [`config`] and [`app`] drive the whole chain from the `aggro` binary.

pub mod app;
pub mod config;
pub mod corpus;
pub mod error;
pub mod evaluate;
pub mod featurize;
pub mod lexfeatures;
pub mod model;
pub mod preprocess;
pub mod resource;
pub mod synthetic;

pub use corpus::{Corpus, Document, Label, Language};
pub use error::{Error, Result};
