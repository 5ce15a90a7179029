//! Seeded three-class toy corpora: each class owns a set of signal words
//! that are mixed into documents of shared noise words.

use std::collections::BTreeSet;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{Document, Label};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SyntheticSpec {
    pub docs_per_class: usize,
    /// Words used only by one class.
    pub signal_words: usize,
    /// Words shared by all classes.
    pub noise_words: usize,
    /// Inclusive range of signal tokens per document.
    pub signal_per_doc: (usize, usize),
    /// Inclusive range of noise tokens per document.
    pub noise_per_doc: (usize, usize),
    pub seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        SyntheticSpec {
            docs_per_class: 100,
            signal_words: 10,
            noise_words: 40,
            signal_per_doc: (2, 4),
            noise_per_doc: (6, 14),
            seed: 2018,
        }
    }
}

const ONSETS: &[&str] = &["b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "t", "v", "z", "ch", "sh"];
const VOWELS: &[&str] = &["a", "e", "i", "o", "u"];

/// Distinct lowercase pseudo-words that survive cleaning unchanged (no
/// trailing `s`, no `ing`, no digits).
fn words(rng: &mut ChaCha8Rng, count: usize, taken: &mut BTreeSet<String>) -> Vec<String> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let syllables = rng.random_range(2..=3);
        let mut w = String::new();
        for _ in 0..syllables {
            w.push_str(ONSETS.choose(rng).expect("non-empty"));
            w.push_str(VOWELS.choose(rng).expect("non-empty"));
        }
        if taken.insert(w.clone()) {
            out.push(w);
        }
    }
    out
}

/// Signal vocabularies per class (in `Label::ALL` order) and the noise
/// vocabulary.
pub fn vocabularies(spec: &SyntheticSpec) -> ([Vec<String>; 3], Vec<String>) {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut taken = BTreeSet::new();
    let signal = [(); 3].map(|_| words(&mut rng, spec.signal_words, &mut taken));
    let noise = words(&mut rng, spec.noise_words, &mut taken);
    (signal, noise)
}

/// `3 × docs_per_class` labelled documents, classes interleaved, ids
/// `syn-0000`, `syn-0001`, ….
pub fn generate(spec: &SyntheticSpec) -> Vec<Document> {
    let (signal, noise) = vocabularies(spec);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed.wrapping_add(1));
    let mut docs = Vec::with_capacity(3 * spec.docs_per_class);
    for i in 0..spec.docs_per_class {
        for (c, label) in Label::ALL.iter().enumerate() {
            let ns = rng.random_range(spec.signal_per_doc.0..=spec.signal_per_doc.1);
            let nn = rng.random_range(spec.noise_per_doc.0..=spec.noise_per_doc.1);
            let mut tokens: Vec<&str> = Vec::with_capacity(ns + nn);
            for _ in 0..ns {
                tokens.push(signal[c].choose(&mut rng).expect("non-empty"));
            }
            for _ in 0..nn {
                tokens.push(noise.choose(&mut rng).expect("non-empty"));
            }
            tokens.shuffle(&mut rng);
            let id = format!("syn-{:04}", 3 * i + c);
            docs.push(Document::new(id, tokens.join(" "), Some(*label)));
        }
    }
    docs
}

/// Stratified split: `per_class` documents of each class go to the second
/// (held-out) part, chosen by a seeded shuffle; order is otherwise kept.
pub fn holdout_split(docs: &[Document], per_class: usize, seed: u64) -> (Vec<Document>, Vec<Document>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut held = vec![false; docs.len()];
    for label in Label::ALL {
        let mut idx: Vec<usize> = (0..docs.len()).filter(|&i| docs[i].gold == Some(label)).collect();
        idx.shuffle(&mut rng);
        for &i in idx.iter().take(per_class) {
            held[i] = true;
        }
    }
    let (mut train, mut test) = (Vec::new(), Vec::new());
    for (d, h) in docs.iter().zip(held) {
        if h {
            test.push(d.clone());
        } else {
            train.push(d.clone());
        }
    }
    (train, test)
}
