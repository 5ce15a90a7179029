use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::sparse::SparseVector;
use crate::error::{Error, Result};

/// Term universe of one lexical block, with document frequencies.
///
/// Indices follow lexicographic term order, so fitting is independent of
/// document order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Vocabulary {
    terms: Vec<String>,
    index: HashMap<String, usize>,
    document_frequency: Vec<u64>,
    n_documents: u64,
}

impl Vocabulary {
    /// Rebuilds a vocabulary from `(term, df)` rows, e.g. from a model file.
    pub fn from_parts(rows: Vec<(String, u64)>, n_documents: u64) -> Result<Vocabulary> {
        let mut rows = rows;
        rows.sort_by(|a, b| a.0.cmp(&b.0));
        let mut terms = Vec::with_capacity(rows.len());
        let mut dfs = Vec::with_capacity(rows.len());
        for (term, df) in rows {
            if df == 0 || df > n_documents {
                return Err(Error::Config(format!("term {term:?} has document frequency {df}")));
            }
            if terms.last() == Some(&term) {
                return Err(Error::Config(format!("duplicate vocabulary term {term:?}")));
            }
            terms.push(term);
            dfs.push(df);
        }
        let index = terms.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        Ok(Vocabulary {
            terms,
            index,
            document_frequency: dfs,
            n_documents,
        })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn n_documents(&self) -> u64 {
        self.n_documents
    }

    pub fn index_of(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    pub fn term(&self, index: usize) -> Option<&str> {
        self.terms.get(index).map(String::as_str)
    }

    pub fn document_frequency(&self, index: usize) -> u64 {
        self.document_frequency[index]
    }

    /// Smoothed inverse document frequency, `ln((1 + N) / (1 + df)) + 1`.
    pub fn idf(&self, index: usize) -> f64 {
        let n = self.n_documents as f64;
        let df = self.document_frequency[index] as f64;
        ((1.0 + n) / (1.0 + df)).ln() + 1.0
    }

    /// `(term, df)` rows in index order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.terms
            .iter()
            .zip(&self.document_frequency)
            .map(|(t, df)| (t.as_str(), *df))
    }
}

/// Keeps terms occurring in at least `min_df` documents.
pub fn fit_vocabulary<D, S>(corpus_terms: &[D], min_df: u64) -> Vocabulary
where
    D: AsRef<[S]>,
    S: AsRef<str>,
{
    let mut df: BTreeMap<&str, u64> = BTreeMap::new();
    for doc in corpus_terms {
        let unique: BTreeSet<&str> = doc.as_ref().iter().map(AsRef::as_ref).collect();
        for t in unique {
            *df.entry(t).or_insert(0) += 1;
        }
    }
    let rows = df
        .into_iter()
        .filter(|&(_, c)| c >= min_df.max(1))
        .map(|(t, c)| (t.to_string(), c))
        .collect();
    Vocabulary::from_parts(rows, corpus_terms.len() as u64).expect("counts are consistent")
}

fn term_counts<S: AsRef<str>>(terms: &[S], vocab: &Vocabulary) -> BTreeMap<usize, u64> {
    let mut counts = BTreeMap::new();
    for t in terms {
        if let Some(i) = vocab.index_of(t.as_ref()) {
            *counts.entry(i).or_insert(0) += 1;
        }
    }
    counts
}

/// Raw term count times smoothed IDF, L2-normalized. Out-of-vocabulary terms
/// are ignored.
pub fn tfidf_transform<S: AsRef<str>>(terms: &[S], vocab: &Vocabulary) -> SparseVector {
    let pairs = term_counts(terms, vocab)
        .into_iter()
        .map(|(i, c)| (i, c as f64 * vocab.idf(i)));
    SparseVector::from_pairs(vocab.len(), pairs)
        .expect("indices come from the vocabulary")
        .l2_normalized()
}

/// 1.0 for every in-vocabulary term present; no normalization.
pub fn binary_transform<S: AsRef<str>>(terms: &[S], vocab: &Vocabulary) -> SparseVector {
    let pairs = term_counts(terms, vocab).into_keys().map(|i| (i, 1.0));
    SparseVector::from_pairs(vocab.len(), pairs).expect("indices come from the vocabulary")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn docs(d: &[&[&str]]) -> Vec<Vec<String>> {
        d.iter().map(|x| x.iter().map(|s| s.to_string()).collect()).collect()
    }

    #[test]
    fn fit_examples() {
        let corpus = docs(&[&["a", "b"], &["a"]]);
        let v = fit_vocabulary(&corpus, 1);
        assert_eq!(v.iter().collect::<Vec<_>>(), [("a", 2), ("b", 1)]);
        assert_eq!(v.index_of("b"), Some(1));
        let v = fit_vocabulary(&corpus, 2);
        assert_eq!(v.iter().collect::<Vec<_>>(), [("a", 2)]);
        let empty: Vec<Vec<String>> = Vec::new();
        assert!(fit_vocabulary(&empty, 1).is_empty());
    }

    #[test]
    fn lexicographic_indices_ignore_order() {
        let a = fit_vocabulary(&docs(&[&["z", "y"], &["x"]]), 1);
        let b = fit_vocabulary(&docs(&[&["x"], &["y", "z"]]), 1);
        assert_eq!(a, b);
        assert_eq!(a.term(0), Some("x"));
    }

    #[test]
    fn tfidf_single_term() {
        let v = fit_vocabulary(&docs(&[&["a"], &["a", "b"]]), 1);
        assert_eq!(v.idf(0), 1.0);
        let x = tfidf_transform(&["a", "a"], &v);
        assert_eq!(x.iter().collect::<Vec<_>>(), [(0, 1.0)]);
    }

    #[test]
    fn tfidf_two_terms_by_hand() {
        let v = fit_vocabulary(&docs(&[&["a"], &["a", "b"]]), 1);
        let x = tfidf_transform(&["a", "b"], &v);
        let wb = (3.0f64 / 2.0).ln() + 1.0;
        let n = (1.0 + wb * wb).sqrt();
        assert!((x.get(0) - 1.0 / n).abs() < 1e-12);
        assert!((x.get(1) - wb / n).abs() < 1e-12);
    }

    #[test]
    fn oov_is_zero() {
        let v = fit_vocabulary(&docs(&[&["a"]]), 1);
        assert!(tfidf_transform(&["q"], &v).is_zero());
        assert!(binary_transform(&["q"], &v).is_zero());
    }

    #[test]
    fn binary_presence() {
        let v = fit_vocabulary(&docs(&[&["a", "b"]]), 1);
        assert_eq!(binary_transform(&["a", "a", "b"], &v).to_dense(), [1.0, 1.0]);
        let many = vec!["a"; 100];
        assert_eq!(binary_transform(&many, &v).to_dense(), [1.0, 0.0]);
    }
}
