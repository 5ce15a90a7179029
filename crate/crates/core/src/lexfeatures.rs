//! Dense semantic and affect features: averaged word embeddings, sentence
//! sentiment statistics, category-lexicon proportions and lexicon-based
//! gender probability.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use crate::error::{Error, Result};

/// Word vectors of a fixed dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingTable {
    vectors: HashMap<String, Vec<f64>>,
    dimension: usize,
}

impl EmbeddingTable {
    pub fn new(dimension: usize) -> EmbeddingTable {
        EmbeddingTable {
            vectors: HashMap::new(),
            dimension,
        }
    }

    /// Adds a word; fails on a duplicate or a vector of the wrong length.
    pub fn insert(&mut self, word: impl Into<String>, vector: Vec<f64>) -> Result<()> {
        let word = word.into();
        if vector.len() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                found: vector.len(),
            });
        }
        if self.vectors.contains_key(&word) {
            return Err(Error::Config(format!("duplicate embedding for {word:?}")));
        }
        self.vectors.insert(word, vector);
        Ok(())
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn get(&self, word: &str) -> Option<&[f64]> {
        self.vectors.get(word).map(Vec::as_slice)
    }
}

/// Reads the text vector format: a `V d` header line, then `V` lines of
/// `word v1 … vd`.
pub fn load_embeddings(path: impl AsRef<Path>) -> Result<EmbeddingTable> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::resource(path, e.to_string()))?;
    let mut lines = BufReader::new(file).lines();
    let header = lines
        .next()
        .transpose()
        .map_err(|e| Error::resource(path, e.to_string()))?
        .ok_or_else(|| Error::resource(path, "empty file, expected `V d` header"))?;
    let nums: Vec<&str> = header.split_whitespace().collect();
    let parsed: Option<(usize, usize)> = match nums.as_slice() {
        [v, d] => v.parse().ok().zip(d.parse().ok()),
        _ => None,
    };
    let (size, dim) = match parsed {
        Some((v, d)) if d > 0 => (v, d),
        _ => return Err(Error::resource(path, format!("line 1: malformed header {header:?}"))),
    };
    let mut table = EmbeddingTable::new(dim);
    for (i, line) in lines.enumerate() {
        let lineno = i + 2;
        let line = line.map_err(|e| Error::resource(path, e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split_whitespace();
        let word = fields.next().expect("non-blank line");
        let values: std::result::Result<Vec<f64>, _> = fields.map(str::parse::<f64>).collect();
        let values = values
            .map_err(|e| Error::resource(path, format!("line {lineno}: {e}")))?;
        if values.len() != dim {
            return Err(Error::resource(
                path,
                format!("line {lineno}: expected {dim} values, found {}", values.len()),
            ));
        }
        if table.get(word).is_some() {
            return Err(Error::resource(path, format!("line {lineno}: duplicate word {word:?}")));
        }
        table.insert(word, values)?;
    }
    if table.len() != size {
        return Err(Error::resource(
            path,
            format!("header declares {size} words, file has {}", table.len()),
        ));
    }
    Ok(table)
}

/// Mean vector of in-table tokens (zero when none) and the fraction of
/// tokens found in the table.
pub fn embed_average<S: AsRef<str>>(tokens: &[S], table: &EmbeddingTable) -> (Vec<f64>, f64) {
    let mut sum = vec![0.0; table.dimension()];
    let mut hits = 0usize;
    for t in tokens {
        if let Some(v) = table.get(t.as_ref()) {
            for (s, x) in sum.iter_mut().zip(v) {
                *s += x;
            }
            hits += 1;
        }
    }
    if hits > 0 {
        for s in &mut sum {
            *s /= hits as f64;
        }
    }
    let coverage = if tokens.is_empty() {
        0.0
    } else {
        hits as f64 / tokens.len() as f64
    };
    (sum, coverage)
}

pub const SENTIMENT_CLASSES: [&str; 5] = [
    "very_negative",
    "negative",
    "neutral",
    "positive",
    "very_positive",
];

/// Five-way sentiment distribution of one sentence, ordered from very
/// negative to very positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SentenceSentiment(pub [f64; 5]);

impl SentenceSentiment {
    /// Validates non-negativity and renormalizes to sum 1. Sums off by more
    /// than 1e-3 (beyond rounding in exported files) are rejected.
    pub fn new(distribution: [f64; 5]) -> Result<SentenceSentiment> {
        let sum: f64 = distribution.iter().sum();
        if distribution.iter().any(|p| !p.is_finite() || *p < 0.0) || (sum - 1.0).abs() > 1e-3 {
            return Err(Error::Config(format!(
                "invalid sentiment distribution {distribution:?}"
            )));
        }
        Ok(SentenceSentiment(distribution.map(|p| p / sum)))
    }
}

/// Componentwise mean (5) then population standard deviation (5). No
/// sentences gives a uniform mean and zero deviation.
pub fn sentiment_features(sentences: &[SentenceSentiment]) -> [f64; 10] {
    let mut out = [0.0; 10];
    if sentences.is_empty() {
        out[..5].fill(0.2);
        return out;
    }
    let n = sentences.len() as f64;
    for c in 0..5 {
        let mean = sentences.iter().map(|s| s.0[c]).sum::<f64>() / n;
        let var = sentences.iter().map(|s| (s.0[c] - mean).powi(2)).sum::<f64>() / n;
        out[c] = mean;
        out[5 + c] = var.sqrt();
    }
    out
}

/// Positive and negative word lists for the built-in sentence scorer.
#[derive(Debug, Clone, PartialEq)]
pub struct SentimentLexicon {
    pub positive: BTreeSet<String>,
    pub negative: BTreeSet<String>,
    /// Share of each polar side assigned to the milder class.
    pub mild_share: f64,
}

const DEFAULT_POSITIVE: &[&str] = &[
    "good", "great", "love", "like", "best", "nice", "happy", "thank", "thanks", "excellent",
    "awesome", "beautiful", "well", "wonderful", "amazing", "proud", "respect", "support",
    "agree", "brilliant", "superb", "fantastic", "glad", "right", "true", "correct", "wise",
    "hope", "congratulation", "win", "salute", "bless", "sahi", "accha", "acha", "badhiya",
    "shandar", "jai", "pyar", "khush", "dhanyavad",
];

const DEFAULT_NEGATIVE: &[&str] = &[
    "bad", "hate", "worst", "stupid", "idiot", "shame", "fool", "ugly", "wrong", "liar",
    "disgust", "disgusting", "terrible", "horrible", "pathetic", "useless", "nonsense",
    "kill", "die", "dead", "corrupt", "fake", "shut", "loser", "evil", "sick", "angry",
    "damn", "crap", "bloody", "traitor", "cheat", "chor", "bakwas", "bekar", "ganda",
    "gandu", "pagal", "kutta", "sharam", "jhooth", "jhoota",
];

impl SentimentLexicon {
    /// Small built-in English/Romanized-Hindi polarity lists.
    pub fn builtin() -> SentimentLexicon {
        SentimentLexicon {
            positive: DEFAULT_POSITIVE.iter().map(|s| s.to_string()).collect(),
            negative: DEFAULT_NEGATIVE.iter().map(|s| s.to_string()).collect(),
            mild_share: 0.7,
        }
    }

    /// Reads two word-per-line files.
    pub fn load(positive: impl AsRef<Path>, negative: impl AsRef<Path>) -> Result<SentimentLexicon> {
        Ok(SentimentLexicon {
            positive: load_word_list(positive.as_ref())?,
            negative: load_word_list(negative.as_ref())?,
            mild_share: 0.7,
        })
    }
}

fn load_word_list(path: &Path) -> Result<BTreeSet<String>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::resource(path, e.to_string()))?;
    Ok(text
        .lines()
        .map(|l| l.trim().to_lowercase())
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect())
}

/// Lexicon-count sentence scorer. With `p` positive and `q` negative hits,
/// neutral gets `1/(1+p+q)`, the positive side `p/(1+p+q)` and the negative
/// side `q/(1+p+q)`; each side is split `mild_share : 1 - mild_share`
/// between the mild and the very class.
pub fn builtin_sentence_sentiment<S: AsRef<str>>(
    sentence_tokens: &[S],
    lexicon: &SentimentLexicon,
) -> SentenceSentiment {
    let p = sentence_tokens
        .iter()
        .filter(|t| lexicon.positive.contains(t.as_ref()))
        .count();
    let q = sentence_tokens
        .iter()
        .filter(|t| lexicon.negative.contains(t.as_ref()))
        .count();
    sentiment_from_counts(p, q, lexicon.mild_share)
}

pub fn sentiment_from_counts(p: usize, q: usize, mild_share: f64) -> SentenceSentiment {
    let total = (1 + p + q) as f64;
    let pos = p as f64 / total;
    let neg = q as f64 / total;
    SentenceSentiment([
        neg * (1.0 - mild_share),
        neg * mild_share,
        1.0 / total,
        pos * mild_share,
        pos * (1.0 - mild_share),
    ])
}

/// Precomputed per-sentence distributions keyed by document id, from lines
/// `doc_id<TAB>sent_index<TAB>p1 p2 p3 p4 p5`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SentimentSidecar {
    by_doc: HashMap<String, BTreeMap<u32, SentenceSentiment>>,
}

impl SentimentSidecar {
    pub fn load(path: impl AsRef<Path>) -> Result<SentimentSidecar> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::resource(path, e.to_string()))?;
        let mut by_doc: HashMap<String, BTreeMap<u32, SentenceSentiment>> = HashMap::new();
        for (i, line) in BufReader::new(file).lines().enumerate() {
            let lineno = i + 1;
            let line = line.map_err(|e| Error::resource(path, e.to_string()))?;
            let line = line.trim_end_matches('\r');
            if line.is_empty() {
                continue;
            }
            let bad = |m: &str| Error::resource(path, format!("line {lineno}: {m}"));
            let parts: Vec<&str> = line.split('\t').collect();
            let [id, index, dist] = parts.as_slice() else {
                return Err(bad("expected doc_id<TAB>sent_index<TAB>5 probabilities"));
            };
            let index: u32 = index.trim().parse().map_err(|_| bad("bad sentence index"))?;
            let values: Vec<f64> = dist
                .split_whitespace()
                .map(str::parse)
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| bad("bad probability"))?;
            let values: [f64; 5] = values
                .try_into()
                .map_err(|_| bad("expected 5 probabilities"))?;
            let s = SentenceSentiment::new(values).map_err(|e| bad(&e.to_string()))?;
            let id = crate::corpus::unescape_field(id);
            if by_doc.entry(id).or_default().insert(index, s).is_some() {
                return Err(bad("duplicate (doc_id, sent_index)"));
            }
        }
        Ok(SentimentSidecar { by_doc })
    }

    /// Sentences of a document in index order; empty when the id is absent.
    pub fn sentences(&self, doc_id: &str) -> Vec<SentenceSentiment> {
        self.by_doc
            .get(doc_id)
            .map(|m| m.values().copied().collect())
            .unwrap_or_default()
    }

    pub fn contains(&self, doc_id: &str) -> bool {
        self.by_doc.contains_key(doc_id)
    }
}

/// Word pattern: literal, or prefix when written with a trailing `*`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pattern {
    Exact(String),
    Prefix(String),
}

impl Pattern {
    pub fn parse(s: &str) -> Option<Pattern> {
        let s = s.trim().to_lowercase();
        match s.strip_suffix('*') {
            Some("") => None,
            Some(prefix) => Some(Pattern::Prefix(prefix.to_string())),
            None if s.is_empty() => None,
            None => Some(Pattern::Exact(s)),
        }
    }

    pub fn matches(&self, token: &str) -> bool {
        match self {
            Pattern::Exact(w) => w == token,
            Pattern::Prefix(p) => token.starts_with(p.as_str()),
        }
    }
}

/// Named word categories in file order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CategoryLexicon {
    categories: Vec<(String, Vec<Pattern>)>,
}

impl CategoryLexicon {
    pub fn new(categories: Vec<(String, Vec<Pattern>)>) -> Result<CategoryLexicon> {
        let mut seen = BTreeSet::new();
        for (name, patterns) in &categories {
            if !seen.insert(name.as_str()) {
                return Err(Error::Config(format!("duplicate category {name:?}")));
            }
            if patterns.is_empty() {
                return Err(Error::Config(format!("category {name:?} has no patterns")));
            }
        }
        Ok(CategoryLexicon { categories })
    }

    /// Reads `category<TAB>pattern1,pattern2,…` lines.
    pub fn load(path: impl AsRef<Path>) -> Result<CategoryLexicon> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::resource(path, e.to_string()))?;
        let mut categories = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (name, list) = line.split_once('\t').ok_or_else(|| {
                Error::resource(path, format!("line {}: expected category<TAB>patterns", i + 1))
            })?;
            let mut patterns = Vec::new();
            for raw in list.split(',') {
                let p = Pattern::parse(raw).ok_or_else(|| {
                    Error::resource(path, format!("line {}: empty pattern", i + 1))
                })?;
                patterns.push(p);
            }
            categories.push((name.trim().to_string(), patterns));
        }
        CategoryLexicon::new(categories).map_err(|e| Error::resource(path, e.to_string()))
    }

    pub fn len(&self) -> usize {
        self.categories.len()
    }

    pub fn is_empty(&self) -> bool {
        self.categories.is_empty()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.categories.iter().map(|(n, _)| n.as_str())
    }
}

/// Per category, the share of tokens matching any of its patterns.
pub fn liwc_features<S: AsRef<str>>(tokens: &[S], lexicon: &CategoryLexicon) -> Vec<f64> {
    if tokens.is_empty() {
        return vec![0.0; lexicon.len()];
    }
    let n = tokens.len() as f64;
    lexicon
        .categories
        .iter()
        .map(|(_, patterns)| {
            let hits = tokens
                .iter()
                .filter(|t| patterns.iter().any(|p| p.matches(t.as_ref())))
                .count();
            hits as f64 / n
        })
        .collect()
}

/// Linear word-weight lexicon with an intercept.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct WeightedLexicon {
    pub weights: HashMap<String, f64>,
    pub intercept: f64,
}

impl WeightedLexicon {
    /// Reads `word<TAB>weight` lines (comma also accepted as separator); the
    /// row `_intercept` sets the intercept.
    pub fn load(path: impl AsRef<Path>) -> Result<WeightedLexicon> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::resource(path, e.to_string()))?;
        let mut lex = WeightedLexicon::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = || Error::resource(path, format!("line {}: expected word<TAB>weight", i + 1));
            let (word, weight) = line
                .split_once('\t')
                .or_else(|| line.rsplit_once(','))
                .ok_or_else(bad)?;
            let Ok(weight) = weight.trim().parse::<f64>() else {
                // tolerate a `term,weight` header row
                if i == 0 {
                    continue;
                }
                return Err(bad());
            };
            let word = word.trim();
            if word == "_intercept" {
                lex.intercept = weight;
            } else if lex.weights.insert(word.to_lowercase(), weight).is_some() {
                return Err(Error::resource(path, format!("line {}: duplicate word {word:?}", i + 1)));
            }
        }
        Ok(lex)
    }
}

/// `(probability, binary)`: probability is the logistic of
/// `intercept + Σ count·weight`; binary is 1 only when probability > 0.5.
pub fn gender_features<S: AsRef<str>>(tokens: &[S], lexicon: &WeightedLexicon) -> [f64; 2] {
    let score = lexicon.intercept
        + tokens
            .iter()
            .filter_map(|t| lexicon.weights.get(t.as_ref()))
            .sum::<f64>();
    let prob = 1.0 / (1.0 + (-score).exp());
    [prob, if prob > 0.5 { 1.0 } else { 0.0 }]
}
