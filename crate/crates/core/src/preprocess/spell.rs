//! Frequency-weighted single-edit spelling correction.
//!
//! Candidates are dictionary entries within one edit of the query, where an
//! edit is an insertion, deletion, substitution or adjacent transposition.
//! Lookup uses a delete-variant index: two strings within one such edit
//! always share a single-deletion variant (or one is a deletion of the
//! other), so candidates are gathered from the index and then verified.

use std::collections::{BTreeMap, HashMap};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default)]
pub struct SpellDictionary {
    entries: BTreeMap<String, u64>,
    words: Vec<String>,
    index: HashMap<String, Vec<u32>>,
}

fn deletes(word: &str) -> impl Iterator<Item = String> + '_ {
    word.char_indices().map(move |(i, c)| {
        let mut s = String::with_capacity(word.len());
        s.push_str(&word[..i]);
        s.push_str(&word[i + c.len_utf8()..]);
        s
    })
}

impl SpellDictionary {
    /// Builds a dictionary from `(token, count)` pairs. Tokens are lowercased
    /// and counts of repeated tokens summed; zero counts are rejected.
    pub fn from_counts<I, S>(counts: I) -> Result<SpellDictionary>
    where
        I: IntoIterator<Item = (S, u64)>,
        S: AsRef<str>,
    {
        let mut entries = BTreeMap::new();
        for (token, count) in counts {
            let token = token.as_ref().to_lowercase();
            if count == 0 {
                return Err(Error::Config(format!("dictionary entry {token:?} has zero frequency")));
            }
            if token.is_empty() {
                continue;
            }
            *entries.entry(token).or_insert(0) += count;
        }
        Ok(Self::build(entries))
    }

    /// Counts tokens (lowercased) into a dictionary.
    pub fn from_tokens<I, S>(tokens: I) -> SpellDictionary
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut entries = BTreeMap::new();
        for t in tokens {
            let t = t.as_ref().to_lowercase();
            if !t.is_empty() {
                *entries.entry(t).or_insert(0) += 1;
            }
        }
        Self::build(entries)
    }

    fn build(entries: BTreeMap<String, u64>) -> SpellDictionary {
        let words: Vec<String> = entries.keys().cloned().collect();
        let mut index: HashMap<String, Vec<u32>> = HashMap::new();
        for (id, w) in words.iter().enumerate() {
            index.entry(w.clone()).or_default().push(id as u32);
            for d in deletes(w) {
                index.entry(d).or_default().push(id as u32);
            }
        }
        SpellDictionary {
            entries,
            words,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, token: &str) -> bool {
        self.entries.contains_key(token)
    }

    pub fn frequency(&self, token: &str) -> Option<u64> {
        self.entries.get(token).copied()
    }

    /// Entries in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), *v))
    }

    /// Best in-dictionary replacement for an out-of-dictionary token: highest
    /// frequency within one edit, ties to the lexicographically smallest.
    pub fn best_candidate(&self, token: &str) -> Option<&str> {
        let mut ids: Vec<u32> = Vec::new();
        if let Some(v) = self.index.get(token) {
            ids.extend(v);
        }
        for d in deletes(token) {
            if let Some(v) = self.index.get(&d) {
                ids.extend(v);
            }
        }
        ids.sort_unstable();
        ids.dedup();
        ids.into_iter()
            .map(|id| self.words[id as usize].as_str())
            .filter(|w| *w != token && within_one_edit(token, w))
            .max_by(|a, b| {
                self.entries[*a]
                    .cmp(&self.entries[*b])
                    .then_with(|| b.cmp(a))
            })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<SpellDictionary> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::resource(path, e.to_string()))?;
        let mut counts = Vec::new();
        for (i, line) in BufReader::new(file).lines().enumerate() {
            let line = line.map_err(|e| Error::resource(path, e.to_string()))?;
            let line = line.trim_end_matches('\r');
            if line.is_empty() {
                continue;
            }
            let bad = || Error::resource(path, format!("line {}: expected token<TAB>count", i + 1));
            let (token, count) = line.split_once('\t').ok_or_else(bad)?;
            let count: u64 = count.trim().parse().map_err(|_| bad())?;
            if count == 0 {
                return Err(Error::resource(path, format!("line {}: frequency must be >= 1", i + 1)));
            }
            counts.push((token.to_string(), count));
        }
        SpellDictionary::from_counts(counts)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut out = BufWriter::new(file);
        for (token, count) in self.iter() {
            writeln!(out, "{token}\t{count}").map_err(|e| Error::io(path, e))?;
        }
        out.flush().map_err(|e| Error::io(path, e))
    }
}

/// True when `a` and `b` differ by at most one insertion, deletion,
/// substitution or adjacent transposition.
pub fn within_one_edit(a: &str, b: &str) -> bool {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    match a.len() as isize - b.len() as isize {
        0 => {
            let diffs: Vec<usize> = (0..a.len()).filter(|&i| a[i] != b[i]).collect();
            match diffs.as_slice() {
                [] | [_] => true,
                [i, j] => *j == i + 1 && a[*i] == b[*j] && a[*j] == b[*i],
                _ => false,
            }
        }
        1 => is_one_deletion(&a, &b),
        -1 => is_one_deletion(&b, &a),
        _ => false,
    }
}

fn is_one_deletion(longer: &[char], shorter: &[char]) -> bool {
    let prefix = longer.iter().zip(shorter).take_while(|(x, y)| x == y).count();
    longer[prefix + 1..] == shorter[prefix..]
}

/// Replaces each out-of-dictionary token by its best single-edit candidate;
/// tokens in the dictionary, or without any candidate, are kept.
pub fn spell_correct<S: AsRef<str>>(tokens: &[S], dict: &SpellDictionary) -> Vec<String> {
    tokens
        .iter()
        .map(|t| {
            let t = t.as_ref();
            if t.is_empty() || dict.contains(t) {
                return t.to_string();
            }
            dict.best_candidate(t).unwrap_or(t).to_string()
        })
        .collect()
}
