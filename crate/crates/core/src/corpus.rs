//! Corpus files: labelled or unlabelled comments, one record per line.
//!
//! The canonical format is UTF-8 escaped TSV (`id<TAB>text[<TAB>label]`),
//! where tabs, newlines, carriage returns and backslashes inside a field are
//! written as `\t`, `\n`, `\r` and `\\`. RFC-4180 CSV is accepted for the
//! files distributed with the original shared task.

use std::collections::HashSet;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};

/// Aggression level. The derived order (NAG < CAG < OAG) fixes row/column
/// order in confusion matrices and tie-breaking in prediction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    /// Non-aggressive.
    Nag,
    /// Covertly aggressive.
    Cag,
    /// Overtly aggressive.
    Oag,
}

impl Label {
    pub const ALL: [Label; 3] = [Label::Nag, Label::Cag, Label::Oag];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> Option<Label> {
        Label::ALL.get(index).copied()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Label::Nag => "NAG",
            Label::Cag => "CAG",
            Label::Oag => "OAG",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Label> {
        parse_label(s)
    }
}

/// Case-insensitive label parsing.
pub fn parse_label(s: &str) -> Result<Label> {
    let trimmed = s.trim();
    Label::ALL
        .into_iter()
        .find(|l| l.as_str().eq_ignore_ascii_case(trimmed))
        .ok_or_else(|| Error::UnknownLabel {
            label: trimmed.to_string(),
            line: None,
        })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Language {
    English,
    Hindi,
}

impl Language {
    pub fn as_str(self) -> &'static str {
        match self {
            Language::English => "english",
            Language::Hindi => "hindi",
        }
    }
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Language {
    type Err = Error;

    fn from_str(s: &str) -> Result<Language> {
        match s.trim().to_ascii_lowercase().as_str() {
            "english" | "en" => Ok(Language::English),
            "hindi" | "hi" => Ok(Language::Hindi),
            other => Err(Error::Config(format!("unknown language {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CorpusFormat {
    #[default]
    Tsv,
    Csv,
}

impl FromStr for CorpusFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<CorpusFormat> {
        match s.trim().to_ascii_lowercase().as_str() {
            "tsv" => Ok(CorpusFormat::Tsv),
            "csv" => Ok(CorpusFormat::Csv),
            other => Err(Error::Config(format!("unknown corpus format {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub id: String,
    pub text: String,
    pub gold: Option<Label>,
}

impl Document {
    pub fn new(id: impl Into<String>, text: impl Into<String>, gold: Option<Label>) -> Self {
        Document {
            id: id.into(),
            text: text.into(),
            gold,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Corpus {
    documents: Vec<Document>,
    language: Language,
    source: PathBuf,
}

impl Corpus {
    /// Builds a corpus from in-memory documents, checking id invariants.
    pub fn new(
        documents: Vec<Document>,
        language: Language,
        source: impl Into<PathBuf>,
    ) -> Result<Corpus> {
        let mut seen = HashSet::with_capacity(documents.len());
        for (i, doc) in documents.iter().enumerate() {
            if doc.id.is_empty() {
                return Err(Error::MalformedRecord {
                    line: i + 1,
                    message: "empty id".into(),
                });
            }
            if !seen.insert(doc.id.as_str()) {
                return Err(Error::DuplicateId(doc.id.clone()));
            }
        }
        Ok(Corpus {
            documents,
            language,
            source: source.into(),
        })
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    pub fn language(&self) -> Language {
        self.language
    }

    pub fn source(&self) -> &Path {
        &self.source
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Document> {
        self.documents.iter()
    }

    /// Gold labels, or `None` if any document is unlabelled.
    pub fn gold_labels(&self) -> Option<Vec<Label>> {
        self.documents.iter().map(|d| d.gold).collect()
    }

    /// Appends another corpus (train + validation merging). Ids must stay unique.
    pub fn merged(&self, other: &Corpus) -> Result<Corpus> {
        let mut docs = self.documents.clone();
        docs.extend(other.documents.iter().cloned());
        Corpus::new(docs, self.language, self.source.clone())
    }
}

impl<'a> IntoIterator for &'a Corpus {
    type Item = &'a Document;
    type IntoIter = std::slice::Iter<'a, Document>;

    fn into_iter(self) -> Self::IntoIter {
        self.documents.iter()
    }
}

pub fn escape_field(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out
}

pub fn unescape_field(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('t') => out.push('\t'),
            Some('n') => out.push('\n'),
            Some('r') => out.push('\r'),
            Some('\\') => out.push('\\'),
            Some(other) => {
                out.push('\\');
                out.push(other);
            }
            None => out.push('\\'),
        }
    }
    out
}

fn record_to_document(fields: &[&str], line: usize, has_labels: bool) -> Result<Document> {
    let wanted = if has_labels { 3 } else { 2 };
    if fields.len() < wanted {
        return Err(Error::MalformedRecord {
            line,
            message: format!("expected {wanted} fields, found {}", fields.len()),
        });
    }
    if has_labels && fields.len() > 3 {
        return Err(Error::MalformedRecord {
            line,
            message: format!("expected 3 fields, found {}", fields.len()),
        });
    }
    if fields[0].is_empty() {
        return Err(Error::MalformedRecord {
            line,
            message: "empty id".into(),
        });
    }
    let gold = if has_labels {
        Some(parse_label(fields[2]).map_err(|_| Error::UnknownLabel {
            label: fields[2].trim().to_string(),
            line: Some(line),
        })?)
    } else {
        None
    };
    Ok(Document {
        id: fields[0].to_string(),
        text: fields[1].to_string(),
        gold,
    })
}

/// Reads corpus records from any buffered reader. `source` is recorded as
/// provenance only.
pub fn read_corpus<R: BufRead>(
    reader: R,
    source: impl Into<PathBuf>,
    has_labels: bool,
    language: Language,
    format: CorpusFormat,
) -> Result<Corpus> {
    let source = source.into();
    let mut docs = Vec::new();
    match format {
        CorpusFormat::Tsv => {
            for (i, line) in reader.lines().enumerate() {
                let line = line.map_err(|e| Error::io(&source, e))?;
                let line = line.strip_suffix('\r').unwrap_or(&line);
                if line.is_empty() {
                    continue;
                }
                let raw: Vec<&str> = line.split('\t').collect();
                let fields: Vec<String> = raw.iter().map(|f| unescape_field(f)).collect();
                let refs: Vec<&str> = fields.iter().map(String::as_str).collect();
                docs.push(record_to_document(&refs, i + 1, has_labels)?);
            }
        }
        CorpusFormat::Csv => {
            let mut rdr = csv::ReaderBuilder::new()
                .has_headers(false)
                .flexible(true)
                .from_reader(reader);
            for record in rdr.records() {
                let record = record.map_err(|e| {
                    let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
                    Error::MalformedRecord {
                        line,
                        message: e.to_string(),
                    }
                })?;
                let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
                if record.iter().all(str::is_empty) {
                    continue;
                }
                let refs: Vec<&str> = record.iter().collect();
                docs.push(record_to_document(&refs, line, has_labels)?);
            }
        }
    }
    Corpus::new(docs, language, source)
}

pub fn load_corpus(
    path: impl AsRef<Path>,
    has_labels: bool,
    language: Language,
    format: CorpusFormat,
) -> Result<Corpus> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_corpus(BufReader::new(file), path, has_labels, language, format)
}

/// Writes a corpus in the canonical escaped-TSV format.
pub fn write_corpus(corpus: &Corpus, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    for doc in corpus {
        let mut line = format!("{}\t{}", escape_field(&doc.id), escape_field(&doc.text));
        if let Some(label) = doc.gold {
            line.push('\t');
            line.push_str(label.as_str());
        }
        writeln!(out, "{line}").map_err(|e| Error::io(path, e))?;
    }
    out.flush().map_err(|e| Error::io(path, e))
}

/// Writes `id<TAB>label` rows in corpus order.
pub fn write_predictions(corpus: &Corpus, predictions: &[Label], path: impl AsRef<Path>) -> Result<()> {
    if corpus.len() != predictions.len() {
        return Err(Error::LengthMismatch {
            expected: corpus.len(),
            found: predictions.len(),
        });
    }
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    for (doc, label) in corpus.iter().zip(predictions) {
        writeln!(out, "{}\t{}", escape_field(&doc.id), label).map_err(|e| Error::io(path, e))?;
    }
    out.flush().map_err(|e| Error::io(path, e))
}

/// Reads a prediction file back as `(id, label)` pairs in file order.
pub fn read_predictions(path: impl AsRef<Path>) -> Result<Vec<(String, Label)>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut seen = HashSet::new();
    let mut rows = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split('\t');
        let (Some(id), Some(label), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(Error::MalformedRecord {
                line: i + 1,
                message: "expected id<TAB>label".into(),
            });
        };
        let label = parse_label(label).map_err(|_| Error::UnknownLabel {
            label: label.trim().to_string(),
            line: Some(i + 1),
        })?;
        let id = unescape_field(id);
        if !seen.insert(id.clone()) {
            return Err(Error::DuplicateId(id));
        }
        rows.push((id, label));
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    fn tsv(s: &str, has_labels: bool) -> Result<Corpus> {
        read_corpus(Cursor::new(s), "mem", has_labels, Language::English, CorpusFormat::Tsv)
    }

    #[test]
    fn single_labelled_row() {
        let c = tsv("fb1\thello world\tNAG\n", true).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.documents()[0].gold, Some(Label::Nag));
        assert_eq!(c.documents()[0].text, "hello world");
    }

    #[test]
    fn unknown_label_reports_line() {
        let err = tsv("fb2\ttext\tXYZ\n", true).unwrap_err();
        assert_eq!(err.to_string(), "unknown label XYZ at line 1");
    }

    #[test]
    fn duplicate_id_named() {
        let err = tsv("a\tx\tNAG\nb\tx\tNAG\nc\tx\tNAG\na\tx\tOAG\n", true).unwrap_err();
        assert!(matches!(err, Error::DuplicateId(ref id) if id == "a"), "{err}");
    }

    #[test]
    fn parse_label_cases() {
        assert_eq!(parse_label("OAG").unwrap(), Label::Oag);
        assert_eq!(parse_label("nag").unwrap(), Label::Nag);
        assert!(parse_label("aggressive").is_err());
    }

    #[test]
    fn missing_fields_and_blank_lines() {
        let err = tsv("\n\nonly-id\n", false).unwrap_err();
        assert!(matches!(err, Error::MalformedRecord { line: 3, .. }), "{err}");
        let c = tsv("a\t\n\nb\tsome text\n", false).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.documents()[0].text, "");
    }

    #[test]
    fn escapes_round_trip() {
        let raw = "tab\there\nnew line \\ backslash\r";
        assert_eq!(unescape_field(&escape_field(raw)), raw);
        let c = tsv("x\tline one\\nline two\\tend\tCAG\n", true).unwrap();
        assert_eq!(c.documents()[0].text, "line one\nline two\tend");
    }

    #[test]
    fn csv_with_quotes() {
        let data = "id1,\"Well, said\",NAG\nid2,\"multi\nline \"\"quoted\"\"\",OAG\n";
        let c = read_corpus(Cursor::new(data), "mem", true, Language::Hindi, CorpusFormat::Csv).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.documents()[0].text, "Well, said");
        assert_eq!(c.documents()[1].text, "multi\nline \"quoted\"");
        assert_eq!(c.documents()[1].gold, Some(Label::Oag));
    }

    #[test]
    fn prediction_files() {
        let dir = tempfile::tempdir().unwrap();
        let c = tsv("d1\ta\nd2\tb\n", false).unwrap();
        let path = dir.path().join("pred.tsv");
        write_predictions(&c, &[Label::Nag, Label::Oag], &path).unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "d1\tNAG\nd2\tOAG\n");

        let err = write_predictions(&c, &[Label::Nag, Label::Oag, Label::Cag], &path).unwrap_err();
        assert!(matches!(err, Error::LengthMismatch { expected: 2, found: 3 }));

        let empty = tsv("", false).unwrap();
        write_predictions(&empty, &[], &path).unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "");
    }

    #[test]
    fn gold_projection_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let input = "a\tfirst\tNAG\nb\tsecond\tOAG\nc\tthird\tCAG\n";
        let c = tsv(input, true).unwrap();
        let path = dir.path().join("p.tsv");
        write_predictions(&c, &c.gold_labels().unwrap(), &path).unwrap();
        let rows = read_predictions(&path).unwrap();
        let expected: Vec<(String, Label)> = c.iter().map(|d| (d.id.clone(), d.gold.unwrap())).collect();
        assert_eq!(rows, expected);
    }

    #[test]
    fn missing_file_errors() {
        let err = load_corpus("/definitely/not/here.tsv", true, Language::English, CorpusFormat::Tsv)
            .unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
    }
}
