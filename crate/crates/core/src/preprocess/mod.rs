//! Comment normalization: cleaning and minor stemming, script detection,
//! Devanagari transliteration and dictionary spell correction.

pub mod spell;
pub mod translit;

use std::collections::BTreeMap;
use std::sync::{Arc, LazyLock};

use regex::Regex;

use crate::corpus::Language;
use crate::error::{Error, Result};
use crate::featurize::text::{split_affixes, tokenize};

pub use spell::{spell_correct, SpellDictionary};
pub use translit::{transliterate_devanagari, TABLE_VERSION};

/// Words ending in `s` that minor stemming leaves alone.
pub const NO_STRIP_S: &[&str] = &[
    "this", "his", "was", "is", "as", "us", "thus", "yes", "has", "does", "its", "always",
    "perhaps", "news", "series", "plus", "whereas", "bias", "jesus", "lens", "bus", "gas",
    "yours", "ours", "hers", "theirs", "sometimes", "besides", "various", "serious",
    "previous", "famous", "obvious", "nervous", "jealous", "ridiculous", "dangerous",
];

/// Contraction and chat-abbreviation rewrites used for English by default.
pub const DEFAULT_EXPANSIONS: &[(&str, &str)] = &[
    ("u", "you"),
    ("r", "are"),
    ("ur", "your"),
    ("pls", "please"),
    ("plz", "please"),
    ("thx", "thanks"),
    ("coz", "because"),
    ("cuz", "because"),
    ("bcoz", "because"),
    ("im", "i am"),
    ("i'm", "i am"),
    ("don't", "do not"),
    ("dont", "do not"),
    ("doesn't", "does not"),
    ("didn't", "did not"),
    ("isn't", "is not"),
    ("aren't", "are not"),
    ("wasn't", "was not"),
    ("can't", "cannot"),
    ("cant", "cannot"),
    ("won't", "will not"),
    ("wont", "will not"),
    ("you're", "you are"),
    ("they're", "they are"),
    ("we're", "we are"),
    ("i've", "i have"),
    ("i'll", "i will"),
    ("gonna", "going to"),
    ("wanna", "want to"),
    ("gotta", "got to"),
];

#[derive(Debug, Clone, PartialEq)]
pub struct CleanConfig {
    pub lowercase: bool,
    pub strip_urls: bool,
    pub strip_emails: bool,
    pub strip_numbers: bool,
    pub minor_stemming: bool,
    pub expansions: BTreeMap<String, String>,
}

impl CleanConfig {
    /// Everything on, default expansions.
    pub fn english() -> CleanConfig {
        CleanConfig {
            lowercase: true,
            strip_urls: true,
            strip_emails: true,
            strip_numbers: true,
            minor_stemming: true,
            expansions: DEFAULT_EXPANSIONS
                .iter()
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .collect(),
        }
    }

    /// Lowercasing and URL/e-mail removal only; no stemming or rewrites.
    pub fn hindi() -> CleanConfig {
        CleanConfig {
            lowercase: true,
            strip_urls: true,
            strip_emails: true,
            strip_numbers: false,
            minor_stemming: false,
            expansions: BTreeMap::new(),
        }
    }

    pub fn for_language(language: Language) -> CleanConfig {
        match language {
            Language::English => CleanConfig::english(),
            Language::Hindi => CleanConfig::hindi(),
        }
    }

    pub fn none() -> CleanConfig {
        CleanConfig {
            lowercase: false,
            strip_urls: false,
            strip_emails: false,
            strip_numbers: false,
            minor_stemming: false,
            expansions: BTreeMap::new(),
        }
    }

    /// Expansion keys must be lowercase single tokens.
    pub fn validate(&self) -> Result<()> {
        for key in self.expansions.keys() {
            if key.is_empty() || key.chars().any(char::is_whitespace) || *key != key.to_lowercase() {
                return Err(Error::Config(format!(
                    "expansion key {key:?} must be a lowercase single token"
                )));
            }
        }
        Ok(())
    }
}

impl Default for CleanConfig {
    fn default() -> Self {
        CleanConfig::english()
    }
}

static EMAIL: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"[\w.+-]+@[\w-]+(?:\.[\w-]+)+").expect("email regex"));
static URL: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"(?i)(?:https?|ftp)://\S+|\bwww\.\S+").expect("url regex")
});
static NUMBER: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"\b\d+(?:[.,]\d+)*\b").expect("number regex"));

/// Minor stemming of one word: drop possessive `'s`, then a plural `s`
/// (not after another `s`, stem of at least 3 chars, not in
/// [`NO_STRIP_S`]), then `ing` (stem of at least 4 chars).
pub fn minor_stem(word: &str) -> String {
    let mut w = word;
    if let Some(stem) = w.strip_suffix("'s") {
        if !stem.is_empty() {
            w = stem;
        }
    }
    if w.ends_with('s') && !w.ends_with("ss") && !NO_STRIP_S.contains(&w) {
        let stem = &w[..w.len() - 1];
        if stem.chars().count() >= 3 {
            w = stem;
        }
    }
    if let Some(stem) = w.strip_suffix("ing") {
        if stem.chars().count() >= 4 {
            w = stem;
        }
    }
    w.to_string()
}

fn clean_pass(text: &str, config: &CleanConfig) -> String {
    let mut s = text.replace('\u{2019}', "'");
    if config.lowercase {
        s = s.to_lowercase();
    }
    if config.strip_emails {
        s = EMAIL.replace_all(&s, " ").into_owned();
    }
    if config.strip_urls {
        s = URL.replace_all(&s, " ").into_owned();
    }
    if config.strip_numbers {
        s = NUMBER.replace_all(&s, " ").into_owned();
    }
    let mut words: Vec<String> = Vec::new();
    for raw in s.split_whitespace() {
        let (lead, core, trail) = split_affixes(raw);
        if core.is_empty() {
            words.push(raw.to_string());
            continue;
        }
        let expanded = config.expansions.get(core).map(String::as_str).unwrap_or(core);
        let mut parts: Vec<String> = expanded.split_whitespace().map(str::to_string).collect();
        if config.minor_stemming {
            for p in parts.iter_mut() {
                *p = minor_stem(p);
            }
        }
        let last = parts.len().saturating_sub(1);
        for (i, p) in parts.into_iter().enumerate() {
            let mut w = String::new();
            if i == 0 {
                w.push_str(lead);
            }
            w.push_str(&p);
            if i == last {
                w.push_str(trail);
            }
            if !w.is_empty() {
                words.push(w);
            }
        }
    }
    words.join(" ")
}

const MAX_CLEAN_PASSES: usize = 8;

/// Cleans a comment: lowercase; URL, e-mail and standalone-number removal;
/// expansion rewrites on word cores; minor stemming; whitespace collapse.
///
/// The pass is repeated until the output is stable, so the result is a fixed
/// point: `clean_text(clean_text(x)) == clean_text(x)`.
pub fn clean_text(text: &str, config: &CleanConfig) -> String {
    let mut current = clean_pass(text, config);
    for _ in 1..MAX_CLEAN_PASSES {
        let next = clean_pass(&current, config);
        if next == current {
            break;
        }
        current = next;
    }
    current
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ScriptProfile {
    pub devanagari_fraction: f64,
    pub latin_fraction: f64,
    pub other_fraction: f64,
}

impl ScriptProfile {
    pub fn has_devanagari(&self) -> bool {
        self.devanagari_fraction > 0.0
    }
}

fn is_devanagari_letter(c: char) -> bool {
    translit::is_devanagari(c) && !matches!(c, '\u{0964}'..='\u{0970}')
}

/// Share of Devanagari, Basic Latin and other letters among script-bearing
/// characters. All zero when there are none.
pub fn script_profile(text: &str) -> ScriptProfile {
    let (mut dev, mut lat, mut other) = (0usize, 0usize, 0usize);
    for c in text.chars() {
        if is_devanagari_letter(c) {
            dev += 1;
        } else if c.is_ascii_alphabetic() {
            lat += 1;
        } else if c.is_alphabetic() {
            other += 1;
        }
    }
    let total = dev + lat + other;
    if total == 0 {
        return ScriptProfile::default();
    }
    let t = total as f64;
    ScriptProfile {
        devanagari_fraction: dev as f64 / t,
        latin_fraction: lat as f64 / t,
        other_fraction: other as f64 / t,
    }
}

/// Spell-corrects the word core of every whitespace token, keeping attached
/// punctuation in place.
pub fn spell_correct_text(text: &str, dict: &SpellDictionary) -> String {
    text.split_whitespace()
        .map(|raw| {
            let (lead, core, trail) = split_affixes(raw);
            if core.is_empty() || dict.contains(core) {
                return raw.to_string();
            }
            match dict.best_candidate(core) {
                Some(fix) => format!("{lead}{fix}{trail}"),
                None => raw.to_string(),
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Splits on `.`, `!`, `?` and newlines, dropping blank segments.
pub fn split_sentences(text: &str) -> Vec<&str> {
    text.split(['.', '!', '?', '\n'])
        .filter(|s| !s.trim().is_empty())
        .collect()
}

/// Full per-document normalization as recorded in a model file.
#[derive(Debug, Clone)]
pub struct Preprocessor {
    pub language: Language,
    pub clean: CleanConfig,
    pub transliterate: bool,
    pub spell: Option<Arc<SpellDictionary>>,
}

impl Preprocessor {
    pub fn new(language: Language) -> Preprocessor {
        Preprocessor {
            language,
            clean: CleanConfig::for_language(language),
            transliterate: language == Language::Hindi,
            spell: None,
        }
    }

    pub fn with_spell(mut self, dict: SpellDictionary) -> Preprocessor {
        self.spell = Some(Arc::new(dict));
        self
    }

    /// Transliteration (when the text has any Devanagari) followed by
    /// cleaning and optional spell correction.
    pub fn normalize(&self, raw: &str) -> String {
        let text = if self.transliterate && script_profile(raw).has_devanagari() {
            transliterate_devanagari(raw)
        } else {
            raw.to_string()
        };
        let cleaned = clean_text(&text, &self.clean);
        match &self.spell {
            Some(dict) => spell_correct_text(&cleaned, dict),
            None => cleaned,
        }
    }

    pub fn tokens(&self, raw: &str) -> Vec<String> {
        tokenize(&self.normalize(raw))
    }

    /// Token lists per sentence; sentences are split before cleaning so
    /// line breaks still act as boundaries.
    pub fn sentence_tokens(&self, raw: &str) -> Vec<Vec<String>> {
        split_sentences(raw)
            .into_iter()
            .map(|s| self.tokens(s))
            .filter(|t| !t.is_empty())
            .collect()
    }

    /// Frequency table of word tokens in the normalized but uncorrected
    /// text, keeping tokens seen at least `min_count` times.
    pub fn build_dictionary<'a, I>(&self, texts: I, min_count: u64) -> SpellDictionary
    where
        I: IntoIterator<Item = &'a str>,
    {
        let plain = Preprocessor {
            spell: None,
            ..self.clone()
        };
        let mut counts: BTreeMap<String, u64> = BTreeMap::new();
        for text in texts {
            for token in plain.tokens(text) {
                if token.chars().any(char::is_alphanumeric) {
                    *counts.entry(token).or_insert(0) += 1;
                }
            }
        }
        SpellDictionary::from_counts(counts.into_iter().filter(|&(_, c)| c >= min_count.max(1)))
            .expect("counts are positive")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn url_removal_and_lowercase() {
        assert_eq!(clean_text("Visit http://x.co NOW", &CleanConfig::english()), "visit now");
    }

    #[test]
    fn stemming_rules() {
        assert_eq!(clean_text("running dogs John's", &CleanConfig::english()), "runn dog john");
        assert_eq!(minor_stem("this"), "this");
        assert_eq!(minor_stem("class"), "class");
        assert_eq!(minor_stem("bus"), "bus");
        assert_eq!(minor_stem("sing"), "sing");
        assert_eq!(minor_stem("buildings"), "build");
    }

    #[test]
    fn empty_input() {
        assert_eq!(clean_text("", &CleanConfig::english()), "");
    }

    #[test]
    fn emails_numbers_and_expansions() {
        let cfg = CleanConfig::english();
        assert_eq!(clean_text("mail me@x.org 2018 b4 u r", &cfg), "mail b4 you are");
        assert_eq!(clean_text("I don't know, 3.5 times!", &cfg), "i do not know, time!");
        assert_eq!(clean_text("Go to www.site.com/path?q=1 now", &cfg), "go to now");
    }

    #[test]
    fn hindi_config_keeps_plurals_and_numbers() {
        assert_eq!(clean_text("Dogs 2 RUNNING", &CleanConfig::hindi()), "dogs 2 running");
    }

    #[test]
    fn expansion_key_validation() {
        let mut cfg = CleanConfig::english();
        cfg.expansions.insert("Two Words".into(), "x".into());
        assert!(cfg.validate().is_err());
        assert!(CleanConfig::english().validate().is_ok());
    }

    #[test]
    fn script_profile_examples() {
        let p = script_profile("abc");
        assert_eq!((p.latin_fraction, p.devanagari_fraction), (1.0, 0.0));
        assert_eq!(script_profile("नमस्ते").devanagari_fraction, 1.0);
        let p = script_profile("ab कम!?");
        assert_eq!((p.latin_fraction, p.devanagari_fraction), (0.5, 0.5));
        assert_eq!(script_profile("123 !!"), ScriptProfile::default());
    }

    #[test]
    fn preprocessor_transliterates_mixed_lines() {
        let p = Preprocessor::new(Language::Hindi);
        assert_eq!(p.normalize("Movie बकवास HAI"), "movie bakavaasa hai");
    }

    #[test]
    fn preprocessor_spell_corrects_cores() {
        let dict = SpellDictionary::from_counts([("great", 3u64), ("movie", 2)]).unwrap();
        let p = Preprocessor::new(Language::English).with_spell(dict);
        assert_eq!(p.normalize("Graet movei!"), "great movie!");
    }

    #[test]
    fn sentence_split() {
        assert_eq!(split_sentences("one. two!\nthree?? "), ["one", " two", "three"]);
        assert!(split_sentences("...").is_empty());
    }

    proptest! {
        #[test]
        fn clean_is_idempotent(s in "([A-Za-z]{0,6}|'s|s|ing|[0-9]{1,3}|http://x\\.co|a@b\\.com|[.,!?']|u|r| |\t|\n){0,14}") {
            let cfg = CleanConfig::english();
            let once = clean_text(&s, &cfg);
            prop_assert_eq!(clean_text(&once, &cfg), once);
        }

        #[test]
        fn clean_is_idempotent_any_text(s in "\\PC{0,40}") {
            let cfg = CleanConfig::english();
            let once = clean_text(&s, &cfg);
            prop_assert_eq!(clean_text(&once, &cfg), once);
        }

        #[test]
        fn script_fractions_sum_to_one(s in "[a-zक-हĀ-ž0-9 !]{0,20}") {
            let p = script_profile(&s);
            let sum = p.devanagari_fraction + p.latin_fraction + p.other_fraction;
            if s.chars().any(char::is_alphabetic) {
                prop_assert!((sum - 1.0).abs() <= 1e-9);
            } else {
                prop_assert_eq!(sum, 0.0);
            }
        }
    }
}
