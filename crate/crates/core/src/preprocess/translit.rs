//! Rule-based Devanagari → Roman transliteration.
//!
//! Every codepoint in U+0900–U+097F has an entry in [`TABLE`]. Consonants
//! carry an inherent `a` unless the next sign is a vowel sign or the virama;
//! a nukta between a consonant and its sign is skipped. Precomposed nukta
//! letters map to their base consonant so both encodings agree.

/// Version tag recorded in model files.
pub const TABLE_VERSION: &str = "devanagari-roman-v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CharClass {
    Consonant,
    Vowel,
    VowelSign,
    Virama,
    Nukta,
    /// Signs, digits, punctuation: emitted as-is, closing any open syllable.
    Other,
}

impl CharClass {
    pub fn as_str(self) -> &'static str {
        match self {
            CharClass::Consonant => "consonant",
            CharClass::Vowel => "vowel",
            CharClass::VowelSign => "vowel_sign",
            CharClass::Virama => "virama",
            CharClass::Nukta => "nukta",
            CharClass::Other => "other",
        }
    }
}

use CharClass::*;

/// `(codepoint, class, roman)` for the whole Devanagari block.
pub static TABLE: [(char, CharClass, &str); 128] = [
    ('\u{0900}', Other, "n"),
    ('\u{0901}', Other, "n"),
    ('\u{0902}', Other, "n"),
    ('\u{0903}', Other, "h"),
    ('\u{0904}', Vowel, "a"),
    ('\u{0905}', Vowel, "a"),
    ('\u{0906}', Vowel, "aa"),
    ('\u{0907}', Vowel, "i"),
    ('\u{0908}', Vowel, "ii"),
    ('\u{0909}', Vowel, "u"),
    ('\u{090A}', Vowel, "uu"),
    ('\u{090B}', Vowel, "ri"),
    ('\u{090C}', Vowel, "lri"),
    ('\u{090D}', Vowel, "e"),
    ('\u{090E}', Vowel, "e"),
    ('\u{090F}', Vowel, "e"),
    ('\u{0910}', Vowel, "ai"),
    ('\u{0911}', Vowel, "o"),
    ('\u{0912}', Vowel, "o"),
    ('\u{0913}', Vowel, "o"),
    ('\u{0914}', Vowel, "au"),
    ('\u{0915}', Consonant, "k"),
    ('\u{0916}', Consonant, "kh"),
    ('\u{0917}', Consonant, "g"),
    ('\u{0918}', Consonant, "gh"),
    ('\u{0919}', Consonant, "ng"),
    ('\u{091A}', Consonant, "ch"),
    ('\u{091B}', Consonant, "chh"),
    ('\u{091C}', Consonant, "j"),
    ('\u{091D}', Consonant, "jh"),
    ('\u{091E}', Consonant, "ny"),
    ('\u{091F}', Consonant, "t"),
    ('\u{0920}', Consonant, "th"),
    ('\u{0921}', Consonant, "d"),
    ('\u{0922}', Consonant, "dh"),
    ('\u{0923}', Consonant, "n"),
    ('\u{0924}', Consonant, "t"),
    ('\u{0925}', Consonant, "th"),
    ('\u{0926}', Consonant, "d"),
    ('\u{0927}', Consonant, "dh"),
    ('\u{0928}', Consonant, "n"),
    ('\u{0929}', Consonant, "n"),
    ('\u{092A}', Consonant, "p"),
    ('\u{092B}', Consonant, "ph"),
    ('\u{092C}', Consonant, "b"),
    ('\u{092D}', Consonant, "bh"),
    ('\u{092E}', Consonant, "m"),
    ('\u{092F}', Consonant, "y"),
    ('\u{0930}', Consonant, "r"),
    ('\u{0931}', Consonant, "r"),
    ('\u{0932}', Consonant, "l"),
    ('\u{0933}', Consonant, "l"),
    ('\u{0934}', Consonant, "zh"),
    ('\u{0935}', Consonant, "v"),
    ('\u{0936}', Consonant, "sh"),
    ('\u{0937}', Consonant, "sh"),
    ('\u{0938}', Consonant, "s"),
    ('\u{0939}', Consonant, "h"),
    ('\u{093A}', VowelSign, "e"),
    ('\u{093B}', VowelSign, "oo"),
    ('\u{093C}', Nukta, ""),
    ('\u{093D}', Other, ""),
    ('\u{093E}', VowelSign, "aa"),
    ('\u{093F}', VowelSign, "i"),
    ('\u{0940}', VowelSign, "ii"),
    ('\u{0941}', VowelSign, "u"),
    ('\u{0942}', VowelSign, "uu"),
    ('\u{0943}', VowelSign, "ri"),
    ('\u{0944}', VowelSign, "rii"),
    ('\u{0945}', VowelSign, "e"),
    ('\u{0946}', VowelSign, "e"),
    ('\u{0947}', VowelSign, "e"),
    ('\u{0948}', VowelSign, "ai"),
    ('\u{0949}', VowelSign, "o"),
    ('\u{094A}', VowelSign, "o"),
    ('\u{094B}', VowelSign, "o"),
    ('\u{094C}', VowelSign, "au"),
    ('\u{094D}', Virama, ""),
    ('\u{094E}', VowelSign, "e"),
    ('\u{094F}', VowelSign, "aw"),
    ('\u{0950}', Other, "om"),
    ('\u{0951}', Other, ""),
    ('\u{0952}', Other, ""),
    ('\u{0953}', Other, ""),
    ('\u{0954}', Other, ""),
    ('\u{0955}', VowelSign, "e"),
    ('\u{0956}', VowelSign, "ue"),
    ('\u{0957}', VowelSign, "uue"),
    ('\u{0958}', Consonant, "k"),
    ('\u{0959}', Consonant, "kh"),
    ('\u{095A}', Consonant, "g"),
    ('\u{095B}', Consonant, "j"),
    ('\u{095C}', Consonant, "d"),
    ('\u{095D}', Consonant, "dh"),
    ('\u{095E}', Consonant, "ph"),
    ('\u{095F}', Consonant, "y"),
    ('\u{0960}', Vowel, "rii"),
    ('\u{0961}', Vowel, "lrii"),
    ('\u{0962}', VowelSign, "lri"),
    ('\u{0963}', VowelSign, "lrii"),
    ('\u{0964}', Other, "."),
    ('\u{0965}', Other, "."),
    ('\u{0966}', Other, "0"),
    ('\u{0967}', Other, "1"),
    ('\u{0968}', Other, "2"),
    ('\u{0969}', Other, "3"),
    ('\u{096A}', Other, "4"),
    ('\u{096B}', Other, "5"),
    ('\u{096C}', Other, "6"),
    ('\u{096D}', Other, "7"),
    ('\u{096E}', Other, "8"),
    ('\u{096F}', Other, "9"),
    ('\u{0970}', Other, "."),
    ('\u{0971}', Other, ""),
    ('\u{0972}', Vowel, "a"),
    ('\u{0973}', Vowel, "oe"),
    ('\u{0974}', Vowel, "ooe"),
    ('\u{0975}', Vowel, "aw"),
    ('\u{0976}', Vowel, "ue"),
    ('\u{0977}', Vowel, "uue"),
    ('\u{0978}', Consonant, "d"),
    ('\u{0979}', Consonant, "zh"),
    ('\u{097A}', Consonant, "y"),
    ('\u{097B}', Consonant, "g"),
    ('\u{097C}', Consonant, "j"),
    ('\u{097D}', Other, ""),
    ('\u{097E}', Consonant, "d"),
    ('\u{097F}', Consonant, "b"),
];

pub fn is_devanagari(c: char) -> bool {
    ('\u{0900}'..='\u{097F}').contains(&c)
}

fn lookup(c: char) -> Option<(CharClass, &'static str)> {
    if !is_devanagari(c) {
        return None;
    }
    let (cp, class, roman) = TABLE[(c as u32 - 0x0900) as usize];
    (cp == c).then_some((class, roman))
}

/// Result of transliteration with a count of Devanagari codepoints that had
/// no table entry and were passed through.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transliteration {
    pub text: String,
    pub unknown: usize,
}

pub fn transliterate_counted(text: &str) -> Transliteration {
    let mut out = String::with_capacity(text.len());
    let mut unknown = 0;
    // A consonant was emitted and still owes its inherent vowel.
    let mut pending = false;
    for c in text.chars() {
        match lookup(c) {
            Some((Nukta, _)) => {}
            Some((VowelSign, roman)) => {
                out.push_str(roman);
                pending = false;
            }
            Some((Virama, _)) => pending = false,
            Some((Consonant, roman)) => {
                if pending {
                    out.push('a');
                }
                out.push_str(roman);
                pending = true;
            }
            Some((Vowel | Other, roman)) => {
                if pending {
                    out.push('a');
                }
                out.push_str(roman);
                pending = false;
            }
            None => {
                if pending {
                    out.push('a');
                }
                if is_devanagari(c) {
                    unknown += 1;
                }
                out.push(c);
                pending = false;
            }
        }
    }
    if pending {
        out.push('a');
    }
    Transliteration { text: out, unknown }
}

/// Maps Devanagari spans to Roman script; everything else passes through.
pub fn transliterate_devanagari(text: &str) -> String {
    transliterate_counted(text).text
}

/// The mapping table as TSV (`codepoint  char  class  roman`), for audit.
pub fn dump_table() -> String {
    let mut out = String::from("codepoint\tchar\tclass\troman\n");
    for (c, class, roman) in TABLE.iter() {
        out.push_str(&format!("U+{:04X}\t{}\t{}\t{}\n", *c as u32, c, class.as_str(), roman));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn table_covers_block_in_order() {
        for (i, (c, _, roman)) in TABLE.iter().enumerate() {
            assert_eq!(*c as u32, 0x0900 + i as u32);
            assert!(roman.is_ascii());
        }
    }

    #[test]
    fn latin_passes_through() {
        assert_eq!(transliterate_devanagari("hello, world 42"), "hello, world 42");
    }

    #[test]
    fn vowel_sign_replaces_inherent_vowel() {
        assert_eq!(transliterate_devanagari("\u{0915}\u{093E}"), "kaa");
    }

    #[test]
    fn virama_suppresses_inherent_vowel() {
        assert_eq!(transliterate_devanagari("\u{0915}\u{094D}\u{092F}"), "kya");
    }

    #[test]
    fn words_and_signs() {
        // namaste
        assert_eq!(transliterate_devanagari("नमस्ते"), "namaste");
        // hindi: anusvara after consonant keeps the inherent vowel
        assert_eq!(transliterate_devanagari("हिंदी"), "hindii");
        assert_eq!(transliterate_devanagari("दुःख"), "duhkha");
        assert_eq!(transliterate_devanagari("क"), "ka");
        assert_eq!(transliterate_devanagari("आम।"), "aama.");
    }

    #[test]
    fn nukta_is_ignored_both_encodings() {
        let decomposed = transliterate_devanagari("\u{091C}\u{093C}\u{093E}");
        let precomposed = transliterate_devanagari("\u{095B}\u{093E}");
        assert_eq!(decomposed, "jaa");
        assert_eq!(decomposed, precomposed);
    }

    #[test]
    fn code_mixed_line() {
        assert_eq!(transliterate_devanagari("movie बकवास hai"), "movie bakavaasa hai");
    }

    proptest! {
        #[test]
        fn output_has_no_devanagari(s in "[\u{0900}-\u{097F}a-z ]{0,30}") {
            let t = transliterate_counted(&s);
            prop_assert_eq!(t.unknown, 0);
            prop_assert!(!t.text.chars().any(is_devanagari));
        }
    }
}
