//! Cleaning, transliteration and spell correction on a few raw comments.

use aggro::preprocess::{script_profile, transliterate_devanagari, Preprocessor};
use aggro::Language;

fn main() -> aggro::Result<()> {
    let english = Preprocessor::new(Language::English);
    for raw in [
        "I don't know why U R doing this!!! http://t.co/xyz @someone #shame",
        "Thanks... this is AMAZING news, 100% agreed",
    ] {
        println!("raw:    {raw}");
        println!("clean:  {}", english.normalize(raw));
        println!("tokens: {:?}\n", english.tokens(raw));
    }

    let hindi = Preprocessor::new(Language::Hindi);
    let mixed = "yeh बहुत गलत बात है bhai";
    println!("profile: {:?}", script_profile(mixed));
    println!("translit: {}", transliterate_devanagari(mixed));
    println!("hindi tokens: {:?}\n", hindi.tokens(mixed));

    // A dictionary counted from in-domain text drives spell correction.
    let training = ["the government is corrupt", "the government must go", "corrupt leaders"];
    let dict = english.build_dictionary(training, 1);
    let speller = Preprocessor::new(Language::English).with_spell(dict);
    println!("spell: {:?}", speller.tokens("the goverment is corupt"));
    Ok(())
}
