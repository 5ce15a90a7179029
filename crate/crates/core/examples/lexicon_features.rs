//! Dense lexicon-driven blocks: averaged embeddings, sentence sentiment,
//! category counts and the weighted gender score, using the demo resources
//! in `data/`.

use std::path::Path;

use aggro::lexfeatures::{
    builtin_sentence_sentiment, embed_average, gender_features, liwc_features, load_embeddings,
    sentiment_features, CategoryLexicon, SentimentLexicon, WeightedLexicon, SENTIMENT_CLASSES,
};
use aggro::preprocess::Preprocessor;
use aggro::Language;

fn main() -> aggro::Result<()> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let pre = Preprocessor::new(Language::English);
    let text = "You are a shameless liar. I love this country and I hate you!";
    let tokens = pre.tokens(text);
    println!("tokens: {tokens:?}");

    let table = load_embeddings(data.join("demo_embeddings.txt"))?;
    let (avg, coverage) = embed_average(&tokens, &table);
    println!("embedding average {avg:.3?} (coverage {coverage:.2})");

    let lexicon = SentimentLexicon::builtin();
    let sentences: Vec<_> = pre
        .sentence_tokens(text)
        .iter()
        .map(|s| builtin_sentence_sentiment(s, &lexicon))
        .collect();
    let features = sentiment_features(&sentences);
    for (c, name) in SENTIMENT_CLASSES.iter().enumerate() {
        println!("sentiment {name:<14} mean {:.3} std {:.3}", features[c], features[5 + c]);
    }

    let liwc = CategoryLexicon::load(data.join("demo_liwc.tsv"))?;
    for (name, v) in liwc.names().zip(liwc_features(&tokens, &liwc)) {
        println!("liwc {name:<8} {v:.3}");
    }

    let gender = WeightedLexicon::load(data.join("demo_gender.tsv"))?;
    let [p, binary] = gender_features(&tokens, &gender);
    println!("gender probability {p:.3}, binary {binary}");
    Ok(())
}
