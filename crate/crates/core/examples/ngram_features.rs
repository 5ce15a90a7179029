//! Word, character and skip n-grams, and the TF-IDF weighting on top of them.

use aggro::featurize::{char_ngrams, fit_vocabulary, skip_grams, tfidf_transform, word_ngrams};

fn main() {
    let tokens = ["you", "are", "a", "liar"];
    println!("bigrams:      {:?}", word_ngrams(&tokens, 2));
    println!("char 3-grams: {:?}", char_ngrams("liar", 3));
    println!("2-skip-bigrams: {:?}", skip_grams(&tokens, 2, 2));

    let corpus: Vec<Vec<String>> = ["good speech good", "bad speech", "good day", "bad bad day"]
        .iter()
        .map(|d| d.split(' ').map(String::from).collect())
        .collect();
    let vocab = fit_vocabulary(&corpus, 2);
    println!("\nvocabulary (min_df 2):");
    for (i, (term, df)) in vocab.iter().enumerate() {
        println!("  {i}  {term:<8} df={df} idf={:.4}", vocab.idf(i));
    }
    for doc in &corpus {
        let v = tfidf_transform(doc, &vocab);
        let cells: Vec<String> = v.iter().map(|(i, w)| format!("{}={w:.3}", vocab.term(i).unwrap())).collect();
        println!("  {:<18} -> {}", doc.join(" "), cells.join(" "));
    }
}
