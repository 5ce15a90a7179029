//! Fits the feature pipeline and the one-vs-rest classifier on the bundled
//! sample corpus, then scores the sample validation set.

use std::path::Path;

use aggro::config::preset;
use aggro::corpus::{load_corpus, CorpusFormat};
use aggro::evaluate::{confusion, weighted_f1};
use aggro::featurize::FeaturePipeline;
use aggro::model::train_ovr;

fn main() -> aggro::Result<()> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let config = preset("en-U+C3+C4+C5")?;
    let train = load_corpus(data.join("sample_train.tsv"), true, config.language, CorpusFormat::Tsv)?;
    let dev = load_corpus(data.join("sample_dev.tsv"), true, config.language, CorpusFormat::Tsv)?;

    let pipeline = FeaturePipeline::fit(
        config.preprocessor(train.documents())?,
        config.block_specs()?,
        config.load_resources()?,
        train.documents(),
    )?;
    for (name, range) in pipeline.block_ranges() {
        println!("block {name:<3} {:>5} features", range.len());
    }
    let x = pipeline.transform_all(train.documents());
    let y = train.gold_labels().expect("training corpus is labelled");
    let model = train_ovr(&x, &y, &config.train)?.with_pipeline(pipeline)?;
    for label in aggro::Label::ALL {
        let meta = &model.classifier(label).meta;
        println!(
            "{label}: {} iterations, loss {:.4}, converged {}",
            meta.iterations, meta.final_loss, meta.converged
        );
    }

    let pred = model.predict_documents(dev.documents())?;
    for (d, p) in dev.iter().zip(&pred) {
        println!("{:<4} gold {} pred {}  {}", d.id, d.gold.unwrap(), p, d.text);
    }
    let gold = dev.gold_labels().expect("labelled");
    println!("weighted F1 {:.4}", weighted_f1(&confusion(&gold, &pred)?));
    Ok(())
}
