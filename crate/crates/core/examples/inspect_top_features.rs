//! Trains on a synthetic corpus and lists the most positively weighted
//! features per class; the planted signal words come out on top.

use aggro::app::inspect_table;
use aggro::config::RunConfig;
use aggro::featurize::{DenseResources, FeaturePipeline};
use aggro::model::{train_ovr, TrainConfig};
use aggro::synthetic::{generate, vocabularies, SyntheticSpec};
use aggro::{Label, Language};

fn main() -> aggro::Result<()> {
    let spec = SyntheticSpec { docs_per_class: 60, ..SyntheticSpec::default() };
    let docs = generate(&spec);
    let config = RunConfig::new(Language::English, "U")?;
    let pipeline = FeaturePipeline::fit(
        config.preprocessor(&docs)?,
        config.block_specs()?,
        DenseResources::default(),
        &docs,
    )?;
    let x = pipeline.transform_all(&docs);
    let y: Vec<Label> = docs.iter().map(|d| d.gold.unwrap()).collect();
    let model = train_ovr(&x, &y, &TrainConfig::default())?.with_pipeline(pipeline)?;

    let (signal, _) = vocabularies(&spec);
    for (label, words) in Label::ALL.iter().zip(&signal) {
        println!("{label} signal words: {}", words.join(" "));
    }
    print!("\n{}", inspect_table(&model, 8));
    Ok(())
}
