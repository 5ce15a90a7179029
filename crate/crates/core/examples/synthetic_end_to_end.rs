//! The whole loop on a seeded synthetic corpus: generate, split, fit
//! U+C3+C4+C5, train, predict and report.

use std::time::Instant;

use aggro::config::RunConfig;
use aggro::evaluate::{confusion, random_baseline, EvalReport};
use aggro::featurize::{DenseResources, FeaturePipeline};
use aggro::model::{train_ovr, TrainConfig};
use aggro::synthetic::{generate, holdout_split, SyntheticSpec};
use aggro::{Label, Language};

fn main() -> aggro::Result<()> {
    let start = Instant::now();
    let docs = generate(&SyntheticSpec::default());
    let (train, test) = holdout_split(&docs, 30, 11);
    println!("{} training / {} held-out documents", train.len(), test.len());

    let config = RunConfig::new(Language::English, "U+C3+C4+C5")?;
    let pipeline = FeaturePipeline::fit(
        config.preprocessor(&train)?,
        config.block_specs()?,
        DenseResources::default(),
        &train,
    )?;
    let x = pipeline.transform_all(&train);
    let y: Vec<Label> = train.iter().map(|d| d.gold.unwrap()).collect();
    let model = train_ovr(&x, &y, &TrainConfig::default())?.with_pipeline(pipeline)?;

    let gold: Vec<Label> = test.iter().map(|d| d.gold.unwrap()).collect();
    let pred = model.predict_documents(&test)?;
    let report = EvalReport::new(confusion(&gold, &pred)?).with_baseline(random_baseline(&gold, 0, 1000)?);
    println!("{}", report.summary());
    println!("{}", report.confusion_tsv());
    println!("done in {:.2?}", start.elapsed());
    Ok(())
}
