//! Saves a trained model to the text format, reloads it and checks that the
//! scores are bit-identical.

use aggro::config::RunConfig;
use aggro::featurize::{DenseResources, FeaturePipeline};
use aggro::model::{load_model, save_model, train_ovr, TrainConfig};
use aggro::synthetic::{generate, SyntheticSpec};
use aggro::{Label, Language};

fn main() -> aggro::Result<()> {
    let docs = generate(&SyntheticSpec { docs_per_class: 40, ..SyntheticSpec::default() });
    let config = RunConfig::new(Language::English, "U+C3")?;
    let pipeline = FeaturePipeline::fit(
        config.preprocessor(&docs)?,
        config.block_specs()?,
        DenseResources::default(),
        &docs,
    )?;
    let x = pipeline.transform_all(&docs);
    let y: Vec<Label> = docs.iter().map(|d| d.gold.unwrap()).collect();
    let model = train_ovr(&x, &y, &TrainConfig::default())?.with_pipeline(pipeline)?;

    let path = std::env::temp_dir().join("aggro-persist-example.model");
    save_model(&model, &path)?;
    let text = std::fs::read_to_string(&path).map_err(|e| aggro::Error::Io {
        path: path.clone(),
        source: e,
    })?;
    println!("wrote {} ({} bytes); first lines:", path.display(), text.len());
    for line in text.lines().take(12) {
        println!("  {line}");
    }

    let back = load_model(&path)?;
    let same = x
        .iter()
        .all(|xi| model.predict_proba(xi).unwrap() == back.predict_proba(xi).unwrap());
    println!("reloaded scores identical on {} documents: {same}", x.len());
    Ok(())
}
