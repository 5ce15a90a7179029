use rayon::prelude::*;

use super::logreg::{sigmoid, train_binary, BinaryLogReg, TrainConfig};
use crate::corpus::{Document, Label};
use crate::error::{Error, Result};
use crate::featurize::{FeaturePipeline, SparseVector};

/// One binary classifier per label, indexed in `Label::ALL` order.
#[derive(Debug, Clone)]
pub struct OvRModel {
    pub classifiers: [BinaryLogReg; 3],
    pub pipeline: Option<FeaturePipeline>,
    pub config: TrainConfig,
    /// Set when the training labels covered a single class.
    pub single_class: bool,
}

/// Trains the three class-vs-rest problems in parallel.
pub fn train_ovr(x: &[SparseVector], labels: &[Label], config: &TrainConfig) -> Result<OvRModel> {
    if x.is_empty() {
        return Err(Error::Empty("training corpus"));
    }
    if x.len() != labels.len() {
        return Err(Error::LengthMismatch {
            expected: x.len(),
            found: labels.len(),
        });
    }
    let present = Label::ALL.iter().filter(|l| labels.contains(l)).count();
    let single_class = present < 2;
    if single_class {
        log::warn!("training labels contain a single class");
    }
    let trained: Vec<BinaryLogReg> = Label::ALL
        .par_iter()
        .map(|&class| {
            let y: Vec<bool> = labels.iter().map(|&l| l == class).collect();
            train_binary(x, &y, config)
        })
        .collect::<Result<_>>()?;
    let classifiers: [BinaryLogReg; 3] = trained.try_into().expect("three labels");
    for (label, c) in Label::ALL.iter().zip(&classifiers) {
        log::info!(
            "{label}: {} iterations, loss {:.6}, |grad| {:.2e}{}",
            c.meta.iterations,
            c.meta.final_loss,
            c.meta.grad_norm,
            if c.meta.converged { "" } else { " (not converged)" }
        );
    }
    Ok(OvRModel {
        classifiers,
        pipeline: None,
        config: *config,
        single_class,
    })
}

/// Highest score wins; ties go to the earlier label in NAG, CAG, OAG order.
pub fn argmax_label(scores: [f64; 3]) -> Label {
    let mut best = 0;
    for i in 1..3 {
        if scores[i] > scores[best] {
            best = i;
        }
    }
    Label::ALL[best]
}

impl OvRModel {
    pub fn with_pipeline(mut self, pipeline: FeaturePipeline) -> Result<OvRModel> {
        if pipeline.total_dimension() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                found: pipeline.total_dimension(),
            });
        }
        self.pipeline = Some(pipeline);
        Ok(self)
    }

    pub fn dimension(&self) -> usize {
        self.classifiers[0].dimension()
    }

    pub fn classifier(&self, label: Label) -> &BinaryLogReg {
        &self.classifiers[label.index()]
    }

    /// Raw decision values `wᵀx + b` per class.
    pub fn decision(&self, x: &SparseVector) -> Result<[f64; 3]> {
        let mut out = [0.0; 3];
        for (o, c) in out.iter_mut().zip(&self.classifiers) {
            *o = c.decision(x)?;
        }
        Ok(out)
    }

    /// Per-class sigmoid scores; not normalized across classes.
    pub fn predict_proba(&self, x: &SparseVector) -> Result<[f64; 3]> {
        Ok(self.decision(x)?.map(sigmoid))
    }

    pub fn predict(&self, x: &SparseVector) -> Result<Label> {
        self.predict_proba(x).map(argmax_label)
    }

    /// Featurizes with the attached pipeline and predicts each document.
    pub fn predict_documents(&self, docs: &[Document]) -> Result<Vec<Label>> {
        let pipeline = self.pipeline.as_ref().ok_or(Error::NotFitted)?;
        pipeline
            .transform_all(docs)
            .iter()
            .map(|x| self.predict(x))
            .collect()
    }

    /// The `k` largest non-zero weights of a class, descending (ties by
    /// index), with names from the pipeline or `f<index>` without one.
    pub fn top_features(&self, class: Label, k: usize) -> Vec<(String, f64)> {
        let mut entries: Vec<(usize, f64)> = self
            .classifier(class)
            .weights
            .iter()
            .copied()
            .enumerate()
            .filter(|(_, w)| *w != 0.0)
            .collect();
        entries.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        entries
            .into_iter()
            .take(k)
            .map(|(i, w)| {
                let name = self
                    .pipeline
                    .as_ref()
                    .and_then(|p| p.feature_name(i))
                    .unwrap_or_else(|| format!("f{i}"));
                (name, w)
            })
            .collect()
    }
}
