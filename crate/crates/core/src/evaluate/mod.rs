//! Scoring: confusion matrices, per-class and weighted F1, random-labeling
//! baselines and report files.

pub mod baseline;
pub mod metrics;
pub mod report;

pub use baseline::{random_baseline, random_baseline_with, BaselineMode};
pub use metrics::{accuracy, class_prf, confusion, macro_f1, weighted_f1, ConfusionMatrix, Prf};
pub use report::{render_report, EvalReport};
