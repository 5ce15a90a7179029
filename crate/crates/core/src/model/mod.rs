//! One-vs-rest L2-regularized logistic regression: training, prediction,
//! introspection and model files.

pub mod logreg;
pub mod ovr;
pub mod persist;

pub use logreg::{
    logistic_objective, sigmoid, train_binary, train_binary_with_trace, BinaryLogReg,
    TrainConfig, TrainMeta,
};
pub use ovr::{argmax_label, train_ovr, OvRModel};
pub use persist::{load_model, load_model_with, save_model, LoadOptions};
