use crate::error::{Error, Result};
use crate::featurize::SparseVector;

/// Optimizer settings for one binary problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainConfig {
    pub reg_lambda: f64,
    /// Initial step of the line search.
    pub learning_rate: f64,
    pub max_iters: usize,
    /// Stop once the largest gradient component is at most this.
    pub grad_tol: f64,
    /// Recorded for provenance; training itself is deterministic.
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            reg_lambda: 1.0,
            learning_rate: 0.5,
            max_iters: 1000,
            grad_tol: 1e-6,
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.reg_lambda >= 0.0 && self.reg_lambda.is_finite()) {
            return Err(Error::Config(format!("reg_lambda must be >= 0, got {}", self.reg_lambda)));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::Config(format!(
                "learning_rate must be > 0, got {}",
                self.learning_rate
            )));
        }
        if self.max_iters == 0 {
            return Err(Error::Config("max_iters must be at least 1".into()));
        }
        if self.grad_tol.is_nan() || self.grad_tol <= 0.0 {
            return Err(Error::Config(format!("grad_tol must be > 0, got {}", self.grad_tol)));
        }
        Ok(())
    }
}

/// How training ended.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TrainMeta {
    pub iterations: usize,
    /// Max-norm of the gradient at the returned solution.
    pub grad_norm: f64,
    pub final_loss: f64,
    pub converged: bool,
}

/// L2-regularized logistic regression with an unregularized bias.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryLogReg {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub reg_lambda: f64,
    pub meta: TrainMeta,
}

impl BinaryLogReg {
    pub fn zeros(dimension: usize) -> BinaryLogReg {
        BinaryLogReg {
            weights: vec![0.0; dimension],
            bias: 0.0,
            reg_lambda: 0.0,
            meta: TrainMeta::default(),
        }
    }

    pub fn dimension(&self) -> usize {
        self.weights.len()
    }

    /// `wᵀx + b`.
    pub fn decision(&self, x: &SparseVector) -> Result<f64> {
        if x.dimension() != self.weights.len() {
            return Err(Error::DimensionMismatch {
                expected: self.weights.len(),
                found: x.dimension(),
            });
        }
        Ok(x.dot(&self.weights) + self.bias)
    }

    pub fn probability(&self, x: &SparseVector) -> Result<f64> {
        self.decision(x).map(sigmoid)
    }
}

pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// `ln(1 + e^z)` without overflow.
fn softplus(z: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}

/// Objective and gradient at `(w, b)`:
/// `J = (1/m) Σ [ln(1 + e^{z_i}) − y_i z_i] + (λ/2m)‖w‖²` with
/// `z_i = wᵀx_i + b`. Returns `(J, ∂J/∂w, ∂J/∂b)`.
pub fn logistic_objective(
    x: &[SparseVector],
    y: &[bool],
    weights: &[f64],
    bias: f64,
    reg_lambda: f64,
) -> (f64, Vec<f64>, f64) {
    let z: Vec<f64> = x.iter().map(|xi| xi.dot(weights) + bias).collect();
    objective_at(x, y, &z, weights, reg_lambda)
}

fn objective_at(
    x: &[SparseVector],
    y: &[bool],
    z: &[f64],
    weights: &[f64],
    reg_lambda: f64,
) -> (f64, Vec<f64>, f64) {
    let m = x.len() as f64;
    let mut loss = 0.0;
    let mut grad_w: Vec<f64> = weights.iter().map(|w| reg_lambda / m * w).collect();
    let mut grad_b = 0.0;
    for ((xi, &yi), &zi) in x.iter().zip(y).zip(z) {
        let t = if yi { 1.0 } else { 0.0 };
        loss += softplus(zi) - t * zi;
        let r = (sigmoid(zi) - t) / m;
        grad_b += r;
        for (j, v) in xi.iter() {
            grad_w[j] += r * v;
        }
    }
    let norm2: f64 = weights.iter().map(|w| w * w).sum();
    (loss / m + reg_lambda / (2.0 * m) * norm2, grad_w, grad_b)
}

fn check_inputs(x: &[SparseVector], y: &[bool]) -> Result<usize> {
    if x.is_empty() {
        return Err(Error::Empty("training set"));
    }
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            expected: x.len(),
            found: y.len(),
        });
    }
    let dim = x[0].dimension();
    for (i, xi) in x.iter().enumerate() {
        if xi.dimension() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: xi.dimension(),
            });
        }
        if let Some(index) = xi.first_non_finite() {
            return Err(Error::NonFinite { example: i, index });
        }
    }
    Ok(dim)
}

const ARMIJO_C: f64 = 1e-4;
const MIN_STEP: f64 = 1e-20;

pub fn train_binary(x: &[SparseVector], y: &[bool], config: &TrainConfig) -> Result<BinaryLogReg> {
    train_binary_with_trace(x, y, config).map(|(model, _)| model)
}

/// Full-batch gradient descent from zero with Armijo backtracking. Each
/// iteration first tries twice the previous accepted step (the configured
/// learning rate on the first iteration) and halves until the sufficient
/// decrease condition holds. Also returns the objective after every accepted
/// step, starting with the initial value.
pub fn train_binary_with_trace(
    x: &[SparseVector],
    y: &[bool],
    config: &TrainConfig,
) -> Result<(BinaryLogReg, Vec<f64>)> {
    config.validate()?;
    let dim = check_inputs(x, y)?;
    let m = x.len() as f64;
    let lambda = config.reg_lambda;
    let targets: Vec<f64> = y.iter().map(|&t| if t { 1.0 } else { 0.0 }).collect();

    let mut w = vec![0.0; dim];
    let mut b = 0.0;
    let mut z = vec![0.0; x.len()];
    let (mut loss, mut gw, mut gb) = objective_at(x, y, &z, &w, lambda);
    let mut trace = vec![loss];
    let mut step = config.learning_rate;
    let mut iterations = 0;
    let grad_inf = |gw: &[f64], gb: f64| gw.iter().fold(gb.abs(), |acc, g| acc.max(g.abs()));
    let mut converged = grad_inf(&gw, gb) <= config.grad_tol;

    while !converged && iterations < config.max_iters {
        // Change of each z_i per unit step along the negative gradient.
        let d: Vec<f64> = x.iter().map(|xi| xi.dot(&gw) + gb).collect();
        let g2 = gw.iter().map(|g| g * g).sum::<f64>() + gb * gb;
        let gw2: f64 = gw.iter().map(|g| g * g).sum();
        let wg: f64 = w.iter().zip(&gw).map(|(a, g)| a * g).sum();
        let w2: f64 = w.iter().map(|a| a * a).sum();

        let mut t = step;
        let accepted = loop {
            let data: f64 = z
                .iter()
                .zip(&d)
                .zip(&targets)
                .map(|((zi, di), yi)| {
                    let zn = zi - t * di;
                    softplus(zn) - yi * zn
                })
                .sum();
            let norm2 = w2 - 2.0 * t * wg + t * t * gw2;
            let trial = data / m + lambda / (2.0 * m) * norm2;
            if trial <= loss - ARMIJO_C * t * g2 {
                break Some(t);
            }
            t *= 0.5;
            if t < MIN_STEP {
                break None;
            }
        };
        let Some(t) = accepted else {
            log::debug!("line search stalled after {iterations} iterations");
            break;
        };

        for (wj, gj) in w.iter_mut().zip(&gw) {
            *wj -= t * gj;
        }
        b -= t * gb;
        for (zi, di) in z.iter_mut().zip(&d) {
            *zi -= t * di;
        }
        let (next_loss, next_gw, next_gb) = objective_at(x, y, &z, &w, lambda);
        debug_assert!(next_loss <= loss + 1e-12 * loss.abs().max(1.0));
        loss = next_loss;
        gw = next_gw;
        gb = next_gb;
        trace.push(loss);
        iterations += 1;
        step = 2.0 * t;
        converged = grad_inf(&gw, gb) <= config.grad_tol;
    }

    let model = BinaryLogReg {
        weights: w,
        bias: b,
        reg_lambda: lambda,
        meta: TrainMeta {
            iterations,
            grad_norm: grad_inf(&gw, gb),
            final_loss: loss,
            converged,
        },
    };
    Ok((model, trace))
}
