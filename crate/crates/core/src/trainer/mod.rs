//! Gradient training of a fixed architecture: Adam with a cosine learning
//! rate schedule, and argmax accuracy.

mod gradient;

pub use gradient::{GradientMode, Objective};

use std::f64::consts::PI;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::datagen::Dataset;
use crate::error::{Error, Result};
use crate::loss::LossKind;
use crate::ntk::sample_init_params;
use crate::qsim::{CircuitArchitecture, ReadoutSpec};
use crate::rng;

/// Loss above which training is declared divergent.
pub const DIVERGENCE_LIMIT: f64 = 1e6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub epochs: usize,
    pub loss_kind: LossKind,
    /// Mini-batch size; `None` trains full-batch.
    pub batch_size: Option<usize>,
    pub gradient_mode: GradientMode,
    pub fd_step: f64,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            learning_rate: 0.005,
            epochs: 200,
            loss_kind: LossKind::Mse,
            batch_size: None,
            gradient_mode: GradientMode::Adjoint,
            fd_step: 1e-4,
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::Config(format!(
                "learning_rate must be > 0, got {}",
                self.learning_rate
            )));
        }
        if self.epochs == 0 {
            return Err(Error::Config("epochs must be >= 1".into()));
        }
        if !(self.fd_step > 0.0) {
            return Err(Error::Config(format!("fd_step must be > 0, got {}", self.fd_step)));
        }
        if self.batch_size == Some(0) {
            return Err(Error::Config("batch_size must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainResult {
    pub final_params: Vec<f64>,
    /// Loss of the batch used at each epoch, before that epoch's update.
    pub loss_curve: Vec<f64>,
    /// Full training-split loss at the final parameters.
    pub final_train_loss: f64,
    pub final_test_loss: Option<f64>,
    pub train_accuracy: f64,
    /// `None` when the dataset has no test split.
    pub test_accuracy: Option<f64>,
}

/// `η_t = η·(1 + cos(π t / T))/2`.
pub fn cosine_lr(base: f64, t: usize, total: usize) -> f64 {
    base * (1.0 + (PI * t as f64 / total as f64).cos()) / 2.0
}

/// Adam with the usual moment constants.
#[derive(Debug, Clone)]
pub struct Adam {
    m: Vec<f64>,
    v: Vec<f64>,
    t: i32,
}

impl Adam {
    pub const BETA1: f64 = 0.9;
    pub const BETA2: f64 = 0.999;
    pub const EPS: f64 = 1e-8;

    pub fn new(n: usize) -> Self {
        Adam {
            m: vec![0.0; n],
            v: vec![0.0; n],
            t: 0,
        }
    }

    pub fn step(&mut self, params: &mut [f64], grad: &[f64], lr: f64) {
        self.t += 1;
        let c1 = 1.0 - Self::BETA1.powi(self.t);
        let c2 = 1.0 - Self::BETA2.powi(self.t);
        for i in 0..params.len() {
            self.m[i] = Self::BETA1 * self.m[i] + (1.0 - Self::BETA1) * grad[i];
            self.v[i] = Self::BETA2 * self.v[i] + (1.0 - Self::BETA2) * grad[i] * grad[i];
            let mh = self.m[i] / c1;
            let vh = self.v[i] / c2;
            params[i] -= lr * mh / (vh.sqrt() + Self::EPS);
        }
    }
}

fn objective_inputs(
    dataset: &Dataset,
    indices: &[usize],
) -> Result<(Vec<crate::qsim::StateVector>, Vec<usize>)> {
    Ok((dataset.input_states(indices)?, dataset.labels_at(indices)))
}

/// Mean loss of `params` over the dataset rows `indices`.
pub fn loss(
    arch: &CircuitArchitecture,
    params: &[f64],
    dataset: &Dataset,
    indices: &[usize],
    loss_kind: LossKind,
    readout: &ReadoutSpec,
) -> Result<f64> {
    let (inputs, labels) = objective_inputs(dataset, indices)?;
    Objective {
        arch,
        inputs: &inputs,
        labels: &labels,
        readout,
        loss_kind,
    }
    .loss(params)
}

/// Gradient of the mean loss over the dataset rows `indices`.
#[allow(clippy::too_many_arguments)]
pub fn gradient(
    arch: &CircuitArchitecture,
    params: &[f64],
    dataset: &Dataset,
    indices: &[usize],
    loss_kind: LossKind,
    readout: &ReadoutSpec,
    mode: GradientMode,
    fd_step: f64,
) -> Result<Vec<f64>> {
    let (inputs, labels) = objective_inputs(dataset, indices)?;
    Objective {
        arch,
        inputs: &inputs,
        labels: &labels,
        readout,
        loss_kind,
    }
    .loss_and_gradient(params, mode, fd_step)
    .map(|(_, g)| g)
}

/// Fraction of rows whose highest class score matches the label; ties go to
/// the lower class index.
pub fn evaluate(
    arch: &CircuitArchitecture,
    params: &[f64],
    dataset: &Dataset,
    indices: &[usize],
    readout: &ReadoutSpec,
) -> Result<f64> {
    if indices.is_empty() {
        return Err(Error::EmptyBatch);
    }
    let inputs = dataset.input_states(indices)?;
    let scores = crate::loss::batch_scores(arch, params, &inputs, readout)?;
    let correct = scores
        .iter()
        .zip(indices)
        .filter(|(s, &i)| argmax(s) == dataset.labels()[i])
        .count();
    Ok(correct as f64 / indices.len() as f64)
}

pub fn argmax(xs: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in xs.iter().enumerate().skip(1) {
        if x > xs[best] {
            best = i;
        }
    }
    best
}

/// Trains from `θ ~ N(0, I/p)` drawn from the config seed's `init` stream.
pub fn train(
    arch: &CircuitArchitecture,
    dataset: &Dataset,
    readout: &ReadoutSpec,
    config: &TrainConfig,
) -> Result<TrainResult> {
    let init = sample_init_params(arch, rng::substream(config.seed, "init"))?;
    train_from(arch, dataset, readout, config, init)
}

/// Trains from the given starting parameters.
pub fn train_from(
    arch: &CircuitArchitecture,
    dataset: &Dataset,
    readout: &ReadoutSpec,
    config: &TrainConfig,
    init: Vec<f64>,
) -> Result<TrainResult> {
    config.validate()?;
    if arch.param_count() == 0 {
        return Err(Error::NoParameters);
    }
    let train_idx = dataset.train_indices();
    let (inputs, labels) = objective_inputs(dataset, &train_idx)?;
    let full = Objective {
        arch,
        inputs: &inputs,
        labels: &labels,
        readout,
        loss_kind: config.loss_kind,
    };

    let mut params = init;
    let mut adam = Adam::new(params.len());
    let mut order: Vec<usize> = (0..inputs.len()).collect();
    let mut shuffler = rng::named(config.seed, "batches");
    let bs = config.batch_size.unwrap_or(inputs.len()).min(inputs.len());
    let mut cursor = inputs.len();
    let mut curve = Vec::with_capacity(config.epochs);

    for epoch in 0..config.epochs {
        let (l, g) = if bs == inputs.len() {
            full.loss_and_gradient(&params, config.gradient_mode, config.fd_step)?
        } else {
            if cursor + bs > order.len() {
                order.shuffle(&mut shuffler);
                cursor = 0;
            }
            let pick = &order[cursor..cursor + bs];
            cursor += bs;
            let bx: Vec<_> = pick.iter().map(|&i| inputs[i].clone()).collect();
            let by: Vec<_> = pick.iter().map(|&i| labels[i]).collect();
            Objective {
                inputs: &bx,
                labels: &by,
                ..full
            }
            .loss_and_gradient(&params, config.gradient_mode, config.fd_step)?
        };
        if l > DIVERGENCE_LIMIT {
            return Err(Error::Diverged { loss: l, epoch });
        }
        curve.push(l);
        adam.step(&mut params, &g, cosine_lr(config.learning_rate, epoch, config.epochs));
    }

    let final_train_loss = full.loss(&params)?;
    if !final_train_loss.is_finite() {
        return Err(Error::NonFiniteLoss(format!(
            "final training loss is {final_train_loss}"
        )));
    }
    let train_accuracy = evaluate(arch, &params, dataset, &train_idx, readout)?;
    let test = &dataset.splits().test;
    let (final_test_loss, test_accuracy) = if test.is_empty() {
        (None, None)
    } else {
        (
            Some(loss(arch, &params, dataset, test, config.loss_kind, readout)?),
            Some(evaluate(arch, &params, dataset, test, readout)?),
        )
    };
    Ok(TrainResult {
        final_params: params,
        loss_curve: curve,
        final_train_loss,
        final_test_loss,
        train_accuracy,
        test_accuracy,
    })
}
