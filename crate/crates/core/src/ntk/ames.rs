use rand::seq::index;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::gram_of_states;
use crate::datagen::Dataset;
use crate::error::{Error, Result};
use crate::loss::LossKind;
use crate::qsim::{CircuitArchitecture, PauliObservable, ReadoutSpec, StateVector};
use crate::rng;

/// Scoring knobs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmesConfig {
    pub batch_size: usize,
    pub seed: u64,
    pub loss_kind: LossKind,
    pub readout: ReadoutSpec,
    /// Divide by the parameter count. Off only for ablations.
    pub use_param_factor: bool,
}

impl AmesConfig {
    pub fn new(readout: ReadoutSpec) -> Self {
        AmesConfig {
            batch_size: 100,
            seed: 0,
            loss_kind: LossKind::Mse,
            readout,
            use_param_factor: true,
        }
    }

    /// Z observables on every readout qubit.
    pub fn observables(&self) -> Vec<PauliObservable> {
        self.readout
            .qubits()
            .into_iter()
            .map(PauliObservable::z)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmesScore {
    pub value: f64,
    pub lambda_min: f64,
    pub initial_loss: f64,
    pub param_count: usize,
    pub seed: u64,
    pub param_weighted: bool,
}

impl AmesScore {
    /// Score of a circuit without trainable angles: worse than anything.
    pub fn unscoreable(seed: u64, param_weighted: bool) -> Self {
        AmesScore {
            value: f64::INFINITY,
            lambda_min: f64::NAN,
            initial_loss: f64::NAN,
            param_count: 0,
            seed,
            param_weighted,
        }
    }

    /// `(1/p)·L·exp(−λ/2)`, or `L·exp(−λ/2)` without the parameter factor.
    pub fn formula(initial_loss: f64, lambda_min: f64, param_count: usize, param_weighted: bool) -> f64 {
        let decay = (-lambda_min / 2.0).exp();
        if param_weighted {
            (1.0 / param_count as f64) * initial_loss * decay
        } else {
            initial_loss * decay
        }
    }

    /// Re-derives `value` from the other fields.
    pub fn recompute(&self) -> f64 {
        if self.param_count == 0 {
            return f64::INFINITY;
        }
        Self::formula(self.initial_loss, self.lambda_min, self.param_count, self.param_weighted)
    }
}

/// `θ ~ N(0, I/p)` drawn from `seed`.
pub fn sample_init_params(arch: &CircuitArchitecture, seed: u64) -> Result<Vec<f64>> {
    let p = arch.param_count();
    if p == 0 {
        return Err(Error::NoParameters);
    }
    let normal = Normal::new(0.0, (1.0 / p as f64).sqrt()).expect("positive std");
    let mut r = rng::rng_from(seed);
    Ok((0..p).map(|_| normal.sample(&mut r)).collect())
}

/// Scores `arch` on a seeded subsample of the training split. The same `θ`
/// draw feeds both the Gram matrix and the initial loss.
pub fn score_ames(arch: &CircuitArchitecture, dataset: &Dataset, config: &AmesConfig) -> Result<AmesScore> {
    if dataset.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if arch.num_qubits() != dataset.num_qubits() {
        return Err(Error::Dimension {
            expected: dataset.num_qubits(),
            got: arch.num_qubits(),
        });
    }
    config.readout.validate(arch.num_qubits())?;
    if config.readout.num_classes() != dataset.num_classes() {
        return Err(Error::Config(format!(
            "readout has {} classes, dataset has {}",
            config.readout.num_classes(),
            dataset.num_classes()
        )));
    }
    if arch.param_count() == 0 {
        return Ok(AmesScore::unscoreable(config.seed, config.use_param_factor));
    }
    let params = sample_init_params(arch, rng::substream(config.seed, "init"))?;

    let pool = dataset.train_indices();
    let take = config.batch_size.min(pool.len());
    if take == 0 {
        return Err(Error::EmptyBatch);
    }
    let mut picked: Vec<usize> = index::sample(&mut rng::named(config.seed, "batch"), pool.len(), take)
        .into_iter()
        .map(|i| pool[i])
        .collect();
    picked.sort_unstable();

    let inputs = dataset.input_states(&picked)?;
    let evolved: Vec<StateVector> = inputs
        .par_iter()
        .map(|s| arch.run(&params, s))
        .collect::<Result<_>>()?;
    let mut gram = gram_of_states(&evolved, &config.observables())?;
    gram.batch_ids = picked.clone();
    let lambda_min = gram.min_eigenvalue()?;

    let mut total = 0.0;
    for (phi, &i) in evolved.iter().zip(&picked) {
        let scores = config.readout.scores(phi)?;
        total += config.loss_kind.sample_loss(&scores, dataset.labels()[i])?;
    }
    let initial_loss = total / picked.len() as f64;

    Ok(AmesScore {
        value: AmesScore::formula(initial_loss, lambda_min, arch.param_count(), config.use_param_factor),
        lambda_min,
        initial_loss,
        param_count: arch.param_count(),
        seed: config.seed,
        param_weighted: config.use_param_factor,
    })
}
