//! AMES against trained loss over random circuits.

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use qnas_core::datagen::Dataset;
use qnas_core::mcts::random_circuit;
use qnas_core::ntk::{score_ames, AmesConfig};
use qnas_core::qsim::{GateKind, Topology};
use qnas_core::stats::pearson;
use qnas_core::trainer::{train, TrainConfig};
use qnas_core::{rng, Error};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct StudyConfig {
    pub circuits: usize,
    pub min_gates: usize,
    pub max_gates: usize,
    pub gate_probs: Vec<(GateKind, f64)>,
    pub topology: Topology,
    pub ames: AmesConfig,
    pub train: TrainConfig,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyRow {
    pub index: usize,
    pub gates: usize,
    pub param_count: usize,
    pub ames: f64,
    pub lambda_min: f64,
    pub initial_loss: f64,
    /// NaN for circuits without trainable parameters.
    pub train_loss: f64,
    pub test_loss: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyReport {
    pub rows: Vec<StudyRow>,
    /// `None` when undefined (constant column, fewer than two usable rows).
    pub pearson_train: Option<f64>,
    pub pearson_test: Option<f64>,
    /// Rows entering the coefficients: finite AMES and a trained loss.
    pub usable: usize,
}

/// Samples `circuits` architectures with a uniform gate count in
/// `[min_gates, max_gates]`, scores each with one shared AMES seed, trains
/// each, and correlates.
pub fn correlation_study(dataset: &Dataset, cfg: &StudyConfig) -> Result<StudyReport> {
    if cfg.min_gates > cfg.max_gates {
        return Err(CliError::Config(format!(
            "min_gates {} exceeds max_gates {}",
            cfg.min_gates, cfg.max_gates
        )));
    }
    if cfg.circuits == 0 {
        return Err(CliError::Config("circuits must be >= 1".into()));
    }
    let mut sampler = rng::named(cfg.seed, "circuits");
    let mut ames = cfg.ames.clone();
    ames.seed = rng::substream(cfg.seed, "ames");
    let train_seed = rng::substream(cfg.seed, "train");
    let readout = ames.readout.clone();

    let mut rows = Vec::with_capacity(cfg.circuits);
    for index in 0..cfg.circuits {
        let gates = sampler.random_range(cfg.min_gates..=cfg.max_gates);
        let arch = random_circuit(
            dataset.num_qubits(),
            gates,
            &cfg.gate_probs,
            &cfg.topology,
            &mut sampler,
        )?;
        let score = score_ames(&arch, dataset, &ames)?;
        let tc = TrainConfig {
            seed: rng::child(train_seed, index as u64),
            ..cfg.train.clone()
        };
        let (train_loss, test_loss) = match train(&arch, dataset, &readout, &tc) {
            Ok(r) => (r.final_train_loss, r.final_test_loss),
            Err(Error::NoParameters) => (f64::NAN, None),
            Err(e) => return Err(e.into()),
        };
        rows.push(StudyRow {
            index,
            gates: arch.gate_count(),
            param_count: arch.param_count(),
            ames: score.value,
            lambda_min: score.lambda_min,
            initial_loss: score.initial_loss,
            train_loss,
            test_loss,
        });
    }

    let usable: Vec<&StudyRow> = rows
        .iter()
        .filter(|r| r.ames.is_finite() && r.train_loss.is_finite())
        .collect();
    let xs: Vec<f64> = usable.iter().map(|r| r.ames).collect();
    let train_ys: Vec<f64> = usable.iter().map(|r| r.train_loss).collect();
    let pearson_test = if usable.iter().all(|r| r.test_loss.is_some()) {
        let ys: Vec<f64> = usable.iter().filter_map(|r| r.test_loss).collect();
        pearson(&xs, &ys)
    } else {
        None
    };
    Ok(StudyReport {
        pearson_train: pearson(&xs, &train_ys),
        pearson_test,
        usable: usable.len(),
        rows,
    })
}
