//! Classification losses over readout scores.
//!
//! MSE regresses the raw class scores onto one-hot targets with the ½
//! prefactor, `L = 1/(2n) Σ_m Σ_c (s_c - y_c)²`. CE is the mean negative
//! log of the softmax probability of the true class.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qsim::{softmax, CircuitArchitecture, ReadoutSpec, StateVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LossKind {
    Mse,
    Ce,
}

impl fmt::Display for LossKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LossKind::Mse => "mse",
            LossKind::Ce => "ce",
        })
    }
}

impl FromStr for LossKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "mse" => Ok(LossKind::Mse),
            "ce" | "cross_entropy" => Ok(LossKind::Ce),
            other => Err(Error::Config(format!("unknown loss '{other}'"))),
        }
    }
}

fn check_label(label: usize, classes: usize) -> Result<()> {
    if label >= classes {
        return Err(Error::LabelOutOfRange { label, classes });
    }
    Ok(())
}

impl LossKind {
    /// Loss of one sample given its class scores.
    pub fn sample_loss(self, scores: &[f64], label: usize) -> Result<f64> {
        check_label(label, scores.len())?;
        Ok(match self {
            LossKind::Mse => {
                0.5 * scores
                    .iter()
                    .enumerate()
                    .map(|(c, s)| {
                        let t = if c == label { 1.0 } else { 0.0 };
                        (s - t) * (s - t)
                    })
                    .sum::<f64>()
            }
            LossKind::Ce => {
                // log-sum-exp for stability
                let m = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let lse = m + scores.iter().map(|s| (s - m).exp()).sum::<f64>().ln();
                lse - scores[label]
            }
        })
    }

    /// `∂ loss / ∂ score_c` for one sample.
    pub fn score_gradient(self, scores: &[f64], label: usize) -> Result<Vec<f64>> {
        check_label(label, scores.len())?;
        Ok(match self {
            LossKind::Mse => scores
                .iter()
                .enumerate()
                .map(|(c, s)| s - if c == label { 1.0 } else { 0.0 })
                .collect(),
            LossKind::Ce => softmax(scores)
                .into_iter()
                .enumerate()
                .map(|(c, p)| p - if c == label { 1.0 } else { 0.0 })
                .collect(),
        })
    }
}

/// Class scores of every input after running the circuit.
pub fn batch_scores(
    arch: &CircuitArchitecture,
    params: &[f64],
    inputs: &[StateVector],
    readout: &ReadoutSpec,
) -> Result<Vec<Vec<f64>>> {
    readout.validate(arch.num_qubits())?;
    inputs
        .par_iter()
        .map(|s| readout.scores(&arch.run(params, s)?))
        .collect()
}

/// Mean loss over a batch of encoded inputs.
pub fn batch_loss(
    arch: &CircuitArchitecture,
    params: &[f64],
    inputs: &[StateVector],
    labels: &[usize],
    readout: &ReadoutSpec,
    kind: LossKind,
) -> Result<f64> {
    if inputs.is_empty() {
        return Err(Error::EmptyBatch);
    }
    if inputs.len() != labels.len() {
        return Err(Error::Dimension {
            expected: inputs.len(),
            got: labels.len(),
        });
    }
    let scores = batch_scores(arch, params, inputs, readout)?;
    let mut total = 0.0;
    for (s, &y) in scores.iter().zip(labels) {
        total += kind.sample_loss(s, y)?;
    }
    Ok(total / inputs.len() as f64)
}
