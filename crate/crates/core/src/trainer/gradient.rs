use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::loss::LossKind;
use crate::qsim::{CircuitArchitecture, ParamSource, ReadoutSpec, StateVector};

/// How parameter derivatives are computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GradientMode {
    /// `±π/2` shifts for gates generated by a single Pauli term (including
    /// the three `U3` angles); central differences for the rest (`CU3`).
    ParameterShift,
    FiniteDifference,
    /// Reverse-mode pass over the gate list using analytic gate derivatives.
    /// Exact for every gate and linear in circuit length.
    Adjoint,
}

impl fmt::Display for GradientMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GradientMode::ParameterShift => "parameter_shift",
            GradientMode::FiniteDifference => "finite_difference",
            GradientMode::Adjoint => "adjoint",
        })
    }
}

impl FromStr for GradientMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "parameter_shift" | "shift" => Ok(GradientMode::ParameterShift),
            "finite_difference" | "fd" => Ok(GradientMode::FiniteDifference),
            "adjoint" => Ok(GradientMode::Adjoint),
            other => Err(Error::Config(format!("unknown gradient mode '{other}'"))),
        }
    }
}

/// Shared inputs of a loss/gradient evaluation.
#[derive(Debug, Clone, Copy)]
pub struct Objective<'a> {
    pub arch: &'a CircuitArchitecture,
    pub inputs: &'a [StateVector],
    pub labels: &'a [usize],
    pub readout: &'a ReadoutSpec,
    pub loss_kind: LossKind,
}

impl Objective<'_> {
    fn check(&self, params: &[f64]) -> Result<()> {
        if self.inputs.is_empty() {
            return Err(Error::EmptyBatch);
        }
        if self.inputs.len() != self.labels.len() {
            return Err(Error::Dimension {
                expected: self.inputs.len(),
                got: self.labels.len(),
            });
        }
        if params.len() != self.arch.param_count() {
            return Err(Error::ParamCount {
                expected: self.arch.param_count(),
                got: params.len(),
            });
        }
        self.readout.validate(self.arch.num_qubits())
    }

    /// Mean loss over the batch.
    pub fn loss(&self, params: &[f64]) -> Result<f64> {
        self.check(params)?;
        crate::loss::batch_loss(
            self.arch,
            params,
            self.inputs,
            self.labels,
            self.readout,
            self.loss_kind,
        )
    }

    /// Mean loss and its gradient.
    pub fn loss_and_gradient(
        &self,
        params: &[f64],
        mode: GradientMode,
        fd_step: f64,
    ) -> Result<(f64, Vec<f64>)> {
        self.check(params)?;
        if !(fd_step > 0.0) {
            return Err(Error::Config(format!("fd_step must be > 0, got {fd_step}")));
        }
        let per_sample: Vec<(f64, Vec<f64>)> = self
            .inputs
            .par_iter()
            .zip(self.labels.par_iter())
            .map(|(x, &y)| self.sample_gradient(params, x, y, mode, fd_step))
            .collect::<Result<_>>()?;
        // Fixed summation order regardless of thread schedule.
        let n = per_sample.len() as f64;
        let mut loss = 0.0;
        let mut grad = vec![0.0; params.len()];
        for (l, g) in &per_sample {
            loss += l;
            for (acc, v) in grad.iter_mut().zip(g) {
                *acc += v;
            }
        }
        grad.iter_mut().for_each(|g| *g /= n);
        let loss = loss / n;
        if !loss.is_finite() {
            return Err(Error::NonFiniteLoss(format!(
                "batch loss is {loss} at parameters {params:?}"
            )));
        }
        Ok((loss, grad))
    }

    fn sample_gradient(
        &self,
        params: &[f64],
        input: &StateVector,
        label: usize,
        mode: GradientMode,
        fd_step: f64,
    ) -> Result<(f64, Vec<f64>)> {
        if mode == GradientMode::Adjoint {
            return self.sample_gradient_adjoint(params, input, label);
        }
        let gates = self.arch.gates();
        // prefix[g] is the state before gate g.
        let mut prefix = Vec::with_capacity(gates.len() + 1);
        prefix.push(input.clone());
        for g in gates {
            let mut next = prefix.last().unwrap().clone();
            next.apply_gate(g, g.angles(params)?)?;
            prefix.push(next);
        }
        let scores = self.readout.scores(prefix.last().unwrap())?;
        let loss = self.loss_kind.sample_loss(&scores, label)?;
        let dl_ds = self.loss_kind.score_gradient(&scores, label)?;

        let mut grad = vec![0.0; params.len()];
        for (gi, gate) in gates.iter().enumerate() {
            let ParamSource::Trainable { offset } = gate.params else {
                continue;
            };
            let base = gate.angles(params)?;
            let exact = mode == GradientMode::ParameterShift && gate.kind.shift_rule_exact();
            let (shift, scale) = if exact {
                (FRAC_PI_2, 0.5)
            } else {
                (fd_step, 0.5 / fd_step)
            };
            for a in 0..base.len() {
                let mut shifted_scores = [Vec::new(), Vec::new()];
                for (slot, sign) in [1.0, -1.0].into_iter().enumerate() {
                    let mut angles = base.to_vec();
                    angles[a] += sign * shift;
                    let mut s = prefix[gi].clone();
                    s.apply_gate(gate, &angles)?;
                    self.arch.apply_suffix(params, gi + 1, &mut s)?;
                    shifted_scores[slot] = self.readout.scores(&s)?;
                }
                grad[offset + a] = dl_ds
                    .iter()
                    .enumerate()
                    .map(|(c, d)| d * scale * (shifted_scores[0][c] - shifted_scores[1][c]))
                    .sum();
            }
        }
        Ok((loss, grad))
    }

    fn sample_gradient_adjoint(
        &self,
        params: &[f64],
        input: &StateVector,
        label: usize,
    ) -> Result<(f64, Vec<f64>)> {
        let mut psi = self.arch.run(params, input)?;
        let scores = self.readout.scores(&psi)?;
        let loss = self.loss_kind.sample_loss(&scores, label)?;
        let dl_ds = self.loss_kind.score_gradient(&scores, label)?;

        // λ = O|ψ⟩ with O = Σ_c (∂ℓ/∂s_c) Σ_{q ∈ group c} Z_q, which is diagonal.
        let mut lambda = psi.clone();
        for (i, amp) in lambda.amps_mut().iter_mut().enumerate() {
            let mut o = 0.0;
            for (w, group) in dl_ds.iter().zip(self.readout.groups()) {
                for &q in group {
                    o += if i >> q & 1 == 1 { -w } else { *w };
                }
            }
            *amp *= o;
        }

        let mut grad = vec![0.0; params.len()];
        for gate in self.arch.gates().iter().rev() {
            let angles = gate.angles(params)?;
            let inv = gate.kind.matrix(angles)?.dagger();
            psi.apply_matrix(&inv, &gate.qubits)?;
            if let ParamSource::Trainable { offset } = gate.params {
                for a in 0..angles.len() {
                    let mut d = psi.clone();
                    d.apply_matrix(&gate.kind.derivative(angles, a)?, &gate.qubits)?;
                    grad[offset + a] = 2.0 * lambda.inner(&d)?.re;
                }
            }
            lambda.apply_matrix(&inv, &gate.qubits)?;
        }
        Ok((loss, grad))
    }
}
