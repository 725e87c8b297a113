//! Asymptotic tangent-kernel Gram matrices and the AMES surrogate score.
//!
//! For a Pauli observable `M` (so `M² = I`) and evolved states
//! `φ = U(θ)·F(x)|0⟩`, the kernel entry `tr(i[M,ρ_k] · i[M,ρ_l])` reduces to
//! `2(|⟨φ_k|φ_l⟩|² − |⟨φ_k|M|φ_l⟩|²)`. Multi-observable readouts sum the
//! per-observable matrices.

mod ames;
mod probe;

pub use ames::{sample_init_params, score_ames, AmesConfig, AmesScore};
pub use probe::{concentration_probe, rotation_chain, ProbeReport, ProbeRow};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::qsim::{CircuitArchitecture, PauliObservable, StateVector};

#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    pub entries: Matrix,
    /// Dataset rows the batch was drawn from, in matrix order.
    pub batch_ids: Vec<usize>,
}

impl GramMatrix {
    pub fn n(&self) -> usize {
        self.entries.n()
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        linalg::min_eigenvalue(&self.entries)
    }
}

pub fn kernel_entry(
    phi_k: &StateVector,
    phi_l: &StateVector,
    obs: &PauliObservable,
) -> Result<f64> {
    let m_phi_l = phi_l.apply_pauli(obs)?;
    entry_from_parts(phi_k, phi_l, &m_phi_l)
}

fn entry_from_parts(phi_k: &StateVector, phi_l: &StateVector, m_phi_l: &StateVector) -> Result<f64> {
    let overlap = phi_k.inner(phi_l)?.norm_sqr();
    let twisted = phi_k.inner(m_phi_l)?.norm_sqr();
    Ok(2.0 * (overlap - twisted))
}

/// Gram matrix of already-evolved states.
pub fn gram_of_states(states: &[StateVector], readouts: &[PauliObservable]) -> Result<GramMatrix> {
    if states.is_empty() {
        return Err(Error::EmptyBatch);
    }
    let dim = states[0].dim();
    if let Some(s) = states.iter().find(|s| s.dim() != dim) {
        return Err(Error::Dimension {
            expected: dim,
            got: s.dim(),
        });
    }
    // M|φ_l⟩ for every observable and state, reused across rows.
    let twisted: Vec<Vec<StateVector>> = readouts
        .iter()
        .map(|m| {
            states
                .par_iter()
                .map(|s| s.apply_pauli(m))
                .collect::<Result<_>>()
        })
        .collect::<Result<_>>()?;
    let n = states.len();
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|k| {
            (k..n)
                .map(|l| {
                    let mut acc = 0.0;
                    for tw in &twisted {
                        acc += entry_from_parts(&states[k], &states[l], &tw[l])?;
                    }
                    Ok(acc)
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;
    let mut entries = Matrix::zeros(n);
    for (k, row) in rows.iter().enumerate() {
        for (off, v) in row.iter().enumerate() {
            entries.set(k, k + off, *v);
            entries.set(k + off, k, *v);
        }
    }
    Ok(GramMatrix {
        entries,
        batch_ids: (0..n).collect(),
    })
}

/// Evolves each encoded input through the circuit once and builds the
/// summed Gram matrix over `readouts`.
pub fn build_gram(
    arch: &CircuitArchitecture,
    params: &[f64],
    batch: &[StateVector],
    readouts: &[PauliObservable],
) -> Result<GramMatrix> {
    if batch.is_empty() {
        return Err(Error::EmptyBatch);
    }
    let evolved: Vec<StateVector> = batch
        .par_iter()
        .map(|s| arch.run(params, s))
        .collect::<Result<_>>()?;
    gram_of_states(&evolved, readouts)
}

pub fn min_eigenvalue(gram: &GramMatrix) -> Result<f64> {
    gram.min_eigenvalue()
}
