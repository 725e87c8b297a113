use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::build_gram;
use super::sample_init_params;
use crate::error::Result;
use crate::qsim::{CircuitArchitecture, GateKind, PauliObservable, StateVector};
use crate::{rng, stats};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeRow {
    pub param_count: usize,
    /// Mean over upper-triangle entries of the across-trial variance.
    pub mean_entry_variance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub rows: Vec<ProbeRow>,
    pub trials: usize,
    /// Fewer than two trials: every variance is reported as 0.
    pub degenerate: bool,
}

/// `p` single-qubit rotations, each of a uniformly drawn axis on a uniformly
/// drawn qubit.
pub fn rotation_chain(num_qubits: usize, p: usize, seed: u64) -> CircuitArchitecture {
    const KINDS: [GateKind; 3] = [GateKind::RX, GateKind::RY, GateKind::RZ];
    let mut r = rng::rng_from(seed);
    let mut arch = CircuitArchitecture::new(num_qubits);
    for _ in 0..p {
        let kind = KINDS[r.random_range(0..3)];
        let q = r.random_range(0..num_qubits);
        arch.push(kind, &[q]).expect("qubit in range");
    }
    arch
}

/// Variance of each Gram entry across `trials` independent `θ ~ N(0, I/p)`
/// draws, averaged over entries, for every architecture in `family`.
pub fn concentration_probe(
    family: &[CircuitArchitecture],
    batch: &[StateVector],
    readouts: &[PauliObservable],
    trials: usize,
    seed: u64,
) -> Result<ProbeReport> {
    let mut rows = Vec::with_capacity(family.len());
    for (a, arch) in family.iter().enumerate() {
        let arch_seed = rng::child(seed, a as u64);
        let mut samples: Vec<Vec<f64>> = Vec::with_capacity(trials);
        for t in 0..trials {
            let theta = sample_init_params(arch, rng::child(arch_seed, t as u64))?;
            let g = build_gram(arch, &theta, batch, readouts)?;
            let n = g.n();
            let mut upper = Vec::with_capacity(n * (n + 1) / 2);
            for i in 0..n {
                for j in i..n {
                    upper.push(g.entries.get(i, j));
                }
            }
            samples.push(upper);
        }
        let entries = samples.first().map_or(0, Vec::len);
        let mean_entry_variance = if trials < 2 || entries == 0 {
            0.0
        } else {
            let per: Vec<f64> = (0..entries)
                .map(|e| stats::variance(&samples.iter().map(|s| s[e]).collect::<Vec<_>>()))
                .collect();
            stats::mean(&per)
        };
        rows.push(ProbeRow {
            param_count: arch.param_count(),
            mean_entry_variance,
        });
    }
    Ok(ProbeReport {
        rows,
        trials,
        degenerate: trials < 2,
    })
}
