//! Shared fixtures for the benchmarks.

use qnas_core::datagen::{synth_dataset, Dataset, SynthKind};
use qnas_core::mcts::{random_circuit, u3_cu3};
use qnas_core::ntk::sample_init_params;
use qnas_core::qsim::Topology;
use qnas_core::{rng, CircuitArchitecture};

/// Random U3/CU3 ring circuit with its initial parameters.
pub fn circuit(num_qubits: usize, gates: usize, seed: u64) -> (CircuitArchitecture, Vec<f64>) {
    let mut r = rng::named(seed, "bench");
    let arch = random_circuit(num_qubits, gates, &u3_cu3(), &Topology::Ring, &mut r)
        .expect("valid gate distribution");
    let params = sample_init_params(&arch, seed).expect("circuit has parameters");
    (arch, params)
}

pub fn four_blobs(n: usize) -> Dataset {
    synth_dataset(SynthKind::FourBlobs, n, 0.1, 0)
        .expect("enough samples")
        .with_random_split(0.7, 0.0, 0)
        .expect("valid split")
}
