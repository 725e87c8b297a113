#![allow(dead_code)]

pub mod dense;

use num_complex::Complex64;
use qnas_core::qsim::{CircuitArchitecture, GateKind, StateVector};
use rand::Rng;

/// `(kind, qubits, angles)` of every gate, for the dense oracle.
pub fn triples(arch: &CircuitArchitecture, params: &[f64]) -> Vec<(String, Vec<usize>, Vec<f64>)> {
    arch.gates()
        .iter()
        .map(|g| (g.kind.name().to_string(), g.qubits.clone(), g.angles(params).unwrap().to_vec()))
        .collect()
}

/// Uniformly random gates over the whole alphabet on `d` qubits.
pub fn random_arch(d: usize, gates: usize, rng: &mut impl Rng) -> CircuitArchitecture {
    let mut arch = CircuitArchitecture::new(d);
    while arch.gate_count() < gates {
        let kind = GateKind::ALL[rng.random_range(0..GateKind::ALL.len())];
        if kind.arity() == 2 {
            if d < 2 {
                continue;
            }
            let a = rng.random_range(0..d);
            let mut b = rng.random_range(0..d - 1);
            if b >= a {
                b += 1;
            }
            arch.push(kind, &[a, b]).unwrap();
        } else {
            arch.push(kind, &[rng.random_range(0..d)]).unwrap();
        }
    }
    arch
}

pub fn random_params(n: usize, rng: &mut impl Rng) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-3.2..3.2)).collect()
}

pub fn random_state(d: usize, rng: &mut impl Rng) -> StateVector {
    let amps: Vec<Complex64> = (0..1 << d)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    StateVector::from_amplitudes(amps.into_iter().map(|a| a / norm).collect()).unwrap()
}
