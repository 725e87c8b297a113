//! Dense statevector simulation of parameterized circuits.
//!
//! The QNN forward pass is `encode → run_circuit → readout`: an angle
//! encoding prepares `F(x)|0…0⟩`, the trainable circuit applies `U(θ)`, and
//! class scores are sums of `⟨Z_q⟩` over per-class qubit groups, turned into
//! probabilities by a softmax.

mod circuit;
mod encoding;
mod gate;
mod pauli;
mod state;
mod topology;

pub use circuit::CircuitArchitecture;
pub use encoding::{softmax, Axis, EncodingScheme, ReadoutSpec};
pub use gate::{u3_matrix, Gate, GateKind, GateMatrix, Mat2, Mat4, ParamSource};
pub use pauli::{Pauli, PauliObservable};
pub use state::StateVector;
pub use topology::Topology;

use crate::error::Result;

/// Returns `gate` applied to `state` with the given angles.
pub fn apply_gate(state: &StateVector, gate: &Gate, angles: &[f64]) -> Result<StateVector> {
    let mut out = state.clone();
    out.apply_gate(gate, angles)?;
    Ok(out)
}

pub fn encode(input: &[f64], scheme: &EncodingScheme, num_qubits: usize) -> Result<StateVector> {
    scheme.encode(input, num_qubits)
}

pub fn run_circuit(
    arch: &CircuitArchitecture,
    params: &[f64],
    state: &StateVector,
) -> Result<StateVector> {
    arch.run(params, state)
}

pub fn expectation(state: &StateVector, obs: &PauliObservable) -> Result<f64> {
    state.expectation(obs)
}

/// Class probabilities for an already-encoded input state.
pub fn predict_state(
    arch: &CircuitArchitecture,
    params: &[f64],
    input: &StateVector,
    readout: &ReadoutSpec,
) -> Result<Vec<f64>> {
    let out = arch.run(params, input)?;
    Ok(softmax(&readout.scores(&out)?))
}

/// Class probabilities for a classical input under an angle encoding.
pub fn predict(
    arch: &CircuitArchitecture,
    params: &[f64],
    input: &[f64],
    scheme: &EncodingScheme,
    readout: &ReadoutSpec,
) -> Result<Vec<f64>> {
    readout.validate(arch.num_qubits())?;
    let state = scheme.encode(input, arch.num_qubits())?;
    predict_state(arch, params, &state, readout)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_circuit_uniform_predictions() {
        let arch = CircuitArchitecture::new(2);
        let scheme = EncodingScheme::uniform(Axis::Y, 2);
        let p = predict(&arch, &[], &[0.0, 0.0], &scheme, &ReadoutSpec::per_qubit(2)).unwrap();
        assert_eq!(p, vec![0.5, 0.5]);

        let arch = CircuitArchitecture::new(4);
        let scheme = EncodingScheme::uniform(Axis::Y, 4);
        let p = predict(&arch, &[], &[0.0; 4], &scheme, &ReadoutSpec::per_qubit(4)).unwrap();
        for v in p {
            assert!((v - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn readout_on_missing_qubit_fails() {
        let arch = CircuitArchitecture::new(2);
        let scheme = EncodingScheme::uniform(Axis::Y, 2);
        let r = ReadoutSpec::parse("0/2").unwrap();
        assert!(predict(&arch, &[], &[0.0, 0.0], &scheme, &r).is_err());
    }

    #[test]
    fn rz_on_zero_keeps_probabilities() {
        let mut arch = CircuitArchitecture::new(1);
        arch.push(GateKind::RZ, &[0]).unwrap();
        let out = run_circuit(&arch, &[1.3], &StateVector::zero(1)).unwrap();
        assert!((out.probability(0) - 1.0).abs() < 1e-15);
    }
}
