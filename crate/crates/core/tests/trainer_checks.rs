mod common;

use qnas_core::datagen::{synth_dataset, Dataset, InputEncoding, SynthKind};
use qnas_core::loss::LossKind;
use qnas_core::mcts::{random_circuit, u3_cu3};
use qnas_core::qsim::{Axis, CircuitArchitecture, EncodingScheme, GateKind, ReadoutSpec, Topology};
use qnas_core::rng;
use qnas_core::trainer::{evaluate, gradient, train, GradientMode, Objective, TrainConfig};
use rand::Rng;

fn central_difference(obj: &Objective, params: &[f64], h: f64) -> Vec<f64> {
    (0..params.len())
        .map(|i| {
            let mut p = params.to_vec();
            let mut m = params.to_vec();
            p[i] += h;
            m[i] -= h;
            (obj.loss(&p).unwrap() - obj.loss(&m).unwrap()) / (2.0 * h)
        })
        .collect()
}

#[test]
fn parameter_shift_agrees_with_central_differences() {
    let mut r = rng::rng_from(21);
    let mut checked = 0;
    let mut worst: f64 = 0.0;
    while checked < 20 {
        let d = r.random_range(2..=3);
        let arch = common::random_arch(d, r.random_range(2..7), &mut r);
        if arch.param_count() == 0 || arch.param_count() > 12 {
            continue;
        }
        let params = common::random_params(arch.param_count(), &mut r);
        let inputs: Vec<_> = (0..4).map(|_| common::random_state(d, &mut r)).collect();
        let labels: Vec<usize> = (0..4).map(|_| r.random_range(0..2)).collect();
        let readout = ReadoutSpec::per_qubit(2);
        for loss_kind in [LossKind::Mse, LossKind::Ce] {
            let obj = Objective {
                arch: &arch,
                inputs: &inputs,
                labels: &labels,
                readout: &readout,
                loss_kind,
            };
            let (_, shift) = obj
                .loss_and_gradient(&params, GradientMode::ParameterShift, 1e-4)
                .unwrap();
            let fd = central_difference(&obj, &params, 1e-4);
            for (a, b) in shift.iter().zip(&fd) {
                worst = worst.max((a - b).abs());
            }
        }
        checked += 1;
    }
    assert!(worst <= 1e-5, "max deviation {worst}");
}

#[test]
fn unmeasured_isolated_qubit_has_zero_gradient() {
    let ds = Dataset::new(
        vec![vec![0.3, 1.2, 0.5], vec![2.0, 0.1, 1.0]],
        vec![0, 1],
        2,
        3,
        InputEncoding::Angle(EncodingScheme::uniform(Axis::Y, 3)),
    )
    .unwrap();
    let mut arch = CircuitArchitecture::new(3);
    arch.push(GateKind::U3, &[0]).unwrap();
    arch.push(GateKind::RX, &[2]).unwrap();
    arch.push(GateKind::CU3, &[0, 1]).unwrap();
    let params = [0.4, 0.2, -0.1, 0.9, 1.1, 0.3, 0.7];
    for mode in [GradientMode::ParameterShift, GradientMode::FiniteDifference, GradientMode::Adjoint] {
        let g = gradient(&arch, &params, &ds, &[0, 1], LossKind::Mse, &ReadoutSpec::per_qubit(2), mode, 1e-4).unwrap();
        assert!(g[3].abs() < 1e-8, "{mode}: {}", g[3]);
    }
}

#[test]
fn cnot_only_circuit_has_empty_gradient() {
    let ds = synth_dataset(SynthKind::XorRings, 20, 0.0, 0).unwrap();
    let mut arch = CircuitArchitecture::new(2);
    arch.push(GateKind::CNOT, &[0, 1]).unwrap();
    let g = gradient(&arch, &[], &ds, &[0, 1, 2], LossKind::Mse, &ReadoutSpec::per_qubit(2), GradientMode::ParameterShift, 1e-4)
        .unwrap();
    assert!(g.is_empty());
}

#[test]
fn small_steps_decrease_the_loss() {
    let ds = synth_dataset(SynthKind::TwoBlobs, 40, 0.1, 3).unwrap();
    let mut r = rng::rng_from(3);
    let arch = random_circuit(4, 12, &u3_cu3(), &Topology::Ring, &mut r).unwrap();
    let cfg = TrainConfig {
        learning_rate: 1e-3,
        epochs: 10,
        ..TrainConfig::default()
    };
    let res = train(&arch, &ds, &SynthKind::TwoBlobs.default_readout(), &cfg).unwrap();
    for w in res.loss_curve.windows(2) {
        assert!(w[1] <= w[0], "{:?}", res.loss_curve);
    }
}

#[test]
fn separable_two_feature_task_is_learned() {
    // First two features of the blob task: still separable, now on 2 qubits.
    let blobs = synth_dataset(SynthKind::TwoBlobs, 100, 0.0, 4).unwrap();
    let ds = Dataset::new(
        blobs.features().iter().map(|f| f[..2].to_vec()).collect(),
        blobs.labels().to_vec(),
        2,
        2,
        InputEncoding::Angle(EncodingScheme::uniform(Axis::Y, 2)),
    )
    .unwrap();
    let mut r = rng::rng_from(4);
    let arch = random_circuit(2, 30, &u3_cu3(), &Topology::Ring, &mut r).unwrap();
    let res = train(&arch, &ds, &ReadoutSpec::per_qubit(2), &TrainConfig::default()).unwrap();
    assert_eq!(res.loss_curve.len(), 200);
    assert!(res.train_accuracy >= 0.95, "accuracy {}", res.train_accuracy);
}

#[test]
fn training_is_reproducible() {
    let ds = synth_dataset(SynthKind::XorRings, 40, 0.05, 5).unwrap();
    let mut r = rng::rng_from(5);
    let arch = random_circuit(2, 10, &u3_cu3(), &Topology::Ring, &mut r).unwrap();
    let cfg = TrainConfig {
        epochs: 15,
        batch_size: Some(8),
        seed: 2,
        ..TrainConfig::default()
    };
    let a = train(&arch, &ds, &ReadoutSpec::per_qubit(2), &cfg).unwrap();
    let b = train(&arch, &ds, &ReadoutSpec::per_qubit(2), &cfg).unwrap();
    assert_eq!(a, b);
}

#[test]
fn evaluate_matches_manual_count_and_tie_rule() {
    let ds = synth_dataset(SynthKind::FourBlobs, 40, 0.2, 6).unwrap();
    let readout = SynthKind::FourBlobs.default_readout();
    let mut r = rng::rng_from(6);
    let arch = common::random_arch(4, 10, &mut r);
    let params = common::random_params(arch.param_count(), &mut r);
    let idx: Vec<usize> = (0..40).collect();
    let mut correct = 0;
    for &i in &idx {
        let out = arch.run(&params, &ds.input_state(i).unwrap()).unwrap();
        let z: Vec<f64> = (0..4).map(|q| out.z_expectation(q).unwrap()).collect();
        let mut best = 0;
        for c in 1..4 {
            if z[c] > z[best] {
                best = c;
            }
        }
        correct += (best == ds.labels()[i]) as usize;
    }
    let acc = evaluate(&arch, &params, &ds, &idx, &readout).unwrap();
    assert_eq!(acc, correct as f64 / 40.0);

    // Identical inputs and no gates: every score ties, so class 0 is predicted.
    let flat = Dataset::new(
        vec![vec![1.0, 0.0, 0.0, 0.0]; 10],
        vec![0, 1, 1, 0, 1, 1, 1, 0, 1, 1],
        2,
        2,
        InputEncoding::Amplitude,
    )
    .unwrap();
    let acc = evaluate(&CircuitArchitecture::new(2), &[], &flat, &(0..10).collect::<Vec<_>>(), &ReadoutSpec::per_qubit(2)).unwrap();
    assert_eq!(acc, 0.3);
}
