mod common;

use common::dense;
use proptest::prelude::*;
use qnas_core::qsim::{CircuitArchitecture, GateKind, PauliObservable, StateVector};
use qnas_core::rng;

fn amps_close(a: &[num_complex::Complex64], b: &[num_complex::Complex64], tol: f64) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).norm() <= tol)
}

#[test]
fn random_circuits_match_dense_unitaries() {
    let mut r = rng::rng_from(11);
    for trial in 0..60 {
        let d = 1 + trial % 3;
        let arch = common::random_arch(d, 4 + trial % 12, &mut r);
        let params = common::random_params(arch.param_count(), &mut r);
        let input = common::random_state(d, &mut r);
        let out = arch.run(&params, &input).unwrap();
        let u = dense::circuit_unitary(&common::triples(&arch, &params), d);
        let want = dense::apply(&u, input.amplitudes());
        assert!(amps_close(out.amplitudes(), &want, 1e-12), "trial {trial}");
    }
}

#[test]
fn every_gate_kind_matches_its_formula_on_every_placement() {
    let angles = [0.37, -1.1, 2.4];
    for kind in GateKind::ALL {
        let a = &angles[..kind.param_count()];
        let placements: Vec<Vec<usize>> = if kind.arity() == 1 {
            (0..3).map(|q| vec![q]).collect()
        } else {
            (0..3)
                .flat_map(|x| (0..3).filter(move |&y| y != x).map(move |y| vec![x, y]))
                .collect()
        };
        for qs in placements {
            let mut arch = CircuitArchitecture::new(3);
            arch.push_fixed(kind, &qs, a).unwrap();
            let mut r = rng::rng_from(qs.len() as u64);
            let input = common::random_state(3, &mut r);
            let out = arch.run(&[], &input).unwrap();
            let u = dense::embed(&dense::local(kind.name(), a), &qs, 3);
            assert!(
                amps_close(out.amplitudes(), &dense::apply(&u, input.amplitudes()), 1e-13),
                "{kind} on {qs:?}"
            );
        }
    }
}

#[test]
fn pauli_expectations_match_dense() {
    let mut r = rng::rng_from(5);
    for s in ["Z", "X", "Y", "ZI", "IZ", "XY", "YYZ", "XIZ", "IYI"] {
        let d = s.len();
        let obs: PauliObservable = s.parse().unwrap();
        let st = common::random_state(d, &mut r);
        let want = dense::expectation(&dense::pauli_string(s, d), st.amplitudes());
        assert!((st.expectation(&obs).unwrap() - want).abs() < 1e-12, "{s}");
    }
}

#[test]
fn encoding_equals_fixed_rotation_circuit() {
    use qnas_core::qsim::EncodingScheme;
    let scheme = EncodingScheme::parse_layers("4RY,4RZ,4RX,4RY").unwrap();
    let x: Vec<f64> = (0..16).map(|i| 0.2 * i as f64).collect();
    let s = scheme.encode(&x, 4).unwrap();
    let gates: Vec<_> = scheme
        .entries()
        .iter()
        .zip(&x)
        .map(|((axis, q), v)| (axis.gate().name().to_string(), vec![*q], vec![*v]))
        .collect();
    let u = dense::circuit_unitary(&gates, 4);
    let want = dense::apply(&u, StateVector::zero(4).amplitudes());
    assert!(amps_close(s.amplitudes(), &want, 1e-13));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn circuits_preserve_norm(seed in any::<u64>(), d in 1usize..5, gates in 0usize..25) {
        let mut r = rng::rng_from(seed);
        let arch = common::random_arch(d, gates, &mut r);
        let params = common::random_params(arch.param_count(), &mut r);
        let input = common::random_state(d, &mut r);
        let out = arch.run(&params, &input).unwrap();
        prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn text_form_round_trips(seed in any::<u64>(), d in 1usize..5, gates in 0usize..20) {
        let mut r = rng::rng_from(seed);
        let arch = common::random_arch(d, gates, &mut r);
        let back = CircuitArchitecture::from_text(&arch.to_text()).unwrap();
        prop_assert_eq!(back, arch);
    }
}
