mod common;

use common::dense;
use qnas_core::datagen::{
    avg_pool, build_cluster_hamiltonian, ground_state, load_manifest, parse_csv, save_with_manifest,
    synth_dataset, to_csv, ClusterHamiltonianSpec, CsvSchema, SynthKind,
};
use qnas_core::rng;
use rand::Rng;

#[test]
fn csv_round_trip_is_bit_identical() {
    for kind in [SynthKind::TwoBlobs, SynthKind::XorRings, SynthKind::FourBlobs] {
        let ds = synth_dataset(kind, 60, 0.2, 4).unwrap();
        let text = to_csv(&ds);
        let schema = CsvSchema {
            num_classes: Some(ds.num_classes()),
            num_qubits: ds.num_qubits(),
            encoding: ds.encoding().clone(),
        };
        let back = parse_csv(&text, &schema).unwrap();
        for (a, b) in ds.features().iter().zip(back.features()) {
            let bits = |r: &[f64]| r.iter().map(|v| v.to_bits()).collect::<Vec<_>>();
            assert_eq!(bits(a), bits(b));
        }
        assert_eq!(ds.labels(), back.labels());
        assert_eq!(to_csv(&back), text);
    }
}

#[test]
fn manifest_keeps_splits() {
    let ds = synth_dataset(SynthKind::TwoBlobs, 40, 0.1, 2)
        .unwrap()
        .with_random_split(0.5, 0.25, 9)
        .unwrap();
    let dir = tempfile::tempdir().unwrap();
    let (_, manifest) = save_with_manifest(&ds, dir.path(), "blobs").unwrap();
    assert_eq!(load_manifest(&manifest).unwrap(), ds);
}

fn naive_pool(img: &[Vec<f64>], oh: usize, ow: usize) -> Vec<f64> {
    let (h, w) = (img.len(), img[0].len());
    let mut out = Vec::new();
    for bi in 0..oh {
        for bj in 0..ow {
            let r0 = bi * (h / oh);
            let r1 = if bi == oh - 1 { h } else { r0 + h / oh };
            let c0 = bj * (w / ow);
            let c1 = if bj == ow - 1 { w } else { c0 + w / ow };
            let mut s = 0.0;
            let mut n = 0.0;
            for r in r0..r1 {
                for c in c0..c1 {
                    s += img[r][c];
                    n += 1.0;
                }
            }
            out.push(s / n);
        }
    }
    out
}

#[test]
fn pooling_matches_naive_and_is_linear() {
    let mut r = rng::rng_from(5);
    let mut img = || -> Vec<Vec<f64>> {
        (0..28).map(|_| (0..28).map(|_| r.random_range(0.0..1.0)).collect()).collect()
    };
    let (x, y) = (img(), img());
    for (oh, ow) in [(7, 7), (4, 4), (5, 3), (28, 28), (1, 1)] {
        let got = avg_pool(&x, oh, ow).unwrap();
        for (a, b) in got.iter().zip(naive_pool(&x, oh, ow)) {
            assert!((a - b).abs() < 1e-12);
        }
        let mix: Vec<Vec<f64>> = x
            .iter()
            .zip(&y)
            .map(|(a, b)| a.iter().zip(b).map(|(u, v)| 2.5 * u - v).collect())
            .collect();
        let lhs = avg_pool(&mix, oh, ow).unwrap();
        let px = avg_pool(&x, oh, ow).unwrap();
        let py = avg_pool(&y, oh, ow).unwrap();
        for i in 0..lhs.len() {
            assert!((lhs[i] - (2.5 * px[i] - py[i])).abs() < 1e-12);
        }
    }
}

#[test]
fn two_blobs_without_noise_is_linearly_separable() {
    let ds = synth_dataset(SynthKind::TwoBlobs, 200, 0.0, 1).unwrap();
    let mut w = [0.0; 5];
    let mut converged = false;
    for _ in 0..1000 {
        let mut mistakes = 0;
        for (x, &y) in ds.features().iter().zip(ds.labels()) {
            let t = if y == 1 { 1.0 } else { -1.0 };
            let a = w[4] + (0..4).map(|k| w[k] * x[k]).sum::<f64>();
            if t * a <= 0.0 {
                mistakes += 1;
                for k in 0..4 {
                    w[k] += t * x[k];
                }
                w[4] += t;
            }
        }
        if mistakes == 0 {
            converged = true;
            break;
        }
    }
    assert!(converged);
}

fn dense_cluster(n: usize, j1: f64, j2: f64) -> dense::Dense {
    let mut h = dense::zeros(1 << n);
    let mut add = |ops: &[(char, usize)], coef: f64| {
        let mut s = vec!['I'; n];
        for &(p, q) in ops {
            s[q] = p;
        }
        let m = dense::pauli_string(&s.iter().collect::<String>(), n);
        for i in 0..h.len() {
            for j in 0..h.len() {
                h[i][j] += m[i][j] * coef;
            }
        }
    };
    for j in 0..n {
        let (prev, next) = ((j + n - 1) % n, (j + 1) % n);
        add(&[('Z', j)], 1.0);
        add(&[('X', j), ('X', next)], -j1);
        add(&[('X', prev), ('Z', j), ('X', next)], -j2);
    }
    h
}

#[test]
fn hamiltonian_matches_kronecker_construction() {
    for n in [3, 4, 5] {
        for (j1, j2) in [(0.0, 0.0), (0.7, -0.4), (-1.2, 1.5)] {
            let h = build_cluster_hamiltonian(&ClusterHamiltonianSpec { num_sites: n, j1, j2 }).unwrap();
            let d = dense_cluster(n, j1, j2);
            for i in 0..1 << n {
                for j in 0..1 << n {
                    assert!((h.get(i, j) - d[i][j].re).abs() < 1e-12);
                    assert_eq!(d[i][j].im, 0.0);
                }
            }
        }
    }
}

#[test]
fn two_site_energy_closed_form() {
    for (j1, j2) in [(0.0, 0.0), (0.5, 0.3), (-1.0, 2.0), (1.3, -0.7)] {
        let g = ground_state(&ClusterHamiltonianSpec { num_sites: 2, j1, j2 }).unwrap();
        let a: f64 = 1.0 - j2;
        let want = (-2.0 * (a * a + j1 * j1).sqrt()).min(-2.0 * j1.abs());
        assert!((g.energy - want).abs() < 1e-12, "{j1} {j2}");
    }
}

/// Lowest eigenvalue by power iteration on `c·I − H`.
fn power_energy(h: &qnas_core::linalg::Matrix) -> f64 {
    let c = h.norm_inf();
    let n = h.n();
    let mut v: Vec<f64> = (0..n).map(|i| 1.0 + (i as f64 * 0.37).sin()).collect();
    for _ in 0..5000 {
        let hv = h.mul_vec(&v);
        let mut w: Vec<f64> = v.iter().zip(&hv).map(|(a, b)| c * a - b).collect();
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        w.iter_mut().for_each(|x| *x /= norm);
        v = w;
    }
    let hv = h.mul_vec(&v);
    v.iter().zip(&hv).map(|(a, b)| a * b).sum()
}

#[test]
fn energies_match_power_iteration() {
    for n in [3, 5, 8] {
        for (j1, j2) in [(0.0, 0.0), (0.5, 0.0), (0.0, 0.5), (-0.3, 0.2)] {
            let spec = ClusterHamiltonianSpec { num_sites: n, j1, j2 };
            let h = build_cluster_hamiltonian(&spec).unwrap();
            let g = ground_state(&spec).unwrap();
            assert!((g.energy - power_energy(&h)).abs() < 1e-8, "N={n} {j1} {j2}");
        }
    }
    let g = ground_state(&ClusterHamiltonianSpec { num_sites: 6, j1: 0.0, j2: 0.0 }).unwrap();
    assert!((g.energy + 6.0).abs() < 1e-12);
}

#[test]
fn j1_term_only_couples_neighbour_flips() {
    let n = 6;
    let mk = |j1| build_cluster_hamiltonian(&ClusterHamiltonianSpec { num_sites: n, j1, j2: 0.4 }).unwrap();
    let (a, b) = (mk(1.0), mk(0.0));
    let neighbours: Vec<usize> = (0..n).map(|j| 1 << j | 1 << ((j + 1) % n)).collect();
    for r in 0..1 << n {
        for c in 0..1 << n {
            if (a.get(r, c) - b.get(r, c)).abs() > 1e-14 {
                assert!(neighbours.contains(&(r ^ c)), "{r:b} {c:b}");
            }
        }
    }
}

#[test]
fn eight_site_residual() {
    let spec = ClusterHamiltonianSpec { num_sites: 8, j1: 0.8, j2: -0.6 };
    let h = build_cluster_hamiltonian(&spec).unwrap();
    let g = ground_state(&spec).unwrap();
    let hv = h.mul_vec(&g.vector);
    let res = hv
        .iter()
        .zip(&g.vector)
        .map(|(x, v)| (x - g.energy * v).powi(2))
        .sum::<f64>()
        .sqrt();
    assert!(res <= 1e-8, "{res}");
    let norm: f64 = g.vector.iter().map(|v| v * v).sum();
    assert!((norm - 1.0).abs() < 1e-12);
    assert!(g.vector.iter().find(|v| v.abs() > 1e-12).unwrap() > &0.0);
}
