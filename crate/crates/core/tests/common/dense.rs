//! Dense-matrix reference implementation used as a test oracle.
//!
//! Gates are rebuilt here from their textbook formulas and embedded into the
//! full `2^d` space entry by entry, independently of the simulator's in-place
//! update loops.

#![allow(dead_code)]

use num_complex::Complex64 as C;

pub type Dense = Vec<Vec<C>>;

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

pub fn zeros(n: usize) -> Dense {
    vec![vec![c(0.0, 0.0); n]; n]
}

pub fn identity(n: usize) -> Dense {
    let mut m = zeros(n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = c(1.0, 0.0);
    }
    m
}

pub fn matmul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    let mut out = zeros(n);
    for i in 0..n {
        for k in 0..n {
            if a[i][k] == c(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

pub fn sub(a: &Dense, b: &Dense) -> Dense {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x - y).collect())
        .collect()
}

pub fn dagger(a: &Dense) -> Dense {
    let n = a.len();
    let mut out = zeros(n);
    for i in 0..n {
        for j in 0..n {
            out[j][i] = a[i][j].conj();
        }
    }
    out
}

pub fn trace(a: &Dense) -> C {
    (0..a.len()).map(|i| a[i][i]).sum()
}

pub fn kron(a: &Dense, b: &Dense) -> Dense {
    let (n, m) = (a.len(), b.len());
    let mut out = zeros(n * m);
    for i in 0..n {
        for j in 0..n {
            for k in 0..m {
                for l in 0..m {
                    out[i * m + k][j * m + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

pub fn apply(m: &Dense, v: &[C]) -> Vec<C> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

pub fn outer(v: &[C]) -> Dense {
    v.iter()
        .map(|a| v.iter().map(|b| a * b.conj()).collect())
        .collect()
}

pub fn pauli(ch: char) -> Dense {
    match ch {
        'I' => identity(2),
        'X' => vec![vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]],
        'Y' => vec![vec![c(0.0, 0.0), c(0.0, -1.0)], vec![c(0.0, 1.0), c(0.0, 0.0)]],
        'Z' => vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(-1.0, 0.0)]],
        _ => panic!("not a Pauli: {ch}"),
    }
}

/// Full matrix of a Pauli string whose `k`-th character acts on qubit `k`
/// (little-endian: qubit 0 is the least significant bit, so it is the last
/// Kronecker factor).
pub fn pauli_string(s: &str, d: usize) -> Dense {
    let chars: Vec<char> = s.chars().collect();
    let mut m = identity(1);
    for q in (0..d).rev() {
        let ch = chars.get(q).copied().unwrap_or('I');
        m = kron(&m, &pauli(ch));
    }
    m
}

/// `exp(-i φ P / 2)` for a Pauli-product `P` with `P² = I`.
pub fn pauli_rotation(p: &Dense, phi: f64) -> Dense {
    let n = p.len();
    let (s, co) = (phi / 2.0).sin_cos();
    let mut out = zeros(n);
    for i in 0..n {
        for j in 0..n {
            let id = if i == j { co } else { 0.0 };
            out[i][j] = c(id, 0.0) + c(0.0, -s) * p[i][j];
        }
    }
    out
}

pub fn u3(theta: f64, phi: f64, lambda: f64) -> Dense {
    let (s, co) = (theta / 2.0).sin_cos();
    let e = |a: f64| c(a.cos(), a.sin());
    vec![
        vec![c(co, 0.0), -e(lambda) * s],
        vec![e(phi) * s, e(phi + lambda) * co],
    ]
}

/// Local matrix of a gate in the basis `|q0 q1⟩` (first listed qubit high).
pub fn local(kind: &str, angles: &[f64]) -> Dense {
    let p0 = vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(0.0, 0.0)]];
    let p1 = vec![vec![c(0.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]];
    let controlled = |u: &Dense| {
        let a = kron(&p0, &identity(2));
        let b = kron(&p1, u);
        a.iter()
            .zip(&b)
            .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect())
            .collect::<Dense>()
    };
    match kind {
        "RX" => pauli_rotation(&pauli('X'), angles[0]),
        "RY" => pauli_rotation(&pauli('Y'), angles[0]),
        "RZ" => pauli_rotation(&pauli('Z'), angles[0]),
        "XX" => pauli_rotation(&kron(&pauli('X'), &pauli('X')), angles[0]),
        "YY" => pauli_rotation(&kron(&pauli('Y'), &pauli('Y')), angles[0]),
        "ZZ" => pauli_rotation(&kron(&pauli('Z'), &pauli('Z')), angles[0]),
        "U3" => u3(angles[0], angles[1], angles[2]),
        "CU3" => controlled(&u3(angles[0], angles[1], angles[2])),
        "CNOT" => controlled(&pauli('X')),
        _ => panic!("unknown gate {kind}"),
    }
}

/// Embeds a local gate acting on `qubits` into the full `2^d` space.
pub fn embed(m: &Dense, qubits: &[usize], d: usize) -> Dense {
    let n = 1 << d;
    let k = qubits.len();
    let local_index = |i: usize| {
        let mut x = 0;
        for (pos, &q) in qubits.iter().enumerate() {
            // qubits[0] is the most significant local bit
            x |= (i >> q & 1) << (k - 1 - pos);
        }
        x
    };
    let mask: usize = qubits.iter().map(|q| 1 << q).sum();
    let mut out = zeros(n);
    for i in 0..n {
        for j in 0..n {
            if i & !mask == j & !mask {
                out[i][j] = m[local_index(i)][local_index(j)];
            }
        }
    }
    out
}

/// Full unitary of a circuit given as `(kind, qubits, angles)` triples.
pub fn circuit_unitary(gates: &[(String, Vec<usize>, Vec<f64>)], d: usize) -> Dense {
    let mut u = identity(1 << d);
    for (kind, qs, angles) in gates {
        u = matmul(&embed(&local(kind, angles), qs, d), &u);
    }
    u
}

/// `−tr([M, ρ_k][M, ρ_l])`, the commutator form of a kernel entry.
pub fn kernel_trace_form(m: &Dense, phi_k: &[C], phi_l: &[C]) -> f64 {
    let rk = outer(phi_k);
    let rl = outer(phi_l);
    let ck = sub(&matmul(m, &rk), &matmul(&rk, m));
    let cl = sub(&matmul(m, &rl), &matmul(&rl, m));
    -trace(&matmul(&ck, &cl)).re
}

pub fn expectation(m: &Dense, v: &[C]) -> f64 {
    let mv = apply(m, v);
    v.iter().zip(&mv).map(|(a, b)| a.conj() * b).sum::<C>().re
}
