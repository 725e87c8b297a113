//! Gate alphabet and unitary conventions.
//!
//! Rotations are half-angle exponentials, `R_A(φ) = exp(-i φ σ_A / 2)`, and the
//! two-qubit Ising gates are `AA(φ) = exp(-i φ σ_A⊗σ_A / 2)`. `U3(θ, φ, λ)` is
//! the usual three-angle single-qubit unitary
//!
//! ```text
//! [ cos(θ/2)            -e^{iλ} sin(θ/2)      ]
//! [ e^{iφ} sin(θ/2)      e^{i(φ+λ)} cos(θ/2)  ]
//! ```
//!
//! and `CU3` applies it to the second qubit when the first is `|1⟩`.
//! Two-qubit matrices are written in the local basis `|q0 q1⟩`, with
//! `qubits[0]` as the high bit.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Mat2 = [[Complex64; 2]; 2];
pub type Mat4 = [[Complex64; 4]; 4];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[allow(clippy::upper_case_acronyms)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GateKind {
    RX,
    RY,
    RZ,
    U3,
    CU3,
    XX,
    YY,
    ZZ,
    CNOT,
}

impl GateKind {
    pub const ALL: [GateKind; 9] = [
        GateKind::RX,
        GateKind::RY,
        GateKind::RZ,
        GateKind::U3,
        GateKind::CU3,
        GateKind::XX,
        GateKind::YY,
        GateKind::ZZ,
        GateKind::CNOT,
    ];

    pub fn arity(self) -> usize {
        match self {
            GateKind::CU3 | GateKind::XX | GateKind::YY | GateKind::ZZ | GateKind::CNOT => 2,
            _ => 1,
        }
    }

    pub fn param_count(self) -> usize {
        match self {
            GateKind::U3 | GateKind::CU3 => 3,
            GateKind::CNOT => 0,
            _ => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::RX => "RX",
            GateKind::RY => "RY",
            GateKind::RZ => "RZ",
            GateKind::U3 => "U3",
            GateKind::CU3 => "CU3",
            GateKind::XX => "XX",
            GateKind::YY => "YY",
            GateKind::ZZ => "ZZ",
            GateKind::CNOT => "CNOT",
        }
    }

    /// Whether every angle of this gate enters as `exp(-i a P / 2)` for a
    /// Pauli-like generator `P` (two eigenvalues, gap 1), so the two-term
    /// ±π/2 shift rule is exact.
    ///
    /// U3 qualifies through its `RZ(φ)·RY(θ)·RZ(λ)` decomposition: the
    /// extra `e^{i(φ+λ)/2}` is a global phase. CU3 does not, because its θ
    /// generator `|1⟩⟨1| ⊗ Y/2` has three distinct eigenvalues.
    pub fn shift_rule_exact(self) -> bool {
        !matches!(self, GateKind::CU3 | GateKind::CNOT)
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GateKind::ALL
            .iter()
            .copied()
            .find(|k| k.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Config(format!("unknown gate kind '{s}'")))
    }
}

/// Where a gate's angles come from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ParamSource {
    /// Angles `params[offset .. offset + kind.param_count()]`.
    Trainable { offset: usize },
    /// Constant angles stored with the gate (data-encoding gates).
    Fixed(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    pub kind: GateKind,
    pub qubits: Vec<usize>,
    pub params: ParamSource,
}

impl Gate {
    pub fn trainable(kind: GateKind, qubits: &[usize], offset: usize) -> Self {
        Gate {
            kind,
            qubits: qubits.to_vec(),
            params: ParamSource::Trainable { offset },
        }
    }

    pub fn fixed(kind: GateKind, qubits: &[usize], angles: &[f64]) -> Self {
        Gate {
            kind,
            qubits: qubits.to_vec(),
            params: ParamSource::Fixed(angles.to_vec()),
        }
    }

    pub fn is_trainable(&self) -> bool {
        matches!(self.params, ParamSource::Trainable { .. }) && self.kind.param_count() > 0
    }

    /// Number of entries this gate reads from the trainable parameter vector.
    pub fn trainable_count(&self) -> usize {
        match self.params {
            ParamSource::Trainable { .. } => self.kind.param_count(),
            ParamSource::Fixed(_) => 0,
        }
    }

    /// Angles used by this gate under the parameter vector `params`.
    pub fn angles<'a>(&'a self, params: &'a [f64]) -> Result<&'a [f64]> {
        let n = self.kind.param_count();
        match &self.params {
            ParamSource::Fixed(a) => {
                if a.len() != n {
                    return Err(Error::AngleCount {
                        kind: self.kind.name(),
                        expected: n,
                        got: a.len(),
                    });
                }
                Ok(a)
            }
            ParamSource::Trainable { offset } => params
                .get(*offset..offset + n)
                .ok_or(Error::ParamCount {
                    expected: offset + n,
                    got: params.len(),
                }),
        }
    }

    pub fn validate(&self, num_qubits: usize) -> Result<()> {
        if self.qubits.len() != self.kind.arity() {
            return Err(Error::Dimension {
                expected: self.kind.arity(),
                got: self.qubits.len(),
            });
        }
        for &q in &self.qubits {
            if q >= num_qubits {
                return Err(Error::QubitOutOfRange {
                    index: q,
                    num_qubits,
                });
            }
        }
        if self.qubits.len() == 2 && self.qubits[0] == self.qubits[1] {
            return Err(Error::DuplicateQubit(self.qubits[0]));
        }
        if let ParamSource::Fixed(a) = &self.params {
            if a.len() != self.kind.param_count() {
                return Err(Error::AngleCount {
                    kind: self.kind.name(),
                    expected: self.kind.param_count(),
                    got: a.len(),
                });
            }
        }
        Ok(())
    }
}

/// Unitary of a gate for given angles.
#[derive(Debug, Clone, Copy)]
pub enum GateMatrix {
    One(Mat2),
    Two(Mat4),
}

fn check_angles(kind: GateKind, angles: &[f64]) -> Result<()> {
    if angles.len() != kind.param_count() {
        return Err(Error::AngleCount {
            kind: kind.name(),
            expected: kind.param_count(),
            got: angles.len(),
        });
    }
    Ok(())
}

pub fn u3_matrix(theta: f64, phi: f64, lambda: f64) -> Mat2 {
    let (s, c) = (theta / 2.0).sin_cos();
    [
        [Complex64::new(c, 0.0), -Complex64::from_polar(s, lambda)],
        [
            Complex64::from_polar(s, phi),
            Complex64::from_polar(c, phi + lambda),
        ],
    ]
}

fn ising(kind: GateKind, phi: f64) -> Mat4 {
    // cos(φ/2) I - i sin(φ/2) (σ⊗σ)
    let (s, c) = (phi / 2.0).sin_cos();
    let mut m = [[ZERO; 4]; 4];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Complex64::new(c, 0.0);
    }
    let mis = Complex64::new(0.0, -s);
    match kind {
        GateKind::XX => {
            m[0][3] = mis;
            m[1][2] = mis;
            m[2][1] = mis;
            m[3][0] = mis;
        }
        GateKind::YY => {
            // Y⊗Y = antidiag(-1, 1, 1, -1)
            m[0][3] = -mis;
            m[1][2] = mis;
            m[2][1] = mis;
            m[3][0] = -mis;
        }
        GateKind::ZZ => {
            // Z⊗Z = diag(1, -1, -1, 1)
            m[0][0] = Complex64::from_polar(1.0, -phi / 2.0);
            m[1][1] = Complex64::from_polar(1.0, phi / 2.0);
            m[2][2] = Complex64::from_polar(1.0, phi / 2.0);
            m[3][3] = Complex64::from_polar(1.0, -phi / 2.0);
        }
        _ => unreachable!("not an Ising gate"),
    }
    m
}

impl GateKind {
    pub fn matrix(self, angles: &[f64]) -> Result<GateMatrix> {
        check_angles(self, angles)?;
        Ok(match self {
            GateKind::RX => {
                let (s, c) = (angles[0] / 2.0).sin_cos();
                GateMatrix::One([
                    [Complex64::new(c, 0.0), Complex64::new(0.0, -s)],
                    [Complex64::new(0.0, -s), Complex64::new(c, 0.0)],
                ])
            }
            GateKind::RY => {
                let (s, c) = (angles[0] / 2.0).sin_cos();
                GateMatrix::One([
                    [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
                    [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
                ])
            }
            GateKind::RZ => {
                let h = angles[0] / 2.0;
                GateMatrix::One([
                    [Complex64::from_polar(1.0, -h), ZERO],
                    [ZERO, Complex64::from_polar(1.0, h)],
                ])
            }
            GateKind::U3 => GateMatrix::One(u3_matrix(angles[0], angles[1], angles[2])),
            GateKind::CU3 => {
                let u = u3_matrix(angles[0], angles[1], angles[2]);
                let mut m = [[ZERO; 4]; 4];
                m[0][0] = ONE;
                m[1][1] = ONE;
                m[2][2] = u[0][0];
                m[2][3] = u[0][1];
                m[3][2] = u[1][0];
                m[3][3] = u[1][1];
                GateMatrix::Two(m)
            }
            GateKind::XX | GateKind::YY | GateKind::ZZ => GateMatrix::Two(ising(self, angles[0])),
            GateKind::CNOT => {
                let mut m = [[ZERO; 4]; 4];
                m[0][0] = ONE;
                m[1][1] = ONE;
                m[2][3] = ONE;
                m[3][2] = ONE;
                GateMatrix::Two(m)
            }
        })
    }
}

impl GateMatrix {
    /// Conjugate transpose.
    pub fn dagger(&self) -> GateMatrix {
        match self {
            GateMatrix::One(m) => {
                let mut out = [[ZERO; 2]; 2];
                for (i, row) in m.iter().enumerate() {
                    for (j, v) in row.iter().enumerate() {
                        out[j][i] = v.conj();
                    }
                }
                GateMatrix::One(out)
            }
            GateMatrix::Two(m) => {
                let mut out = [[ZERO; 4]; 4];
                for (i, row) in m.iter().enumerate() {
                    for (j, v) in row.iter().enumerate() {
                        out[j][i] = v.conj();
                    }
                }
                GateMatrix::Two(out)
            }
        }
    }
}

fn u3_derivative(theta: f64, phi: f64, lambda: f64, which: usize) -> Mat2 {
    let (s, c) = (theta / 2.0).sin_cos();
    let i = Complex64::new(0.0, 1.0);
    match which {
        0 => [
            [Complex64::new(-s / 2.0, 0.0), -Complex64::from_polar(c / 2.0, lambda)],
            [
                Complex64::from_polar(c / 2.0, phi),
                -Complex64::from_polar(s / 2.0, phi + lambda),
            ],
        ],
        1 => [
            [ZERO, ZERO],
            [
                i * Complex64::from_polar(s, phi),
                i * Complex64::from_polar(c, phi + lambda),
            ],
        ],
        _ => [
            [ZERO, -i * Complex64::from_polar(s, lambda)],
            [ZERO, i * Complex64::from_polar(c, phi + lambda)],
        ],
    }
}

impl GateKind {
    /// Derivative of the gate matrix with respect to angle `which`.
    pub fn derivative(self, angles: &[f64], which: usize) -> Result<GateMatrix> {
        check_angles(self, angles)?;
        if which >= self.param_count() {
            return Err(Error::AngleCount {
                kind: self.name(),
                expected: self.param_count(),
                got: which + 1,
            });
        }
        Ok(match self {
            // exp(-iφP/2) has derivative exp(-i(φ+π)P/2)/2.
            GateKind::RX | GateKind::RY | GateKind::RZ | GateKind::XX | GateKind::YY | GateKind::ZZ => {
                match self.matrix(&[angles[0] + std::f64::consts::PI])? {
                    GateMatrix::One(m) => GateMatrix::One(m.map(|r| r.map(|v| v * 0.5))),
                    GateMatrix::Two(m) => GateMatrix::Two(m.map(|r| r.map(|v| v * 0.5))),
                }
            }
            GateKind::U3 => GateMatrix::One(u3_derivative(angles[0], angles[1], angles[2], which)),
            GateKind::CU3 => {
                let d = u3_derivative(angles[0], angles[1], angles[2], which);
                let mut m = [[ZERO; 4]; 4];
                m[2][2] = d[0][0];
                m[2][3] = d[0][1];
                m[3][2] = d[1][0];
                m[3][3] = d[1][1];
                GateMatrix::Two(m)
            }
            GateKind::CNOT => unreachable!("CNOT has no angles"),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_unitary(m: &[Vec<Complex64>]) -> bool {
        let n = m.len();
        for i in 0..n {
            for j in 0..n {
                let mut acc = ZERO;
                for k in 0..n {
                    acc += m[k][i].conj() * m[k][j];
                }
                let want = if i == j { ONE } else { ZERO };
                if (acc - want).norm() > 1e-12 {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn arity_and_param_count_table() {
        for k in GateKind::ALL {
            let two = matches!(
                k,
                GateKind::CU3 | GateKind::XX | GateKind::YY | GateKind::ZZ | GateKind::CNOT
            );
            assert_eq!(k.arity(), if two { 2 } else { 1 }, "{k}");
        }
        assert_eq!(GateKind::U3.param_count(), 3);
        assert_eq!(GateKind::CU3.param_count(), 3);
        assert_eq!(GateKind::CNOT.param_count(), 0);
        for k in [
            GateKind::RX,
            GateKind::RY,
            GateKind::RZ,
            GateKind::XX,
            GateKind::YY,
            GateKind::ZZ,
        ] {
            assert_eq!(k.param_count(), 1);
        }
    }

    #[test]
    fn every_matrix_is_unitary() {
        let angles = [0.37, -1.2, 2.9];
        for k in GateKind::ALL {
            let m = k.matrix(&angles[..k.param_count()]).unwrap();
            let dense: Vec<Vec<Complex64>> = match m {
                GateMatrix::One(m) => m.iter().map(|r| r.to_vec()).collect(),
                GateMatrix::Two(m) => m.iter().map(|r| r.to_vec()).collect(),
            };
            assert!(is_unitary(&dense), "{k}");
        }
    }

    #[test]
    fn angle_count_mismatch_is_an_error() {
        assert!(matches!(
            GateKind::U3.matrix(&[0.1]),
            Err(Error::AngleCount { expected: 3, got: 1, .. })
        ));
        assert!(GateKind::CNOT.matrix(&[0.1]).is_err());
    }

    #[test]
    fn names_round_trip() {
        for k in GateKind::ALL {
            assert_eq!(k.name().parse::<GateKind>().unwrap(), k);
        }
        assert!("H".parse::<GateKind>().is_err());
    }

    #[test]
    fn gate_validation() {
        let g = Gate::trainable(GateKind::CU3, &[1, 1], 0);
        assert_eq!(g.validate(3), Err(Error::DuplicateQubit(1)));
        let g = Gate::trainable(GateKind::RX, &[3], 0);
        assert!(matches!(g.validate(3), Err(Error::QubitOutOfRange { .. })));
        let g = Gate::fixed(GateKind::RY, &[0], &[0.1, 0.2]);
        assert!(g.validate(1).is_err());
    }

    #[test]
    fn derivatives_match_differences() {
        let angles = [0.7, -1.2, 2.1];
        let h = 1e-6;
        for kind in GateKind::ALL {
            for a in 0..kind.param_count() {
                let x = &angles[..kind.param_count()];
                let mut p = x.to_vec();
                let mut m = x.to_vec();
                p[a] += h;
                m[a] -= h;
                let d = flatten(kind.derivative(x, a).unwrap());
                let fp = flatten(kind.matrix(&p).unwrap());
                let fm = flatten(kind.matrix(&m).unwrap());
                for k in 0..d.len() {
                    let fd = (fp[k] - fm[k]) / (2.0 * h);
                    assert!((fd - d[k]).norm() < 1e-8, "{kind} angle {a}");
                }
            }
        }
    }

    fn flatten(g: GateMatrix) -> Vec<Complex64> {
        match g {
            GateMatrix::One(m) => m.iter().flatten().copied().collect(),
            GateMatrix::Two(m) => m.iter().flatten().copied().collect(),
        }
    }
}
