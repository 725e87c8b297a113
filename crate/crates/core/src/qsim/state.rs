use num_complex::Complex64;

use super::gate::{Gate, GateMatrix, Mat2, Mat4};
use super::pauli::{Pauli, PauliObservable};
use crate::error::{Error, Result};

/// Dense statevector over `num_qubits` qubits, little-endian: qubit `q` is
/// bit `q` of the amplitude index.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩`.
    pub fn zero(num_qubits: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        StateVector { num_qubits, amps }
    }

    pub fn basis(num_qubits: usize, index: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amps[index] = Complex64::new(1.0, 0.0);
        StateVector { num_qubits, amps }
    }

    /// Wraps raw amplitudes. The length must be a power of two; the vector is
    /// not renormalised.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let n = amps.len();
        if n == 0 || !n.is_power_of_two() {
            return Err(Error::Dimension {
                expected: n.next_power_of_two().max(1),
                got: n,
            });
        }
        Ok(StateVector {
            num_qubits: n.trailing_zeros() as usize,
            amps,
        })
    }

    /// Real amplitudes, normalised to unit length.
    pub fn from_real(values: &[f64]) -> Result<Self> {
        let norm = values.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::Dimension {
                expected: values.len(),
                got: 0,
            });
        }
        Self::from_amplitudes(
            values
                .iter()
                .map(|v| Complex64::new(v / norm, 0.0))
                .collect(),
        )
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probability(&self, index: usize) -> f64 {
        self.amps[index].norm_sqr()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        self.same_dim(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    fn same_dim(&self, other: &StateVector) -> Result<()> {
        if self.amps.len() != other.amps.len() {
            return Err(Error::Dimension {
                expected: self.amps.len(),
                got: other.amps.len(),
            });
        }
        Ok(())
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.num_qubits {
            return Err(Error::QubitOutOfRange {
                index: q,
                num_qubits: self.num_qubits,
            });
        }
        Ok(())
    }

    pub fn apply_1q(&mut self, m: &Mat2, q: usize) -> Result<()> {
        self.check_qubit(q)?;
        let mask = 1usize << q;
        for i in 0..self.amps.len() {
            if i & mask == 0 {
                let a = self.amps[i];
                let b = self.amps[i | mask];
                self.amps[i] = m[0][0] * a + m[0][1] * b;
                self.amps[i | mask] = m[1][0] * a + m[1][1] * b;
            }
        }
        Ok(())
    }

    /// Applies a 4×4 matrix written in the local basis `|q_hi q_lo⟩`.
    pub fn apply_2q(&mut self, m: &Mat4, q_hi: usize, q_lo: usize) -> Result<()> {
        self.check_qubit(q_hi)?;
        self.check_qubit(q_lo)?;
        if q_hi == q_lo {
            return Err(Error::DuplicateQubit(q_hi));
        }
        let mh = 1usize << q_hi;
        let ml = 1usize << q_lo;
        for i in 0..self.amps.len() {
            if i & (mh | ml) == 0 {
                let idx = [i, i | ml, i | mh, i | mh | ml];
                let v = idx.map(|k| self.amps[k]);
                for (r, &k) in idx.iter().enumerate() {
                    self.amps[k] = m[r][0] * v[0] + m[r][1] * v[1] + m[r][2] * v[2] + m[r][3] * v[3];
                }
            }
        }
        Ok(())
    }

    /// Applies a one- or two-qubit matrix (not necessarily unitary).
    pub fn apply_matrix(&mut self, m: &GateMatrix, qubits: &[usize]) -> Result<()> {
        match (m, qubits) {
            (GateMatrix::One(m), [q]) => self.apply_1q(m, *q),
            (GateMatrix::Two(m), [a, b]) => self.apply_2q(m, *a, *b),
            (GateMatrix::One(_), _) => Err(Error::Dimension {
                expected: 1,
                got: qubits.len(),
            }),
            (GateMatrix::Two(_), _) => Err(Error::Dimension {
                expected: 2,
                got: qubits.len(),
            }),
        }
    }

    pub(crate) fn amps_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    /// Applies `gate` with explicit `angles` (ignores the gate's own source).
    pub fn apply_gate(&mut self, gate: &Gate, angles: &[f64]) -> Result<()> {
        gate.validate(self.num_qubits)?;
        match gate.kind.matrix(angles)? {
            GateMatrix::One(m) => self.apply_1q(&m, gate.qubits[0]),
            GateMatrix::Two(m) => self.apply_2q(&m, gate.qubits[0], gate.qubits[1]),
        }
    }

    /// `P|ψ⟩` for a Pauli string.
    pub fn apply_pauli(&self, obs: &PauliObservable) -> Result<StateVector> {
        if obs.len() > self.num_qubits {
            return Err(Error::Dimension {
                expected: self.num_qubits,
                got: obs.len(),
            });
        }
        let (flip, zmask, ycount) = obs.masks();
        // Y = i X Z, so the string is i^{#Y} · X-part · Z-part.
        let phase = match ycount % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (i, a) in self.amps.iter().enumerate() {
            let sign = if (i & zmask).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
            out[i ^ flip] = phase * a * sign;
        }
        Ok(StateVector {
            num_qubits: self.num_qubits,
            amps: out,
        })
    }

    /// `⟨ψ|P|ψ⟩`.
    pub fn expectation(&self, obs: &PauliObservable) -> Result<f64> {
        if obs.len() > self.num_qubits {
            return Err(Error::Dimension {
                expected: self.num_qubits,
                got: obs.len(),
            });
        }
        if obs.factors().iter().all(|p| matches!(p, Pauli::I | Pauli::Z)) {
            let (_, zmask, _) = obs.masks();
            return Ok(self
                .amps
                .iter()
                .enumerate()
                .map(|(i, a)| {
                    if (i & zmask).count_ones() % 2 == 1 {
                        -a.norm_sqr()
                    } else {
                        a.norm_sqr()
                    }
                })
                .sum());
        }
        let p = self.apply_pauli(obs)?;
        Ok(self.inner(&p)?.re)
    }

    /// `⟨Z_q⟩`.
    pub fn z_expectation(&self, q: usize) -> Result<f64> {
        self.check_qubit(q)?;
        let mask = 1usize << q;
        Ok(self
            .amps
            .iter()
            .enumerate()
            .map(|(i, a)| if i & mask == 0 { a.norm_sqr() } else { -a.norm_sqr() })
            .sum())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::gate::GateKind;
    use std::f64::consts::PI;

    #[test]
    fn rx_zero_is_identity() {
        let mut s = StateVector::zero(1);
        s.apply_gate(&Gate::trainable(GateKind::RX, &[0], 0), &[0.0])
            .unwrap();
        assert_eq!(s, StateVector::zero(1));
    }

    #[test]
    fn ry_pi_flips() {
        let mut s = StateVector::zero(1);
        s.apply_gate(&Gate::trainable(GateKind::RY, &[0], 0), &[PI])
            .unwrap();
        assert!((s.probability(1) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zz_phase_on_01() {
        // |01⟩ in the |q0 q1⟩ reading: qubit 0 = 0, qubit 1 = 1 → index 2.
        let phi = 0.731;
        let mut s = StateVector::basis(2, 2);
        s.apply_gate(&Gate::trainable(GateKind::ZZ, &[0, 1], 0), &[phi])
            .unwrap();
        let want = Complex64::from_polar(1.0, phi / 2.0);
        assert!((s.amplitudes()[2] - want).norm() < 1e-15);
    }

    #[test]
    fn little_endian_layout() {
        let mut s = StateVector::zero(3);
        s.apply_gate(&Gate::trainable(GateKind::RY, &[1], 0), &[PI])
            .unwrap();
        assert!((s.probability(0b010) - 1.0).abs() < 1e-15);
        assert!((s.z_expectation(1).unwrap() + 1.0).abs() < 1e-15);
        assert!((s.z_expectation(0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn cnot_control_is_first_qubit() {
        let mut s = StateVector::basis(2, 0b01); // qubit 0 set
        s.apply_gate(&Gate::trainable(GateKind::CNOT, &[0, 1], 0), &[])
            .unwrap();
        assert!((s.probability(0b11) - 1.0).abs() < 1e-15);
        let mut s = StateVector::basis(2, 0b10); // only qubit 1 set
        s.apply_gate(&Gate::trainable(GateKind::CNOT, &[0, 1], 0), &[])
            .unwrap();
        assert!((s.probability(0b10) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn errors() {
        let mut s = StateVector::zero(2);
        let g = Gate::trainable(GateKind::RX, &[2], 0);
        assert!(matches!(
            s.apply_gate(&g, &[0.1]),
            Err(Error::QubitOutOfRange { index: 2, num_qubits: 2 })
        ));
        let g = Gate::trainable(GateKind::RX, &[0], 0);
        assert!(matches!(
            s.apply_gate(&g, &[0.1, 0.2]),
            Err(Error::AngleCount { .. })
        ));
        assert!(StateVector::from_amplitudes(vec![Complex64::new(1.0, 0.0); 3]).is_err());
    }

    #[test]
    fn pauli_expectations_on_zero() {
        let s = StateVector::zero(1);
        assert_eq!(s.expectation(&"Z".parse().unwrap()).unwrap(), 1.0);
        assert_eq!(s.expectation(&"X".parse().unwrap()).unwrap(), 0.0);
        assert_eq!(s.expectation(&"Y".parse().unwrap()).unwrap(), 0.0);
    }

    #[test]
    fn y_expectation_sign() {
        // RX(-π/2)|0⟩ = (|0⟩ + i|1⟩)/√2 has ⟨Y⟩ = +1.
        let mut s = StateVector::zero(1);
        s.apply_gate(&Gate::trainable(GateKind::RX, &[0], 0), &[-PI / 2.0])
            .unwrap();
        assert!((s.expectation(&"Y".parse().unwrap()).unwrap() - 1.0).abs() < 1e-14);
    }
}
