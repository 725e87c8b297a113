use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::circuit::CircuitArchitecture;
use super::gate::GateKind;
use super::state::StateVector;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn gate(self) -> GateKind {
        match self {
            Axis::X => GateKind::RX,
            Axis::Y => GateKind::RY,
            Axis::Z => GateKind::RZ,
        }
    }
}

/// Angle encoding: feature `i` becomes the angle of rotation `entries[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EncodingScheme {
    entries: Vec<(Axis, usize)>,
}

impl EncodingScheme {
    pub fn new(entries: Vec<(Axis, usize)>) -> Self {
        EncodingScheme { entries }
    }

    /// One rotation about `axis` per qubit.
    pub fn uniform(axis: Axis, num_qubits: usize) -> Self {
        EncodingScheme {
            entries: (0..num_qubits).map(|q| (axis, q)).collect(),
        }
    }

    /// Parses layer notation such as `"4RY,4RZ,4RX,4RY"`: each token `nRA`
    /// places `RA` rotations on qubits `0..n`.
    pub fn parse_layers(s: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for tok in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let split = tok
                .find(|c: char| !c.is_ascii_digit())
                .ok_or_else(|| Error::Config(format!("bad encoding layer '{tok}'")))?;
            let (n, gate) = tok.split_at(split);
            let n: usize = if n.is_empty() {
                1
            } else {
                n.parse()
                    .map_err(|_| Error::Config(format!("bad encoding layer '{tok}'")))?
            };
            let axis = match gate.to_ascii_uppercase().as_str() {
                "RX" => Axis::X,
                "RY" => Axis::Y,
                "RZ" => Axis::Z,
                _ => return Err(Error::Config(format!("bad encoding rotation '{gate}'"))),
            };
            entries.extend((0..n).map(|q| (axis, q)));
        }
        if entries.is_empty() {
            return Err(Error::Config("empty encoding".into()));
        }
        Ok(EncodingScheme { entries })
    }

    pub fn entries(&self) -> &[(Axis, usize)] {
        &self.entries
    }

    pub fn feature_dim(&self) -> usize {
        self.entries.len()
    }

    pub fn min_qubits(&self) -> usize {
        self.entries.iter().map(|&(_, q)| q + 1).max().unwrap_or(0)
    }

    /// The encoding as a fixed-angle circuit.
    pub fn circuit(&self, input: &[f64], num_qubits: usize) -> Result<CircuitArchitecture> {
        if input.len() != self.entries.len() {
            return Err(Error::Dimension {
                expected: self.entries.len(),
                got: input.len(),
            });
        }
        let mut arch = CircuitArchitecture::new(num_qubits);
        for (&(axis, q), &x) in self.entries.iter().zip(input) {
            arch.push_fixed(axis.gate(), &[q], &[x])?;
        }
        Ok(arch)
    }

    /// `F(x)|0…0⟩`.
    pub fn encode(&self, input: &[f64], num_qubits: usize) -> Result<StateVector> {
        self.circuit(input, num_qubits)?
            .run(&[], &StateVector::zero(num_qubits))
    }
}

impl fmt::Display for EncodingScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Compress runs of `(axis, 0), (axis, 1), ...` back into layer tokens.
        let mut toks = Vec::new();
        let mut i = 0;
        while i < self.entries.len() {
            let (axis, q) = self.entries[i];
            if q != 0 {
                return write!(f, "{:?}", self.entries);
            }
            let mut n = 1;
            while i + n < self.entries.len() && self.entries[i + n] == (axis, n) {
                n += 1;
            }
            toks.push(format!("{n}R{axis:?}"));
            i += n;
        }
        f.write_str(&toks.join(","))
    }
}

impl FromStr for EncodingScheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse_layers(s)
    }
}

/// Class readout: class `c` scores the summed `⟨Z_q⟩` over `groups[c]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReadoutSpec {
    groups: Vec<Vec<usize>>,
}

impl ReadoutSpec {
    pub fn new(groups: Vec<Vec<usize>>) -> Result<Self> {
        if groups.len() < 2 || groups.iter().any(|g| g.is_empty()) {
            return Err(Error::Config(
                "readout needs at least two non-empty qubit groups".into(),
            ));
        }
        Ok(ReadoutSpec { groups })
    }

    /// One qubit per class: class `c` reads qubit `c`.
    pub fn per_qubit(classes: usize) -> Self {
        ReadoutSpec {
            groups: (0..classes).map(|c| vec![c]).collect(),
        }
    }

    /// Splits `num_qubits` into `classes` contiguous groups, e.g. 4 qubits and
    /// 2 classes give `{0,1}` and `{2,3}`.
    pub fn contiguous(num_qubits: usize, classes: usize) -> Result<Self> {
        if classes < 2 || classes > num_qubits {
            return Err(Error::Config(format!(
                "cannot split {num_qubits} qubits into {classes} groups"
            )));
        }
        let per = num_qubits / classes;
        let groups = (0..classes)
            .map(|c| (c * per..(c + 1) * per).collect())
            .collect();
        Ok(ReadoutSpec { groups })
    }

    /// `0-1/2-3` or `0,1/2,3` style.
    pub fn parse(s: &str) -> Result<Self> {
        let mut groups = Vec::new();
        for part in s.split('/') {
            let mut g = Vec::new();
            for item in part.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                if let Some((a, b)) = item.split_once('-') {
                    let a: usize = a
                        .trim()
                        .parse()
                        .map_err(|_| Error::Config(format!("bad readout '{s}'")))?;
                    let b: usize = b
                        .trim()
                        .parse()
                        .map_err(|_| Error::Config(format!("bad readout '{s}'")))?;
                    g.extend(a..=b);
                } else {
                    g.push(
                        item.parse()
                            .map_err(|_| Error::Config(format!("bad readout '{s}'")))?,
                    );
                }
            }
            groups.push(g);
        }
        Self::new(groups)
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn num_classes(&self) -> usize {
        self.groups.len()
    }

    /// Distinct measured qubits, ascending.
    pub fn qubits(&self) -> Vec<usize> {
        let mut qs: Vec<usize> = self.groups.iter().flatten().copied().collect();
        qs.sort_unstable();
        qs.dedup();
        qs
    }

    pub fn validate(&self, num_qubits: usize) -> Result<()> {
        for &q in self.groups.iter().flatten() {
            if q >= num_qubits {
                return Err(Error::QubitOutOfRange {
                    index: q,
                    num_qubits,
                });
            }
        }
        Ok(())
    }

    /// Per-class scores of a state.
    pub fn scores(&self, state: &StateVector) -> Result<Vec<f64>> {
        self.validate(state.num_qubits())?;
        let z: Vec<f64> = (0..state.num_qubits())
            .map(|q| state.z_expectation(q))
            .collect::<Result<_>>()?;
        Ok(self
            .groups
            .iter()
            .map(|g| g.iter().map(|&q| z[q]).sum())
            .collect())
    }
}

impl fmt::Display for ReadoutSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .groups
            .iter()
            .map(|g| {
                g.iter()
                    .map(|q| q.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        f.write_str(&parts.join("/"))
    }
}

pub fn softmax(scores: &[f64]) -> Vec<f64> {
    let m = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = scores.iter().map(|s| (s - m).exp()).collect();
    let z: f64 = e.iter().sum();
    e.into_iter().map(|v| v / z).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn parses_layer_notation() {
        let e = EncodingScheme::parse_layers("4RY,4RZ,4RX,4RY").unwrap();
        assert_eq!(e.feature_dim(), 16);
        assert_eq!(e.entries()[4], (Axis::Z, 0));
        assert_eq!(e.entries()[15], (Axis::Y, 3));
        assert_eq!(e.to_string(), "4RY,4RZ,4RX,4RY");
        let e = EncodingScheme::parse_layers("10RY,10RZ,10RX,6RY").unwrap();
        assert_eq!(e.feature_dim(), 36);
        assert_eq!(e.min_qubits(), 10);
        assert!(EncodingScheme::parse_layers("4RQ").is_err());
    }

    #[test]
    fn zero_features_give_zero_state() {
        let e = EncodingScheme::parse_layers("2RY,2RX").unwrap();
        let s = e.encode(&[0.0; 4], 2).unwrap();
        assert_eq!(s, StateVector::zero(2));
    }

    #[test]
    fn pi_on_qubit_zero() {
        let e = EncodingScheme::new(vec![(Axis::Y, 0)]);
        let s = e.encode(&[PI], 2).unwrap();
        assert!((s.probability(0b01) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn length_mismatch() {
        let e = EncodingScheme::uniform(Axis::Y, 2);
        assert!(matches!(
            e.encode(&[0.1], 2),
            Err(Error::Dimension { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn readout_parsing_and_groups() {
        let r = ReadoutSpec::parse("0-1/2,3").unwrap();
        assert_eq!(r.groups(), &[vec![0, 1], vec![2, 3]]);
        assert_eq!(r, ReadoutSpec::contiguous(4, 2).unwrap());
        assert_eq!(r.to_string().parse::<String>().unwrap(), "0,1/2,3");
        assert!(ReadoutSpec::parse("0").is_err());
        assert!(r.validate(3).is_err());
    }

    #[test]
    fn softmax_sums_to_one() {
        let p = softmax(&[1.0, 1.0]);
        assert_eq!(p, vec![0.5, 0.5]);
        let p = softmax(&[1000.0, -3.0, 2.0]);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}
