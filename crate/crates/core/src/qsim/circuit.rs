use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::gate::{Gate, GateKind, ParamSource};
use super::state::StateVector;
use super::topology::Topology;
use crate::error::{Error, Result};

/// Ordered gate list over `num_qubits` qubits.
///
/// Trainable gates own consecutive slices of the parameter vector in gate
/// order, so `param_count` is the number of trainable angles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircuitArchitecture {
    num_qubits: usize,
    gates: Vec<Gate>,
    param_count: usize,
}

impl CircuitArchitecture {
    pub fn new(num_qubits: usize) -> Self {
        CircuitArchitecture {
            num_qubits,
            gates: Vec::new(),
            param_count: 0,
        }
    }

    /// Builds from an explicit gate list, checking qubit ranges and that
    /// trainable offsets tile `0..param_count` in order.
    pub fn from_gates(num_qubits: usize, gates: Vec<Gate>) -> Result<Self> {
        let mut arch = CircuitArchitecture::new(num_qubits);
        for g in gates {
            g.validate(num_qubits)?;
            if let ParamSource::Trainable { offset } = g.params {
                if offset != arch.param_count && g.kind.param_count() > 0 {
                    return Err(Error::Config(format!(
                        "{} expects parameter offset {}, found {offset}",
                        g.kind, arch.param_count
                    )));
                }
            }
            arch.push_gate_unchecked(g);
        }
        Ok(arch)
    }

    fn push_gate_unchecked(&mut self, mut g: Gate) {
        if g.kind.param_count() == 0 {
            g.params = ParamSource::Trainable {
                offset: self.param_count,
            };
        }
        self.param_count += g.trainable_count();
        self.gates.push(g);
    }

    /// Appends a trainable gate with fresh parameter slots.
    pub fn push(&mut self, kind: GateKind, qubits: &[usize]) -> Result<()> {
        let g = Gate::trainable(kind, qubits, self.param_count);
        g.validate(self.num_qubits)?;
        self.push_gate_unchecked(g);
        Ok(())
    }

    /// Appends a gate with constant angles.
    pub fn push_fixed(&mut self, kind: GateKind, qubits: &[usize], angles: &[f64]) -> Result<()> {
        let g = Gate::fixed(kind, qubits, angles);
        g.validate(self.num_qubits)?;
        self.push_gate_unchecked(g);
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    pub fn param_count(&self) -> usize {
        self.param_count
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Copy without the gates at `remove` (indices into `gates()`), with the
    /// surviving trainable gates re-indexed.
    pub fn without_gates(&self, remove: &[usize]) -> CircuitArchitecture {
        let mut out = CircuitArchitecture::new(self.num_qubits);
        for (i, g) in self.gates.iter().enumerate() {
            if remove.contains(&i) {
                continue;
            }
            let mut g = g.clone();
            if let ParamSource::Trainable { offset } = &mut g.params {
                *offset = out.param_count;
            }
            out.push_gate_unchecked(g);
        }
        out
    }

    /// Concatenation; `other`'s trainable gates take slots after ours.
    pub fn extended(&self, other: &CircuitArchitecture) -> Result<CircuitArchitecture> {
        if other.num_qubits != self.num_qubits {
            return Err(Error::Dimension {
                expected: self.num_qubits,
                got: other.num_qubits,
            });
        }
        let mut out = self.clone();
        for g in &other.gates {
            let mut g = g.clone();
            if let ParamSource::Trainable { offset } = &mut g.params {
                *offset = out.param_count;
            }
            out.push_gate_unchecked(g);
        }
        Ok(out)
    }

    /// First two-qubit gate that sits on a disallowed pair.
    pub fn check_topology(&self, topology: &Topology) -> Result<()> {
        for g in &self.gates {
            if g.qubits.len() == 2 && !topology.allows(self.num_qubits, g.qubits[0], g.qubits[1]) {
                return Err(Error::Topology {
                    kind: g.kind.name(),
                    a: g.qubits[0],
                    b: g.qubits[1],
                });
            }
        }
        Ok(())
    }

    fn check_params(&self, params: &[f64]) -> Result<()> {
        if params.len() != self.param_count {
            return Err(Error::ParamCount {
                expected: self.param_count,
                got: params.len(),
            });
        }
        Ok(())
    }

    /// Applies the circuit to `state` in gate order.
    pub fn apply(&self, params: &[f64], state: &mut StateVector) -> Result<()> {
        self.check_params(params)?;
        if state.num_qubits() != self.num_qubits {
            return Err(Error::Dimension {
                expected: self.num_qubits,
                got: state.num_qubits(),
            });
        }
        for g in &self.gates {
            state.apply_gate(g, g.angles(params)?)?;
        }
        Ok(())
    }

    /// Returns `U(params)|state⟩`.
    pub fn run(&self, params: &[f64], state: &StateVector) -> Result<StateVector> {
        let mut out = state.clone();
        self.apply(params, &mut out)?;
        Ok(out)
    }

    /// Applies gates `from..` only.
    pub(crate) fn apply_suffix(
        &self,
        params: &[f64],
        from: usize,
        state: &mut StateVector,
    ) -> Result<()> {
        for g in &self.gates[from..] {
            state.apply_gate(g, g.angles(params)?)?;
        }
        Ok(())
    }

    /// Line-oriented text form:
    ///
    /// ```text
    /// qubits=2 params=4
    /// U3 0 @0
    /// RZ 1 @3
    /// CNOT 0,1
    /// RY 1 0.5
    /// ```
    ///
    /// `@k` marks a trainable gate reading from offset `k`; bare numbers are
    /// fixed angles, printed in shortest round-trip form.
    pub fn to_text(&self) -> String {
        let mut s = format!("qubits={} params={}\n", self.num_qubits, self.param_count);
        for g in &self.gates {
            let qs: Vec<String> = g.qubits.iter().map(|q| q.to_string()).collect();
            let _ = write!(s, "{} {}", g.kind, qs.join(","));
            match &g.params {
                ParamSource::Trainable { offset } if g.kind.param_count() > 0 => {
                    let _ = write!(s, " @{offset}");
                }
                ParamSource::Trainable { .. } => {}
                ParamSource::Fixed(angles) => {
                    for a in angles {
                        let _ = write!(s, " {a:?}");
                    }
                }
            }
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing header".into(),
        })?;
        let perr = |line: usize, msg: String| Error::Parse { line, msg };
        let mut qubits = None;
        let mut params = None;
        for tok in header.split_whitespace() {
            let (k, v) = tok
                .split_once('=')
                .ok_or_else(|| perr(hline, format!("bad header token '{tok}'")))?;
            let v: usize = v
                .parse()
                .map_err(|_| perr(hline, format!("bad header value '{tok}'")))?;
            match k {
                "qubits" => qubits = Some(v),
                "params" => params = Some(v),
                _ => return Err(perr(hline, format!("unknown header key '{k}'"))),
            }
        }
        let qubits = qubits.ok_or_else(|| perr(hline, "header lacks qubits=".into()))?;
        let params = params.ok_or_else(|| perr(hline, "header lacks params=".into()))?;

        let mut gates = Vec::new();
        for (ln, line) in lines {
            let mut toks = line.split_whitespace();
            let kind: GateKind = toks
                .next()
                .unwrap_or_default()
                .parse()
                .map_err(|e: Error| perr(ln, e.to_string()))?;
            let qs = toks
                .next()
                .ok_or_else(|| perr(ln, "missing qubits".into()))?
                .split(',')
                .map(|q| q.parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| perr(ln, "bad qubit list".into()))?;
            let rest: Vec<&str> = toks.collect();
            let source = match rest.as_slice() {
                [] if kind.param_count() == 0 => ParamSource::Trainable { offset: 0 },
                [one] if one.starts_with('@') => ParamSource::Trainable {
                    offset: one[1..]
                        .parse()
                        .map_err(|_| perr(ln, format!("bad offset '{one}'")))?,
                },
                angles => ParamSource::Fixed(
                    angles
                        .iter()
                        .map(|a| a.parse::<f64>())
                        .collect::<std::result::Result<Vec<_>, _>>()
                        .map_err(|_| perr(ln, "bad angle".into()))?,
                ),
            };
            let gate = Gate {
                kind,
                qubits: qs,
                params: source,
            };
            gate.validate(qubits).map_err(|e| perr(ln, e.to_string()))?;
            gates.push(gate);
        }
        let arch = CircuitArchitecture::from_gates(qubits, gates)?;
        if arch.param_count != params {
            return Err(perr(
                hline,
                format!("header says params={params}, gates use {}", arch.param_count),
            ));
        }
        Ok(arch)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> CircuitArchitecture {
        let mut a = CircuitArchitecture::new(3);
        a.push(GateKind::U3, &[0]).unwrap();
        a.push(GateKind::CNOT, &[0, 2]).unwrap();
        a.push(GateKind::CU3, &[2, 1]).unwrap();
        a.push_fixed(GateKind::RY, &[1], &[0.1 + 0.2]).unwrap();
        a.push(GateKind::ZZ, &[1, 2]).unwrap();
        a
    }

    #[test]
    fn param_count_is_sum_of_trainable_angles() {
        let a = sample();
        assert_eq!(a.param_count(), 3 + 3 + 1);
        assert_eq!(a.gate_count(), 5);
    }

    #[test]
    fn text_round_trip() {
        let a = sample();
        let text = a.to_text();
        assert!(text.starts_with("qubits=3 params=7\n"));
        let b = CircuitArchitecture::from_text(&text).unwrap();
        assert_eq!(a, b);
        assert_eq!(b.to_text(), text);
    }

    #[test]
    fn text_errors_carry_line_numbers() {
        let bad = "qubits=2 params=1\nRX 0 @0\nRY 5 @1\n";
        match CircuitArchitecture::from_text(bad) {
            Err(Error::Parse { line: 3, .. }) => {}
            other => panic!("{other:?}"),
        }
        let bad = "qubits=2 params=3\nRX 0 @0\n";
        assert!(CircuitArchitecture::from_text(bad).is_err());
    }

    #[test]
    fn deletion_reindexes() {
        let a = sample();
        let b = a.without_gates(&[0, 3]);
        assert_eq!(b.gate_count(), 3);
        assert_eq!(b.param_count(), 4);
        match b.gates()[1].params {
            ParamSource::Trainable { offset } => assert_eq!(offset, 0),
            _ => panic!(),
        }
        match b.gates()[2].params {
            ParamSource::Trainable { offset } => assert_eq!(offset, 3),
            _ => panic!(),
        }
        // still a valid architecture
        CircuitArchitecture::from_text(&b.to_text()).unwrap();
    }

    #[test]
    fn empty_circuit_leaves_state_unchanged() {
        let a = CircuitArchitecture::new(2);
        let s = StateVector::basis(2, 3);
        assert_eq!(a.run(&[], &s).unwrap(), s);
    }

    #[test]
    fn wrong_parameter_length() {
        let a = sample();
        assert!(matches!(
            a.run(&[0.0; 3], &StateVector::zero(3)),
            Err(Error::ParamCount { expected: 7, got: 3 })
        ));
    }

    #[test]
    fn topology_check() {
        let a = sample();
        assert!(a.check_topology(&Topology::Full).is_ok());
        let line = Topology::Explicit(vec![(0, 1), (1, 2)]);
        assert!(matches!(
            a.check_topology(&line),
            Err(Error::Topology { a: 0, b: 2, .. })
        ));
    }
}
