use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

/// Tensor product of single-qubit Paulis; `factors[q]` acts on qubit `q`.
/// Qubits beyond `factors.len()` carry the identity.
///
/// Every such string squares to the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliObservable {
    factors: Vec<Pauli>,
}

impl PauliObservable {
    pub fn new(factors: Vec<Pauli>) -> Self {
        PauliObservable { factors }
    }

    /// A single Pauli `p` on qubit `q`.
    pub fn single(p: Pauli, q: usize) -> Self {
        let mut factors = vec![Pauli::I; q + 1];
        factors[q] = p;
        PauliObservable { factors }
    }

    pub fn z(q: usize) -> Self {
        Self::single(Pauli::Z, q)
    }

    pub fn factors(&self) -> &[Pauli] {
        &self.factors
    }

    /// Qubit span.
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// `(flip mask, phase mask, number of Y factors)`.
    pub(crate) fn masks(&self) -> (usize, usize, usize) {
        let mut flip = 0;
        let mut z = 0;
        let mut ys = 0;
        for (q, p) in self.factors.iter().enumerate() {
            match p {
                Pauli::I => {}
                Pauli::X => flip |= 1 << q,
                Pauli::Z => z |= 1 << q,
                Pauli::Y => {
                    flip |= 1 << q;
                    z |= 1 << q;
                    ys += 1;
                }
            }
        }
        (flip, z, ys)
    }
}

impl FromStr for PauliObservable {
    type Err = Error;

    /// Parses strings like `"ZIX"`; character `q` is the factor on qubit `q`.
    fn from_str(s: &str) -> Result<Self> {
        let factors = s
            .trim()
            .chars()
            .map(|c| match c.to_ascii_uppercase() {
                'I' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                other => Err(Error::Config(format!("invalid Pauli factor '{other}'"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PauliObservable { factors })
    }
}

impl fmt::Display for PauliObservable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.factors {
            let c = match p {
                Pauli::I => 'I',
                Pauli::X => 'X',
                Pauli::Y => 'Y',
                Pauli::Z => 'Z',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}
