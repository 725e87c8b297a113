use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which qubit pairs two-qubit gates may act on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Topology {
    /// All-to-all.
    Full,
    /// `(i, (i + 1) mod d)`.
    Ring,
    /// Undirected edge list.
    Explicit(Vec<(usize, usize)>),
}

impl Topology {
    /// Coupling map of the 5-qubit `ibmq_quito` device.
    pub fn ibmq_quito() -> Self {
        Topology::Explicit(vec![(0, 1), (1, 2), (1, 3), (3, 4)])
    }

    /// Undirected allowed pairs `(a, b)` with `a < b`, sorted.
    pub fn edges(&self, num_qubits: usize) -> Vec<(usize, usize)> {
        let mut set = BTreeSet::new();
        match self {
            Topology::Full => {
                for a in 0..num_qubits {
                    for b in a + 1..num_qubits {
                        set.insert((a, b));
                    }
                }
            }
            Topology::Ring => {
                if num_qubits >= 2 {
                    for i in 0..num_qubits {
                        let j = (i + 1) % num_qubits;
                        set.insert((i.min(j), i.max(j)));
                    }
                }
            }
            Topology::Explicit(edges) => {
                for &(a, b) in edges {
                    if a != b && a < num_qubits && b < num_qubits {
                        set.insert((a.min(b), a.max(b)));
                    }
                }
            }
        }
        set.into_iter().collect()
    }

    pub fn allows(&self, num_qubits: usize, a: usize, b: usize) -> bool {
        if a == b || a >= num_qubits || b >= num_qubits {
            return false;
        }
        match self {
            Topology::Full => true,
            Topology::Ring => {
                let d = num_qubits;
                (a + 1) % d == b || (b + 1) % d == a
            }
            Topology::Explicit(edges) => edges
                .iter()
                .any(|&(x, y)| (x, y) == (a, b) || (y, x) == (a, b)),
        }
    }
}

impl FromStr for Topology {
    type Err = Error;

    /// `full`, `ring`, `ibmq_quito`, or an explicit list `0-1;1-2;...`.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "full" => Ok(Topology::Full),
            "ring" => Ok(Topology::Ring),
            "ibmq_quito" | "quito" => Ok(Topology::ibmq_quito()),
            other => {
                let mut edges = Vec::new();
                for part in other.split(';').filter(|p| !p.trim().is_empty()) {
                    let (a, b) = part
                        .split_once('-')
                        .ok_or_else(|| Error::Config(format!("bad edge '{part}'")))?;
                    let parse = |x: &str| {
                        x.trim()
                            .parse::<usize>()
                            .map_err(|_| Error::Config(format!("bad edge '{part}'")))
                    };
                    edges.push((parse(a)?, parse(b)?));
                }
                if edges.is_empty() {
                    return Err(Error::Config(format!("unknown topology '{other}'")));
                }
                Ok(Topology::Explicit(edges))
            }
        }
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Topology::Full => f.write_str("full"),
            Topology::Ring => f.write_str("ring"),
            Topology::Explicit(edges) => {
                let parts: Vec<String> = edges.iter().map(|(a, b)| format!("{a}-{b}")).collect();
                f.write_str(&parts.join(";"))
            }
        }
    }
}
