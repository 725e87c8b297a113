//! Generalized cluster chain and its ground states, the quantum-phase
//! recognition inputs.
//!
//! `H = Σ_j ( Z_j − J1·X_j X_{j+1} − J2·X_{j−1} Z_j X_{j+1} )` with periodic
//! indices. Site `j` is qubit `j` (bit `j` of the basis index). Every term is
//! real in the computational basis, so `H` is a real symmetric matrix.

use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::dataset::{Dataset, InputEncoding};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, SymmetricEigen};

/// Largest chain built as a dense matrix.
pub const MAX_DENSE_SITES: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClusterHamiltonianSpec {
    pub num_sites: usize,
    pub j1: f64,
    pub j2: f64,
}

/// Sign and image of a basis state under a product of `X`/`Z` factors,
/// applied right to left.
fn apply_xz(mut state: usize, ops: &[(char, usize)]) -> (usize, f64) {
    let mut sign = 1.0;
    for &(p, site) in ops.iter().rev() {
        match p {
            'X' => state ^= 1 << site,
            'Z' => {
                if state >> site & 1 == 1 {
                    sign = -sign;
                }
            }
            _ => unreachable!(),
        }
    }
    (state, sign)
}

pub fn build_cluster_hamiltonian(spec: &ClusterHamiltonianSpec) -> Result<Matrix> {
    let n = spec.num_sites;
    if n < 2 {
        return Err(Error::Config(format!("cluster chain needs >= 2 sites, got {n}")));
    }
    if n > MAX_DENSE_SITES {
        return Err(Error::TooLarge(n));
    }
    let dim = 1usize << n;
    let mut h = Matrix::zeros(dim);
    for b in 0..dim {
        for j in 0..n {
            let next = (j + 1) % n;
            let prev = (j + n - 1) % n;
            let terms: [(f64, &[(char, usize)]); 3] = [
                (1.0, &[('Z', j)]),
                (-spec.j1, &[('X', j), ('X', next)]),
                (-spec.j2, &[('X', prev), ('Z', j), ('X', next)]),
            ];
            for (coef, ops) in terms {
                if coef == 0.0 {
                    continue;
                }
                let (to, sign) = apply_xz(b, ops);
                h.set(to, b, h.get(to, b) + coef * sign);
            }
        }
    }
    Ok(h)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundState {
    pub energy: f64,
    /// Unit vector, first non-negligible amplitude positive.
    pub vector: Vec<f64>,
    pub gap: f64,
    /// Set when the gap to the next level is below `1e-10`; the lowest-index
    /// eigenvector is returned anyway.
    pub degenerate: bool,
}

pub fn ground_state(spec: &ClusterHamiltonianSpec) -> Result<GroundState> {
    let h = build_cluster_hamiltonian(spec)?;
    let eig = SymmetricEigen::new(&h)?;
    let energy = eig.values[0];
    let gap = eig.values.get(1).map_or(f64::INFINITY, |e| e - energy);
    let mut vector = eig.vectors[0].clone();
    if let Some(first) = vector.iter().find(|v| v.abs() > 1e-12) {
        if *first < 0.0 {
            vector.iter_mut().for_each(|v| *v = -*v);
        }
    }
    Ok(GroundState {
        energy,
        vector,
        gap,
        degenerate: gap < 1e-10,
    })
}

/// One row of a phase grid file.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub j1: f64,
    pub j2: f64,
    pub label: usize,
}

/// Parses `j1,j2,label` lines; blank lines, `#` comments and a leading
/// header are skipped.
pub fn parse_grid(text: &str) -> Result<Vec<GridPoint>> {
    let mut out = Vec::new();
    let mut seen_data = false;
    for (i, raw) in text.lines().enumerate() {
        let row = raw.trim();
        if row.is_empty() || row.starts_with('#') {
            continue;
        }
        let cells: Vec<&str> = row.split(',').map(str::trim).collect();
        let parsed = (|| {
            if cells.len() != 3 {
                return None;
            }
            Some(GridPoint {
                j1: cells[0].parse().ok()?,
                j2: cells[1].parse().ok()?,
                label: cells[2].parse().ok()?,
            })
        })();
        match parsed {
            Some(p) => {
                seen_data = true;
                out.push(p);
            }
            None if !seen_data && out.is_empty() && cells.len() == 3 => {}
            None => {
                return Err(Error::Parse {
                    line: i + 1,
                    msg: format!("expected 'j1,j2,label', got '{row}'"),
                })
            }
        }
    }
    Ok(out)
}

pub fn load_grid(path: impl AsRef<Path>) -> Result<Vec<GridPoint>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })?;
    parse_grid(&text)
}

/// Ground states for every grid point, `per_spec` copies each, as an
/// amplitude-encoded dataset on `num_sites` qubits. Also returns the solved
/// ground states in grid order.
pub fn qpr_dataset(
    grid: &[GridPoint],
    num_sites: usize,
    per_spec: usize,
) -> Result<(Dataset, Vec<GroundState>)> {
    if grid.is_empty() || per_spec == 0 {
        return Err(Error::EmptyDataset);
    }
    let states: Vec<GroundState> = grid
        .par_iter()
        .map(|p| {
            ground_state(&ClusterHamiltonianSpec {
                num_sites,
                j1: p.j1,
                j2: p.j2,
            })
        })
        .collect::<Result<_>>()?;
    let classes = (grid.iter().map(|p| p.label).max().unwrap() + 1).max(2);
    let mut features = Vec::with_capacity(grid.len() * per_spec);
    let mut labels = Vec::with_capacity(grid.len() * per_spec);
    for (p, g) in grid.iter().zip(&states) {
        for _ in 0..per_spec {
            features.push(g.vector.clone());
            labels.push(p.label);
        }
    }
    let ds = Dataset::new(features, labels, classes, num_sites, InputEncoding::Amplitude)?;
    Ok((ds, states))
}
