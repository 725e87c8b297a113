//! Monte Carlo tree search over circuit architectures.
//!
//! Each node holds a circuit. A search iteration descends by UCT (widening
//! visited nodes as their visit counts grow), expands the reached node into
//! `B` children that each append a random number of sampled gates, scores the
//! children with AMES (`Q = −score`), and propagates `Q = max` and `N = Σ`
//! back to the root. The best circuit is the lowest score ever evaluated.

mod config;
mod search;
mod tree;

pub use config::{format_gate_probs, parse_gate_probs, u3_cu3, xx_yy_zz, SearchConfig};
pub use search::{run_search, BetaPoint, Search, SearchReport, TraceRow};
pub use tree::{NodeOrigin, SearchNode, SearchTree};

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng as _;

use crate::error::{Error, Result};
use crate::qsim::{CircuitArchitecture, GateKind, Topology};
use crate::rng::Rng;

/// Draws of a gate kind before giving up on placing a two-qubit gate.
const PLACEMENT_RETRIES: usize = 16;

/// Normalized exploitation plus decayed exploration bonus.
///
/// A child whose `Q` is not finite (an unscoreable circuit) gets no
/// exploitation credit.
pub fn uct_value(
    child_q: f64,
    child_n: u64,
    parent_n: u64,
    q_min: f64,
    q_max: f64,
    beta: f64,
) -> Result<f64> {
    if child_n == 0 {
        return Err(Error::Config("UCT of an unvisited child".into()));
    }
    let exploit = if !child_q.is_finite() {
        0.0
    } else if q_max > q_min {
        (child_q - q_min) / (q_max - q_min)
    } else {
        0.5
    };
    let explore = beta * (((parent_n + 1) as f64).ln() / child_n as f64).sqrt();
    Ok(exploit + explore)
}

pub fn uct(child: &SearchNode, parent: &SearchNode, q_min: f64, q_max: f64, beta: f64) -> Result<f64> {
    uct_value(child.quality, child.visits, parent.visits, q_min, q_max, beta)
}

/// `β = β0·(FE − fe)/FE`.
pub fn beta_schedule(beta0: f64, max_evaluations: usize, fe: usize) -> Result<f64> {
    if fe > max_evaluations {
        return Err(Error::Config(format!(
            "fe = {fe} exceeds the budget {max_evaluations}"
        )));
    }
    Ok(beta0 * (max_evaluations - fe) as f64 / max_evaluations as f64)
}

/// Whether a node with `visits` and `children` may grow another child.
pub fn widening_allowed(visits: u64, children: usize, alpha: f64, strict: bool) -> bool {
    let k = (visits as f64).powf(alpha).floor() as usize;
    if strict {
        k > children
    } else {
        k >= children
    }
}

/// Samples one gate kind and placement and appends it to `arch`. Two-qubit
/// gates use a uniformly chosen allowed edge in a random orientation. Returns
/// `false` when no gate could be placed.
pub fn append_random_gate(
    arch: &mut CircuitArchitecture,
    probs: &[(GateKind, f64)],
    topology: &Topology,
    rng: &mut Rng,
) -> Result<bool> {
    let dist = WeightedIndex::new(probs.iter().map(|(_, p)| *p))
        .map_err(|e| Error::Config(format!("gate probabilities: {e}")))?;
    let d = arch.num_qubits();
    let edges = topology.edges(d);
    for _ in 0..PLACEMENT_RETRIES {
        let kind = probs[dist.sample(rng)].0;
        if kind.arity() == 1 {
            let q = rng.random_range(0..d);
            arch.push(kind, &[q])?;
            return Ok(true);
        }
        if edges.is_empty() {
            continue;
        }
        let (a, b) = edges[rng.random_range(0..edges.len())];
        let pair = if rng.random::<bool>() { [a, b] } else { [b, a] };
        arch.push(kind, &pair)?;
        return Ok(true);
    }
    Ok(false)
}

/// A circuit of `gates` sampled gates; fewer if placement keeps failing.
pub fn random_circuit(
    num_qubits: usize,
    gates: usize,
    probs: &[(GateKind, f64)],
    topology: &Topology,
    rng: &mut Rng,
) -> Result<CircuitArchitecture> {
    let mut arch = CircuitArchitecture::new(num_qubits);
    for _ in 0..gates {
        append_random_gate(&mut arch, probs, topology, rng)?;
    }
    Ok(arch)
}
