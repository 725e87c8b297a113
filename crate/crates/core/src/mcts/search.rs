use rand::seq::index;
use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::tree::{NodeOrigin, SearchTree};
use super::{append_random_gate, beta_schedule, uct, widening_allowed, SearchConfig};
use crate::datagen::Dataset;
use crate::error::{Error, Result};
use crate::ntk::{score_ames, AmesConfig, AmesScore};
use crate::qsim::CircuitArchitecture;
use crate::rng::{self, Rng};

/// One scored circuit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    /// 1-based evaluation counter.
    pub fe: usize,
    pub node: usize,
    pub ames: f64,
    pub lambda_min: f64,
    pub initial_loss: f64,
    pub param_count: usize,
    pub depth: usize,
    pub gates: usize,
    pub origin: NodeOrigin,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaPoint {
    pub fe: usize,
    pub beta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub best: Option<CircuitArchitecture>,
    pub best_score: Option<AmesScore>,
    pub best_node: Option<usize>,
    pub trace: Vec<TraceRow>,
    /// `β` at the start of every iteration, closed by `(FE, 0)`.
    pub beta_trace: Vec<BetaPoint>,
    pub evaluations: usize,
    /// Evaluations beyond `FE` spent by the final batch.
    pub overshoot: usize,
    pub tree: SearchTree,
}

/// Search state. The step methods are public so that each phase can be
/// driven and inspected on its own.
pub struct Search<'a> {
    pub config: SearchConfig,
    pub tree: SearchTree,
    pub fe: usize,
    dataset: &'a Dataset,
    ames: AmesConfig,
    rng: Rng,
    trace: Vec<TraceRow>,
    beta_trace: Vec<BetaPoint>,
    best: Option<(usize, AmesScore)>,
}

impl<'a> Search<'a> {
    pub fn new(dataset: &'a Dataset, config: SearchConfig) -> Result<Self> {
        config.validate()?;
        if dataset.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let mut ames = config.ames.clone();
        ames.seed = rng::substream(config.rng_seed, "ames");
        Ok(Search {
            tree: SearchTree::new(CircuitArchitecture::new(dataset.num_qubits())),
            fe: 0,
            dataset,
            ames,
            rng: rng::named(config.rng_seed, "search"),
            trace: Vec::new(),
            beta_trace: Vec::new(),
            best: None,
            config,
        })
    }

    pub fn beta(&self) -> f64 {
        beta_schedule(self.config.beta0, self.config.max_evaluations, self.fe.min(self.config.max_evaluations))
            .expect("fe clamped to budget")
    }

    fn descend_candidates(&self, node: usize) -> Vec<usize> {
        self.tree.nodes[node]
            .children
            .iter()
            .copied()
            .filter(|&c| self.tree.nodes[c].depth < self.config.max_depth)
            .collect()
    }

    /// Descends from the root by UCT, widening each internal node on the way.
    /// Stops at a leaf, or at a node whose children all sit at the depth cap.
    pub fn select(&mut self, beta: f64) -> Result<usize> {
        let mut cur = 0;
        loop {
            if self.tree.nodes[cur].is_leaf() {
                return Ok(cur);
            }
            self.progressive_widen(cur)?;
            let cands = self.descend_candidates(cur);
            if cands.is_empty() {
                return Ok(cur);
            }
            let parent = &self.tree.nodes[cur];
            let mut best = cands[0];
            let mut best_v = f64::NEG_INFINITY;
            for &c in &cands {
                let v = uct(&self.tree.nodes[c], parent, self.tree.q_min, self.tree.q_max, beta)?;
                if v > best_v {
                    best_v = v;
                    best = c;
                }
            }
            cur = best;
        }
    }

    /// Adds `B` children, each extending the node's circuit by `H ~ U{1..L}`
    /// sampled gates. Returns the new node ids (not yet scored).
    pub fn expand(&mut self, node: usize) -> Result<Vec<usize>> {
        let depth = self.tree.nodes[node].depth;
        if depth >= self.config.max_depth {
            return Err(Error::Config(format!(
                "cannot expand node {node} at depth {depth} (limit {})",
                self.config.max_depth
            )));
        }
        let mut ids = Vec::with_capacity(self.config.batch_children);
        for _ in 0..self.config.batch_children {
            let h = self.rng.random_range(1..=self.config.max_gates_per_expansion);
            let mut arch = self.tree.nodes[node].arch.clone();
            for _ in 0..h {
                append_random_gate(&mut arch, &self.config.gate_probs, &self.config.topology, &mut self.rng)?;
            }
            ids.push(self.tree.add_child(node, arch, NodeOrigin::Expansion));
        }
        Ok(ids)
    }

    /// Scores the given leaves. A scoring failure gives the child `Q = −∞`
    /// instead of stopping the search.
    pub fn simulate(&mut self, ids: &[usize]) {
        let scores: Vec<Result<AmesScore>> = ids
            .par_iter()
            .map(|&i| score_ames(&self.tree.nodes[i].arch, self.dataset, &self.ames))
            .collect();
        for (&id, score) in ids.iter().zip(scores) {
            self.fe += 1;
            let score = score.ok();
            let q = score.map_or(f64::NEG_INFINITY, |s| -s.value);
            self.tree.record(id, q, score);
            let node = &self.tree.nodes[id];
            let s = score.unwrap_or_else(|| AmesScore::unscoreable(self.ames.seed, self.ames.use_param_factor));
            self.trace.push(TraceRow {
                fe: self.fe,
                node: id,
                ames: s.value,
                lambda_min: s.lambda_min,
                initial_loss: s.initial_loss,
                param_count: node.arch.param_count(),
                depth: node.depth,
                gates: node.arch.gate_count(),
                origin: node.origin,
            });
            if s.value.is_finite() && self.best.as_ref().is_none_or(|(_, b)| s.value < b.value) {
                self.best = Some((id, s));
            }
        }
    }

    pub fn backpropagate(&mut self, node: usize) {
        self.tree.backpropagate(node);
    }

    /// Grows one extra child of an internal node when its visit count allows
    /// it: half the time by deleting `k ~ U{1..gates}` gates, otherwise by
    /// appending one sampled gate. The child is scored and propagated at
    /// once. Skipped when it would use the last unit of budget.
    pub fn progressive_widen(&mut self, node: usize) -> Result<Option<usize>> {
        let n = &self.tree.nodes[node];
        if n.is_leaf()
            || n.depth >= self.config.max_depth
            || self.fe + 1 >= self.config.max_evaluations
            || !widening_allowed(n.visits, n.children.len(), self.config.widening_alpha, self.config.widen_strict)
        {
            return Ok(None);
        }
        let parent_arch = n.arch.clone();
        let delete = self.rng.random::<bool>() && !parent_arch.is_empty();
        let (arch, origin) = if delete {
            let g = parent_arch.gate_count();
            let k = self.rng.random_range(1..=g);
            let mut drop = index::sample(&mut self.rng, g, k).into_vec();
            drop.sort_unstable();
            (parent_arch.without_gates(&drop), NodeOrigin::WidenDelete)
        } else {
            let mut a = parent_arch;
            append_random_gate(&mut a, &self.config.gate_probs, &self.config.topology, &mut self.rng)?;
            (a, NodeOrigin::WidenAdd)
        };
        let id = self.tree.add_child(node, arch, origin);
        self.simulate(&[id]);
        self.backpropagate(node);
        Ok(Some(id))
    }

    /// One select → expand → simulate → backpropagate round.
    pub fn step(&mut self) -> Result<()> {
        let beta = self.beta();
        self.beta_trace.push(BetaPoint { fe: self.fe, beta });
        let node = self.select(beta)?;
        let children = self.expand(node)?;
        self.simulate(&children);
        self.backpropagate(node);
        Ok(())
    }

    pub fn run(mut self) -> Result<SearchReport> {
        while self.fe < self.config.max_evaluations {
            self.step()?;
        }
        let fe_cap = self.config.max_evaluations;
        self.beta_trace.push(BetaPoint {
            fe: fe_cap,
            beta: beta_schedule(self.config.beta0, fe_cap, fe_cap)?,
        });
        let (best_node, best_score) = match self.best {
            Some((i, s)) => (Some(i), Some(s)),
            None => (None, None),
        };
        Ok(SearchReport {
            best: best_node.map(|i| self.tree.nodes[i].arch.clone()),
            best_score,
            best_node,
            evaluations: self.fe,
            overshoot: self.fe.saturating_sub(fe_cap),
            trace: self.trace,
            beta_trace: self.beta_trace,
            tree: self.tree,
        })
    }
}

/// Runs the search to its evaluation budget.
pub fn run_search(dataset: &Dataset, config: &SearchConfig) -> Result<SearchReport> {
    Search::new(dataset, config.clone())?.run()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datagen::{synth_dataset, SynthKind};

    fn small() -> (Dataset, SearchConfig) {
        let ds = synth_dataset(SynthKind::XorRings, 40, 0.05, 0).unwrap();
        let mut cfg = SearchConfig::new(SynthKind::XorRings.default_readout());
        cfg.ames.batch_size = 20;
        (ds, cfg)
    }

    #[test]
    fn budget_of_one_is_one_batch() {
        let (ds, mut cfg) = small();
        cfg.max_evaluations = 1;
        let r = run_search(&ds, &cfg).unwrap();
        assert_eq!(r.evaluations, 4);
        assert_eq!(r.overshoot, 3);
        assert!(r.best.is_some());
    }

    #[test]
    fn deterministic_under_seed() {
        let (ds, mut cfg) = small();
        cfg.max_evaluations = 30;
        cfg.rng_seed = 9;
        let a = run_search(&ds, &cfg).unwrap();
        let b = run_search(&ds, &cfg).unwrap();
        assert_eq!(a.trace, b.trace);
        assert_eq!(a.best, b.best);
    }

    #[test]
    fn tree_stays_consistent() {
        let (ds, mut cfg) = small();
        cfg.max_evaluations = 60;
        cfg.max_depth = 3;
        let r = run_search(&ds, &cfg).unwrap();
        assert!(r.evaluations >= 60 && r.evaluations <= 63);
        assert_eq!(r.tree.audit(3, &cfg.topology), Vec::<String>::new());
        let last = r.beta_trace.last().unwrap();
        assert_eq!((last.fe, last.beta), (60, 0.0));
    }

    #[test]
    fn expand_refuses_depth_cap() {
        let (ds, mut cfg) = small();
        cfg.max_depth = 1;
        let mut s = Search::new(&ds, cfg).unwrap();
        let kids = s.expand(0).unwrap();
        assert!(s.expand(kids[0]).is_err());
    }
}
