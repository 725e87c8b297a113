use serde::{Deserialize, Serialize};

use crate::ntk::AmesScore;
use crate::qsim::{CircuitArchitecture, Topology};

/// How a node came to exist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NodeOrigin {
    Root,
    Expansion,
    WidenDelete,
    WidenAdd,
}

impl NodeOrigin {
    pub fn name(self) -> &'static str {
        match self {
            NodeOrigin::Root => "root",
            NodeOrigin::Expansion => "expand",
            NodeOrigin::WidenDelete => "widen_delete",
            NodeOrigin::WidenAdd => "widen_add",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchNode {
    pub arch: CircuitArchitecture,
    /// `Q`: negated AMES for leaves, max over children for internal nodes.
    pub quality: f64,
    /// `N`: 1 for a scored leaf, sum over children for internal nodes.
    pub visits: u64,
    pub children: Vec<usize>,
    pub parent: Option<usize>,
    pub depth: usize,
    pub origin: NodeOrigin,
    pub score: Option<AmesScore>,
    /// `Q` assigned when the node was simulated.
    pub simulated_q: Option<f64>,
}

impl SearchNode {
    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }
}

/// Arena-backed search tree; node 0 is the root.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchTree {
    pub nodes: Vec<SearchNode>,
    pub q_min: f64,
    pub q_max: f64,
}

impl SearchTree {
    pub fn new(root: CircuitArchitecture) -> Self {
        SearchTree {
            nodes: vec![SearchNode {
                arch: root,
                quality: f64::NEG_INFINITY,
                visits: 0,
                children: Vec::new(),
                parent: None,
                depth: 0,
                origin: NodeOrigin::Root,
                score: None,
                simulated_q: None,
            }],
            q_min: f64::INFINITY,
            q_max: f64::NEG_INFINITY,
        }
    }

    pub fn root(&self) -> &SearchNode {
        &self.nodes[0]
    }

    pub fn node(&self, i: usize) -> &SearchNode {
        &self.nodes[i]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn add_child(&mut self, parent: usize, arch: CircuitArchitecture, origin: NodeOrigin) -> usize {
        let id = self.nodes.len();
        let depth = self.nodes[parent].depth + 1;
        self.nodes.push(SearchNode {
            arch,
            quality: f64::NEG_INFINITY,
            visits: 0,
            children: Vec::new(),
            parent: Some(parent),
            depth,
            origin,
            score: None,
            simulated_q: None,
        });
        self.nodes[parent].children.push(id);
        id
    }

    /// Records a simulated leaf and folds its `Q` into the global extremes.
    pub fn record(&mut self, id: usize, quality: f64, score: Option<AmesScore>) {
        let n = &mut self.nodes[id];
        n.quality = quality;
        n.visits = 1;
        n.score = score;
        n.simulated_q = Some(quality);
        if quality.is_finite() {
            self.q_min = self.q_min.min(quality);
            self.q_max = self.q_max.max(quality);
        }
    }

    /// Recomputes `Q = max` and `N = Σ` over children from `id` up to the root.
    pub fn backpropagate(&mut self, id: usize) {
        let mut cur = Some(id);
        while let Some(i) = cur {
            if !self.nodes[i].children.is_empty() {
                let (q, n) = self.aggregate(i);
                self.nodes[i].quality = q;
                self.nodes[i].visits = n;
            }
            cur = self.nodes[i].parent;
        }
    }

    fn aggregate(&self, i: usize) -> (f64, u64) {
        let mut q = f64::NEG_INFINITY;
        let mut n = 0;
        for &c in &self.nodes[i].children {
            q = q.max(self.nodes[c].quality);
            n += self.nodes[c].visits;
        }
        (q, n)
    }

    /// Full consistency scan; returns every violation found.
    pub fn audit(&self, max_depth: usize, topology: &Topology) -> Vec<String> {
        let mut issues = Vec::new();
        let mut q_min = f64::INFINITY;
        let mut q_max = f64::NEG_INFINITY;
        for (i, n) in self.nodes.iter().enumerate() {
            if n.depth > max_depth {
                issues.push(format!("node {i} has depth {} > {max_depth}", n.depth));
            }
            match n.parent {
                None if i != 0 => issues.push(format!("node {i} has no parent")),
                Some(p) => {
                    if self.nodes[p].depth + 1 != n.depth {
                        issues.push(format!("node {i} depth does not follow its parent"));
                    }
                    if !self.nodes[p].children.contains(&i) {
                        issues.push(format!("node {i} missing from its parent's children"));
                    }
                }
                None => {}
            }
            if let Err(e) = n.arch.check_topology(topology) {
                issues.push(format!("node {i}: {e}"));
            }
            if let Some(q) = n.simulated_q.filter(|q| q.is_finite()) {
                q_min = q_min.min(q);
                q_max = q_max.max(q);
            }
            if n.children.is_empty() {
                if i != 0 && n.visits < 1 {
                    issues.push(format!("leaf {i} was never simulated"));
                }
            } else {
                let (q, v) = self.aggregate(i);
                if q != n.quality {
                    issues.push(format!("node {i}: Q = {} but max over children is {q}", n.quality));
                }
                if v != n.visits {
                    issues.push(format!("node {i}: N = {} but children sum to {v}", n.visits));
                }
            }
        }
        if q_min != self.q_min || q_max != self.q_max {
            issues.push(format!(
                "tracked extremes ({}, {}) differ from scan ({q_min}, {q_max})",
                self.q_min, self.q_max
            ));
        }
        issues
    }
}
