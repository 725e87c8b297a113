use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ntk::AmesConfig;
use crate::qsim::{GateKind, ReadoutSpec, Topology};

/// Parses `U3:0.5,CU3:0.5`, or one of the presets `u3_cu3` and `xx_yy_zz`.
pub fn parse_gate_probs(s: &str) -> Result<Vec<(GateKind, f64)>> {
    match s.trim() {
        "u3_cu3" => return Ok(u3_cu3()),
        "xx_yy_zz" => return Ok(xx_yy_zz()),
        _ => {}
    }
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|tok| {
            let (k, p) = tok
                .split_once(':')
                .ok_or_else(|| Error::Config(format!("expected KIND:prob, got '{tok}'")))?;
            let p: f64 = p
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("bad probability in '{tok}'")))?;
            Ok((k.trim().parse()?, p))
        })
        .collect()
}

pub fn format_gate_probs(probs: &[(GateKind, f64)]) -> String {
    probs
        .iter()
        .map(|(k, p)| format!("{k}:{p}"))
        .collect::<Vec<_>>()
        .join(",")
}

pub fn u3_cu3() -> Vec<(GateKind, f64)> {
    vec![(GateKind::U3, 0.5), (GateKind::CU3, 0.5)]
}

pub fn xx_yy_zz() -> Vec<(GateKind, f64)> {
    let third = 1.0 / 3.0;
    vec![(GateKind::XX, third), (GateKind::YY, third), (GateKind::ZZ, third)]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Scoring budget `FE`.
    pub max_evaluations: usize,
    pub widening_alpha: f64,
    pub beta0: f64,
    pub max_depth: usize,
    /// Children created per expansion, `B`.
    pub batch_children: usize,
    /// Upper end of the uniform gate count appended per child.
    pub max_gates_per_expansion: usize,
    pub gate_probs: Vec<(GateKind, f64)>,
    pub topology: Topology,
    pub rng_seed: u64,
    pub ames: AmesConfig,
    /// Widen only when `⌊N^α⌋ > |children|` instead of `≥`.
    pub widen_strict: bool,
}

impl SearchConfig {
    pub fn new(readout: ReadoutSpec) -> Self {
        SearchConfig {
            max_evaluations: 1000,
            widening_alpha: 0.5,
            beta0: 0.1,
            max_depth: 16,
            batch_children: 4,
            max_gates_per_expansion: 5,
            gate_probs: u3_cu3(),
            topology: Topology::Ring,
            rng_seed: 0,
            ames: AmesConfig::new(readout),
            widen_strict: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Config(m));
        if self.max_evaluations < 1 {
            return fail("max_evaluations must be >= 1".into());
        }
        if self.max_depth < 1 {
            return fail("max_depth must be >= 1".into());
        }
        if self.batch_children < 1 {
            return fail("batch_children must be >= 1".into());
        }
        if self.max_gates_per_expansion < 1 {
            return fail("max_gates_per_expansion must be >= 1".into());
        }
        if !(self.widening_alpha > 0.0 && self.widening_alpha <= 1.0) {
            return fail(format!("widening_alpha must be in (0, 1], got {}", self.widening_alpha));
        }
        if !(self.beta0 >= 0.0 && self.beta0.is_finite()) {
            return fail(format!("beta0 must be >= 0, got {}", self.beta0));
        }
        if self.gate_probs.is_empty() {
            return fail("gate_probs is empty".into());
        }
        if self.gate_probs.iter().any(|(_, p)| !(*p >= 0.0)) {
            return fail("gate probabilities must be >= 0".into());
        }
        let total: f64 = self.gate_probs.iter().map(|(_, p)| p).sum();
        if (total - 1.0).abs() > 1e-12 {
            return fail(format!("gate probabilities sum to {total}, not 1"));
        }
        if self.ames.batch_size == 0 {
            return fail("batch_size must be >= 1".into());
        }
        Ok(())
    }
}
