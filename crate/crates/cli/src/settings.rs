//! Flat `key = value` run configuration.
//!
//! Every command owns a fixed key table with defaults. A config file and
//! command-line flags can only set keys from that table, so the effective
//! settings map is always complete and doubles as the run snapshot.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Search,
    Score,
    Train,
    Correlate,
    QprGen,
    Synth,
}

impl Command {
    pub const ALL: [Command; 6] = [
        Command::Search,
        Command::Score,
        Command::Train,
        Command::Correlate,
        Command::QprGen,
        Command::Synth,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Search => "search",
            Command::Score => "score",
            Command::Train => "train",
            Command::Correlate => "correlate",
            Command::QprGen => "qpr-gen",
            Command::Synth => "synth",
        }
    }

    pub fn about(self) -> &'static str {
        match self {
            Command::Search => "Tree search for the circuit with the lowest AMES",
            Command::Score => "AMES score of one architecture file",
            Command::Train => "Train an architecture file and report accuracy",
            Command::Correlate => "AMES versus trained loss over random circuits",
            Command::QprGen => "Ground-state dataset of the cluster chain over a phase grid",
            Command::Synth => "Write a synthetic classification dataset",
        }
    }

    /// `(key, default, help)` for every setting the command reads.
    pub fn keys(self) -> Vec<(&'static str, &'static str, &'static str)> {
        let mut k = vec![("seed", "0", "master seed; every random stream derives from it")];
        let data = [
            ("task", "two_blobs", "synthetic task: two_blobs, xor_rings or four_blobs"),
            ("samples", "200", "synthetic sample count"),
            ("noise", "0.05", "synthetic Gaussian noise"),
            ("data", "", "dataset manifest to load instead of a synthetic task"),
            ("train_frac", "0.7", "training fraction of the random split"),
            ("val_frac", "0", "validation fraction of the random split"),
            ("readout", "", "class readout groups, e.g. 0,1/2,3 (task default when empty)"),
        ];
        let ames = [
            ("batch_size", "100", "AMES batch size"),
            ("loss_kind", "mse", "loss: mse or ce"),
            ("use_param_factor", "true", "divide AMES by the parameter count"),
        ];
        let train = [
            ("learning_rate", "0.005", "Adam base learning rate"),
            ("epochs", "200", "training epochs"),
            ("train_batch_size", "", "training mini-batch size (full batch when empty)"),
            ("gradient_mode", "adjoint", "adjoint, parameter_shift or finite_difference"),
            ("fd_step", "0.0001", "finite-difference step"),
        ];
        let gates = [
            ("gate_probs", "u3_cu3", "gate distribution: u3_cu3, xx_yy_zz or KIND:p,..."),
            ("topology", "ring", "ring, full, ibmq_quito or an edge list 0-1;1-2"),
        ];
        match self {
            Command::Search => {
                k.extend(data);
                k.extend(ames);
                k.extend([
                    ("max_evaluations", "1000", "AMES evaluation budget"),
                    ("widening_alpha", "0.5", "progressive widening exponent"),
                    ("beta0", "0.1", "initial exploration weight"),
                    ("max_depth", "16", "maximum tree depth"),
                    ("batch_children", "4", "children per expansion"),
                    ("max_gates_per_expansion", "5", "maximum gates appended per child"),
                    ("widen_strict", "false", "widen only when floor(N^alpha) > children"),
                    ("train_best", "false", "train the best circuit after the search"),
                ]);
                k.extend(gates);
                k.extend(train);
            }
            Command::Score => {
                k.push(("arch", "", "architecture file"));
                k.extend(data);
                k.extend(ames);
            }
            Command::Train => {
                k.push(("arch", "", "architecture file"));
                k.extend(data);
                k.push(("loss_kind", "mse", "loss: mse or ce"));
                k.extend(train);
            }
            Command::Correlate => {
                k.extend(data);
                k.extend(ames);
                k.extend([
                    ("circuits", "30", "number of random circuits"),
                    ("min_gates", "10", "smallest gate count"),
                    ("max_gates", "60", "largest gate count"),
                ]);
                k.extend(gates);
                k.extend(train.map(|t| if t.0 == "epochs" { ("epochs", "100", t.2) } else { t }));
            }
            Command::QprGen => k.extend([
                ("grid", "", "grid file of j1,j2,label rows"),
                ("sites", "8", "chain length N"),
                ("per_spec", "1", "copies of each ground state"),
            ]),
            Command::Synth => {
                k.extend(data.iter().copied().filter(|d| d.0 != "data" && d.0 != "readout"));
            }
        }
        k
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| CliError::Config(format!("unknown command '{s}'")))
    }
}

/// Effective settings of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    command: Command,
    values: BTreeMap<String, String>,
}

impl Settings {
    pub fn new(command: Command) -> Self {
        let values = command
            .keys()
            .into_iter()
            .map(|(k, v, _)| (k.to_string(), v.to_string()))
            .collect();
        Settings { command, values }
    }

    pub fn command(&self) -> Command {
        self.command
    }

    pub fn values(&self) -> &BTreeMap<String, String> {
        &self.values
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match self.values.get_mut(key) {
            Some(v) => {
                *v = value.trim().to_string();
                Ok(())
            }
            None => Err(CliError::Config(format!(
                "'{key}' is not a setting of '{}'",
                self.command
            ))),
        }
    }

    /// Applies `key = value` lines; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                CliError::Config(format!("line {}: expected key = value, got '{line}'", i + 1))
            })?;
            self.set(k.trim(), v)?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        self.apply_text(&text)
    }

    pub fn to_text(&self) -> String {
        self.values.iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }

    pub fn raw(&self, key: &str) -> &str {
        self.values
            .get(key)
            .unwrap_or_else(|| panic!("'{key}' is not in the key table of '{}'", self.command))
    }

    /// `None` when the value is empty.
    pub fn opt<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: fmt::Display,
    {
        let raw = self.raw(key);
        if raw.is_empty() {
            return Ok(None);
        }
        raw.parse()
            .map(Some)
            .map_err(|e| CliError::Config(format!("{key} = '{raw}': {e}")))
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<T>
    where
        T::Err: fmt::Display,
    {
        self.opt(key)?
            .ok_or_else(|| CliError::Config(format!("'{key}' must be set")))
    }
}
