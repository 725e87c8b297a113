//! Command implementations. Each writes its artifacts into the output
//! directory and returns their names together with a JSON summary.

use std::fmt::Write as _;
use std::path::Path;

use serde_json::{json, Value};

use qnas_core::datagen::{
    load_grid, load_manifest, qpr_dataset, save_with_manifest, synth_dataset, Dataset, SynthKind,
};
use qnas_core::loss::LossKind;
use qnas_core::mcts::{parse_gate_probs, run_search, SearchConfig};
use qnas_core::ntk::{score_ames, AmesConfig};
use qnas_core::qsim::{CircuitArchitecture, ReadoutSpec, Topology};
use qnas_core::rng;
use qnas_core::trainer::{train, GradientMode, TrainConfig, TrainResult};

use crate::error::{CliError, Result};
use crate::manifest::RunManifest;
use crate::settings::{Command, Settings};
use crate::study::{correlation_study, StudyConfig};

/// Artifacts written so far, by file name.
struct Out<'a> {
    dir: &'a Path,
    files: Vec<String>,
}

impl Out<'_> {
    fn write(&mut self, name: &str, text: &str) -> Result<()> {
        let path = self.dir.join(name);
        std::fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
        self.files.push(name.to_string());
        Ok(())
    }

    fn json(&mut self, name: &str, value: &Value) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write(name, &text)
    }

    fn dataset(&mut self, ds: &Dataset, stem: &str) -> Result<()> {
        let (csv, man) = save_with_manifest(ds, self.dir, stem)?;
        for p in [csv, man] {
            self.files.push(p.file_name().unwrap().to_string_lossy().into_owned());
        }
        Ok(())
    }
}

pub struct Outcome {
    pub manifest: RunManifest,
    /// Main report, also written to disk.
    pub summary: Value,
}

/// Runs the command described by `settings`, writing into `out_dir`.
pub fn execute(settings: &Settings, out_dir: &Path) -> Result<Outcome> {
    std::fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir, e))?;
    let started = chrono::Utc::now().to_rfc3339();
    let mut out = Out {
        dir: out_dir,
        files: Vec::new(),
    };
    out.write("config.txt", &settings.to_text())?;
    let summary = match settings.command() {
        Command::Search => search(settings, &mut out)?,
        Command::Score => score(settings, &mut out)?,
        Command::Train => train_cmd(settings, &mut out)?,
        Command::Correlate => correlate(settings, &mut out)?,
        Command::QprGen => qpr_gen(settings, &mut out)?,
        Command::Synth => synth(settings, &mut out)?,
    };
    let manifest = RunManifest {
        command: settings.command().name().to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        seed: settings.get("seed")?,
        config: settings.values().clone(),
        started,
        finished: chrono::Utc::now().to_rfc3339(),
        artifacts: out.files,
    };
    manifest.save(out_dir)?;
    Ok(Outcome { manifest, summary })
}

/// The dataset named by the settings, split, with its class readout.
pub fn load_dataset(s: &Settings) -> Result<(Dataset, ReadoutSpec)> {
    let seed: u64 = s.get("seed")?;
    let train_frac: f64 = s.get("train_frac")?;
    let val_frac: f64 = s.get("val_frac")?;
    let split_seed = rng::substream(seed, "split");
    let (ds, default_readout) = match s.opt::<String>("data")? {
        Some(path) => {
            let ds = load_manifest(&path)?;
            let unsplit = ds.splits().val.is_empty() && ds.splits().test.is_empty();
            let ds = if unsplit {
                ds.with_random_split(train_frac, val_frac, split_seed)?
            } else {
                ds
            };
            let readout = ReadoutSpec::contiguous(ds.num_qubits(), ds.num_classes())
                .unwrap_or_else(|_| ReadoutSpec::per_qubit(ds.num_classes()));
            (ds, readout)
        }
        None => {
            let kind: SynthKind = s.get("task")?;
            let ds = synth_dataset(
                kind,
                s.get("samples")?,
                s.get("noise")?,
                rng::substream(seed, "data"),
            )?
            .with_random_split(train_frac, val_frac, split_seed)?;
            (ds, kind.default_readout())
        }
    };
    let readout = match s.opt::<String>("readout")? {
        Some(r) => ReadoutSpec::parse(&r)?,
        None => default_readout,
    };
    readout.validate(ds.num_qubits())?;
    if readout.num_classes() != ds.num_classes() {
        return Err(CliError::Config(format!(
            "readout has {} groups for {} classes",
            readout.num_classes(),
            ds.num_classes()
        )));
    }
    Ok((ds, readout))
}

pub fn ames_config(s: &Settings, readout: ReadoutSpec) -> Result<AmesConfig> {
    Ok(AmesConfig {
        batch_size: s.get("batch_size")?,
        seed: rng::substream(s.get("seed")?, "ames"),
        loss_kind: s.get::<LossKind>("loss_kind")?,
        use_param_factor: s.get("use_param_factor")?,
        readout,
    })
}

pub fn train_config(s: &Settings) -> Result<TrainConfig> {
    let tc = TrainConfig {
        learning_rate: s.get("learning_rate")?,
        epochs: s.get("epochs")?,
        loss_kind: s.get("loss_kind")?,
        batch_size: s.opt("train_batch_size")?,
        gradient_mode: s.get::<GradientMode>("gradient_mode")?,
        fd_step: s.get("fd_step")?,
        seed: s.get("seed")?,
    };
    tc.validate()?;
    Ok(tc)
}

pub fn search_config(s: &Settings, readout: ReadoutSpec) -> Result<SearchConfig> {
    let cfg = SearchConfig {
        max_evaluations: s.get("max_evaluations")?,
        widening_alpha: s.get("widening_alpha")?,
        beta0: s.get("beta0")?,
        max_depth: s.get("max_depth")?,
        batch_children: s.get("batch_children")?,
        max_gates_per_expansion: s.get("max_gates_per_expansion")?,
        gate_probs: parse_gate_probs(s.raw("gate_probs"))?,
        topology: s.get::<Topology>("topology")?,
        rng_seed: s.get("seed")?,
        ames: ames_config(s, readout)?,
        widen_strict: s.get("widen_strict")?,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn load_arch(s: &Settings) -> Result<CircuitArchitecture> {
    let path: String = s.get("arch")?;
    let text = std::fs::read_to_string(&path).map_err(|e| CliError::Config(format!("{path}: {e}")))?;
    Ok(CircuitArchitecture::from_text(&text)?)
}

fn curve_csv(r: &TrainResult) -> String {
    let mut t = String::from("epoch,loss\n");
    for (i, l) in r.loss_curve.iter().enumerate() {
        let _ = writeln!(t, "{i},{l}");
    }
    t
}

fn train_summary(r: &TrainResult, arch: &CircuitArchitecture) -> Value {
    json!({
        "param_count": arch.param_count(),
        "epochs": r.loss_curve.len(),
        "final_train_loss": r.final_train_loss,
        "final_test_loss": r.final_test_loss,
        "train_accuracy": r.train_accuracy,
        "test_accuracy": r.test_accuracy,
        "final_params": r.final_params,
    })
}

fn search(s: &Settings, out: &mut Out) -> Result<Value> {
    let (ds, readout) = load_dataset(s)?;
    let cfg = search_config(s, readout.clone())?;
    let report = run_search(&ds, &cfg)?;
    let (best, score) = match (&report.best, report.best_score) {
        (Some(b), Some(sc)) => (b, sc),
        _ => return Err(CliError::Runtime("no candidate received a finite score".into())),
    };
    out.write("best.arch", &best.to_text())?;

    let mut trace = String::from("fe,node,ames,lambda_min,initial_loss,param_count,depth,gates,origin\n");
    for r in &report.trace {
        let _ = writeln!(
            trace,
            "{},{},{},{},{},{},{},{},{}",
            r.fe,
            r.node,
            r.ames,
            r.lambda_min,
            r.initial_loss,
            r.param_count,
            r.depth,
            r.gates,
            r.origin.name()
        );
    }
    out.write("trace.csv", &trace)?;
    let mut beta = String::from("fe,beta\n");
    for p in &report.beta_trace {
        let _ = writeln!(beta, "{},{}", p.fe, p.beta);
    }
    out.write("beta.csv", &beta)?;

    let trained = if s.get::<bool>("train_best")? {
        let r = train(best, &ds, &readout, &train_config(s)?)?;
        out.write("best_loss_curve.csv", &curve_csv(&r))?;
        Some(train_summary(&r, best))
    } else {
        None
    };
    let node = report.best_node.unwrap_or(0);
    let summary = json!({
        "best_node": node,
        "ames": score.value,
        "lambda_min": score.lambda_min,
        "initial_loss": score.initial_loss,
        "param_count": score.param_count,
        "gates": best.gate_count(),
        "depth": report.tree.nodes[node].depth,
        "evaluations": report.evaluations,
        "overshoot": report.overshoot,
        "tree_nodes": report.tree.len(),
        "audit_issues": report.tree.audit(cfg.max_depth, &cfg.topology),
        "trained": trained,
    });
    out.json("search.json", &summary)?;
    Ok(summary)
}

fn score(s: &Settings, out: &mut Out) -> Result<Value> {
    let arch = load_arch(s)?;
    let (ds, readout) = load_dataset(s)?;
    let cfg = ames_config(s, readout)?;
    let sc = score_ames(&arch, &ds, &cfg)?;
    let summary = json!({
        "ames": sc.value,
        "lambda_min": sc.lambda_min,
        "initial_loss": sc.initial_loss,
        "param_count": sc.param_count,
        "param_weighted": sc.param_weighted,
        "ames_seed": sc.seed,
        "batch_size": cfg.batch_size.min(ds.train_indices().len()),
    });
    out.json("score.json", &summary)?;
    Ok(summary)
}

fn train_cmd(s: &Settings, out: &mut Out) -> Result<Value> {
    let arch = load_arch(s)?;
    let (ds, readout) = load_dataset(s)?;
    let r = train(&arch, &ds, &readout, &train_config(s)?)?;
    out.write("loss_curve.csv", &curve_csv(&r))?;
    let summary = train_summary(&r, &arch);
    out.json("train.json", &summary)?;
    Ok(summary)
}

fn correlate(s: &Settings, out: &mut Out) -> Result<Value> {
    let (ds, readout) = load_dataset(s)?;
    let cfg = StudyConfig {
        circuits: s.get("circuits")?,
        min_gates: s.get("min_gates")?,
        max_gates: s.get("max_gates")?,
        gate_probs: parse_gate_probs(s.raw("gate_probs"))?,
        topology: s.get("topology")?,
        ames: ames_config(s, readout)?,
        train: train_config(s)?,
        seed: s.get("seed")?,
    };
    let report = correlation_study(&ds, &cfg)?;
    let mut csv = String::from("index,gates,param_count,ames,lambda_min,initial_loss,train_loss,test_loss\n");
    for r in &report.rows {
        let test = r.test_loss.map_or(String::new(), |v| v.to_string());
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{},{}",
            r.index, r.gates, r.param_count, r.ames, r.lambda_min, r.initial_loss, r.train_loss, test
        );
    }
    out.write("correlation.csv", &csv)?;
    let summary = json!({
        "circuits": report.rows.len(),
        "usable": report.usable,
        "pearson_train": report.pearson_train,
        "pearson_test": report.pearson_test,
        "train_degenerate": report.pearson_train.is_none(),
        "test_degenerate": report.pearson_test.is_none(),
    });
    out.json("correlation.json", &summary)?;
    Ok(summary)
}

fn qpr_gen(s: &Settings, out: &mut Out) -> Result<Value> {
    let grid_path: String = s.get("grid")?;
    let grid = load_grid(&grid_path)?;
    let sites: usize = s.get("sites")?;
    let (ds, states) = qpr_dataset(&grid, sites, s.get("per_spec")?)?;
    out.dataset(&ds, "qpr")?;
    let mut csv = String::from("j1,j2,label,energy,gap,degenerate\n");
    for (p, g) in grid.iter().zip(&states) {
        let _ = writeln!(csv, "{},{},{},{},{},{}", p.j1, p.j2, p.label, g.energy, g.gap, g.degenerate);
    }
    out.write("ground_states.csv", &csv)?;
    let summary = json!({
        "points": grid.len(),
        "sites": sites,
        "samples": ds.len(),
        "classes": ds.num_classes(),
        "degenerate": states.iter().filter(|g| g.degenerate).count(),
    });
    out.json("qpr.json", &summary)?;
    Ok(summary)
}

fn synth(s: &Settings, out: &mut Out) -> Result<Value> {
    let seed: u64 = s.get("seed")?;
    let kind: SynthKind = s.get("task")?;
    let ds = synth_dataset(kind, s.get("samples")?, s.get("noise")?, rng::substream(seed, "data"))?
        .with_random_split(s.get("train_frac")?, s.get("val_frac")?, rng::substream(seed, "split"))?;
    let stem = kind.to_string();
    out.dataset(&ds, &stem)?;
    let sp = ds.splits();
    let summary = json!({
        "task": stem,
        "samples": ds.len(),
        "classes": ds.num_classes(),
        "qubits": ds.num_qubits(),
        "train": sp.train.len(),
        "val": sp.val.len(),
        "test": sp.test.len(),
    });
    out.json("synth.json", &summary)?;
    Ok(summary)
}
