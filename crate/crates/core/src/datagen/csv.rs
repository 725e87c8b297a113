//! Plain CSV datasets: `label,f1,f2,…` per row, optional header line.

use std::fs;
use std::path::{Path, PathBuf};

use super::dataset::{Dataset, InputEncoding, Splits};
use crate::error::{Error, Result};

/// How to interpret a CSV file.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvSchema {
    /// Class count; inferred as `max label + 1` (at least 2) when `None`.
    pub num_classes: Option<usize>,
    pub num_qubits: usize,
    pub encoding: InputEncoding,
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    }
}

/// Parses CSV text. `line` numbers in errors are 1-based.
pub fn parse_csv(text: &str, schema: &CsvSchema) -> Result<Dataset> {
    let mut features = Vec::new();
    let mut labels = Vec::new();
    let mut width = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let row = raw.trim();
        if row.is_empty() || row.starts_with('#') {
            continue;
        }
        let cells: Vec<&str> = row.split(',').map(str::trim).collect();
        let label = match cells[0].parse::<usize>() {
            Ok(v) => v,
            Err(_) if features.is_empty() && labels.is_empty() && width.is_none() => {
                // header row
                width = Some(cells.len());
                continue;
            }
            Err(_) => {
                return Err(Error::Parse {
                    line,
                    msg: format!("label '{}' is not a non-negative integer", cells[0]),
                })
            }
        };
        if let Some(k) = schema.num_classes {
            if label >= k {
                return Err(Error::Parse {
                    line,
                    msg: format!("label {label} is not below the class count {k}"),
                });
            }
        }
        let mut row_f = Vec::with_capacity(cells.len() - 1);
        for c in &cells[1..] {
            let v: f64 = c.parse().map_err(|_| Error::Parse {
                line,
                msg: format!("feature '{c}' is not a number"),
            })?;
            row_f.push(v);
        }
        match width {
            Some(w) if w != cells.len() => {
                return Err(Error::Parse {
                    line,
                    msg: format!("expected {} columns, found {}", w, cells.len()),
                })
            }
            _ => width = Some(cells.len()),
        }
        features.push(row_f);
        labels.push(label);
    }
    if features.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let classes = schema
        .num_classes
        .unwrap_or_else(|| (labels.iter().max().unwrap() + 1).max(2));
    Dataset::new(
        features,
        labels,
        classes,
        schema.num_qubits,
        schema.encoding.clone(),
    )
}

pub fn load_csv(path: impl AsRef<Path>, schema: &CsvSchema) -> Result<Dataset> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    parse_csv(&text, schema)
}

/// CSV text of a dataset. `f64` values use shortest round-trip formatting, so
/// reading the text back reproduces every bit.
pub fn to_csv(ds: &Dataset) -> String {
    let mut out = String::new();
    for (row, y) in ds.features().iter().zip(ds.labels()) {
        out.push_str(&y.to_string());
        for v in row {
            out.push(',');
            out.push_str(&format!("{v:?}"));
        }
        out.push('\n');
    }
    out
}

pub fn save_csv(ds: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, to_csv(ds)).map_err(|e| io_err(path, e))
}

fn join_indices(xs: &[usize]) -> String {
    xs.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
}

fn parse_indices(s: &str, key: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse()
                .map_err(|_| Error::Config(format!("bad index '{t}' in '{key}'")))
        })
        .collect()
}

/// Manifest text naming the CSV file, encoding, shape and splits.
pub fn manifest_text(ds: &Dataset, csv_file: &str) -> String {
    let s = ds.splits();
    format!(
        "csv={csv_file}\nencoding={}\nqubits={}\nclasses={}\ntrain={}\nval={}\ntest={}\n",
        ds.encoding(),
        ds.num_qubits(),
        ds.num_classes(),
        join_indices(&s.train),
        join_indices(&s.val),
        join_indices(&s.test),
    )
}

/// Writes `<stem>.csv` and `<stem>.manifest` next to each other.
pub fn save_with_manifest(ds: &Dataset, dir: impl AsRef<Path>, stem: &str) -> Result<(PathBuf, PathBuf)> {
    let dir = dir.as_ref();
    let csv = dir.join(format!("{stem}.csv"));
    let man = dir.join(format!("{stem}.manifest"));
    save_csv(ds, &csv)?;
    fs::write(&man, manifest_text(ds, &format!("{stem}.csv"))).map_err(|e| io_err(&man, e))?;
    Ok((csv, man))
}

/// Loads a dataset through its manifest; the CSV path is relative to the
/// manifest's directory.
pub fn load_manifest(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let mut csv = None;
    let mut encoding = None;
    let mut qubits = None;
    let mut classes = None;
    let mut splits = Splits::default();
    for (i, raw) in text.lines().enumerate() {
        let row = raw.trim();
        if row.is_empty() || row.starts_with('#') {
            continue;
        }
        let (k, v) = row.split_once('=').ok_or_else(|| Error::Parse {
            line: i + 1,
            msg: format!("expected key=value, got '{row}'"),
        })?;
        let (k, v) = (k.trim(), v.trim());
        let bad = |what: &str| Error::Parse {
            line: i + 1,
            msg: format!("bad {what} '{v}'"),
        };
        match k {
            "csv" => csv = Some(v.to_string()),
            "encoding" => encoding = Some(v.parse::<InputEncoding>()?),
            "qubits" => qubits = Some(v.parse::<usize>().map_err(|_| bad("qubits"))?),
            "classes" => classes = Some(v.parse::<usize>().map_err(|_| bad("classes"))?),
            "train" => splits.train = parse_indices(v, k)?,
            "val" => splits.val = parse_indices(v, k)?,
            "test" => splits.test = parse_indices(v, k)?,
            other => {
                return Err(Error::Parse {
                    line: i + 1,
                    msg: format!("unknown key '{other}'"),
                })
            }
        }
    }
    let missing = |k: &str| Error::Config(format!("manifest is missing '{k}'"));
    let csv = csv.ok_or_else(|| missing("csv"))?;
    let schema = CsvSchema {
        num_classes: classes,
        num_qubits: qubits.ok_or_else(|| missing("qubits"))?,
        encoding: encoding.ok_or_else(|| missing("encoding"))?,
    };
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    load_csv(base.join(csv), &schema)?.with_splits(splits)
}
