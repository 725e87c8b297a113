use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qsim::{EncodingScheme, StateVector};
use crate::rng;

/// How a feature row becomes an input state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum InputEncoding {
    /// Rotation angles, one per feature.
    Angle(EncodingScheme),
    /// The row holds the (real) amplitudes of the input state itself.
    Amplitude,
}

impl fmt::Display for InputEncoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputEncoding::Angle(s) => write!(f, "{s}"),
            InputEncoding::Amplitude => f.write_str("amplitude"),
        }
    }
}

impl FromStr for InputEncoding {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s.trim().eq_ignore_ascii_case("amplitude") {
            Ok(InputEncoding::Amplitude)
        } else {
            Ok(InputEncoding::Angle(s.parse()?))
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Splits {
    pub train: Vec<usize>,
    pub val: Vec<usize>,
    pub test: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    features: Vec<Vec<f64>>,
    labels: Vec<usize>,
    num_classes: usize,
    num_qubits: usize,
    encoding: InputEncoding,
    splits: Splits,
}

impl Dataset {
    /// All rows start in the training split.
    pub fn new(
        features: Vec<Vec<f64>>,
        labels: Vec<usize>,
        num_classes: usize,
        num_qubits: usize,
        encoding: InputEncoding,
    ) -> Result<Self> {
        if features.len() != labels.len() {
            return Err(Error::Dimension {
                expected: features.len(),
                got: labels.len(),
            });
        }
        let splits = Splits {
            train: (0..features.len()).collect(),
            ..Splits::default()
        };
        let ds = Dataset {
            features,
            labels,
            num_classes,
            num_qubits,
            encoding,
            splits,
        };
        ds.validate()?;
        Ok(ds)
    }

    pub fn validate(&self) -> Result<()> {
        for &y in &self.labels {
            if y >= self.num_classes {
                return Err(Error::LabelOutOfRange {
                    label: y,
                    classes: self.num_classes,
                });
            }
        }
        let want = match &self.encoding {
            InputEncoding::Angle(s) => {
                if s.min_qubits() > self.num_qubits {
                    return Err(Error::Config(format!(
                        "encoding needs {} qubits, dataset has {}",
                        s.min_qubits(),
                        self.num_qubits
                    )));
                }
                s.feature_dim()
            }
            InputEncoding::Amplitude => 1 << self.num_qubits,
        };
        for row in &self.features {
            if row.len() != want {
                return Err(Error::Dimension {
                    expected: want,
                    got: row.len(),
                });
            }
        }
        let mut seen = vec![false; self.features.len()];
        for &i in self
            .splits
            .train
            .iter()
            .chain(&self.splits.val)
            .chain(&self.splits.test)
        {
            if i >= seen.len() || seen[i] {
                return Err(Error::Config(format!(
                    "split index {i} is out of range or repeated"
                )));
            }
            seen[i] = true;
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    pub fn features(&self) -> &[Vec<f64>] {
        &self.features
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn encoding(&self) -> &InputEncoding {
        &self.encoding
    }

    pub fn splits(&self) -> &Splits {
        &self.splits
    }

    pub fn with_splits(mut self, splits: Splits) -> Result<Self> {
        self.splits = splits;
        self.validate()?;
        Ok(self)
    }

    /// Shuffled split into train/val/test by fractions (test gets the rest).
    pub fn with_random_split(self, train_frac: f64, val_frac: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&train_frac)
            || !(0.0..=1.0).contains(&val_frac)
            || train_frac + val_frac > 1.0 + 1e-12
        {
            return Err(Error::Config(format!(
                "bad split fractions {train_frac}/{val_frac}"
            )));
        }
        let n = self.len();
        let mut idx: Vec<usize> = (0..n).collect();
        idx.shuffle(&mut rng::rng_from(seed));
        let n_train = (train_frac * n as f64).round() as usize;
        let n_val = ((val_frac * n as f64).round() as usize).min(n - n_train);
        let mut train = idx[..n_train].to_vec();
        let mut val = idx[n_train..n_train + n_val].to_vec();
        let mut test = idx[n_train + n_val..].to_vec();
        train.sort_unstable();
        val.sort_unstable();
        test.sort_unstable();
        self.with_splits(Splits { train, val, test })
    }

    /// Input state of row `i`.
    pub fn input_state(&self, i: usize) -> Result<StateVector> {
        let row = &self.features[i];
        match &self.encoding {
            InputEncoding::Angle(s) => s.encode(row, self.num_qubits),
            InputEncoding::Amplitude => StateVector::from_real(row),
        }
    }

    pub fn input_states(&self, indices: &[usize]) -> Result<Vec<StateVector>> {
        indices.iter().map(|&i| self.input_state(i)).collect()
    }

    pub fn labels_at(&self, indices: &[usize]) -> Vec<usize> {
        indices.iter().map(|&i| self.labels[i]).collect()
    }

    /// Rows of the training split; every row when no split was assigned.
    pub fn train_indices(&self) -> Vec<usize> {
        if self.splits.train.is_empty() {
            (0..self.len()).collect()
        } else {
            self.splits.train.clone()
        }
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut c = vec![0; self.num_classes];
        for &y in &self.labels {
            c[y] += 1;
        }
        c
    }
}
