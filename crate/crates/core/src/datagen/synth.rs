//! Self-contained classification tasks with features in `[0, π]`, used
//! directly as `RY` angles.
//!
//! * `two_blobs`: 4 features, 2 classes. Each class fills a cube of half-width
//!   `π/8` around `π/4·1` or `3π/4·1`.
//! * `xor_rings`: 2 features, 2 classes. Annuli around the four quadrant
//!   centres `(π/4|3π/4, π/4|3π/4)`; the class is the XOR of the quadrant bits.
//! * `four_blobs`: 4 features, 4 classes. Class `c` sits at the corner whose
//!   feature pairs `(0,1)` and `(2,3)` follow bits 0 and 1 of `c`.
//!
//! Labels are assigned round-robin so class counts differ by at most one.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::Rng as _;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::dataset::{Dataset, InputEncoding};
use crate::error::{Error, Result};
use crate::qsim::{Axis, EncodingScheme, ReadoutSpec};
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SynthKind {
    TwoBlobs,
    XorRings,
    FourBlobs,
}

impl SynthKind {
    pub fn num_classes(self) -> usize {
        match self {
            SynthKind::FourBlobs => 4,
            _ => 2,
        }
    }

    pub fn num_features(self) -> usize {
        match self {
            SynthKind::XorRings => 2,
            _ => 4,
        }
    }

    /// One qubit per feature.
    pub fn num_qubits(self) -> usize {
        self.num_features()
    }

    /// The readout used with this task: contiguous halves for two classes on
    /// four qubits, one qubit per class otherwise.
    pub fn default_readout(self) -> ReadoutSpec {
        match self {
            SynthKind::TwoBlobs => ReadoutSpec::contiguous(4, 2).expect("4 qubits into 2 groups"),
            SynthKind::XorRings => ReadoutSpec::per_qubit(2),
            SynthKind::FourBlobs => ReadoutSpec::per_qubit(4),
        }
    }
}

impl fmt::Display for SynthKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SynthKind::TwoBlobs => "two_blobs",
            SynthKind::XorRings => "xor_rings",
            SynthKind::FourBlobs => "four_blobs",
        })
    }
}

impl FromStr for SynthKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "two_blobs" => Ok(SynthKind::TwoBlobs),
            "xor_rings" => Ok(SynthKind::XorRings),
            "four_blobs" => Ok(SynthKind::FourBlobs),
            other => Err(Error::Config(format!("unknown synthetic task '{other}'"))),
        }
    }
}

const LOW: f64 = PI / 4.0;
const HIGH: f64 = 3.0 * PI / 4.0;

fn level(bit: bool) -> f64 {
    if bit {
        HIGH
    } else {
        LOW
    }
}

/// Draws `n` samples with Gaussian jitter of standard deviation `noise`.
pub fn synth_dataset(kind: SynthKind, n: usize, noise: f64, seed: u64) -> Result<Dataset> {
    let classes = kind.num_classes();
    if n < 10 * classes {
        return Err(Error::Config(format!(
            "{kind} needs at least {} samples, got {n}",
            10 * classes
        )));
    }
    if !(noise >= 0.0 && noise.is_finite()) {
        return Err(Error::Config(format!("noise must be >= 0, got {noise}")));
    }
    let mut r = rng::rng_from(seed);
    let jitter = Normal::new(0.0, noise).map_err(|e| Error::Config(e.to_string()))?;
    let mut features = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let y = i % classes;
        let mut x: Vec<f64> = match kind {
            SynthKind::TwoBlobs => {
                let c = level(y == 1);
                (0..4).map(|_| c + r.random_range(-PI / 8.0..PI / 8.0)).collect()
            }
            SynthKind::FourBlobs => {
                let a = level(y & 1 == 1);
                let b = level(y & 2 == 2);
                [a, a, b, b]
                    .iter()
                    .map(|c| c + r.random_range(-PI / 8.0..PI / 8.0))
                    .collect()
            }
            SynthKind::XorRings => {
                let b0: bool = r.random();
                let b1 = b0 ^ (y == 1);
                let rad = r.random_range(PI / 16.0..PI / 5.0);
                let ang = r.random_range(0.0..2.0 * PI);
                vec![level(b0) + rad * ang.cos(), level(b1) + rad * ang.sin()]
            }
        };
        for v in &mut x {
            *v = (*v + jitter.sample(&mut r)).clamp(0.0, PI);
        }
        features.push(x);
        labels.push(y);
    }
    Dataset::new(
        features,
        labels,
        classes,
        kind.num_qubits(),
        InputEncoding::Angle(EncodingScheme::uniform(Axis::Y, kind.num_features())),
    )
}
