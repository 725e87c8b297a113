//! Training-free quantum architecture search.
//!
//! Circuits are scored without training by the asymptotic minimum-eigenvalue
//! surrogate (`ntk`), searched with a batch-expanding Monte Carlo tree search
//! (`mcts`), and validated by gradient training (`trainer`) on datasets built
//! by `datagen`.

pub mod datagen;
pub mod error;
pub mod linalg;
pub mod loss;
pub mod mcts;
pub mod ntk;
pub mod qsim;
pub mod rng;
pub mod stats;
pub mod trainer;

pub use error::{Error, Result};
pub use qsim::{CircuitArchitecture, GateKind, PauliObservable, StateVector, Topology};
pub use datagen::Dataset;
pub use loss::LossKind;
pub use mcts::{SearchConfig, SearchReport};
pub use ntk::{AmesConfig, AmesScore, GramMatrix};
pub use trainer::{GradientMode, TrainConfig, TrainResult};
