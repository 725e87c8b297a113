use thiserror::Error;

/// Errors raised by the simulation, scoring, search and training layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("qubit index {index} out of range for a {num_qubits}-qubit register")]
    QubitOutOfRange { index: usize, num_qubits: usize },

    #[error("gate acts on qubit {0} twice")]
    DuplicateQubit(usize),

    #[error("{kind} expects {expected} angle(s), got {got}")]
    AngleCount {
        kind: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("expected {expected} parameters, got {got}")]
    ParamCount { expected: usize, got: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("matrix is not symmetric (max deviation {0:e})")]
    Asymmetric(f64),

    #[error("empty batch")]
    EmptyBatch,

    #[error("empty dataset")]
    EmptyDataset,

    #[error("label {label} outside class range 0..{classes}")]
    LabelOutOfRange { label: usize, classes: usize },

    #[error("circuit has no trainable parameters")]
    NoParameters,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("topology violation: {kind} on qubits ({a}, {b})")]
    Topology { kind: &'static str, a: usize, b: usize },

    #[error("non-finite loss encountered: {0}")]
    NonFiniteLoss(String),

    #[error("training diverged: loss {loss:e} at epoch {epoch}")]
    Diverged { loss: f64, epoch: usize },

    #[error("{0} sites is too large for dense diagonalisation")]
    TooLarge(usize),

    #[error("io error on {path}: {msg}")]
    Io { path: String, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
