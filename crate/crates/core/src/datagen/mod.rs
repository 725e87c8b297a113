//! Datasets: CSV ingestion, pooling, synthetic tasks and cluster-chain
//! ground states.

mod cluster;
mod csv;
mod dataset;
mod pool;
mod synth;

pub use cluster::{
    build_cluster_hamiltonian, ground_state, load_grid, parse_grid, qpr_dataset,
    ClusterHamiltonianSpec, GridPoint, GroundState, MAX_DENSE_SITES,
};
pub use csv::{
    load_csv, load_manifest, manifest_text, parse_csv, save_csv, save_with_manifest, to_csv,
    CsvSchema,
};
pub use dataset::{Dataset, InputEncoding, Splits};
pub use pool::avg_pool;
pub use synth::{synth_dataset, SynthKind};
