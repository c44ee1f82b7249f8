//! Instance files, model export, parallel sampling and the command pipeline
//! behind the `steiner-qubo` binary.

pub mod config;
pub mod emit;
pub mod model_file;
pub mod pipeline;
pub mod sampling;
pub mod stp;
