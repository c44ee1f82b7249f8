//! Steiner tree problems compiled to a time-expanded QUBO.
//!
//! The crate is `no_std` and only needs `alloc`. It covers the whole
//! algorithmic path:
//!
//! * [`graph`]: problem instances and the padded weight matrix,
//! * [`qubo`]: variable indexing, the objective and penalty builders, Ising
//!   conversion and a compiled sparse form for fast local updates,
//! * [`anneal`]: seeded simulated annealing and path-integral simulated
//!   quantum annealing,
//! * [`decoder`]: bit vector to per-target paths, candidate tree and
//!   constraint report,
//! * [`oracle`]: Dreyfus-Wagner and brute force exact solvers,
//! * [`exhaustive`]: Gray-code ground state enumeration for tiny models.
//!
//! File formats, parallel execution and the command line live in the
//! `steiner-qubo` crate.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod anneal;
pub mod decoder;
pub mod exhaustive;
pub mod generate;
pub mod graph;
pub mod oracle;
pub mod qubo;

pub use anneal::{Algorithm, Interpolation, Sample, SampleSet, SamplerInfo, Schedule};
pub use decoder::{verify_feasible, PathFamily, SteinerSolution, Violations};
pub use graph::{build_weight_matrix, Edge, Graph, GraphError, WeightMatrix};
pub use oracle::{brute_force, dreyfus_wagner, OracleError, SteinerTree};
pub use qubo::{
    FormulationConfig, IsingModel, Label, OverlapRule, QuboError, QuboModel, SparseQubo,
    SteinerQubo, VarIndex, VarKind,
};
