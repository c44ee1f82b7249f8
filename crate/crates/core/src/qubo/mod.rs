//! The time-expanded QUBO model.
//!
//! Variable `X_{i,s}^k` says that the path of target `k` sits on vertex `i`
//! at step `s`, for steps `0..=S`. The objective charges the padded edge
//! weight of every move between consecutive steps; six penalties pin the
//! first path to the root, end each path on its own terminal, keep each path
//! on at most one vertex per step, keep paths continuous once started,
//! forbid dwelling on non-terminals, and require every path after the first
//! to meet another path.

pub mod builders;
pub mod index;
pub mod ising;
pub mod model;
pub mod sparse;

use alloc::vec::Vec;

pub use builders::{
    assemble, build_h1, build_h2, build_h3, build_h4, build_h5, build_h6, build_objective,
};
pub use index::{default_slack_bits, OverlapRule, VarIndex, VarKind};
pub use ising::{spins_of, to_ising, to_qubo, IsingModel, Quarter};
pub use model::{Label, QuboModel};
pub use sparse::SparseQubo;

use crate::graph::{build_weight_matrix, Graph, GraphError, Weight, WeightMatrix, DEFAULT_BIG};

/// Default penalty coefficient.
pub const DEFAULT_LAMBDA: i64 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QuboError {
    #[error("variable index does not match the graph")]
    IndexMismatch,
    #[error("penalty coefficient must be positive, got {0}")]
    NonPositiveLambda(i64),
    #[error("horizon must be at least 1 step")]
    ZeroHorizon,
    #[error("ising coupling on a single spin {0}")]
    IsingSelfCoupling(usize),
    #[error("ising model does not map to integer QUBO coefficients")]
    NonIntegral,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Non-fatal findings while building a formulation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Warning {
    /// `lambda <= (S+1) * max edge weight`: one violated constraint may be
    /// cheaper than a feasible route.
    LambdaBelowFloor { lambda: i64, floor: i64 },
    /// The slack block cannot absorb an overlap count of `S + 1`.
    SlackTooNarrow { bits: usize, max_overlap: usize },
    /// Fewer steps than the longest simple path may need; some trees cannot
    /// be encoded.
    ShortHorizon { steps: usize, n: usize },
}

impl core::fmt::Display for Warning {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Warning::LambdaBelowFloor { lambda, floor } => write!(
                f,
                "lambda {lambda} does not exceed the recommended floor {floor} ((S+1) * max weight)"
            ),
            Warning::SlackTooNarrow { bits, max_overlap } => write!(
                f,
                "{bits} slack bits cannot represent an overlap of {max_overlap}"
            ),
            Warning::ShortHorizon { steps, n } => write!(
                f,
                "horizon {steps} is below n - 1 = {}; long paths cannot be encoded",
                n.saturating_sub(1)
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormulationConfig {
    /// Horizon `S`; `None` means `S = n`.
    pub steps: Option<usize>,
    pub lambda: i64,
    pub big: Weight,
    /// Slack bits per constrained target; `None` means `ceil(log2(S + 2))`.
    pub slack_bits: Option<usize>,
    pub overlap: OverlapRule,
}

impl Default for FormulationConfig {
    fn default() -> Self {
        FormulationConfig {
            steps: None,
            lambda: DEFAULT_LAMBDA,
            big: DEFAULT_BIG,
            slack_bits: None,
            overlap: OverlapRule::default(),
        }
    }
}

/// A graph together with its index, weight matrix and assembled model.
#[derive(Debug, Clone)]
pub struct SteinerQubo {
    graph: Graph,
    weights: WeightMatrix,
    index: VarIndex,
    lambda: i64,
    model: QuboModel,
    warnings: Vec<Warning>,
}

impl SteinerQubo {
    pub fn build(graph: Graph, cfg: &FormulationConfig) -> Result<Self, QuboError> {
        if cfg.lambda <= 0 {
            return Err(QuboError::NonPositiveLambda(cfg.lambda));
        }
        let steps = cfg.steps.unwrap_or(graph.n());
        if steps == 0 {
            return Err(QuboError::ZeroHorizon);
        }
        let weights = build_weight_matrix(&graph, cfg.big)?;
        let slack_bits = cfg.slack_bits.unwrap_or_else(|| default_slack_bits(steps));
        let index = VarIndex::new(
            graph.n(),
            steps,
            graph.terminals().to_vec(),
            graph.root(),
            slack_bits,
            cfg.overlap,
        );

        let mut warnings = Vec::new();
        let floor = (steps as i64 + 1) * graph.max_weight();
        if cfg.lambda <= floor {
            warnings.push(Warning::LambdaBelowFloor {
                lambda: cfg.lambda,
                floor,
            });
        }
        if index.m() > 1 && index.max_slack() < steps {
            warnings.push(Warning::SlackTooNarrow {
                bits: slack_bits,
                max_overlap: steps + 1,
            });
        }
        if steps + 1 < graph.n() {
            warnings.push(Warning::ShortHorizon {
                steps,
                n: graph.n(),
            });
        }

        let model = assemble(&graph, &weights, &index, cfg.lambda)?;
        Ok(SteinerQubo {
            graph,
            weights,
            index,
            lambda: cfg.lambda,
            model,
            warnings,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn weights(&self) -> &WeightMatrix {
        &self.weights
    }

    pub fn index(&self) -> &VarIndex {
        &self.index
    }

    pub fn lambda(&self) -> i64 {
        self.lambda
    }

    pub fn model(&self) -> &QuboModel {
        &self.model
    }

    pub fn warnings(&self) -> &[Warning] {
        &self.warnings
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn section4_sized_instance_builds() {
        let edges: Vec<_> = (0..10).map(|i| (i, i + 1, 100 + 10 * i as i64)).collect();
        let g = Graph::new(11, edges, vec![0, 5, 10], 0).unwrap();
        let q = SteinerQubo::build(g, &FormulationConfig::default()).unwrap();
        assert_eq!(q.index().num_path_vars(), 3 * 12 * 11);
        assert_eq!(q.model().num_vars(), 396 + 2 * 4 + 3 * 12 * 11);
        // (S+1) * 190 = 2280 < 10000: no floor warning
        assert!(q.warnings().is_empty(), "{:?}", q.warnings());
    }

    #[test]
    fn floor_warning() {
        let g = Graph::new(3, [(0, 1, 900), (1, 2, 1000)], vec![0, 2], 0).unwrap();
        let q = SteinerQubo::build(
            g,
            &FormulationConfig {
                big: 20_000,
                ..FormulationConfig::default()
            },
        )
        .unwrap();
        // floor (S+1) * 1000 = 4000 stays below lambda
        assert!(q.warnings().is_empty());
        let g = Graph::new(3, [(0, 1, 5000), (1, 2, 1000)], vec![0, 2], 0).unwrap();
        let q = SteinerQubo::build(
            g,
            &FormulationConfig {
                big: 20_000,
                ..FormulationConfig::default()
            },
        )
        .unwrap();
        assert_eq!(
            q.warnings(),
            [Warning::LambdaBelowFloor {
                lambda: 10_000,
                floor: 20_000
            }]
        );
    }

    #[test]
    fn zero_lambda_rejected() {
        let g = Graph::new(2, [(0, 1, 5)], vec![0, 1], 0).unwrap();
        let cfg = FormulationConfig {
            lambda: 0,
            ..FormulationConfig::default()
        };
        assert_eq!(
            SteinerQubo::build(g, &cfg).unwrap_err(),
            QuboError::NonPositiveLambda(0)
        );
    }

    #[test]
    fn narrow_slack_warns() {
        let g = Graph::new(4, [(0, 1, 5), (1, 2, 5), (2, 3, 5)], vec![0, 3], 0).unwrap();
        let cfg = FormulationConfig {
            slack_bits: Some(1),
            ..FormulationConfig::default()
        };
        let q = SteinerQubo::build(g, &cfg).unwrap();
        assert_eq!(
            q.warnings(),
            [Warning::SlackTooNarrow {
                bits: 1,
                max_overlap: 5
            }]
        );
    }

    #[test]
    fn energy_decomposes_over_labels() {
        use rand::{Rng, SeedableRng};
        let g = Graph::new(
            4,
            [(0, 1, 5), (1, 2, 6), (2, 3, 7), (0, 3, 9)],
            vec![0, 2, 3],
            0,
        )
        .unwrap();
        let q = SteinerQubo::build(g, &FormulationConfig::default()).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let x: Vec<bool> = (0..q.model().num_vars())
                .map(|_| rng.gen_bool(0.3))
                .collect();
            let parts: i64 = Label::ALL
                .iter()
                .map(|&l| q.model().restrict(l).energy(&x))
                .sum();
            assert_eq!(parts, q.model().energy(&x));
        }
    }
}
