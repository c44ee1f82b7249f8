//! The steps behind each subcommand, callable without the binary.

use std::path::Path;
use std::time::Instant;

use anyhow::Context;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use steiner_qubo_core::decoder::{decode, verify_feasible, SteinerSolution};
use steiner_qubo_core::graph::Graph;
use steiner_qubo_core::oracle::{brute_force, dreyfus_wagner, BRUTE_FORCE_MAX_EDGES};
use steiner_qubo_core::qubo::{SparseQubo, SteinerQubo};
use steiner_qubo_core::SampleSet;

use crate::config::RunConfig;
use crate::emit::{SamplerReport, SolutionReport};
use crate::model_file::{write_model, ModelHeader};
use crate::sampling;
use crate::stp::parse_stp;

/// Parses an instance file; the name falls back to the file stem.
pub fn load_instance(path: &Path) -> anyhow::Result<(String, Graph)> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading instance {}", path.display()))?;
    let inst = parse_stp(&text).with_context(|| format!("parsing instance {}", path.display()))?;
    let name = inst.name.unwrap_or_else(|| {
        path.file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default()
    });
    Ok((name, inst.graph))
}

pub fn formulate(g: &Graph, cfg: &RunConfig) -> anyhow::Result<SteinerQubo> {
    Ok(SteinerQubo::build(g.clone(), &cfg.formulation())?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelCounts {
    pub steps: usize,
    pub num_vars: usize,
    pub path_vars: usize,
    pub slack_vars: usize,
    pub overlap_vars: usize,
    pub linear_terms: usize,
    pub quadratic_terms: usize,
}

impl ModelCounts {
    pub fn of(q: &SteinerQubo) -> Self {
        let idx = q.index();
        ModelCounts {
            steps: idx.steps(),
            num_vars: idx.num_vars(),
            path_vars: idx.num_path_vars(),
            slack_vars: idx.num_slack_vars(),
            overlap_vars: idx.num_overlap_vars(),
            linear_terms: q.model().linear().len(),
            quadratic_terms: q.model().quadratic().len(),
        }
    }
}

/// Sparse model text with the counts in its header.
pub fn model_text(name: &str, q: &SteinerQubo) -> String {
    let c = ModelCounts::of(q);
    let header = ModelHeader {
        name: Some(name.to_string()),
        lambda: Some(q.lambda()),
        steps: Some(c.steps),
        extra: vec![
            ("path_vars".into(), c.path_vars.to_string()),
            ("slack_vars".into(), c.slack_vars.to_string()),
            ("overlap_vars".into(), c.overlap_vars.to_string()),
            ("linear_terms".into(), c.linear_terms.to_string()),
            ("quadratic_terms".into(), c.quadratic_terms.to_string()),
        ],
    };
    write_model(q.model(), &header)
}

pub struct Solved {
    pub samples: SampleSet,
    pub solution: SteinerSolution,
    pub report: SolutionReport,
}

/// Samples the model and decodes the lowest-energy sample.
pub fn solve(name: &str, q: &SteinerQubo, cfg: &RunConfig) -> anyhow::Result<Solved> {
    let sparse = SparseQubo::new(q.model());
    let samples = sampling::sample(
        &sparse,
        cfg.sampler.into(),
        cfg.reads,
        &cfg.schedule(),
        cfg.seed,
    )?;
    let best = samples.lowest().context("sampler returned no reads")?;
    let mut solution = decode(q, &best.bits);
    if cfg.prune {
        solution = solution.pruned(q.graph());
    }
    let verified = verify_feasible(&solution, q.graph());
    let report = SolutionReport::new(
        name,
        q.graph(),
        q.index().num_vars(),
        &solution,
        verified,
        SamplerReport::new(&samples.info, samples.samples.len()),
        q.warnings().iter().map(|w| w.to_string()).collect(),
        cfg,
    );
    Ok(Solved {
        samples,
        solution,
        report,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub instance: String,
    pub n: usize,
    pub m: usize,
    pub optimum_weight: i64,
    pub tree_edges: Vec<[i64; 3]>,
    /// Exhaustive cross-check, present when the edge count is small enough.
    pub brute_force_weight: Option<i64>,
}

pub fn verify(name: &str, g: &Graph) -> anyhow::Result<VerifyReport> {
    let dw = dreyfus_wagner(g)?;
    let bf = if g.edges().len() <= BRUTE_FORCE_MAX_EDGES {
        Some(brute_force(g)?.weight)
    } else {
        None
    };
    if let Some(w) = bf {
        anyhow::ensure!(
            w == dw.weight,
            "oracles disagree: dynamic program {} vs brute force {w}",
            dw.weight
        );
    }
    Ok(VerifyReport {
        instance: name.to_string(),
        n: g.n(),
        m: g.m(),
        optimum_weight: dw.weight,
        tree_edges: dw
            .edges
            .iter()
            .map(|e| [e.u as i64, e.v as i64, e.w])
            .collect(),
        brute_force_weight: bf,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRun {
    pub run: usize,
    pub seed: u64,
    pub best_energy: i64,
    /// The lowest-energy sample decodes to a verified tree.
    pub best_sample_feasible: bool,
    /// Reads whose decoded tree is feasible and verified.
    pub feasible_reads: usize,
    /// Lightest verified tree over all reads.
    pub best_feasible_tree_weight: Option<i64>,
    pub optimal: bool,
    pub wall_time_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub instance: String,
    pub n: usize,
    pub m: usize,
    pub num_vars: usize,
    pub optimum_weight: i64,
    pub runs: Vec<BenchRun>,
    /// Feasible reads over all reads of all runs.
    pub feasibility_rate: f64,
    /// Runs whose lightest verified tree is optimal.
    pub optimality_rate: f64,
    pub wall_time_s: f64,
    pub config: RunConfig,
}

/// Seeds for `runs` runs, derived from the master seed.
pub fn run_seeds(master: u64, runs: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    (0..runs).map(|_| rng.next_u64()).collect()
}

pub fn bench(
    name: &str,
    q: &SteinerQubo,
    cfg: &RunConfig,
    runs: usize,
) -> anyhow::Result<BenchReport> {
    anyhow::ensure!(runs > 0, "runs must be at least 1");
    let optimum = dreyfus_wagner(q.graph())?.weight;
    let sparse = SparseQubo::new(q.model());
    let start = Instant::now();
    let mut out = Vec::with_capacity(runs);
    for (run, seed) in run_seeds(cfg.seed, runs).into_iter().enumerate() {
        let samples = sampling::sample(
            &sparse,
            cfg.sampler.into(),
            cfg.reads,
            &cfg.schedule(),
            seed,
        )?;
        let mut feasible_reads = 0;
        let mut best_tree: Option<i64> = None;
        let mut best_sample_feasible = false;
        for (i, s) in samples.iter().enumerate() {
            let mut sol = decode(q, &s.bits);
            if cfg.prune {
                sol = sol.pruned(q.graph());
            }
            let ok = sol.feasible && verify_feasible(&sol, q.graph());
            if i == 0 {
                best_sample_feasible = ok;
            }
            if ok {
                feasible_reads += s.occurrences;
                best_tree = Some(best_tree.map_or(sol.tree_weight, |b| b.min(sol.tree_weight)));
            }
        }
        out.push(BenchRun {
            run,
            seed,
            best_energy: samples.lowest().map_or(i64::MAX, |s| s.energy),
            best_sample_feasible,
            feasible_reads,
            best_feasible_tree_weight: best_tree,
            optimal: best_tree == Some(optimum),
            wall_time_s: samples.info.wall_time.map_or(0.0, |d| d.as_secs_f64()),
        });
    }
    let total_reads = (runs * cfg.reads) as f64;
    Ok(BenchReport {
        instance: name.to_string(),
        n: q.graph().n(),
        m: q.graph().m(),
        num_vars: q.index().num_vars(),
        optimum_weight: optimum,
        feasibility_rate: out.iter().map(|r| r.feasible_reads).sum::<usize>() as f64 / total_reads,
        optimality_rate: out.iter().filter(|r| r.optimal).count() as f64 / runs as f64,
        runs: out,
        wall_time_s: start.elapsed().as_secs_f64(),
        config: cfg.clone(),
    })
}
