//! Solution reports as JSON and DOT.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use steiner_qubo_core::anneal::SamplerInfo;
use steiner_qubo_core::decoder::SteinerSolution;
use steiner_qubo_core::graph::Graph;
use steiner_qubo_core::qubo::Label;

use crate::config::RunConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationCounts {
    #[serde(rename = "H1")]
    pub h1: i64,
    #[serde(rename = "H2")]
    pub h2: i64,
    #[serde(rename = "H3")]
    pub h3: i64,
    #[serde(rename = "H4")]
    pub h4: i64,
    #[serde(rename = "H5")]
    pub h5: i64,
    #[serde(rename = "H6")]
    pub h6: i64,
}

impl From<&SteinerSolution> for ViolationCounts {
    fn from(sol: &SteinerSolution) -> Self {
        let v = |l| sol.violations.get(l);
        ViolationCounts {
            h1: v(Label::H1),
            h2: v(Label::H2),
            h3: v(Label::H3),
            h4: v(Label::H4),
            h5: v(Label::H5),
            h6: v(Label::H6),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplerReport {
    pub algorithm: String,
    pub seed: u64,
    pub reads: usize,
    pub sweeps: usize,
    pub beta: [f64; 2],
    pub beta_interpolation: String,
    pub gamma: [f64; 2],
    pub gamma_interpolation: String,
    pub trotter: usize,
    pub energy_scale: f64,
    pub distinct_samples: usize,
    pub wall_time_s: Option<f64>,
}

impl SamplerReport {
    pub fn new(info: &SamplerInfo, distinct_samples: usize) -> Self {
        let s = &info.schedule;
        SamplerReport {
            algorithm: info.algorithm.name().to_string(),
            seed: info.seed,
            reads: info.reads,
            sweeps: s.num_sweeps,
            beta: [s.beta_range.0, s.beta_range.1],
            beta_interpolation: s.beta_interpolation.name().to_string(),
            gamma: [s.gamma_range.0, s.gamma_range.1],
            gamma_interpolation: s.gamma_interpolation.name().to_string(),
            trotter: s.trotter_slices,
            energy_scale: info.energy_scale,
            distinct_samples,
            wall_time_s: info.wall_time.map(|d| d.as_secs_f64()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathReport {
    pub target: usize,
    /// `[step, vertex]` pairs.
    pub steps: Vec<[usize; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionReport {
    pub instance: String,
    pub n: usize,
    pub m: usize,
    pub num_vars: usize,
    pub tree_edges: Vec<[i64; 3]>,
    pub tree_weight: i64,
    /// Every penalty term vanishes on the sample.
    pub feasible: bool,
    /// The edge set is a tree through the root and every terminal.
    pub verified: bool,
    pub violations: ViolationCounts,
    pub energy: i64,
    pub objective_energy: i64,
    pub penalty_energy: i64,
    pub invalid_moves: usize,
    pub pruned: bool,
    pub paths: Vec<PathReport>,
    pub reads: usize,
    pub sweeps: usize,
    pub seed: u64,
    pub warnings: Vec<String>,
    pub sampler: SamplerReport,
    pub config: RunConfig,
}

impl SolutionReport {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        instance: &str,
        g: &Graph,
        num_vars: usize,
        sol: &SteinerSolution,
        verified: bool,
        sampler: SamplerReport,
        warnings: Vec<String>,
        config: &RunConfig,
    ) -> Self {
        SolutionReport {
            instance: instance.to_string(),
            n: g.n(),
            m: g.m(),
            num_vars,
            tree_edges: sol
                .tree_edges
                .iter()
                .map(|e| [e.u as i64, e.v as i64, e.w])
                .collect(),
            tree_weight: sol.tree_weight,
            feasible: sol.feasible,
            verified,
            violations: sol.into(),
            energy: sol.energy(),
            objective_energy: sol.objective_energy,
            penalty_energy: sol.penalty_energy,
            invalid_moves: sol.invalid_moves.len(),
            pruned: sol.pruned,
            paths: sol
                .paths
                .iter()
                .map(|p| PathReport {
                    target: p.target,
                    steps: p.steps.iter().map(|&(s, v)| [s, v]).collect(),
                })
                .collect(),
            reads: sampler.reads,
            sweeps: sampler.sweeps,
            seed: sampler.seed,
            warnings,
            sampler,
            config: config.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Undirected DOT graph: tree edges bold, terminals double-circled, the root
/// filled.
pub fn to_dot(name: &str, g: &Graph, sol: &SteinerSolution) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "graph {} {{", quote(name));
    out.push_str("  node [shape=circle];\n");
    for v in 0..g.n() {
        let mut attrs = Vec::new();
        if g.is_terminal(v) {
            attrs.push("shape=doublecircle");
        }
        if v == g.root() {
            attrs.push("style=filled");
        }
        if attrs.is_empty() {
            let _ = writeln!(out, "  {v};");
        } else {
            let _ = writeln!(out, "  {v} [{}];", attrs.join(", "));
        }
    }
    for e in g.edges() {
        let in_tree = sol.tree_edges.binary_search(e).is_ok();
        let style = if in_tree {
            ", style=bold, penwidth=3"
        } else {
            ""
        };
        let _ = writeln!(out, "  {} -- {} [label=\"{}\"{style}];", e.u, e.v, e.w);
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use steiner_qubo_core::decoder::{decode, PathFamily};
    use steiner_qubo_core::qubo::{FormulationConfig, SteinerQubo};

    fn path3() -> (SteinerQubo, SteinerSolution) {
        let g = Graph::new(3, [(0, 1, 5), (1, 2, 7)], vec![0, 2], 0).unwrap();
        let q = SteinerQubo::build(g.clone(), &FormulationConfig::default()).unwrap();
        let fam = PathFamily::from_tree(&g, g.edges(), 3, 0).unwrap();
        let sol = decode(&q, &fam.encode(q.index()));
        (q, sol)
    }

    #[test]
    fn dot_marks_tree_and_terminals() {
        let (q, sol) = path3();
        let dot = to_dot("p\"3", q.graph(), &sol);
        assert!(dot.starts_with("graph \"p\\\"3\" {"));
        assert!(dot.contains("  0 [shape=doublecircle, style=filled];"));
        assert!(dot.contains("  1;"));
        assert!(dot.contains("  0 -- 1 [label=\"5\", style=bold, penwidth=3];"));
        assert!(dot.trim_end().ends_with('}'));
    }

    #[test]
    fn violations_keyed_by_constraint() {
        let (_, sol) = path3();
        let json = serde_json::to_value(ViolationCounts::from(&sol)).unwrap();
        let keys: Vec<_> = json.as_object().unwrap().keys().cloned().collect();
        assert_eq!(keys, ["H1", "H2", "H3", "H4", "H5", "H6"]);
    }
}
