//! Reads spread over a rayon pool.
//!
//! Every read seeds its own stream, so the result does not depend on the
//! number of threads or on scheduling.

use std::time::Instant;

use anyhow::Context;
use rayon::prelude::*;
use steiner_qubo_core::anneal::{prepare, run_read, Algorithm, SampleSet, SamplerInfo, Schedule};
use steiner_qubo_core::qubo::SparseQubo;

pub const THREADS_VAR: &str = "STEINER_QUBO_THREADS";

/// Thread cap from the environment, if set.
pub fn thread_cap() -> anyhow::Result<Option<usize>> {
    match std::env::var(THREADS_VAR) {
        Ok(v) => {
            let n: usize = v
                .trim()
                .parse()
                .with_context(|| format!("{THREADS_VAR} must be a positive integer, got '{v}'"))?;
            anyhow::ensure!(n > 0, "{THREADS_VAR} must be a positive integer, got '{v}'");
            Ok(Some(n))
        }
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(e).context(THREADS_VAR),
    }
}

pub fn sample(
    q: &SparseQubo,
    algorithm: Algorithm,
    reads: usize,
    schedule: &Schedule,
    seed: u64,
) -> anyhow::Result<SampleSet> {
    let scale = prepare(q, reads, schedule).map_err(|e| anyhow::anyhow!("{e}"))?;
    let start = Instant::now();
    let work = || -> Vec<Vec<bool>> {
        (0..reads)
            .into_par_iter()
            .map(|r| run_read(q, algorithm, schedule, scale, seed, r))
            .collect()
    };
    let raw = match thread_cap()? {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .context("starting thread pool")?
            .install(work),
        None => work(),
    };
    let info = SamplerInfo {
        algorithm,
        seed,
        reads,
        schedule: schedule.clone(),
        energy_scale: scale,
        wall_time: Some(start.elapsed()),
    };
    Ok(SampleSet::from_reads(q, raw, info))
}

#[cfg(test)]
mod tests {
    use super::*;
    use steiner_qubo_core::anneal::sample as serial;
    use steiner_qubo_core::qubo::{Label, QuboModel};

    #[test]
    fn matches_serial_sampling() {
        let mut m = QuboModel::new(6);
        for i in 0..6 {
            m.add_linear(Label::Objective, i, (i as i64 % 3) - 1);
            m.add_quadratic(Label::Objective, i, (i + 1) % 6, 2);
        }
        let q = SparseQubo::new(&m);
        let s = Schedule {
            num_sweeps: 30,
            ..Schedule::default()
        };
        for alg in [Algorithm::Sa, Algorithm::Sqa] {
            let mut par = sample(&q, alg, 40, &s, 11).unwrap();
            par.info.wall_time = None;
            assert_eq!(par, serial(&q, alg, 40, &s, 11).unwrap());
        }
    }
}
