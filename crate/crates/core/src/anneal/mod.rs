//! Simulated annealing and path-integral simulated quantum annealing.
//!
//! Every read draws from its own ChaCha8 stream: the master seed picks the
//! key and the read number picks the stream. Reads are therefore independent
//! of each other and of execution order, which lets callers run them in
//! parallel and still get the serial result.

mod sa;
mod schedule;
mod sqa;

use alloc::vec::Vec;
use core::fmt;
use core::time::Duration;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::qubo::SparseQubo;

pub use schedule::{Interpolation, Schedule, ScheduleError};
pub use sqa::transverse_coupling;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Algorithm {
    Sa,
    #[default]
    Sqa,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Sa => "sa",
            Algorithm::Sqa => "sqa",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnnealError {
    NoReads,
    Schedule(ScheduleError),
}

impl fmt::Display for AnnealError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnnealError::NoReads => f.write_str("at least one read is required"),
            AnnealError::Schedule(e) => write!(f, "invalid schedule: {e}"),
        }
    }
}

impl core::error::Error for AnnealError {}

#[derive(Debug, Clone, PartialEq)]
pub struct SamplerInfo {
    pub algorithm: Algorithm,
    pub seed: u64,
    pub reads: usize,
    pub schedule: Schedule,
    /// The energy unit actually used for the inverse temperatures.
    pub energy_scale: f64,
    /// Filled in by callers that can measure time.
    pub wall_time: Option<Duration>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sample {
    pub bits: Vec<bool>,
    pub energy: i64,
    pub occurrences: usize,
}

/// Distinct samples sorted by energy, then by bit pattern.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    pub samples: Vec<Sample>,
    pub info: SamplerInfo,
}

impl SampleSet {
    /// Group raw reads into distinct samples. Energies are evaluated on the
    /// model, never taken from the sampler.
    pub fn from_reads(q: &SparseQubo, reads: Vec<Vec<bool>>, info: SamplerInfo) -> Self {
        let mut tagged: Vec<(i64, Vec<bool>)> =
            reads.into_iter().map(|b| (q.energy(&b), b)).collect();
        tagged.sort_unstable();
        let mut samples: Vec<Sample> = Vec::new();
        for (energy, bits) in tagged {
            match samples.last_mut() {
                Some(last) if last.bits == bits => last.occurrences += 1,
                _ => samples.push(Sample {
                    bits,
                    energy,
                    occurrences: 1,
                }),
            }
        }
        SampleSet { samples, info }
    }

    pub fn lowest(&self) -> Option<&Sample> {
        self.samples.first()
    }

    pub fn num_reads(&self) -> usize {
        self.samples.iter().map(|s| s.occurrences).sum()
    }

    pub fn iter(&self) -> core::slice::Iter<'_, Sample> {
        self.samples.iter()
    }
}

/// Smallest nonzero coefficient magnitude, or 1 for a constant model.
pub fn auto_energy_scale(q: &SparseQubo) -> f64 {
    let linear = q.linear().iter().copied();
    let pairs = (0..q.num_vars()).flat_map(|i| q.row(i).1.iter().copied());
    linear
        .chain(pairs)
        .filter(|&c| c != 0)
        .map(|c| c.unsigned_abs())
        .min()
        .unwrap_or(1) as f64
}

/// Validate and resolve the energy unit for a schedule on a model.
pub fn prepare(q: &SparseQubo, reads: usize, schedule: &Schedule) -> Result<f64, AnnealError> {
    if reads == 0 {
        return Err(AnnealError::NoReads);
    }
    schedule.validate().map_err(AnnealError::Schedule)?;
    Ok(schedule
        .energy_scale
        .unwrap_or_else(|| auto_energy_scale(q)))
}

/// Generator for one read.
pub fn read_rng(seed: u64, read: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(read as u64);
    rng
}

/// One read; `scale` comes from [`prepare`].
pub fn run_read(
    q: &SparseQubo,
    algorithm: Algorithm,
    schedule: &Schedule,
    scale: f64,
    seed: u64,
    read: usize,
) -> Vec<bool> {
    let mut rng = read_rng(seed, read);
    match algorithm {
        Algorithm::Sa => sa::anneal(q, schedule, scale, &mut rng).0,
        Algorithm::Sqa => sqa::anneal(q, schedule, scale, &mut rng),
    }
}

/// Serial sampling; read `r` uses stream `r` of `seed`.
pub fn sample(
    q: &SparseQubo,
    algorithm: Algorithm,
    reads: usize,
    schedule: &Schedule,
    seed: u64,
) -> Result<SampleSet, AnnealError> {
    let scale = prepare(q, reads, schedule)?;
    let raw = (0..reads)
        .map(|r| run_read(q, algorithm, schedule, scale, seed, r))
        .collect();
    let info = SamplerInfo {
        algorithm,
        seed,
        reads,
        schedule: schedule.clone(),
        energy_scale: scale,
        wall_time: None,
    };
    Ok(SampleSet::from_reads(q, raw, info))
}

pub fn sample_sa(
    q: &SparseQubo,
    reads: usize,
    schedule: &Schedule,
    seed: u64,
) -> Result<SampleSet, AnnealError> {
    sample(q, Algorithm::Sa, reads, schedule, seed)
}

pub fn sample_sqa(
    q: &SparseQubo,
    reads: usize,
    schedule: &Schedule,
    seed: u64,
) -> Result<SampleSet, AnnealError> {
    sample(q, Algorithm::Sqa, reads, schedule, seed)
}

/// Metropolis test for a dimensionless action `beta * delta`.
#[inline]
fn accept<R: rand::Rng>(rng: &mut R, action: f64) -> bool {
    if action <= 0.0 {
        return true;
    }
    // exp(-40) is below the resolution of a uniform f64 draw
    action < 40.0 && rng.gen::<f64>() < libm::exp(-action)
}
