use alloc::vec::Vec;
use rand::seq::SliceRandom;
use rand::Rng;

use super::{accept, Schedule};
use crate::qubo::SparseQubo;

/// One SA read from a uniform random start. Returns the final state and its
/// incrementally tracked energy.
pub(super) fn anneal<R: Rng>(
    q: &SparseQubo,
    schedule: &Schedule,
    scale: f64,
    rng: &mut R,
) -> (Vec<bool>, i64) {
    let n = q.num_vars();
    let mut x: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
    let mut fields = q.local_fields(&x);
    let mut energy = q.energy(&x);
    let mut order: Vec<usize> = (0..n).collect();
    for sweep in 0..schedule.num_sweeps {
        let beta = schedule.beta(sweep) / scale;
        order.shuffle(rng);
        for &i in &order {
            let delta = if x[i] { -fields[i] } else { fields[i] };
            if accept(rng, beta * delta as f64) {
                energy += q.flip(&mut x, &mut fields, i);
            }
        }
    }
    (x, energy)
}
