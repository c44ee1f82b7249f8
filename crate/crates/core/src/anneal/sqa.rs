use alloc::vec::Vec;
use rand::seq::SliceRandom;
use rand::Rng;

use super::{accept, Schedule};
use crate::qubo::SparseQubo;

/// Inter-slice ferromagnetic coupling `-(1/2beta) ln tanh(beta gamma / P)`.
/// Infinite when `gamma` is zero.
pub fn transverse_coupling(beta: f64, gamma: f64, slices: usize) -> f64 {
    -libm::log(libm::tanh(beta * gamma / slices as f64)) / (2.0 * beta)
}

/// One SQA read: `P` replicas of the classical system on a ring, each
/// seeing `E / P`, bound to their neighbours by the transverse coupling.
/// Returns the replica with the lowest classical energy.
pub(super) fn anneal<R: Rng>(
    q: &SparseQubo,
    schedule: &Schedule,
    scale: f64,
    rng: &mut R,
) -> Vec<bool> {
    let n = q.num_vars();
    let p = schedule.trotter_slices;
    let mut x: Vec<bool> = (0..n * p).map(|_| rng.gen()).collect();
    let mut fields: Vec<i64> = Vec::with_capacity(n * p);
    for slice in 0..p {
        fields.extend(q.local_fields(&x[slice * n..(slice + 1) * n]));
    }
    let mut order: Vec<usize> = (0..n).collect();
    for sweep in 0..schedule.num_sweeps {
        let beta = schedule.beta(sweep);
        let gamma = schedule.gamma(sweep);
        let classical = beta / (scale * p as f64);
        // beta * J_perp; the energy unit cancels
        let bond = if p > 1 {
            beta * transverse_coupling(beta, gamma, p)
        } else {
            0.0
        };
        order.shuffle(rng);
        for slice in 0..p {
            let prev = (slice + p - 1) % p * n;
            let next = (slice + 1) % p * n;
            let base = slice * n;
            for &i in &order {
                let up = x[base + i];
                let delta = if up {
                    -fields[base + i]
                } else {
                    fields[base + i]
                };
                let mut action = classical * delta as f64;
                if p > 1 {
                    let spin = |b: bool| if b { 1i32 } else { -1 };
                    // flipping s changes -K s (s_prev + s_next) by 2 K s (s_prev + s_next)
                    let align = spin(up) * (spin(x[prev + i]) + spin(x[next + i]));
                    if align != 0 {
                        action += if bond.is_finite() {
                            2.0 * bond * align as f64
                        } else if align > 0 {
                            f64::INFINITY
                        } else {
                            f64::NEG_INFINITY
                        };
                    }
                }
                if accept(rng, action) {
                    q.flip(&mut x[base..base + n], &mut fields[base..base + n], i);
                }
            }
        }
    }
    let best = (0..p)
        .min_by_key(|&s| q.energy(&x[s * n..(s + 1) * n]))
        .expect("at least one slice");
    x[best * n..(best + 1) * n].to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coupling_limits() {
        assert!(transverse_coupling(1.0, 0.0, 8).is_infinite());
        let weak = transverse_coupling(1.0, 100.0, 8);
        assert!((0.0..1e-3).contains(&weak));
        let c = transverse_coupling(2.0, 1.0, 4);
        assert!((c - (-libm::log(libm::tanh(0.5)) / 4.0)).abs() < 1e-12);
        // stronger as the field drops
        assert!(transverse_coupling(1.0, 0.1, 8) > transverse_coupling(1.0, 1.0, 8));
    }
}
