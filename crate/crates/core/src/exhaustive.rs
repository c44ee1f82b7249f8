//! Ground states by enumerating every assignment in Gray-code order.
//!
//! Each step flips one bit and updates the local fields, so the cost per
//! assignment is one sparse row.

use alloc::vec;
use alloc::vec::Vec;

use crate::qubo::SparseQubo;

/// Largest model [`ground_states`] accepts.
pub const MAX_VARS: usize = 34;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundStates {
    pub energy: i64,
    /// Number of assignments reaching `energy`.
    pub count: u64,
    /// The first minimizers in enumeration order, at most the requested cap.
    pub states: Vec<Vec<bool>>,
}

/// `None` when the model has more than [`MAX_VARS`] variables.
pub fn ground_states(q: &SparseQubo, keep: usize) -> Option<GroundStates> {
    let n = q.num_vars();
    if n > MAX_VARS {
        return None;
    }
    let mut x = vec![false; n];
    let mut fields = q.local_fields(&x);
    let mut e = q.offset();
    let mut best = GroundStates {
        energy: e,
        count: 1,
        states: if keep > 0 {
            vec![x.clone()]
        } else {
            Vec::new()
        },
    };
    for t in 1u64..(1u64 << n) {
        let i = t.trailing_zeros() as usize;
        e += q.flip(&mut x, &mut fields, i);
        if e < best.energy {
            best.energy = e;
            best.count = 0;
            best.states.clear();
        }
        if e == best.energy {
            best.count += 1;
            if best.states.len() < keep {
                best.states.push(x.clone());
            }
        }
    }
    Some(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubo::{Label, QuboModel};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn matches_direct_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..20 {
            let n = rng.gen_range(1..=10);
            let mut m = QuboModel::new(n);
            m.add_offset(Label::Objective, rng.gen_range(-5..5));
            for i in 0..n {
                m.add_linear(Label::Objective, i, rng.gen_range(-4..4));
                for j in i + 1..n {
                    if rng.gen_bool(0.5) {
                        m.add_quadratic(Label::Objective, i, j, rng.gen_range(-4..4));
                    }
                }
            }
            let mut min = i64::MAX;
            let mut count = 0;
            for bits in 0u32..1 << n {
                let x: Vec<bool> = (0..n).map(|b| bits >> b & 1 == 1).collect();
                let e = m.energy(&x);
                if e < min {
                    min = e;
                    count = 0;
                }
                if e == min {
                    count += 1;
                }
            }
            let g = ground_states(&SparseQubo::new(&m), 4).unwrap();
            assert_eq!(g.energy, min);
            assert_eq!(g.count, count);
            for s in &g.states {
                assert_eq!(m.energy(s), min);
            }
        }
    }

    #[test]
    fn too_large() {
        let m = QuboModel::new(MAX_VARS + 1);
        assert!(ground_states(&SparseQubo::new(&m), 1).is_none());
    }
}
