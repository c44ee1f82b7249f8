//! Random connected instances with uniform integer weights.

use alloc::vec::Vec;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::{Graph, GraphError, Weight};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomInstance {
    pub n: usize,
    /// Terminal count; vertex 0 is always the first terminal and the root.
    pub m: usize,
    pub wmin: Weight,
    pub wmax: Weight,
    /// Target fraction of the `n(n-1)/2` possible edges. The spanning tree
    /// is always kept, so low densities still give `n - 1` edges.
    pub density: f64,
}

impl Default for RandomInstance {
    fn default() -> Self {
        RandomInstance {
            n: 11,
            m: 3,
            wmin: 100,
            wmax: 1000,
            density: 0.3,
        }
    }
}

impl RandomInstance {
    pub fn generate<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Graph, GraphError> {
        let n = self.n;
        if n == 0 {
            return Err(GraphError::Empty);
        }
        if self.m == 0 {
            return Err(GraphError::NoTerminals);
        }
        if self.m > n {
            return Err(GraphError::TooManyTerminals {
                terminals: self.m,
                n,
            });
        }
        if self.wmin <= 0 || self.wmax < self.wmin {
            return Err(GraphError::WeightRange(self.wmin, self.wmax));
        }

        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        let mut present = alloc::vec![false; n * n];
        let mut pairs = Vec::new();
        for t in 1..n {
            let u = order[t];
            let v = order[rng.gen_range(0..t)];
            present[u * n + v] = true;
            present[v * n + u] = true;
            pairs.push((u.min(v), u.max(v)));
        }

        let possible = n * (n - 1) / 2;
        let target = ((self.density.clamp(0.0, 1.0) * possible as f64) as usize).max(n - 1);
        let mut rest: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| !present[i * n + j])
            .collect();
        rest.shuffle(rng);
        pairs.extend(rest.into_iter().take(target - (n - 1)));
        pairs.sort_unstable();

        let edges: Vec<_> = pairs
            .into_iter()
            .map(|(u, v)| (u, v, rng.gen_range(self.wmin..=self.wmax)))
            .collect();

        let mut others: Vec<usize> = (1..n).collect();
        others.shuffle(rng);
        let mut terminals = alloc::vec![0];
        terminals.extend(others.into_iter().take(self.m - 1));
        Graph::new(n, edges, terminals, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn connected_with_requested_shape() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for density in [0.0, 0.3, 1.0] {
            let g = RandomInstance {
                density,
                ..RandomInstance::default()
            }
            .generate(&mut rng)
            .unwrap();
            assert_eq!(g.n(), 11);
            assert_eq!(g.terminals().len(), 3);
            assert_eq!(g.terminals()[0], 0);
            assert_eq!(g.root(), 0);
            assert!(g.reachable_from(0).iter().all(|&r| r));
            assert!(g.edges().iter().all(|e| (100..=1000).contains(&e.w)));
            let expect = ((density * 55.0) as usize).max(10);
            assert_eq!(g.edges().len(), expect);
        }
    }

    #[test]
    fn seeded_generation_repeats() {
        let gen = RandomInstance::default();
        let a = gen.generate(&mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let b = gen.generate(&mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn bad_parameters() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let too_many = RandomInstance {
            n: 3,
            m: 4,
            ..RandomInstance::default()
        };
        assert!(too_many.generate(&mut rng).is_err());
        let no_terms = RandomInstance {
            m: 0,
            ..RandomInstance::default()
        };
        assert_eq!(no_terms.generate(&mut rng), Err(GraphError::NoTerminals));
    }
}
