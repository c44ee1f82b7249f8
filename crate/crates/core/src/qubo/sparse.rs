use alloc::vec;
use alloc::vec::Vec;

use super::model::QuboModel;

/// Compressed adjacency form of a [`QuboModel`] for samplers.
///
/// Every pair coefficient is stored twice, once in each endpoint's row, so a
/// single flip needs only its own row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseQubo {
    linear: Vec<i64>,
    row_start: Vec<usize>,
    neighbors: Vec<u32>,
    couplings: Vec<i64>,
    offset: i64,
}

impl SparseQubo {
    pub fn new(model: &QuboModel) -> Self {
        let n = model.num_vars();
        assert!(n <= u32::MAX as usize, "too many variables");
        let mut linear = vec![0; n];
        for (&i, &c) in model.linear() {
            linear[i] = c;
        }
        let mut degree = vec![0usize; n];
        for &(i, j) in model.quadratic().keys() {
            degree[i] += 1;
            degree[j] += 1;
        }
        let mut row_start = Vec::with_capacity(n + 1);
        row_start.push(0);
        for d in &degree {
            row_start.push(row_start.last().unwrap() + d);
        }
        let total = *row_start.last().unwrap();
        let mut neighbors = vec![0u32; total];
        let mut couplings = vec![0i64; total];
        let mut fill = row_start[..n].to_vec();
        for (&(i, j), &c) in model.quadratic() {
            neighbors[fill[i]] = j as u32;
            couplings[fill[i]] = c;
            fill[i] += 1;
            neighbors[fill[j]] = i as u32;
            couplings[fill[j]] = c;
            fill[j] += 1;
        }
        SparseQubo {
            linear,
            row_start,
            neighbors,
            couplings,
            offset: model.offset(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.linear.len()
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn linear(&self) -> &[i64] {
        &self.linear
    }

    #[inline]
    pub fn row(&self, i: usize) -> (&[u32], &[i64]) {
        let (a, b) = (self.row_start[i], self.row_start[i + 1]);
        (&self.neighbors[a..b], &self.couplings[a..b])
    }

    pub fn degree(&self, i: usize) -> usize {
        self.row_start[i + 1] - self.row_start[i]
    }

    pub fn energy(&self, x: &[bool]) -> i64 {
        assert_eq!(x.len(), self.num_vars(), "assignment length mismatch");
        let mut e = self.offset;
        let mut pair = 0;
        for i in 0..x.len() {
            if !x[i] {
                continue;
            }
            e += self.linear[i];
            let (nb, cs) = self.row(i);
            for (&j, &c) in nb.iter().zip(cs) {
                if x[j as usize] {
                    pair += c;
                }
            }
        }
        // each set pair was seen from both ends
        e + pair / 2
    }

    /// `field_i = a_i + sum_j b_ij x_j`; flipping bit `i` changes the energy
    /// by `field_i` when it turns on and `-field_i` when it turns off.
    pub fn local_fields(&self, x: &[bool]) -> Vec<i64> {
        (0..self.num_vars())
            .map(|i| {
                let (nb, cs) = self.row(i);
                self.linear[i]
                    + nb.iter()
                        .zip(cs)
                        .filter(|(&j, _)| x[j as usize])
                        .map(|(_, &c)| c)
                        .sum::<i64>()
            })
            .collect()
    }

    /// Flip bit `i`, keeping `fields` in sync. Returns the energy change.
    #[inline]
    pub fn flip(&self, x: &mut [bool], fields: &mut [i64], i: usize) -> i64 {
        let delta = if x[i] { -fields[i] } else { fields[i] };
        x[i] = !x[i];
        let sign = if x[i] { 1 } else { -1 };
        let (nb, cs) = self.row(i);
        for (&j, &c) in nb.iter().zip(cs) {
            fields[j as usize] += sign * c;
        }
        delta
    }
}
