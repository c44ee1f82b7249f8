use alloc::vec::Vec;

use crate::graph::VertexId;

/// Which other paths count towards the overlap requirement of a target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OverlapRule {
    /// Target `k` must meet a path of a target listed before it. Every path
    /// then hangs off the root path transitively, so zero-penalty
    /// assignments are connected.
    #[default]
    Preceding,
    /// Target `k` must meet the path of any other target. Literal reading;
    /// admits zero-penalty assignments whose paths form several components
    /// once three or more targets exist.
    AnyOther,
}

impl OverlapRule {
    pub fn name(self) -> &'static str {
        match self {
            OverlapRule::Preceding => "preceding",
            OverlapRule::AnyOther => "any",
        }
    }
}

/// What a flat variable index stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    /// Path of target position `k` occupies vertex `i` at step `s`.
    Path { k: usize, s: usize, i: VertexId },
    /// Bit `bit` of the overlap slack of target position `k` (`k >= 1`).
    Slack { k: usize, bit: usize },
    /// Indicator for "paths `a` and `b` (with `a < b`) both occupy `i` at `s`".
    Overlap {
        a: usize,
        b: usize,
        s: usize,
        i: VertexId,
    },
}

/// Bijection between logical variables and flat QUBO indices.
///
/// Layout: all path variables `m * (S+1) * n`, ordered by target, step,
/// vertex; then the slack block for targets `1..m` (the first target is
/// exempt from the overlap constraint and has no slack); then one overlap
/// indicator per unordered target pair, step and vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarIndex {
    n: usize,
    steps: usize,
    targets: Vec<VertexId>,
    root: VertexId,
    slack_bits: usize,
    rule: OverlapRule,
}

/// `ceil(log2(S + 2))`: enough bits for a slack in `[0, S + 1]`.
pub fn default_slack_bits(steps: usize) -> usize {
    let mut bits = 0;
    while (1usize << bits) < steps + 2 {
        bits += 1;
    }
    bits
}

impl VarIndex {
    pub fn new(
        n: usize,
        steps: usize,
        targets: Vec<VertexId>,
        root: VertexId,
        slack_bits: usize,
        rule: OverlapRule,
    ) -> Self {
        VarIndex {
            n,
            steps,
            targets,
            root,
            slack_bits,
            rule,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Horizon `S`. Steps run `0..=S`.
    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn layers(&self) -> usize {
        self.steps + 1
    }

    pub fn targets(&self) -> &[VertexId] {
        &self.targets
    }

    pub fn m(&self) -> usize {
        self.targets.len()
    }

    /// Vertex the first target's path must occupy at step 0.
    pub fn root(&self) -> VertexId {
        self.root
    }

    pub fn slack_bits(&self) -> usize {
        self.slack_bits
    }

    pub fn rule(&self) -> OverlapRule {
        self.rule
    }

    pub fn num_path_vars(&self) -> usize {
        self.m() * self.layers() * self.n
    }

    pub fn num_slack_vars(&self) -> usize {
        self.m().saturating_sub(1) * self.slack_bits
    }

    pub fn num_pairs(&self) -> usize {
        let m = self.m();
        m * m.saturating_sub(1) / 2
    }

    pub fn num_overlap_vars(&self) -> usize {
        self.num_pairs() * self.layers() * self.n
    }

    pub fn num_vars(&self) -> usize {
        self.num_path_vars() + self.num_slack_vars() + self.num_overlap_vars()
    }

    #[inline]
    pub fn x(&self, k: usize, s: usize, i: VertexId) -> usize {
        debug_assert!(k < self.m() && s <= self.steps && i < self.n);
        (k * self.layers() + s) * self.n + i
    }

    #[inline]
    pub fn slack(&self, k: usize, bit: usize) -> usize {
        debug_assert!(k >= 1 && k < self.m() && bit < self.slack_bits);
        self.num_path_vars() + (k - 1) * self.slack_bits + bit
    }

    fn pair_index(&self, a: usize, b: usize) -> usize {
        debug_assert!(a < b && b < self.m());
        // pairs (0,1), (0,2), .., (0,m-1), (1,2), ..
        let m = self.m();
        a * (2 * m - a - 1) / 2 + (b - a - 1)
    }

    /// Overlap indicator for paths `a` and `b` (any order, distinct).
    #[inline]
    pub fn overlap(&self, a: usize, b: usize, s: usize, i: VertexId) -> usize {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        let base = self.num_path_vars() + self.num_slack_vars();
        base + (self.pair_index(a, b) * self.layers() + s) * self.n + i
    }

    /// Target positions whose overlaps with `k` count towards `k`'s
    /// requirement. Empty for the first target.
    pub fn partners(&self, k: usize) -> Vec<usize> {
        if k == 0 {
            return Vec::new();
        }
        match self.rule {
            OverlapRule::Preceding => (0..k).collect(),
            OverlapRule::AnyOther => (0..self.m()).filter(|&j| j != k).collect(),
        }
    }

    /// Largest overlap count target `k` can reach.
    pub fn max_overlap(&self, k: usize) -> usize {
        self.partners(k).len() * self.layers()
    }

    /// Largest slack value the bit block can hold.
    pub fn max_slack(&self) -> usize {
        if self.slack_bits >= usize::BITS as usize {
            usize::MAX
        } else {
            (1usize << self.slack_bits) - 1
        }
    }

    pub fn kind(&self, var: usize) -> Option<VarKind> {
        let np = self.num_path_vars();
        let ns = self.num_slack_vars();
        if var < np {
            let i = var % self.n;
            let rest = var / self.n;
            Some(VarKind::Path {
                k: rest / self.layers(),
                s: rest % self.layers(),
                i,
            })
        } else if var < np + ns {
            let off = var - np;
            Some(VarKind::Slack {
                k: off / self.slack_bits + 1,
                bit: off % self.slack_bits,
            })
        } else if var < self.num_vars() {
            let off = var - np - ns;
            let i = off % self.n;
            let rest = off / self.n;
            let s = rest % self.layers();
            let mut p = rest / self.layers();
            let m = self.m();
            let mut a = 0;
            while p >= m - a - 1 {
                p -= m - a - 1;
                a += 1;
            }
            Some(VarKind::Overlap {
                a,
                b: a + 1 + p,
                s,
                i,
            })
        } else {
            None
        }
    }

    /// Slack value encoded in `bits` for target `k`.
    pub fn slack_value(&self, bits: &[bool], k: usize) -> usize {
        if k == 0 {
            return 0;
        }
        (0..self.slack_bits)
            .filter(|&b| bits[self.slack(k, b)])
            .map(|b| 1usize << b)
            .sum()
    }

    /// Overlap count `O_k` from the path bits (not the indicators).
    pub fn overlap_count(&self, bits: &[bool], k: usize) -> usize {
        let mut count = 0;
        for j in self.partners(k) {
            for s in 0..self.layers() {
                for i in 0..self.n {
                    if bits[self.x(k, s, i)] && bits[self.x(j, s, i)] {
                        count += 1;
                    }
                }
            }
        }
        count
    }

    /// Sets every overlap indicator to the product of its two path bits and
    /// every slack block to `O_k - 1`, clamped into the representable range.
    /// Path bits are left untouched.
    pub fn settle_auxiliary(&self, bits: &mut [bool]) {
        let m = self.m();
        for a in 0..m {
            for b in a + 1..m {
                for s in 0..self.layers() {
                    for i in 0..self.n {
                        bits[self.overlap(a, b, s, i)] =
                            bits[self.x(a, s, i)] && bits[self.x(b, s, i)];
                    }
                }
            }
        }
        for k in 1..m {
            let y = self
                .overlap_count(bits, k)
                .saturating_sub(1)
                .min(self.max_slack());
            for bit in 0..self.slack_bits {
                bits[self.slack(k, bit)] = (y >> bit) & 1 == 1;
            }
        }
    }
}
