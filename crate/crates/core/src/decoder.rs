//! From bit vectors back to trees.
//!
//! [`decode`] reads per-target paths out of an assignment, builds the edge
//! union, and evaluates every term of the model directly on the bits (not
//! through the assembled coefficients), so the report doubles as an audit of
//! the QUBO expansion. [`verify_feasible`] is a purely graph-theoretic check
//! of the resulting tree. [`PathFamily`] goes the other way and encodes a
//! tree as a zero-penalty assignment.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{Edge, Graph, VertexId, Weight};
use crate::qubo::{Label, SteinerQubo, VarIndex};

/// Values of the six penalty terms on one assignment, before scaling by
/// lambda. Each is 0 exactly when its constraint holds. `H4` alone can be
/// negative (a path occupying several vertices at once); `H3 + H4` never is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Violations(pub [i64; 6]);

impl Violations {
    pub fn get(&self, label: Label) -> i64 {
        label.penalty_index().map_or(0, |p| self.0[p])
    }

    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn all_zero(&self) -> bool {
        self.0.iter().all(|&v| v == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Label, i64)> + '_ {
        Label::PENALTIES.iter().copied().zip(self.0.iter().copied())
    }
}

/// Occupied steps of one target's path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetPath {
    pub target: VertexId,
    /// `(step, vertex)` in step order; steps with no vertex are omitted.
    pub steps: Vec<(usize, VertexId)>,
}

/// A move between consecutive steps along a pair of vertices with no edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InvalidMove {
    pub target: VertexId,
    pub step: usize,
    pub from: VertexId,
    pub to: VertexId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SteinerSolution {
    pub paths: Vec<TargetPath>,
    /// Edge union over all paths, sorted.
    pub tree_edges: Vec<Edge>,
    pub tree_weight: Weight,
    /// `H_A` on the assignment; an edge used by two paths counts twice.
    pub objective_energy: i64,
    /// `lambda * (H1 + .. + H6)` on the assignment.
    pub penalty_energy: i64,
    pub violations: Violations,
    /// All six penalty terms vanish.
    pub feasible: bool,
    pub invalid_moves: Vec<InvalidMove>,
    /// Edges were reduced by [`SteinerSolution::pruned`].
    pub pruned: bool,
}

impl SteinerSolution {
    /// `objective_energy + penalty_energy`, equal to the model energy.
    pub fn energy(&self) -> i64 {
        self.objective_energy + self.penalty_energy
    }

    /// Minimum spanning forest of the edge union with non-required leaves
    /// stripped repeatedly. Not part of the encoding; energies and
    /// violations still describe the raw sample.
    pub fn pruned(&self, g: &Graph) -> SteinerSolution {
        let mut edges = self.tree_edges.clone();
        edges.sort_by_key(|e| (e.w, e.u, e.v));
        let mut uf = UnionFind::new(g.n());
        let mut kept: Vec<Edge> = edges.into_iter().filter(|e| uf.union(e.u, e.v)).collect();

        let required: BTreeSet<VertexId> = g.required_vertices().into_iter().collect();
        loop {
            let mut degree = vec![0usize; g.n()];
            for e in &kept {
                degree[e.u] += 1;
                degree[e.v] += 1;
            }
            let before = kept.len();
            kept.retain(|e| {
                let leaf = |v: VertexId| degree[v] == 1 && !required.contains(&v);
                !(leaf(e.u) || leaf(e.v))
            });
            if kept.len() == before {
                break;
            }
        }
        kept.sort();
        let mut out = self.clone();
        out.tree_weight = kept.iter().map(|e| e.w).sum();
        out.tree_edges = kept;
        out.pruned = true;
        out
    }
}

/// Reads a solution out of `x`.
///
/// When a step holds several vertices the lowest one is used for the path
/// and the excess shows up in `H3`. Moves between non-adjacent vertices are
/// reported in `invalid_moves` and contribute no edge.
pub fn decode(q: &SteinerQubo, x: &[bool]) -> SteinerSolution {
    let idx = q.index();
    let g = q.graph();
    let wm = q.weights();
    assert_eq!(x.len(), idx.num_vars(), "assignment length mismatch");
    let (n, m, steps) = (idx.n(), idx.m(), idx.steps());

    let occupied = |k: usize, s: usize| (0..n).filter(move |&i| x[idx.x(k, s, i)]);
    let count = |k: usize, s: usize| occupied(k, s).count() as i64;

    let mut paths = Vec::with_capacity(m);
    let mut union = BTreeSet::new();
    let mut invalid_moves = Vec::new();
    for (k, &target) in idx.targets().iter().enumerate() {
        let cells: Vec<(usize, VertexId)> = (0..=steps)
            .filter_map(|s| occupied(k, s).next().map(|i| (s, i)))
            .collect();
        for pair in cells.windows(2) {
            let ((s, a), (t, b)) = (pair[0], pair[1]);
            if t != s + 1 || a == b {
                continue;
            }
            match g.edge_weight(a, b) {
                Some(w) => {
                    union.insert(Edge::new(a, b, w));
                }
                None => invalid_moves.push(InvalidMove {
                    target,
                    step: s,
                    from: a,
                    to: b,
                }),
            }
        }
        paths.push(TargetPath {
            target,
            steps: cells,
        });
    }
    let tree_edges: Vec<Edge> = union.into_iter().collect();
    let tree_weight = tree_edges.iter().map(|e| e.w).sum();

    let mut objective = 0;
    for k in 0..m {
        for s in 0..steps {
            for i in occupied(k, s) {
                for j in occupied(k, s + 1) {
                    objective += wm.get(i, j);
                }
            }
        }
    }

    let mut v = [0i64; 6];
    if m > 0 {
        v[0] = 1 - x[idx.x(0, 0, idx.root())] as i64;
    }
    for (k, &t) in idx.targets().iter().enumerate() {
        v[1] += 1 - x[idx.x(k, steps, t)] as i64;
        for s in 0..=steps {
            let c = count(k, s);
            v[2] += c * c - c;
        }
        for s in 0..steps {
            let c = count(k, s);
            v[3] += c - c * count(k, s + 1);
        }
        for i in (0..n).filter(|&i| !g.is_terminal(i)) {
            for s in 0..steps {
                v[4] += (x[idx.x(k, s, i)] && x[idx.x(k, s + 1, i)]) as i64;
            }
        }
    }
    v[5] = overlap_penalty(idx, x);

    let violations = Violations(v);
    SteinerSolution {
        paths,
        tree_edges,
        tree_weight,
        objective_energy: objective,
        penalty_energy: q.lambda() * violations.total(),
        violations,
        feasible: violations.all_zero(),
        invalid_moves,
        pruned: false,
    }
}

/// Quadratized overlap term evaluated on the bits: the squared slack
/// equations over the indicator bits plus one AND check per indicator.
fn overlap_penalty(idx: &VarIndex, x: &[bool]) -> i64 {
    let m = idx.m();
    let mut total = 0;
    for k in 1..m {
        let mut overlaps = 0i64;
        for j in idx.partners(k) {
            for s in 0..idx.layers() {
                for i in 0..idx.n() {
                    overlaps += x[idx.overlap(k, j, s, i)] as i64;
                }
            }
        }
        let r = overlaps - idx.slack_value(x, k) as i64 - 1;
        total += r * r;
    }
    for a in 0..m {
        for b in a + 1..m {
            for s in 0..idx.layers() {
                for i in 0..idx.n() {
                    let xa = x[idx.x(a, s, i)] as i64;
                    let xb = x[idx.x(b, s, i)] as i64;
                    let z = x[idx.overlap(a, b, s, i)] as i64;
                    total += xa * xb - 2 * xa * z - 2 * xb * z + 3 * z;
                }
            }
        }
    }
    total
}

/// Graph-level check, independent of any energy: every edge exists in `g`
/// with its weight, the edges form one tree, and that tree holds every
/// terminal and the root.
pub fn verify_feasible(sol: &SteinerSolution, g: &Graph) -> bool {
    let required = g.required_vertices();
    if sol.tree_edges.is_empty() {
        return required.len() == 1;
    }
    let mut uf = UnionFind::new(g.n());
    let mut touched = BTreeSet::new();
    for e in &sol.tree_edges {
        if g.edge_weight(e.u, e.v) != Some(e.w) {
            return false;
        }
        if !uf.union(e.u, e.v) {
            // cycle (or a repeated edge)
            return false;
        }
        touched.insert(e.u);
        touched.insert(e.v);
    }
    if touched.len() != sol.tree_edges.len() + 1 {
        return false;
    }
    let anchor = *touched.iter().next().unwrap();
    required
        .iter()
        .all(|&r| touched.contains(&r) && uf.find(r) == uf.find(anchor))
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    /// Merges the two sets; false if they were already one.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// One vertex (or none) per target and step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathFamily {
    /// `cells[k][s]`, `k` over target positions, `s` over `0..=S`.
    pub cells: Vec<Vec<Option<VertexId>>>,
}

impl PathFamily {
    /// Assignment with these path bits, overlap indicators set to the
    /// products and slack set to `O_k - 1` (clamped).
    pub fn encode(&self, idx: &VarIndex) -> Vec<bool> {
        assert_eq!(self.cells.len(), idx.m(), "one path per target");
        let mut x = vec![false; idx.num_vars()];
        for (k, path) in self.cells.iter().enumerate() {
            assert_eq!(path.len(), idx.layers(), "one cell per step");
            for (s, cell) in path.iter().enumerate() {
                if let Some(i) = *cell {
                    x[idx.x(k, s, i)] = true;
                }
            }
        }
        idx.settle_auxiliary(&mut x);
        x
    }

    /// Paths as decoded: occupied `(step, vertex)` pairs per target.
    pub fn occupied(&self) -> Vec<Vec<(usize, VertexId)>> {
        self.cells
            .iter()
            .map(|p| {
                p.iter()
                    .enumerate()
                    .filter_map(|(s, c)| c.map(|i| (s, i)))
                    .collect()
            })
            .collect()
    }

    /// Lays a tree out as paths that meet every penalty.
    ///
    /// The tree is rooted at `g.root()`. The first target walks from the
    /// root to its terminal; every later target starts where its tree path
    /// to the root first meets an earlier route and walks down to its
    /// terminal. A vertex at depth `d` is visited at step `d + delay`, and
    /// each path dwells on its terminal once there. A positive `delay`
    /// keeps the first path on the root for the first steps and requires a
    /// terminal root.
    ///
    /// Returns `None` when the edges do not form a tree through the root and
    /// every terminal, or when the deepest terminal lands beyond step `S`.
    pub fn from_tree(g: &Graph, edges: &[Edge], steps: usize, delay: usize) -> Option<PathFamily> {
        let n = g.n();
        let mut adj: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
        for e in edges {
            adj.entry(e.u).or_default().push(e.v);
            adj.entry(e.v).or_default().push(e.u);
        }
        let root = g.root();
        if delay > 0 && !g.is_terminal(root) {
            return None;
        }
        let mut parent = vec![usize::MAX; n];
        let mut depth = vec![usize::MAX; n];
        depth[root] = 0;
        let mut queue = VecDeque::from([root]);
        let mut seen_edges = 0;
        while let Some(v) = queue.pop_front() {
            for &u in adj.get(&v).map(|a| a.as_slice()).unwrap_or(&[]) {
                if depth[u] == usize::MAX {
                    depth[u] = depth[v] + 1;
                    parent[u] = v;
                    seen_edges += 1;
                    queue.push_back(u);
                }
            }
        }
        // connected through the root and acyclic
        if seen_edges != edges.len() {
            return None;
        }
        let terminals = g.terminals();
        if terminals.iter().any(|&t| depth[t] == usize::MAX) {
            return None;
        }
        if terminals.iter().any(|&t| depth[t] + delay > steps) {
            return None;
        }

        let mut covered = vec![false; n];
        covered[root] = true;
        let mut cells = Vec::with_capacity(terminals.len());
        for (k, &t) in terminals.iter().enumerate() {
            // climb until an earlier route (the root counts for the first)
            let mut route = vec![t];
            let mut v = t;
            while !covered[v] {
                v = parent[v];
                route.push(v);
            }
            route.reverse();
            let mut path = vec![None; steps + 1];
            if k == 0 {
                for cell in path.iter_mut().take(delay) {
                    *cell = Some(root);
                }
            }
            for &u in &route {
                path[depth[u] + delay] = Some(u);
                covered[u] = true;
            }
            for cell in path.iter_mut().skip(depth[t] + delay + 1) {
                *cell = Some(t);
            }
            cells.push(path);
        }
        Some(PathFamily { cells })
    }
}
