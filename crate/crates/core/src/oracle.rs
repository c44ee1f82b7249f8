//! Exact minimum Steiner trees.
//!
//! [`dreyfus_wagner`] runs the subset dynamic program over the required
//! vertices (terminals plus root); [`brute_force`] enumerates edge subsets
//! and exists to validate it on tiny graphs. Both work on the unpadded
//! graph.

use alloc::collections::{BTreeSet, BinaryHeap};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;

use crate::decoder::UnionFind;
use crate::graph::{Edge, Graph, VertexId, Weight};

/// Edge-count guard for [`brute_force`].
pub const BRUTE_FORCE_MAX_EDGES: usize = 20;

/// Required-vertex guard for [`dreyfus_wagner`] (table size `2^q * n`).
pub const DREYFUS_WAGNER_MAX_REQUIRED: usize = 20;

const INF: Weight = Weight::MAX / 4;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("vertices {0} and {1} are not connected")]
    Unreachable(VertexId, VertexId),
    #[error("{edges} edges exceed the brute-force limit of {limit}")]
    TooManyEdges { edges: usize, limit: usize },
    #[error("{required} required vertices exceed the limit of {limit}")]
    TooManyRequired { required: usize, limit: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SteinerTree {
    pub weight: Weight,
    /// Sorted edge list.
    pub edges: Vec<Edge>,
}

/// All-pairs shortest paths by one Dijkstra run per source.
#[derive(Debug, Clone)]
pub struct ShortestPaths {
    n: usize,
    dist: Vec<Weight>,
    pred: Vec<usize>,
}

impl ShortestPaths {
    pub fn new(g: &Graph) -> Self {
        let n = g.n();
        let mut dist = vec![INF; n * n];
        let mut pred = vec![usize::MAX; n * n];
        for src in 0..n {
            let row = src * n;
            dist[row + src] = 0;
            let mut heap = BinaryHeap::new();
            heap.push(Reverse((0, src)));
            while let Some(Reverse((d, v))) = heap.pop() {
                if d > dist[row + v] {
                    continue;
                }
                for &(u, w) in g.neighbors(v) {
                    let nd = d + w;
                    // ties keep the smaller predecessor for reproducible paths
                    if nd < dist[row + u] || (nd == dist[row + u] && v < pred[row + u]) {
                        let improved = nd < dist[row + u];
                        dist[row + u] = nd;
                        pred[row + u] = v;
                        if improved {
                            heap.push(Reverse((nd, u)));
                        }
                    }
                }
            }
        }
        ShortestPaths { n, dist, pred }
    }

    /// `None` when `b` is unreachable from `a`.
    pub fn dist(&self, a: VertexId, b: VertexId) -> Option<Weight> {
        let d = self.dist[a * self.n + b];
        (d < INF).then_some(d)
    }

    /// Vertices of a shortest `a`-`b` path, `a` first.
    pub fn path(&self, a: VertexId, b: VertexId) -> Option<Vec<VertexId>> {
        self.dist(a, b)?;
        let mut out = vec![b];
        let mut v = b;
        while v != a {
            v = self.pred[a * self.n + v];
            out.push(v);
        }
        out.reverse();
        Some(out)
    }
}

fn check_connected(g: &Graph, required: &[VertexId]) -> Result<(), OracleError> {
    let reach = g.reachable_from(required[0]);
    match required.iter().find(|&&r| !reach[r]) {
        Some(&r) => Err(OracleError::Unreachable(required[0], r)),
        None => Ok(()),
    }
}

#[derive(Debug, Clone, Copy)]
enum Back {
    /// Shortest path from this vertex.
    Path(VertexId),
    /// Two subtrees joined at the current vertex.
    Split(usize),
    /// Shortest path from the split point at this vertex.
    Move(VertexId),
}

/// Minimum Steiner tree over the terminals and the root.
///
/// `best[D][v]` is the cheapest tree spanning `D ∪ {v}`; a join step combines
/// `best[D'][v] + best[D \ D'][v]` over proper submasks, then one relaxation
/// pass extends every value along shortest paths. Ties keep the smallest
/// submask and the smallest source vertex.
pub fn dreyfus_wagner(g: &Graph) -> Result<SteinerTree, OracleError> {
    let required = g.required_vertices();
    let q = required.len();
    if q > DREYFUS_WAGNER_MAX_REQUIRED {
        return Err(OracleError::TooManyRequired {
            required: q,
            limit: DREYFUS_WAGNER_MAX_REQUIRED,
        });
    }
    check_connected(g, &required)?;
    if q == 1 {
        return Ok(SteinerTree {
            weight: 0,
            edges: Vec::new(),
        });
    }
    let n = g.n();
    let sp = ShortestPaths::new(g);
    let full = (1usize << q) - 1;

    let mut best = vec![INF; (full + 1) * n];
    let mut back = vec![Back::Path(0); (full + 1) * n];
    let mut join = vec![INF; (full + 1) * n];
    let mut join_back = vec![0usize; (full + 1) * n];

    for (t, &r) in required.iter().enumerate() {
        let mask = 1 << t;
        for v in 0..n {
            best[mask * n + v] = sp.dist(r, v).unwrap_or(INF);
            back[mask * n + v] = Back::Path(r);
        }
    }

    for mask in 1..=full {
        if mask.count_ones() < 2 {
            continue;
        }
        for v in 0..n {
            let mut value = INF;
            let mut arg = 0;
            // ascending proper non-empty submasks
            let mut sub = (mask - 1) & mask;
            let mut subs = Vec::new();
            while sub > 0 {
                subs.push(sub);
                sub = (sub - 1) & mask;
            }
            for &sub in subs.iter().rev() {
                let c = best[sub * n + v] + best[(mask ^ sub) * n + v];
                if c < value {
                    value = c;
                    arg = sub;
                }
            }
            join[mask * n + v] = value;
            join_back[mask * n + v] = arg;
        }
        for v in 0..n {
            let mut value = join[mask * n + v];
            let mut how = Back::Split(join_back[mask * n + v]);
            for u in 0..n {
                if u == v {
                    continue;
                }
                if let Some(d) = sp.dist(u, v) {
                    let c = join[mask * n + u] + d;
                    if c < value {
                        value = c;
                        how = Back::Move(u);
                    }
                }
            }
            best[mask * n + v] = value;
            back[mask * n + v] = how;
        }
    }

    let weight = best[full * n + required[0]];
    let mut edges = BTreeSet::new();
    let mut stack = vec![(full, required[0], false)];
    while let Some((mask, v, at_join)) = stack.pop() {
        let how = if at_join {
            Back::Split(join_back[mask * n + v])
        } else {
            back[mask * n + v]
        };
        match how {
            Back::Path(from) => add_path(g, &sp, from, v, &mut edges),
            Back::Split(sub) => {
                stack.push((sub, v, false));
                stack.push((mask ^ sub, v, false));
            }
            Back::Move(u) => {
                add_path(g, &sp, u, v, &mut edges);
                stack.push((mask, u, true));
            }
        }
    }
    let edges: Vec<Edge> = edges.into_iter().collect();
    debug_assert_eq!(edges.iter().map(|e| e.w).sum::<Weight>(), weight);
    Ok(SteinerTree { weight, edges })
}

fn add_path(g: &Graph, sp: &ShortestPaths, a: VertexId, b: VertexId, out: &mut BTreeSet<Edge>) {
    let path = sp.path(a, b).expect("reachable");
    for w in path.windows(2) {
        let weight = g.edge_weight(w[0], w[1]).expect("path edge");
        out.insert(Edge::new(w[0], w[1], weight));
    }
}

/// Cheapest edge subset forming one tree through every required vertex,
/// by enumerating all `2^|E|` subsets.
pub fn brute_force(g: &Graph) -> Result<SteinerTree, OracleError> {
    let edges = g.edges();
    if edges.len() > BRUTE_FORCE_MAX_EDGES {
        return Err(OracleError::TooManyEdges {
            edges: edges.len(),
            limit: BRUTE_FORCE_MAX_EDGES,
        });
    }
    let required = g.required_vertices();
    check_connected(g, &required)?;
    if required.len() == 1 {
        return Ok(SteinerTree {
            weight: 0,
            edges: Vec::new(),
        });
    }
    let mut best: Option<(Weight, u32)> = None;
    for subset in 1u32..(1u32 << edges.len()) {
        let weight: Weight = (0..edges.len())
            .filter(|&e| subset >> e & 1 == 1)
            .map(|e| edges[e].w)
            .sum();
        if best.is_some_and(|(b, _)| weight >= b) {
            continue;
        }
        if is_steiner_tree(g, &required, edges, subset) {
            best = Some((weight, subset));
        }
    }
    let (weight, subset) = best.expect("connected required vertices admit a tree");
    let mut chosen: Vec<Edge> = (0..edges.len())
        .filter(|&e| subset >> e & 1 == 1)
        .map(|e| edges[e])
        .collect();
    chosen.sort();
    Ok(SteinerTree {
        weight,
        edges: chosen,
    })
}

fn is_steiner_tree(g: &Graph, required: &[VertexId], edges: &[Edge], subset: u32) -> bool {
    let mut uf = UnionFind::new(g.n());
    let mut vertices = BTreeSet::new();
    let mut count = 0;
    for (i, e) in edges.iter().enumerate() {
        if subset >> i & 1 == 1 {
            if !uf.union(e.u, e.v) {
                return false;
            }
            vertices.insert(e.u);
            vertices.insert(e.v);
            count += 1;
        }
    }
    if vertices.len() != count + 1 {
        return false;
    }
    let anchor = required[0];
    required
        .iter()
        .all(|&r| vertices.contains(&r) && uf.find(r) == uf.find(anchor))
}
