//! Problem instances: an undirected weighted graph with an ordered terminal
//! list and a designated root, plus the dense padded weight matrix used by
//! the QUBO objective.

use alloc::vec;
use alloc::vec::Vec;

/// Vertex identifier, 0-based.
pub type VertexId = usize;

/// Edge weight. Always strictly positive inside a [`Graph`].
pub type Weight = i64;

/// Default padding weight for absent edges.
pub const DEFAULT_BIG: Weight = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("graph has no vertices")]
    Empty,
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: VertexId, n: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(VertexId),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(VertexId, VertexId),
    #[error("edge ({u}, {v}) has non-positive weight {w}")]
    NonPositiveWeight { u: VertexId, v: VertexId, w: Weight },
    #[error("no terminals")]
    NoTerminals,
    #[error("terminal {0} listed twice")]
    DuplicateTerminal(VertexId),
    #[error("padding weight {big} must exceed the maximum edge weight {max_weight}")]
    BigTooSmall { big: Weight, max_weight: Weight },
    #[error("{terminals} terminals requested on {n} vertices")]
    TooManyTerminals { terminals: usize, n: usize },
    #[error("invalid weight range [{0}, {1}]")]
    WeightRange(Weight, Weight),
}

/// An undirected weighted edge. Stored with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub w: Weight,
}

impl Edge {
    /// Builds an edge with normalized endpoint order.
    pub fn new(a: VertexId, b: VertexId, w: Weight) -> Self {
        let (u, v) = if a <= b { (a, b) } else { (b, a) };
        Edge { u, v, w }
    }

    pub fn other(&self, x: VertexId) -> VertexId {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// A validated Steiner tree instance.
///
/// `terminals[0]` is the first target `k1`; its path is pinned to `root`
/// at step 0 by the encoding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    terminals: Vec<VertexId>,
    root: VertexId,
    adjacency: Vec<Vec<(VertexId, Weight)>>,
}

impl Graph {
    /// Validates and builds an instance. Edges keep their input order but
    /// are normalized to `u < v`.
    pub fn new(
        n: usize,
        edges: impl IntoIterator<Item = (VertexId, VertexId, Weight)>,
        terminals: Vec<VertexId>,
        root: VertexId,
    ) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let check = |vertex: VertexId| {
            if vertex < n {
                Ok(())
            } else {
                Err(GraphError::VertexOutOfRange { vertex, n })
            }
        };

        let mut adjacency = vec![Vec::new(); n];
        let mut seen = alloc::collections::BTreeSet::new();
        let mut list = Vec::new();
        for (a, b, w) in edges {
            check(a)?;
            check(b)?;
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            if w <= 0 {
                return Err(GraphError::NonPositiveWeight { u: a, v: b, w });
            }
            let e = Edge::new(a, b, w);
            if !seen.insert((e.u, e.v)) {
                return Err(GraphError::DuplicateEdge(e.u, e.v));
            }
            adjacency[e.u].push((e.v, w));
            adjacency[e.v].push((e.u, w));
            list.push(e);
        }
        for adj in &mut adjacency {
            adj.sort_unstable();
        }

        if terminals.is_empty() {
            return Err(GraphError::NoTerminals);
        }
        let mut tset = alloc::collections::BTreeSet::new();
        for &t in &terminals {
            check(t)?;
            if !tset.insert(t) {
                return Err(GraphError::DuplicateTerminal(t));
            }
        }
        check(root)?;

        Ok(Graph {
            n,
            edges: list,
            terminals,
            root,
            adjacency,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn terminals(&self) -> &[VertexId] {
        &self.terminals
    }

    /// Number of terminals, `m`.
    pub fn m(&self) -> usize {
        self.terminals.len()
    }

    pub fn root(&self) -> VertexId {
        self.root
    }

    pub fn neighbors(&self, v: VertexId) -> &[(VertexId, Weight)] {
        &self.adjacency[v]
    }

    pub fn is_terminal(&self, v: VertexId) -> bool {
        self.terminals.contains(&v)
    }

    pub fn edge_weight(&self, a: VertexId, b: VertexId) -> Option<Weight> {
        self.adjacency
            .get(a)?
            .binary_search_by_key(&b, |&(v, _)| v)
            .ok()
            .map(|i| self.adjacency[a][i].1)
    }

    pub fn max_weight(&self) -> Weight {
        self.edges.iter().map(|e| e.w).max().unwrap_or(0)
    }

    /// Vertices every valid tree must contain: the terminals followed by the
    /// root when the root is not itself a terminal.
    pub fn required_vertices(&self) -> Vec<VertexId> {
        let mut req = self.terminals.clone();
        if !req.contains(&self.root) {
            req.push(self.root);
        }
        req
    }

    /// Vertices reachable from `start`, as a membership mask.
    pub fn reachable_from(&self, start: VertexId) -> Vec<bool> {
        let mut seen = vec![false; self.n];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(v) = stack.pop() {
            for &(u, _) in self.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen
    }
}

/// Dense symmetric weight matrix with absent edges padded to `big`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightMatrix {
    n: usize,
    entries: Vec<Weight>,
    big: Weight,
}

impl WeightMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn big(&self) -> Weight {
        self.big
    }

    #[inline]
    pub fn get(&self, i: VertexId, j: VertexId) -> Weight {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: VertexId) -> &[Weight] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }
}

/// Zero diagonal, the edge weight where an edge exists, `big` elsewhere.
pub fn build_weight_matrix(g: &Graph, big: Weight) -> Result<WeightMatrix, GraphError> {
    let max_weight = g.max_weight();
    if big <= max_weight {
        return Err(GraphError::BigTooSmall { big, max_weight });
    }
    let n = g.n();
    let mut entries = vec![big; n * n];
    for i in 0..n {
        entries[i * n + i] = 0;
    }
    for e in g.edges() {
        entries[e.u * n + e.v] = e.w;
        entries[e.v * n + e.u] = e.w;
    }
    Ok(WeightMatrix { n, entries, big })
}
