//! Simple undirected graphs and the standard constructors and operators.

use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};

use thiserror::Error;

use crate::bitset::{VertexSet, MAX_VERTICES};

/// Default vertex cap applied by every constructor.
pub const DEFAULT_VERTEX_CAP: usize = MAX_VERTICES;

static VERTEX_CAP: AtomicUsize = AtomicUsize::new(DEFAULT_VERTEX_CAP);

/// Current vertex cap.
pub fn vertex_cap() -> usize {
    VERTEX_CAP.load(Ordering::Relaxed)
}

/// Change the vertex cap. It can be lowered freely but never raised above
/// [`MAX_VERTICES`], the width of the adjacency rows.
pub fn set_vertex_cap(cap: usize) -> Result<(), GraphError> {
    if cap > MAX_VERTICES {
        return Err(GraphError::CapTooLarge {
            requested: cap,
            max: MAX_VERTICES,
        });
    }
    VERTEX_CAP.store(cap, Ordering::Relaxed);
    Ok(())
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph would have {n} vertices, above the vertex cap of {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("vertex cap {requested} is above the hard maximum {max}")]
    CapTooLarge { requested: usize, max: usize },
    #[error("vertex {v} out of range for a graph on {n} vertices")]
    VertexOutOfRange { v: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("path needs at least one vertex")]
    EmptyPath,
    #[error("parse error at byte {offset}: {msg}")]
    Parse { offset: usize, msg: String },
}

fn check_cap(n: usize) -> Result<(), GraphError> {
    let cap = vertex_cap();
    if n > cap {
        Err(GraphError::CapExceeded { n, cap })
    } else {
        Ok(())
    }
}

/// Immutable simple graph on vertices `0..n`.
///
/// Adjacency is one [`VertexSet`] row per vertex; rows are kept symmetric and
/// loop-free, and the edge count is cached.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<VertexSet>,
    m: usize,
}

impl Graph {
    /// Graph with no edges. Used internally by the builders.
    pub(crate) fn blank(n: usize) -> Result<Self, GraphError> {
        check_cap(n)?;
        Ok(Graph {
            n,
            adj: vec![VertexSet::new(); n],
            m: 0,
        })
    }

    /// Build from an edge list. Duplicate edges are merged.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Self::blank(n)?;
        for &(u, v) in edges {
            g.try_add_edge(u, v)?;
        }
        Ok(g)
    }

    pub(crate) fn try_add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        for w in [u, v] {
            if w >= self.n {
                return Err(GraphError::VertexOutOfRange { v: w, n: self.n });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        self.add_edge_unchecked(u, v);
        Ok(())
    }

    #[inline]
    pub(crate) fn add_edge_unchecked(&mut self, u: usize, v: usize) {
        if !self.adj[u].contains(v) {
            self.adj[u].insert(v);
            self.adj[v].insert(u);
            self.m += 1;
        }
    }

    #[inline]
    pub(crate) fn remove_edge_unchecked(&mut self, u: usize, v: usize) {
        if self.adj[u].contains(v) {
            self.adj[u].remove(v);
            self.adj[v].remove(u);
            self.m -= 1;
        }
    }

    /// A copy of this graph with the edge `uv` added.
    pub fn with_edge(&self, u: usize, v: usize) -> Result<Graph, GraphError> {
        let mut g = self.clone();
        g.try_add_edge(u, v)?;
        Ok(g)
    }

    /// A copy of this graph with the edge `uv` removed (no-op if absent).
    pub fn without_edge(&self, u: usize, v: usize) -> Result<Graph, GraphError> {
        for w in [u, v] {
            if w >= self.n {
                return Err(GraphError::VertexOutOfRange { v: w, n: self.n });
            }
        }
        let mut g = self.clone();
        g.remove_edge_unchecked(u, v);
        Ok(g)
    }

    /// A copy with one extra vertex `n` adjacent to `nbrs`.
    pub fn with_vertex(&self, nbrs: &VertexSet) -> Result<Graph, GraphError> {
        check_cap(self.n + 1)?;
        if let Some(v) = nbrs.last().filter(|&v| v >= self.n) {
            return Err(GraphError::VertexOutOfRange { v, n: self.n });
        }
        let mut g = self.clone();
        let new = g.n;
        g.n += 1;
        g.adj.push(*nbrs);
        for u in nbrs.iter() {
            g.adj[u].insert(new);
        }
        g.m += nbrs.len();
        Ok(g)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &VertexSet {
        &self.adj[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u].contains(v)
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Edges `(u, v)` with `u < v` in ascending lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            self.adj[u]
                .iter()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    /// Number of edges with both ends in `s`.
    pub fn edges_within(&self, s: &VertexSet) -> usize {
        s.iter().map(|v| self.adj[v].intersection_len(s)).sum::<usize>() / 2
    }

    /// Connected components of the subgraph induced by `within`, each as a
    /// vertex set, ordered by smallest member.
    pub fn components_within(&self, within: &VertexSet) -> Vec<VertexSet> {
        let mut left = *within;
        let mut out = Vec::new();
        while let Some(start) = left.first() {
            let mut comp = VertexSet::singleton(start);
            let mut frontier = comp;
            while !frontier.is_empty() {
                let mut next = VertexSet::new();
                for v in frontier.iter() {
                    next |= self.adj[v];
                }
                next = (next & *within) - comp;
                comp |= next;
                frontier = next;
            }
            left -= comp;
            out.push(comp);
        }
        out
    }

    pub fn components(&self) -> Vec<VertexSet> {
        self.components_within(&self.vertices())
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// True when the graph has no cycle.
    pub fn is_forest(&self) -> bool {
        self.m + self.components().len() == self.n
    }

    /// Subgraph induced by `s`, relabelled `0..|s|` in ascending original order.
    pub fn induced_subgraph(&self, s: &VertexSet) -> Result<Graph, GraphError> {
        if let Some(v) = s.last().filter(|&v| v >= self.n) {
            return Err(GraphError::VertexOutOfRange { v, n: self.n });
        }
        let verts = s.to_vec();
        self.relabel_subset(&verts)
    }

    /// Subgraph on `order`, where `order[i]` becomes vertex `i`.
    pub(crate) fn relabel_subset(&self, order: &[usize]) -> Result<Graph, GraphError> {
        let mut pos = vec![usize::MAX; self.n];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let mut g = Graph::blank(order.len())?;
        for (i, &v) in order.iter().enumerate() {
            for u in self.adj[v].iter() {
                let j = pos[u];
                if j != usize::MAX && j > i {
                    g.add_edge_unchecked(i, j);
                }
            }
        }
        Ok(g)
    }

    /// Relabel by a permutation: vertex `v` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n, "permutation length must equal n");
        let mut g = Graph::blank(self.n).expect("same size as an existing graph");
        for (u, v) in self.edges() {
            g.add_edge_unchecked(perm[u], perm[v]);
        }
        g
    }

    /// Graph with vertex `v` deleted; later vertices shift down by one.
    pub fn remove_vertex(&self, v: usize) -> Graph {
        let order: Vec<usize> = (0..self.n).filter(|&u| u != v).collect();
        self.relabel_subset(&order)
            .expect("subgraph of an existing graph fits the cap")
    }

    /// Checks the structural invariants; used by tests and debug assertions.
    pub fn check_invariants(&self) -> bool {
        if self.adj.len() != self.n {
            return false;
        }
        let mut deg_sum = 0;
        for u in 0..self.n {
            if self.adj[u].contains(u) {
                return false;
            }
            if self.adj[u].last().is_some_and(|v| v >= self.n) {
                return false;
            }
            for v in self.adj[u].iter() {
                if !self.adj[v].contains(u) {
                    return false;
                }
            }
            deg_sum += self.adj[u].len();
        }
        deg_sum == 2 * self.m
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges=[", self.n)?;
        for (i, (u, v)) in self.edges().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{u}-{v}")?;
        }
        write!(f, "])")
    }
}

/// `K_t`.
pub fn complete(t: usize) -> Result<Graph, GraphError> {
    let mut g = Graph::blank(t)?;
    let all = VertexSet::full(t);
    for v in 0..t {
        let mut row = all;
        row.remove(v);
        g.adj[v] = row;
    }
    g.m = t * t.saturating_sub(1) / 2;
    Ok(g)
}

/// `E_t`, the edgeless graph.
pub fn empty(t: usize) -> Result<Graph, GraphError> {
    Graph::blank(t)
}

/// `M_t`: `floor(t/2)` independent edges `(0,1), (2,3), ...`.
pub fn matching(t: usize) -> Result<Graph, GraphError> {
    let mut g = Graph::blank(t)?;
    for i in 0..t / 2 {
        g.add_edge_unchecked(2 * i, 2 * i + 1);
    }
    Ok(g)
}

/// `P_l`, the path on `l` vertices.
pub fn path(l: usize) -> Result<Graph, GraphError> {
    if l == 0 {
        return Err(GraphError::EmptyPath);
    }
    let mut g = Graph::blank(l)?;
    for i in 1..l {
        g.add_edge_unchecked(i - 1, i);
    }
    Ok(g)
}

/// Star `K_{1,leaves}` with centre 0.
pub fn star(leaves: usize) -> Result<Graph, GraphError> {
    join(&complete(1)?, &empty(leaves)?)
}

/// Double star: adjacent centres 0 and 1, with `a` leaves on 0 and `b` on 1.
pub fn double_star(a: usize, b: usize) -> Result<Graph, GraphError> {
    let mut g = Graph::blank(2 + a + b)?;
    g.add_edge_unchecked(0, 1);
    for i in 0..a {
        g.add_edge_unchecked(0, 2 + i);
    }
    for i in 0..b {
        g.add_edge_unchecked(1, 2 + a + i);
    }
    Ok(g)
}

/// `g ∪ h`, with `h` shifted up by `g.n()`.
pub fn disjoint_union(g: &Graph, h: &Graph) -> Result<Graph, GraphError> {
    let mut out = Graph::blank(g.n + h.n)?;
    for (u, v) in g.edges() {
        out.add_edge_unchecked(u, v);
    }
    for (u, v) in h.edges() {
        out.add_edge_unchecked(u + g.n, v + g.n);
    }
    Ok(out)
}

/// `g + h`: disjoint union plus every edge between the two parts.
pub fn join(g: &Graph, h: &Graph) -> Result<Graph, GraphError> {
    let mut out = disjoint_union(g, h)?;
    for u in 0..g.n {
        for v in 0..h.n {
            out.add_edge_unchecked(u, g.n + v);
        }
    }
    Ok(out)
}

/// Turán graph `T_r(n)`: complete `r`-partite, class sizes differing by at
/// most one. Vertices are assigned to classes in contiguous blocks, larger
/// classes first.
pub fn turan_graph(r: usize, n: usize) -> Result<Graph, GraphError> {
    let mut g = Graph::blank(n)?;
    if r == 0 {
        return Ok(g);
    }
    let (base, extra) = (n / r, n % r);
    let mut class = Vec::with_capacity(n);
    for c in 0..r {
        let size = base + usize::from(c < extra);
        class.extend(std::iter::repeat_n(c, size));
    }
    for u in 0..n {
        for v in u + 1..n {
            if class[u] != class[v] {
                g.add_edge_unchecked(u, v);
            }
        }
    }
    Ok(g)
}

/// The Petersen graph: outer 5-cycle `0..5`, inner pentagram `5..10`.
pub fn petersen() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    Graph::from_edges(10, &edges).expect("10 vertices always fit")
}
