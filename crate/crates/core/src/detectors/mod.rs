//! Exact containment tests for disjoint paths and forests, plus the
//! common-neighbourhood tools built on top of them.

mod forest;
mod paths;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::bitset::VertexSet;
use crate::graph::{self, Graph, GraphError};

pub use paths::{longest_path, SUBSET_DP_LIMIT};

pub(crate) use forest::{Embedder, ForestPlan};
pub(crate) use paths::Packer;

/// Default cap on path copies examined by [`build_codegree_hypergraph`].
pub const DEFAULT_COPY_CAP: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DetectorError {
    #[error("common neighbourhood of the empty set is undefined")]
    EmptySet,
    #[error("vertex {v} out of range for a graph on {n} vertices")]
    VertexOutOfRange { v: usize, n: usize },
    #[error("need 1 <= t <= {size}, got t = {t}")]
    SubsetSize { t: usize, size: usize },
    #[error("invalid pattern: {0}")]
    Pattern(String),
    #[error("pattern parse error at position {pos}: {msg}")]
    PatternParse { pos: usize, msg: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A forbidden configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PatternSpec {
    /// `k` vertex-disjoint copies of the path on `l` vertices.
    DisjointPaths { k: usize, l: usize },
    SinglePath(usize),
    /// An arbitrary forest, matched component by component.
    Forest(Graph),
}

impl PatternSpec {
    pub fn disjoint_paths(k: usize, l: usize) -> Result<Self, DetectorError> {
        if k == 0 || l < 2 {
            return Err(DetectorError::Pattern(format!("need k >= 1 and l >= 2, got k={k}, l={l}")));
        }
        Ok(PatternSpec::DisjointPaths { k, l })
    }

    pub fn single_path(l: usize) -> Result<Self, DetectorError> {
        if l < 2 {
            return Err(DetectorError::Pattern(format!("need l >= 2, got {l}")));
        }
        Ok(PatternSpec::SinglePath(l))
    }

    pub fn forest(h: Graph) -> Result<Self, DetectorError> {
        if !h.is_forest() {
            return Err(DetectorError::Pattern("forest pattern contains a cycle".into()));
        }
        if h.n() == 0 {
            return Err(DetectorError::Pattern("forest pattern has no vertices".into()));
        }
        Ok(PatternSpec::Forest(h))
    }

    /// Number of pattern vertices.
    pub fn order(&self) -> usize {
        match self {
            PatternSpec::DisjointPaths { k, l } => k * l,
            PatternSpec::SinglePath(l) => *l,
            PatternSpec::Forest(h) => h.n(),
        }
    }

    /// `(k, l)` for path patterns.
    pub fn as_paths(&self) -> Option<(usize, usize)> {
        match *self {
            PatternSpec::DisjointPaths { k, l } => Some((k, l)),
            PatternSpec::SinglePath(l) => Some((1, l)),
            PatternSpec::Forest(_) => None,
        }
    }

    /// The pattern as a graph; path copies are laid out consecutively.
    pub fn to_graph(&self) -> Result<Graph, GraphError> {
        match self {
            PatternSpec::Forest(h) => Ok(h.clone()),
            _ => {
                let (k, l) = self.as_paths().expect("path pattern");
                let mut g = graph::empty(0)?;
                let p = graph::path(l)?;
                for _ in 0..k {
                    g = graph::disjoint_union(&g, &p)?;
                }
                Ok(g)
            }
        }
    }

    /// Connected components of the pattern, as separate patterns.
    pub fn components(&self) -> Vec<PatternSpec> {
        match self {
            PatternSpec::Forest(h) => {
                let mut seen = BTreeSet::new();
                let mut out = Vec::new();
                for c in h.components() {
                    let part = h.induced_subgraph(&c).expect("subgraph of a valid graph");
                    if seen.insert(crate::canon::canonical_code(&part)) {
                        out.push(PatternSpec::Forest(part));
                    }
                }
                out
            }
            _ => {
                let (_, l) = self.as_paths().expect("path pattern");
                vec![PatternSpec::SinglePath(l)]
            }
        }
    }

    /// True when the pattern has a vertex of degree zero.
    pub fn has_isolated_vertex(&self) -> bool {
        match self {
            PatternSpec::Forest(h) => (0..h.n()).any(|v| h.degree(v) == 0),
            _ => false,
        }
    }
}

impl fmt::Display for PatternSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternSpec::DisjointPaths { k, l } => write!(f, "{k}*P{l}"),
            PatternSpec::SinglePath(l) => write!(f, "P{l}"),
            PatternSpec::Forest(h) => write!(f, "forest[{}]", crate::io::to_graph6(h)),
        }
    }
}

impl FromStr for PatternSpec {
    type Err = DetectorError;

    /// Parses `k*Pl` or `Pl`. Forest patterns are read from files by the
    /// caller.
    fn from_str(s: &str) -> Result<Self, DetectorError> {
        let err = |pos: usize, msg: &str| DetectorError::PatternParse {
            pos,
            msg: msg.to_string(),
        };
        let bytes = s.as_bytes();
        let digits = |from: usize| -> usize {
            bytes[from..].iter().take_while(|b| b.is_ascii_digit()).count()
        };
        let number = |from: usize, len: usize| -> Result<usize, DetectorError> {
            s[from..from + len]
                .parse()
                .map_err(|_| err(from, "number too large"))
        };
        let mut pos = 0;
        let mut k = None;
        let lead = digits(0);
        if lead > 0 {
            k = Some(number(0, lead)?);
            pos = lead;
            if bytes.get(pos) != Some(&b'*') {
                return Err(err(pos, "expected `*` after the copy count"));
            }
            pos += 1;
        }
        if bytes.get(pos) != Some(&b'P') {
            return Err(err(pos, "expected `P`"));
        }
        pos += 1;
        let len = digits(pos);
        if len == 0 {
            return Err(err(pos, "expected the path order after `P`"));
        }
        let l = number(pos, len)?;
        pos += len;
        if pos != bytes.len() {
            return Err(err(pos, "unexpected trailing input"));
        }
        let checked = |r: Result<PatternSpec, DetectorError>| {
            r.map_err(|e| match e {
                DetectorError::Pattern(msg) => err(0, &msg),
                other => other,
            })
        };
        match k {
            Some(k) => checked(PatternSpec::disjoint_paths(k, l)),
            None => checked(PatternSpec::single_path(l)),
        }
    }
}

/// Vertex lists realising an embedding, one per pattern component.
///
/// For path patterns each list is the path in order. For forests, list `i`
/// belongs to the `i`-th component of the pattern (ordered by smallest
/// vertex) and gives the images of that component's vertices in ascending
/// pattern order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub parts: Vec<Vec<usize>>,
}

/// Search tuning for the detectors.
#[derive(Debug, Clone)]
pub struct DetectorOptions {
    /// Memory allowed for the packing failure memo. Past it, the search
    /// stops recording and continues as plain backtracking.
    pub memo_budget_bytes: usize,
    /// Smallest remaining vertex set on which the packing bound is tried.
    pub bound_min_vertices: usize,
    /// Enables the covering bounds. They never change answers.
    pub use_bounds: bool,
}

impl Default for DetectorOptions {
    fn default() -> Self {
        DetectorOptions {
            memo_budget_bytes: 64 << 20,
            bound_min_vertices: 8,
            use_bounds: true,
        }
    }
}

/// Whether `g` contains `p` as a (not necessarily induced) subgraph.
pub fn contains_pattern(g: &Graph, p: &PatternSpec) -> Option<Witness> {
    contains_pattern_with(g, p, &DetectorOptions::default())
}

pub fn contains_pattern_with(g: &Graph, p: &PatternSpec, opts: &DetectorOptions) -> Option<Witness> {
    contains_within(g, p, g.vertices(), opts)
}

/// Containment restricted to the subgraph induced by `avail`.
pub(crate) fn contains_within(
    g: &Graph,
    p: &PatternSpec,
    avail: VertexSet,
    opts: &DetectorOptions,
) -> Option<Witness> {
    if p.order() > avail.len() {
        return None;
    }
    match p {
        PatternSpec::Forest(h) => {
            let plan = ForestPlan::new(h);
            let phi = Embedder::new(g, &plan, opts).embed(avail)?;
            let parts = plan
                .components
                .iter()
                .map(|c| c.iter().map(|&v| phi[v]).collect())
                .collect();
            Some(Witness { parts })
        }
        _ => {
            let (k, l) = p.as_paths().expect("path pattern");
            let parts = Packer::new(g, l, opts).pack(avail, k)?;
            Some(Witness { parts })
        }
    }
}

/// Re-checks that `w` embeds `p` in `g`.
pub fn verify_witness(g: &Graph, p: &PatternSpec, w: &Witness) -> bool {
    let mut used = VertexSet::new();
    for part in &w.parts {
        for &v in part {
            if v >= g.n() || used.contains(v) {
                return false;
            }
            used.insert(v);
        }
    }
    match p {
        PatternSpec::Forest(h) => {
            let comps = h.components();
            if comps.len() != w.parts.len() {
                return false;
            }
            let mut phi = vec![usize::MAX; h.n()];
            for (comp, part) in comps.iter().zip(&w.parts) {
                if comp.len() != part.len() {
                    return false;
                }
                for (v, &img) in comp.iter().zip(part) {
                    phi[v] = img;
                }
            }
            h.edges().all(|(u, v)| g.has_edge(phi[u], phi[v]))
        }
        _ => {
            let (k, l) = p.as_paths().expect("path pattern");
            w.parts.len() == k
                && w.parts
                    .iter()
                    .all(|part| part.len() == l && part.windows(2).all(|e| g.has_edge(e[0], e[1])))
        }
    }
}

fn check_vertices(g: &Graph, vs: impl IntoIterator<Item = usize>) -> Result<(), DetectorError> {
    for v in vs {
        if v >= g.n() {
            return Err(DetectorError::VertexOutOfRange { v, n: g.n() });
        }
    }
    Ok(())
}

/// Common neighbourhood of `u`, excluding `u` itself.
pub fn common_neighborhood(g: &Graph, u: &VertexSet) -> Result<VertexSet, DetectorError> {
    if u.is_empty() {
        return Err(DetectorError::EmptySet);
    }
    check_vertices(g, u.iter())?;
    let mut acc = g.vertices();
    for v in u.iter() {
        acc &= *g.neighbors(v);
    }
    Ok(acc - *u)
}

/// The `t`-subset of `copy` with the largest common neighbourhood (ties to
/// the lexicographically least subset), and that codegree.
pub fn find_high_codegree_subset(
    g: &Graph,
    copy: &[usize],
    t: usize,
) -> Result<(Vec<usize>, usize), DetectorError> {
    let mut verts = copy.to_vec();
    verts.sort_unstable();
    verts.dedup();
    check_vertices(g, verts.iter().copied())?;
    if t == 0 || t > verts.len() {
        return Err(DetectorError::SubsetSize { t, size: verts.len() });
    }
    let mut idx: Vec<usize> = (0..t).collect();
    let mut best: Option<(Vec<usize>, usize)> = None;
    loop {
        let subset: Vec<usize> = idx.iter().map(|&i| verts[i]).collect();
        let set: VertexSet = subset.iter().collect();
        let deg = common_neighborhood(g, &set)?.len();
        if best.as_ref().is_none_or(|(_, d)| deg > *d) {
            best = Some((subset, deg));
        }
        // Next combination in lexicographic order.
        let Some(i) = (0..t).rev().find(|&i| idx[i] < verts.len() - t + i) else {
            break;
        };
        idx[i] += 1;
        for j in i + 1..t {
            idx[j] = idx[j - 1] + 1;
        }
    }
    Ok(best.expect("at least one subset"))
}

/// Every `l`-vertex path of `g` once (as the orientation with the smaller
/// end first), stopping after `cap` copies. Returns the copies and whether
/// the cap cut the enumeration short.
pub fn path_copies(g: &Graph, l: usize, cap: usize) -> (Vec<Vec<usize>>, bool) {
    fn extend(
        g: &Graph,
        l: usize,
        cap: usize,
        path: &mut Vec<usize>,
        used: &mut VertexSet,
        out: &mut Vec<Vec<usize>>,
    ) -> bool {
        if path.len() == l {
            if path.len() == 1 || path[0] < path[l - 1] {
                if out.len() == cap {
                    return false;
                }
                out.push(path.clone());
            }
            return true;
        }
        let end = *path.last().expect("non-empty path");
        for u in (*g.neighbors(end) - *used).iter() {
            used.insert(u);
            path.push(u);
            let ok = extend(g, l, cap, path, used, out);
            path.pop();
            used.remove(u);
            if !ok {
                return false;
            }
        }
        true
    }
    let mut out = Vec::new();
    if l == 0 {
        return (out, false);
    }
    for s in 0..g.n() {
        let mut path = vec![s];
        let mut used = VertexSet::singleton(s);
        if !extend(g, l, cap, &mut path, &mut used, &mut out) {
            return (out, true);
        }
    }
    (out, false)
}

/// Hyperedges from high-codegree subsets of path copies.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CodegreeHypergraph {
    /// Distinct hyperedges, each an ascending vertex list, in ascending order.
    pub hyperedges: Vec<Vec<usize>>,
    pub copies_examined: usize,
    /// The copy cap was reached: the hypergraph covers a sample of copies.
    pub truncated: bool,
}

/// For every copy of `P_l` (up to `cap` copies), takes its best
/// `floor(l/2)`-subset and keeps it as a hyperedge when its codegree is at
/// least `threshold`.
pub fn build_codegree_hypergraph(
    g: &Graph,
    l: usize,
    threshold: usize,
    cap: usize,
) -> Result<CodegreeHypergraph, DetectorError> {
    if l < 4 {
        return Err(DetectorError::Pattern(format!("hypergraph device needs l >= 4, got {l}")));
    }
    let (copies, truncated) = path_copies(g, l, cap);
    let mut edges = BTreeSet::new();
    for copy in &copies {
        let (subset, codegree) = find_high_codegree_subset(g, copy, l / 2)?;
        if codegree >= threshold {
            edges.insert(subset);
        }
    }
    Ok(CodegreeHypergraph {
        hyperedges: edges.into_iter().collect(),
        copies_examined: copies.len(),
        truncated,
    })
}

/// Union of cliques on the hyperedges, on `n` vertices.
pub fn flatten(hyperedges: &[Vec<usize>], n: usize) -> Result<Graph, DetectorError> {
    let mut edges = BTreeSet::new();
    for e in hyperedges {
        for (i, &u) in e.iter().enumerate() {
            for &v in &e[i + 1..] {
                if u != v {
                    edges.insert((u.min(v), u.max(v)));
                }
            }
        }
    }
    let edges: Vec<_> = edges.into_iter().collect();
    Ok(Graph::from_edges(n, &edges)?)
}

/// Every two hyperedges share a vertex.
pub fn is_intersecting(hyperedges: &[Vec<usize>]) -> bool {
    let sets: Vec<VertexSet> = hyperedges.iter().map(|e| e.iter().collect()).collect();
    sets.iter()
        .enumerate()
        .all(|(i, a)| sets[i + 1..].iter().all(|b| !a.is_disjoint(b)))
}

/// True when `g - cover` contains no component of `p`, which proves `g` is
/// `p`-free whenever every copy of `p` would need a component there.
pub fn is_pattern_free_certificate(
    g: &Graph,
    p: &PatternSpec,
    cover: &VertexSet,
) -> Result<bool, DetectorError> {
    check_vertices(g, cover.iter())?;
    let avail = g.vertices() - *cover;
    let opts = DetectorOptions::default();
    Ok(p.components()
        .iter()
        .all(|c| contains_within(g, c, avail, &opts).is_none()))
}
