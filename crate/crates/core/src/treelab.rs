//! Equibipartite trees and forests: recognition, perfect matchings, Hall
//! violators and the two partition lemmas used for forests.

use std::collections::{BTreeMap, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::bitset::VertexSet;
use crate::canon::{canonical_code, GraphCode};
use crate::graph::{Graph, GraphError};
use crate::matching::{bipartite_matching, matched_pairs, maximum_matching};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("graph is not bipartite (odd cycle)")]
    NotBipartite,
    #[error("graph is not connected")]
    NotConnected,
    #[error("graph contains a cycle")]
    Cyclic,
    #[error("a component has unequal bipartition classes")]
    NotEquibipartite,
    #[error("forest has {0} component(s); at least two trees are required")]
    TooFewComponents(usize),
    #[error("graph has a perfect matching")]
    HasPerfectMatching,
    #[error("no Hall violator on the requested side")]
    NoViolator,
    #[error("{what} limited to {cap} vertices, got {n}")]
    TooLarge { what: &'static str, n: usize, cap: usize },
    #[error("tree order must be even and at least 2, got {0}")]
    BadOrder(usize),
    #[error("construction invariant failed: {0}")]
    Discrepancy(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Default cap for the exhaustive partition check: up to `2 * 11` vertices.
pub const DEFAULT_PARTITION_CAP: usize = 11;

/// Largest order accepted by [`enumerate_equibipartite_trees`].
pub const ENUMERATION_CAP: usize = 14;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Bipartition {
    pub side_a: Vec<usize>,
    pub side_b: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

/// Two-class partition with a single edge inside the smaller class and none
/// inside the larger one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartitionCert {
    pub small_class: Vec<usize>,
    pub large_class: Vec<usize>,
    pub small_edge: (usize, usize),
}

impl PartitionCert {
    /// Checks every certificate invariant against `t`.
    pub fn verify(&self, t: &Graph) -> bool {
        let small: VertexSet = self.small_class.iter().collect();
        let large: VertexSet = self.large_class.iter().collect();
        let n = t.n();
        let (x, y) = self.small_edge;
        small.is_disjoint(&large)
            && (small | large) == VertexSet::full(n)
            && small.len() < large.len()
            && 2 * small.len() < n
            && t.edges_within(&large) == 0
            && t.edges_within(&small) == 1
            && small.contains(x)
            && small.contains(y)
            && t.has_edge(x, y)
    }
}

/// 2-colouring of a connected bipartite graph by BFS layers from vertex 0.
pub fn bipartition(t: &Graph) -> Result<Bipartition, TreeError> {
    if !t.is_connected() {
        return Err(TreeError::NotConnected);
    }
    let (a, b) = two_color_within(t, &t.vertices())?;
    Ok(Bipartition {
        side_a: a.to_vec(),
        side_b: b.to_vec(),
    })
}

/// BFS 2-colouring of the component(s) in `within`, starting each component
/// from its smallest vertex.
fn two_color_within(g: &Graph, within: &VertexSet) -> Result<(VertexSet, VertexSet), TreeError> {
    let mut sides = [VertexSet::new(), VertexSet::new()];
    let mut seen = VertexSet::new();
    for s in within.iter() {
        if seen.contains(s) {
            continue;
        }
        seen.insert(s);
        sides[0].insert(s);
        let mut queue = VecDeque::from([(s, 0usize)]);
        while let Some((v, c)) = queue.pop_front() {
            for u in (*g.neighbors(v) & *within).iter() {
                if sides[c].contains(u) {
                    return Err(TreeError::NotBipartite);
                }
                if !seen.contains(u) {
                    seen.insert(u);
                    sides[1 - c].insert(u);
                    queue.push_back((u, 1 - c));
                }
            }
        }
    }
    Ok((sides[0], sides[1]))
}

/// True when every tree component has equally sized colour classes.
pub fn is_equibipartite(f: &Graph) -> Result<bool, TreeError> {
    if !f.is_forest() {
        return Err(TreeError::Cyclic);
    }
    for comp in f.components() {
        let (a, b) = two_color_within(f, &comp)?;
        if a.len() != b.len() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Perfect-matching decision with a witness matching when one exists.
pub fn has_perfect_matching(f: &Graph) -> (bool, Option<Vec<(usize, usize)>>) {
    let mate = maximum_matching(f);
    let pairs = matched_pairs(&mate);
    if 2 * pairs.len() == f.n() {
        (true, Some(pairs))
    } else {
        (false, None)
    }
}

fn deficiency(t: &Graph, s: &VertexSet) -> isize {
    s.len() as isize - neighborhood(t, s).len() as isize
}

fn neighborhood(t: &Graph, s: &VertexSet) -> VertexSet {
    let mut out = VertexSet::new();
    for v in s.iter() {
        out |= *t.neighbors(v);
    }
    out
}

fn lex_key(s: &VertexSet) -> (usize, Vec<usize>) {
    (s.len(), s.to_vec())
}

/// A set `S` on the chosen side with `|N(S)| < |S|`.
///
/// Candidates come from alternating-path reachability from each vertex left
/// unsaturated by a maximum matching; each is shrunk to a connected violator
/// from which no single vertex can be dropped (inclusion-minimal for trees).
/// Among the candidates the smallest, then lexicographically least, is
/// returned.
pub fn hall_violator(t: &Graph, side: Side) -> Result<Vec<usize>, TreeError> {
    let parts = bipartition(t)?;
    let mine: VertexSet = match side {
        Side::A => parts.side_a.iter().collect(),
        Side::B => parts.side_b.iter().collect(),
    };
    let mate = bipartite_matching(t, &mine);

    let mut best: Option<VertexSet> = None;
    for u in mine.iter().filter(|&u| mate[u].is_none()) {
        let mut s = VertexSet::singleton(u);
        let mut reached = VertexSet::new();
        let mut queue = VecDeque::from([u]);
        while let Some(v) = queue.pop_front() {
            for y in (*t.neighbors(v) - reached).iter() {
                reached.insert(y);
                let x = mate[y].ok_or_else(|| {
                    TreeError::Discrepancy("augmenting path found after maximum matching".into())
                })?;
                if !s.contains(x) {
                    s.insert(x);
                    queue.push_back(x);
                }
            }
        }
        let s = minimize_violator(t, s);
        if best.as_ref().is_none_or(|b| lex_key(&s) < lex_key(b)) {
            best = Some(s);
        }
    }
    let s = best.ok_or(TreeError::NoViolator)?;
    let closed = s | neighborhood(t, &s);
    if t.components_within(&closed).len() != 1 {
        return Err(TreeError::Discrepancy(
            "minimal violator does not induce a connected subgraph with its neighbourhood".into(),
        ));
    }
    Ok(s.to_vec())
}

fn minimize_violator(t: &Graph, mut s: VertexSet) -> VertexSet {
    loop {
        // Restrict to the smallest violating component of t[S ∪ N(S)].
        let closed = s | neighborhood(t, &s);
        let comps = t.components_within(&closed);
        if comps.len() > 1 {
            s = comps
                .iter()
                .map(|c| *c & s)
                .filter(|part| deficiency(t, part) >= 1)
                .min_by_key(lex_key)
                .expect("deficiency is additive over components");
        }
        let shrunk = s.iter().map(|v| {
            let mut smaller = s;
            smaller.remove(v);
            smaller
        });
        match shrunk.into_iter().find(|c| !c.is_empty() && deficiency(t, c) >= 1) {
            Some(smaller) => s = smaller,
            None => return s,
        }
    }
}

/// Partition of an equibipartite tree without a perfect matching into a
/// smaller class inducing exactly one edge and a larger independent class.
///
/// Follows the Hall-violator argument: take a minimal violator `S` on one
/// side, pick a component `C` of the tree minus `S ∪ N(S)` with more vertices
/// on the other side, let `xy` be the unique edge from `C` to `N(S)`, and put
/// `x`'s class within `C` together with `y`'s class outside `C`.
pub fn nopm_partition(t: &Graph) -> Result<PartitionCert, TreeError> {
    if !t.is_connected() {
        return Err(TreeError::NotConnected);
    }
    if !t.is_forest() {
        return Err(TreeError::Cyclic);
    }
    if !is_equibipartite(t)? {
        return Err(TreeError::NotEquibipartite);
    }
    if has_perfect_matching(t).0 {
        return Err(TreeError::HasPerfectMatching);
    }
    let parts = bipartition(t)?;
    let (side, a_vec, b_vec) = match hall_violator(t, Side::A) {
        Ok(s) => (s, &parts.side_a, &parts.side_b),
        Err(TreeError::NoViolator) => (hall_violator(t, Side::B)?, &parts.side_b, &parts.side_a),
        Err(e) => return Err(e),
    };
    let side_a: VertexSet = a_vec.iter().collect();
    let side_b: VertexSet = b_vec.iter().collect();
    let s: VertexSet = side.iter().collect();
    let ns = neighborhood(t, &s);
    let rest = t.vertices() - (s | ns);

    let mut chosen: Option<(Vec<usize>, VertexSet, (usize, usize))> = None;
    for comp in t.components_within(&rest) {
        let links: Vec<(usize, usize)> = comp
            .iter()
            .flat_map(|x| (*t.neighbors(x) & ns).iter().map(move |y| (x, y)))
            .collect();
        if links.len() != 1 {
            return Err(TreeError::Discrepancy(format!(
                "component {:?} meets N(S) in {} edges, expected exactly one",
                comp.to_vec(),
                links.len()
            )));
        }
        if (comp & side_b).len() > (comp & side_a).len() {
            let key = comp.to_vec();
            if chosen.as_ref().is_none_or(|(k, _, _)| key < *k) {
                chosen = Some((key, comp, links[0]));
            }
        }
    }
    let (_, comp, (x, y)) = chosen.ok_or_else(|| {
        TreeError::Discrepancy("no component has more vertices on the far side".into())
    })?;

    let small = (comp & side_a) | (side_b - comp);
    let large = t.vertices() - small;
    let cert = PartitionCert {
        small_class: small.to_vec(),
        large_class: large.to_vec(),
        small_edge: (x.min(y), x.max(y)),
    };
    if !cert.verify(t) {
        return Err(TreeError::Discrepancy(format!(
            "certificate {cert:?} fails its invariants"
        )));
    }
    Ok(cert)
}

/// A larger class of some unequal partition that induces no edge, if any.
pub fn unequal_partition_counterexample(
    t: &Graph,
    partition_cap: usize,
) -> Result<Option<Vec<usize>>, TreeError> {
    let n = t.n();
    let cap = 2 * partition_cap;
    if n > cap || n > 30 {
        return Err(TreeError::TooLarge {
            what: "exhaustive partition check",
            n,
            cap: cap.min(30),
        });
    }
    let rows: Vec<u32> = (0..n)
        .map(|v| t.neighbors(v).iter().fold(0u32, |acc, u| acc | 1 << u))
        .collect();
    for mask in 0u32..(1u32 << n) {
        let size = mask.count_ones() as usize;
        if 2 * size <= n {
            continue;
        }
        let mut rest = mask;
        let mut independent = true;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if rows[v] & mask != 0 {
                independent = false;
                break;
            }
        }
        if independent {
            return Ok(Some((0..n).filter(|&v| mask >> v & 1 == 1).collect()));
        }
    }
    Ok(None)
}

/// True when the larger class of every unequal two-class partition induces
/// at least one edge.
pub fn check_all_unequal_partitions(t: &Graph) -> Result<bool, TreeError> {
    Ok(unequal_partition_counterexample(t, DEFAULT_PARTITION_CAP)?.is_none())
}

/// Every tree on `n` vertices, one per isomorphism class, in canonical-code
/// order.
pub fn enumerate_trees(n: usize) -> Result<Vec<Graph>, TreeError> {
    if n > ENUMERATION_CAP {
        return Err(TreeError::TooLarge {
            what: "tree enumeration",
            n,
            cap: ENUMERATION_CAP,
        });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut level: BTreeMap<GraphCode, Graph> = BTreeMap::new();
    let single = Graph::blank(1)?;
    level.insert(canonical_code(&single), single);
    for _ in 1..n {
        let mut next = BTreeMap::new();
        for tree in level.values() {
            for v in 0..tree.n() {
                let child = tree.with_vertex(&VertexSet::singleton(v))?;
                next.entry(canonical_code(&child)).or_insert(child);
            }
        }
        level = next;
    }
    level
        .into_keys()
        .map(|code| code.to_graph().map_err(TreeError::from))
        .collect()
}

/// Every equibipartite tree on `two_l` vertices, one per isomorphism class.
pub fn enumerate_equibipartite_trees(two_l: usize) -> Result<Vec<Graph>, TreeError> {
    if two_l < 2 || two_l % 2 == 1 {
        return Err(TreeError::BadOrder(two_l));
    }
    let mut out = Vec::new();
    for t in enumerate_trees(two_l)? {
        if is_equibipartite(&t)? {
            out.push(t);
        }
    }
    Ok(out)
}

/// Labelled tree from a Prüfer sequence over `0..seq.len()+2`.
pub fn tree_from_prufer(seq: &[usize]) -> Result<Graph, TreeError> {
    let n = seq.len() + 2;
    if let Some(&bad) = seq.iter().find(|&&v| v >= n) {
        return Err(GraphError::VertexOutOfRange { v: bad, n }.into());
    }
    let mut degree = vec![1usize; n];
    for &v in seq {
        degree[v] += 1;
    }
    let mut g = Graph::blank(n)?;
    let mut leaves: std::collections::BinaryHeap<std::cmp::Reverse<usize>> = (0..n)
        .filter(|&v| degree[v] == 1)
        .map(std::cmp::Reverse)
        .collect();
    for &v in seq {
        let std::cmp::Reverse(leaf) = leaves.pop().expect("a Prüfer sequence always leaves a leaf");
        g.add_edge_unchecked(leaf, v);
        degree[v] -= 1;
        if degree[v] == 1 {
            leaves.push(std::cmp::Reverse(v));
        }
    }
    let std::cmp::Reverse(a) = leaves.pop().expect("two leaves remain");
    let std::cmp::Reverse(b) = leaves.pop().expect("two leaves remain");
    g.add_edge_unchecked(a, b);
    Ok(g)
}

/// Uniform random labelled tree on `two_l` vertices, resampled until it is
/// equibipartite. Deterministic in `seed`.
pub fn random_equibipartite_tree(two_l: usize, seed: u64) -> Result<Graph, TreeError> {
    if two_l < 2 || two_l % 2 == 1 {
        return Err(TreeError::BadOrder(two_l));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let seq: Vec<usize> = (0..two_l - 2).map(|_| rng.gen_range(0..two_l)).collect();
        let t = tree_from_prufer(&seq)?;
        if is_equibipartite(&t)? {
            return Ok(t);
        }
    }
}

/// Shape of a valid forest pattern.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ForestInfo {
    /// Half the vertex count.
    pub l: usize,
    /// Components ordered by size (smallest first), ties by smallest vertex.
    pub components: Vec<Vec<usize>>,
    pub has_perfect_matching: bool,
}

/// Checks that `h` is an equibipartite forest with at least two components.
pub fn validate_forest(h: &Graph) -> Result<ForestInfo, TreeError> {
    if !h.is_forest() {
        return Err(TreeError::Cyclic);
    }
    if !is_equibipartite(h)? {
        return Err(TreeError::NotEquibipartite);
    }
    let mut components: Vec<Vec<usize>> = h.components().iter().map(|c| c.to_vec()).collect();
    if components.len() < 2 {
        return Err(TreeError::TooFewComponents(components.len()));
    }
    components.sort_by_key(|c| (c.len(), c[0]));
    debug_assert!(components.windows(2).all(|w| w[0].len() <= w[1].len()));
    Ok(ForestInfo {
        l: h.n() / 2,
        components,
        has_perfect_matching: has_perfect_matching(h).0,
    })
}
