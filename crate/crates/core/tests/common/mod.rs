//! Slow, obviously-correct reference implementations shared by the
//! integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::Rng;
use turan::canon::{canonical_code, GraphCode};
use turan::graph::Graph;
use turan::VertexSet;

/// Graph on `n` vertices whose edges are the set bits of `mask` over the
/// pairs `(i, j)`, `i < j`, in lexicographic order.
pub fn graph_from_mask(n: usize, mask: u64) -> Graph {
    let mut edges = Vec::new();
    let mut bit = 0;
    for i in 0..n {
        for j in i + 1..n {
            if mask >> bit & 1 == 1 {
                edges.push((i, j));
            }
            bit += 1;
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

pub fn random_graph(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

/// Injective map of `h` into `g` preserving edges, by plain backtracking over
/// `h`'s vertices in index order.
pub fn naive_embeds(g: &Graph, h: &Graph) -> bool {
    fn go(g: &Graph, h: &Graph, phi: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
        let x = phi.len();
        if x == h.n() {
            return true;
        }
        for c in 0..g.n() {
            if used[c] {
                continue;
            }
            if (0..x).all(|y| !h.has_edge(x, y) || g.has_edge(c, phi[y])) {
                used[c] = true;
                phi.push(c);
                if go(g, h, phi, used) {
                    return true;
                }
                phi.pop();
                used[c] = false;
            }
        }
        false
    }
    h.n() <= g.n() && go(g, h, &mut Vec::new(), &mut vec![false; g.n()])
}

/// Isomorphism by trying every bijection.
pub fn brute_isomorphic(g: &Graph, h: &Graph) -> bool {
    if g.n() != h.n() || g.m() != h.m() {
        return false;
    }
    let n = g.n();
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        if g.edges().all(|(u, v)| h.has_edge(perm[u], perm[v])) {
            return true;
        }
        if !next_permutation(&mut perm) {
            return false;
        }
    }
}

pub fn next_permutation(a: &mut [usize]) -> bool {
    let n = a.len();
    if n < 2 {
        return false;
    }
    let Some(i) = (0..n - 1).rev().find(|&i| a[i] < a[i + 1]) else {
        return false;
    };
    let j = (i + 1..n).rev().find(|&j| a[j] > a[i]).unwrap();
    a.swap(i, j);
    a[i + 1..].reverse();
    true
}

/// Longest path by scanning every vertex permutation for its longest prefix
/// that is a path.
pub fn brute_longest_path(g: &Graph) -> usize {
    let n = g.n();
    if n == 0 {
        return 0;
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = 1;
    loop {
        let run = 1 + perm.windows(2).take_while(|w| g.has_edge(w[0], w[1])).count();
        best = best.max(run);
        if best == n || !next_permutation(&mut perm) {
            return best;
        }
    }
}

/// One representative of every isomorphism class on `n` vertices, built by
/// extending each class on `n - 1` vertices in every way.
pub fn graphs_up_to_iso(n: usize) -> Vec<Graph> {
    let mut level: BTreeMap<GraphCode, Graph> = BTreeMap::new();
    let empty = Graph::from_edges(0, &[]).unwrap();
    level.insert(canonical_code(&empty), empty);
    for i in 0..n {
        let mut next = BTreeMap::new();
        for g in level.values() {
            for mask in 0u64..(1 << i) {
                let nbrs: VertexSet = (0..i).filter(|&u| mask >> u & 1 == 1).collect();
                let child = g.with_vertex(&nbrs).unwrap();
                next.entry(canonical_code(&child)).or_insert(child);
            }
        }
        level = next;
    }
    level.into_values().collect()
}

/// Every forest on `n` vertices up to isomorphism.
pub fn forests_up_to_iso(n: usize) -> Vec<Graph> {
    graphs_up_to_iso(n).into_iter().filter(|g| g.is_forest()).collect()
}

/// Perfect matching of a forest by repeatedly matching a leaf to its
/// neighbour.
pub fn leaf_peeling_perfect_matching(f: &Graph) -> bool {
    let n = f.n();
    let mut alive = vec![true; n];
    let mut remaining = n;
    loop {
        if remaining == 0 {
            return true;
        }
        let deg = |v: usize, alive: &[bool]| f.neighbors(v).iter().filter(|&u| alive[u]).count();
        let Some(v) = (0..n).find(|&v| alive[v] && deg(v, &alive) <= 1) else {
            return false;
        };
        let Some(u) = f.neighbors(v).iter().find(|&u| alive[u]) else {
            return false; // isolated vertex
        };
        alive[v] = false;
        alive[u] = false;
        remaining -= 2;
    }
}
