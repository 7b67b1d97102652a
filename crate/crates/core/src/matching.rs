//! Maximum matchings: augmenting paths for bipartite graphs, Edmonds'
//! blossom algorithm otherwise.

use std::collections::VecDeque;

use crate::bitset::VertexSet;
use crate::graph::Graph;

const NONE: usize = usize::MAX;

/// Proper 2-colouring of `g` (colour 0 for the smallest vertex of each
/// component), or `None` if some component has an odd cycle.
pub fn two_coloring(g: &Graph) -> Option<Vec<u8>> {
    let n = g.n();
    let mut color = vec![u8::MAX; n];
    for s in 0..n {
        if color[s] != u8::MAX {
            continue;
        }
        color[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for u in g.neighbors(v).iter() {
                if color[u] == u8::MAX {
                    color[u] = 1 - color[v];
                    queue.push_back(u);
                } else if color[u] == color[v] {
                    return None;
                }
            }
        }
    }
    Some(color)
}

/// Maximum matching of a bipartite graph with the given left side, by
/// repeated augmenting-path search. Returns `mate[v]` (`None` if unmatched).
pub fn bipartite_matching(g: &Graph, left: &VertexSet) -> Vec<Option<usize>> {
    let n = g.n();
    let mut mate = vec![NONE; n];
    for root in left.iter() {
        let mut seen = VertexSet::new();
        augment_from(g, root, &mut mate, &mut seen);
    }
    mate.into_iter().map(|m| (m != NONE).then_some(m)).collect()
}

fn augment_from(g: &Graph, v: usize, mate: &mut [usize], seen: &mut VertexSet) -> bool {
    for u in g.neighbors(v).iter() {
        if seen.contains(u) {
            continue;
        }
        seen.insert(u);
        if mate[u] == NONE || augment_from(g, mate[u], mate, seen) {
            mate[u] = v;
            mate[v] = u;
            return true;
        }
    }
    false
}

/// Maximum matching of an arbitrary graph.
pub fn maximum_matching(g: &Graph) -> Vec<Option<usize>> {
    if let Some(color) = two_coloring(g) {
        let left: VertexSet = (0..g.n()).filter(|&v| color[v] == 0).collect();
        return bipartite_matching(g, &left);
    }
    Blossom::new(g).run()
}

/// Matched pairs `(u, v)`, `u < v`, from a mate array.
pub fn matched_pairs(mate: &[Option<usize>]) -> Vec<(usize, usize)> {
    mate.iter()
        .enumerate()
        .filter_map(|(v, m)| m.filter(|&u| v < u).map(|u| (v, u)))
        .collect()
}

struct Blossom<'a> {
    g: &'a Graph,
    mate: Vec<usize>,
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    in_blossom: Vec<bool>,
}

impl<'a> Blossom<'a> {
    fn new(g: &'a Graph) -> Self {
        let n = g.n();
        Blossom {
            g,
            mate: vec![NONE; n],
            parent: vec![NONE; n],
            base: (0..n).collect(),
            used: vec![false; n],
            in_blossom: vec![false; n],
        }
    }

    fn run(mut self) -> Vec<Option<usize>> {
        for v in 0..self.g.n() {
            if self.mate[v] != NONE {
                continue;
            }
            let mut end = self.find_path(v);
            while end != NONE {
                let pv = self.parent[end];
                let ppv = self.mate[pv];
                self.mate[end] = pv;
                self.mate[pv] = end;
                end = ppv;
            }
        }
        self.mate.into_iter().map(|m| (m != NONE).then_some(m)).collect()
    }

    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        let mut seen = vec![false; self.g.n()];
        loop {
            a = self.base[a];
            seen[a] = true;
            if self.mate[a] == NONE {
                break;
            }
            a = self.parent[self.mate[a]];
        }
        loop {
            b = self.base[b];
            if seen[b] {
                return b;
            }
            b = self.parent[self.mate[b]];
        }
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            self.in_blossom[self.base[v]] = true;
            self.in_blossom[self.base[self.mate[v]]] = true;
            self.parent[v] = child;
            child = self.mate[v];
            v = self.parent[self.mate[v]];
        }
    }

    fn find_path(&mut self, root: usize) -> usize {
        let n = self.g.n();
        self.used.iter_mut().for_each(|u| *u = false);
        self.parent.iter_mut().for_each(|p| *p = NONE);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.used[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for to in self.g.neighbors(v).iter() {
                if self.base[v] == self.base[to] || self.mate[v] == to {
                    continue;
                }
                if to == root || (self.mate[to] != NONE && self.parent[self.mate[to]] != NONE) {
                    let cur = self.lca(v, to);
                    self.in_blossom.iter_mut().for_each(|b| *b = false);
                    self.mark_path(v, cur, to);
                    self.mark_path(to, cur, v);
                    for i in 0..n {
                        if self.in_blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !self.used[i] {
                                self.used[i] = true;
                                queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    if self.mate[to] == NONE {
                        return to;
                    }
                    let m = self.mate[to];
                    self.used[m] = true;
                    queue.push_back(m);
                }
            }
        }
        NONE
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, path, petersen};

    fn size(mate: &[Option<usize>]) -> usize {
        matched_pairs(mate).len()
    }

    /// Largest matching by trying every edge subset (small graphs only).
    fn brute_force(g: &Graph) -> usize {
        let edges: Vec<_> = g.edges().collect();
        let mut best = 0;
        for mask in 0u32..(1 << edges.len()) {
            let mut used = VertexSet::new();
            let mut ok = true;
            for (i, &(u, v)) in edges.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    if used.contains(u) || used.contains(v) {
                        ok = false;
                        break;
                    }
                    used.insert(u);
                    used.insert(v);
                }
            }
            if ok {
                best = best.max(mask.count_ones() as usize);
            }
        }
        best
    }

    #[test]
    fn known_sizes() {
        assert_eq!(size(&maximum_matching(&path(6).unwrap())), 3);
        assert_eq!(size(&maximum_matching(&path(5).unwrap())), 2);
        assert_eq!(size(&maximum_matching(&complete(5).unwrap())), 2);
        assert_eq!(size(&maximum_matching(&petersen())), 5);
    }

    #[test]
    fn odd_cycles_with_pendants() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let n = rng.gen_range(1..=7);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.4) {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::from_edges(n, &edges).unwrap();
            let mate = maximum_matching(&g);
            for (u, v) in matched_pairs(&mate) {
                assert!(g.has_edge(u, v));
            }
            assert_eq!(size(&mate), brute_force(&g), "{g:?}");
        }
    }
}
