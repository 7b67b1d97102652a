//! Longest paths and vertex-disjoint path packings.

use std::collections::HashSet;

use crate::bitset::VertexSet;
use crate::graph::Graph;

use super::DetectorOptions;

/// Components up to this size use the subset dynamic programme.
pub const SUBSET_DP_LIMIT: usize = 24;

/// Vertex count of a longest path, and one such path.
pub fn longest_path(g: &Graph) -> (usize, Vec<usize>) {
    let mut best: Vec<usize> = Vec::new();
    for comp in g.components() {
        if comp.len() <= best.len() {
            continue;
        }
        let found = if comp.len() <= SUBSET_DP_LIMIT {
            longest_path_dp(g, &comp)
        } else {
            longest_path_search(g, &comp, best.len())
        };
        if found.len() > best.len() {
            best = found;
        }
    }
    (best.len(), best)
}

/// `dp[mask]` holds the set of vertices that end a path covering exactly
/// `mask`.
fn longest_path_dp(g: &Graph, comp: &VertexSet) -> Vec<usize> {
    let verts = comp.to_vec();
    let c = verts.len();
    let mut local = vec![usize::MAX; g.n()];
    for (i, &v) in verts.iter().enumerate() {
        local[v] = i;
    }
    let adj: Vec<u32> = verts
        .iter()
        .map(|&v| (*g.neighbors(v) & *comp).iter().fold(0u32, |a, u| a | 1 << local[u]))
        .collect();
    let full = (1u64 << c) as usize;
    let mut dp = vec![0u32; full];
    for i in 0..c {
        dp[1 << i] = 1 << i;
    }
    let mut best_mask = 1usize;
    let mut best_len = 1u32;
    for mask in 1..full {
        let ends = dp[mask];
        if ends == 0 {
            continue;
        }
        let len = (mask as u32).count_ones();
        if len > best_len {
            best_len = len;
            best_mask = mask;
            if len as usize == c {
                break;
            }
        }
        let mut reach = 0u32;
        let mut e = ends;
        while e != 0 {
            let v = e.trailing_zeros() as usize;
            e &= e - 1;
            reach |= adj[v];
        }
        reach &= !(mask as u32);
        while reach != 0 {
            let u = reach.trailing_zeros();
            reach &= reach - 1;
            dp[mask | (1 << u)] |= 1 << u;
        }
    }
    // Walk back from any end of the best mask.
    let mut mask = best_mask;
    let mut v = dp[mask].trailing_zeros() as usize;
    let mut path = vec![verts[v]];
    loop {
        let prev = mask & !(1 << v);
        if prev == 0 {
            break;
        }
        let u = (dp[prev] & adj[v]).trailing_zeros() as usize;
        path.push(verts[u]);
        mask = prev;
        v = u;
    }
    path
}

/// Depth-first branch and bound for components too large for the subset DP.
fn longest_path_search(g: &Graph, comp: &VertexSet, floor: usize) -> Vec<usize> {
    struct Bb<'a> {
        g: &'a Graph,
        comp: VertexSet,
        best: Vec<usize>,
        floor: usize,
        path: Vec<usize>,
    }
    impl Bb<'_> {
        fn reachable(&self, from: usize, used: &VertexSet) -> usize {
            let allowed = self.comp - *used;
            let mut seen = VertexSet::new();
            let mut frontier = *self.g.neighbors(from) & allowed;
            while !frontier.is_empty() {
                seen |= frontier;
                let mut next = VertexSet::new();
                for v in frontier.iter() {
                    next |= *self.g.neighbors(v);
                }
                frontier = (next & allowed) - seen;
            }
            seen.len()
        }
        fn extend(&mut self, used: VertexSet) {
            if self.path.len() > self.best.len() {
                self.best = self.path.clone();
            }
            if self.best.len() == self.comp.len() {
                return;
            }
            let end = *self.path.last().expect("non-empty path");
            if self.path.len() + self.reachable(end, &used) <= self.best.len().max(self.floor) {
                return;
            }
            let mut cands: Vec<usize> = (*self.g.neighbors(end) & (self.comp - used)).to_vec();
            // Try low-degree continuations first: they tend to be dead ends
            // that should be absorbed early.
            cands.sort_by_key(|&u| (*self.g.neighbors(u) & (self.comp - used)).len());
            for u in cands {
                let mut next = used;
                next.insert(u);
                self.path.push(u);
                self.extend(next);
                self.path.pop();
                if self.best.len() == self.comp.len() {
                    return;
                }
            }
        }
    }
    let mut bb = Bb {
        g,
        comp: *comp,
        best: Vec::new(),
        floor,
        path: Vec::new(),
    };
    let mut starts = comp.to_vec();
    starts.sort_by_key(|&v| g.degree(v));
    for s in starts {
        bb.path = vec![s];
        bb.extend(VertexSet::singleton(s));
        if bb.best.len() == comp.len() {
            break;
        }
    }
    bb.best
}

/// Enumerates the `l`-vertex paths inside `avail` that pass through `v`,
/// each exactly once (a path and its reverse count as one).
pub(crate) struct PathsThrough<'g> {
    g: &'g Graph,
    avail: VertexSet,
    v: usize,
    l: usize,
    /// Vertices on the left arm; the right arm has `l - 1 - left` vertices.
    left: usize,
    right: usize,
    seq: Vec<usize>,
    cands: Vec<VertexSet>,
    used: VertexSet,
    started: bool,
    done: bool,
}

impl<'g> PathsThrough<'g> {
    pub(crate) fn new(g: &'g Graph, avail: VertexSet, v: usize, l: usize) -> Self {
        PathsThrough {
            g,
            avail,
            v,
            l,
            left: 0,
            right: l.saturating_sub(1),
            seq: Vec::with_capacity(l),
            cands: Vec::with_capacity(l),
            used: VertexSet::new(),
            started: false,
            done: l == 0 || !avail.contains(v),
        }
    }

    fn candidates(&self, depth: usize) -> VertexSet {
        let anchor = if depth == 0 || depth == self.right {
            self.v
        } else {
            self.seq[depth - 1]
        };
        (*self.g.neighbors(anchor) & self.avail) - self.used
    }

    fn build(&self) -> Vec<usize> {
        let mut path = Vec::with_capacity(self.l);
        path.extend(self.seq[self.right..].iter().rev());
        path.push(self.v);
        path.extend(&self.seq[..self.right]);
        path
    }
}

impl Iterator for PathsThrough<'_> {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        loop {
            if self.done {
                return None;
            }
            if !self.started {
                self.right = self.l - 1 - self.left;
                self.seq.clear();
                self.cands.clear();
                self.used = VertexSet::singleton(self.v);
                self.started = true;
                if self.l == 1 {
                    self.done = true;
                    return Some(vec![self.v]);
                }
                self.cands.push(self.candidates(0));
            }
            let total = self.left + self.right;
            let depth = match self.cands.len() {
                0 => {
                    self.left += 1;
                    self.started = false;
                    if 2 * self.left > self.l - 1 {
                        self.done = true;
                    }
                    continue;
                }
                d => d - 1,
            };
            if self.seq.len() > depth {
                let old = self.seq.pop().expect("choice at this depth");
                self.used.remove(old);
            }
            let Some(x) = self.cands[depth].first() else {
                self.cands.pop();
                continue;
            };
            self.cands[depth].remove(x);
            self.seq.push(x);
            self.used.insert(x);
            if self.seq.len() < total {
                let next = self.candidates(self.seq.len());
                self.cands.push(next);
                continue;
            }
            if self.left == self.right {
                let left_end = self.seq[total - 1];
                let right_end = self.seq[self.right - 1];
                if left_end > right_end {
                    continue;
                }
            }
            return Some(self.build());
        }
    }
}

/// Searches for `k` vertex-disjoint copies of `P_l` inside `avail`.
pub(crate) struct Packer<'g> {
    g: &'g Graph,
    l: usize,
    opts: DetectorOptions,
    memo: HashSet<(VertexSet, u32)>,
    memo_full: bool,
    pub(crate) nodes: u64,
}

const MEMO_ENTRY_BYTES: usize = std::mem::size_of::<(VertexSet, u32)>() + 16;

impl<'g> Packer<'g> {
    pub(crate) fn new(g: &'g Graph, l: usize, opts: &DetectorOptions) -> Self {
        Packer {
            g,
            l,
            opts: opts.clone(),
            memo: HashSet::new(),
            memo_full: false,
            nodes: 0,
        }
    }

    pub(crate) fn pack(&mut self, avail: VertexSet, k: usize) -> Option<Vec<Vec<usize>>> {
        let mut found = self.search(avail, k)?;
        found.reverse();
        Some(found)
    }

    fn remember(&mut self, avail: VertexSet, r: usize) {
        if self.memo_full {
            return;
        }
        if (self.memo.len() + 1) * MEMO_ENTRY_BYTES > self.opts.memo_budget_bytes {
            self.memo_full = true;
            return;
        }
        self.memo.insert((avail, r as u32));
    }

    fn search(&mut self, avail: VertexSet, r: usize) -> Option<Vec<Vec<usize>>> {
        self.nodes += 1;
        if r == 0 {
            return Some(Vec::new());
        }
        if avail.len() < r * self.l {
            return None;
        }
        if self.memo.contains(&(avail, r as u32)) {
            return None;
        }
        if self.opts.use_bounds
            && avail.len() >= self.opts.bound_min_vertices
            && packing_bound_excludes(self.g, &avail, r, self.l)
        {
            self.remember(avail, r);
            return None;
        }

        let g = self.g;
        let (v, deg) = avail
            .iter()
            .map(|v| (v, g.neighbors(v).intersection_len(&avail)))
            .min_by_key(|&(v, d)| (d, v))
            .expect("avail is non-empty");

        if deg > 0 || self.l == 1 {
            let paths = PathsThrough::new(g, avail, v, self.l);
            for path in paths {
                let rest = avail - path.iter().collect::<VertexSet>();
                if let Some(mut found) = self.search(rest, r - 1) {
                    found.push(path);
                    return Some(found);
                }
            }
        }
        let mut without = avail;
        without.remove(v);
        if let Some(found) = self.search(without, r) {
            return Some(found);
        }
        self.remember(avail, r);
        None
    }
}

/// Upper estimate on the number of vertices coverable by `s` disjoint paths
/// in `g[rest]`: marginal gains per component, largest first.
fn coverage_gains(g: &Graph, rest: &VertexSet) -> Vec<usize> {
    let mut gains = Vec::new();
    for comp in g.components_within(rest) {
        let size = comp.len();
        let span = if size <= 3 {
            size
        } else if g.edges_within(&comp) == size - 1
            && comp.iter().any(|v| g.neighbors(v).intersection_len(&comp) == size - 1)
        {
            3 // a star
        } else {
            size
        };
        gains.extend(std::iter::repeat_n(span, size / span));
        if size % span > 0 {
            gains.push(size % span);
        }
    }
    gains.sort_unstable_by(|a, b| b.cmp(a));
    gains
}

/// Sound infeasibility test for packing `k` copies of `P_l` into `g[avail]`.
///
/// For a set `X` of high-degree vertices, every path meets `X` in some `j`
/// vertices and the rest of it splits into at most `j + 1` paths in
/// `g[avail - X]`. Summed over the `k` copies, `J` vertices of `X` and at most
/// `J + k` segments must cover `k * l` vertices. Returns true when no
/// admissible `J <= |X|` exists for some tried `X`.
pub(crate) fn packing_bound_excludes(g: &Graph, avail: &VertexSet, k: usize, l: usize) -> bool {
    let mut verts: Vec<(usize, usize)> = avail
        .iter()
        .map(|v| (g.neighbors(v).intersection_len(avail), v))
        .collect();
    verts.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut x = VertexSet::new();
    let max_j = (k * l).saturating_sub(1).min(verts.len());
    for j in 0..=max_j {
        if j > 0 {
            x.insert(verts[j - 1].1);
        }
        let gains = coverage_gains(g, &(*avail - x));
        let mut prefix = Vec::with_capacity(gains.len() + 1);
        prefix.push(0usize);
        for gain in &gains {
            prefix.push(prefix.last().copied().unwrap_or(0) + gain);
        }
        let cov = |s: usize| prefix[s.min(gains.len())];
        let Some(per_path) = (0..=j).find(|&jj| jj + cov(jj + 1) >= l) else {
            return true;
        };
        if !(k * per_path..=j).any(|big_j| big_j + cov(big_j + k) >= k * l) {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, join, matching, path, petersen};

    #[test]
    fn longest_paths() {
        assert_eq!(longest_path(&path(7).unwrap()).0, 7);
        assert_eq!(longest_path(&complete(5).unwrap()).0, 5);
        let (len, p) = longest_path(&petersen());
        assert_eq!(len, 10);
        let g = petersen();
        assert!(p.windows(2).all(|w| g.has_edge(w[0], w[1])));
        assert_eq!(longest_path(&Graph::blank(0).unwrap()).0, 0);
        assert_eq!(longest_path(&Graph::blank(3).unwrap()).0, 1);
    }

    #[test]
    fn large_component_search_agrees() {
        let g = path(30).unwrap();
        assert_eq!(longest_path(&g).0, 30);
        let g = join(&complete(2).unwrap(), &Graph::blank(28).unwrap()).unwrap();
        assert_eq!(longest_path(&g).0, 5);
    }

    #[test]
    fn paths_through_counts() {
        // Paths with 3 vertices through vertex 0 of K_4: 0 as an end (3*2)
        // plus 0 in the middle (3).
        let k4 = complete(4).unwrap();
        let all: Vec<_> = PathsThrough::new(&k4, k4.vertices(), 0, 3).collect();
        assert_eq!(all.len(), 9);
        let all: Vec<_> = PathsThrough::new(&k4, k4.vertices(), 0, 4).collect();
        // 4!/2 = 12 Hamiltonian paths, all through 0.
        assert_eq!(all.len(), 12);
        let mut uniq = all.clone();
        uniq.iter_mut().for_each(|p| {
            if p[0] > p[3] {
                p.reverse()
            }
        });
        uniq.sort();
        uniq.dedup();
        assert_eq!(uniq.len(), 12);
    }

    #[test]
    fn bound_is_tight_on_clique_plus_matching() {
        let g = join(&complete(2).unwrap(), &matching(20).unwrap()).unwrap();
        assert!(packing_bound_excludes(&g, &g.vertices(), 3, 3));
        assert!(!packing_bound_excludes(&g, &g.vertices(), 2, 3));
    }
}
