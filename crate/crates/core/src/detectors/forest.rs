//! Forest embedding: tree components one at a time, largest first, each
//! rooted at a centroid with its leaves placed last.

use std::collections::VecDeque;

use crate::bitset::VertexSet;
use crate::graph::Graph;
use crate::matching::{matched_pairs, maximum_matching, two_coloring};

use super::DetectorOptions;

/// Embedding order and pruning data for a forest pattern.
pub(crate) struct ForestPlan {
    /// Pattern vertices in the order they are mapped.
    order: Vec<usize>,
    parent: Vec<Option<usize>>,
    /// Neighbours of each pattern vertex still to be mapped after it.
    children: Vec<usize>,
    /// Interchangeable earlier vertex whose image must be smaller.
    after: Vec<Option<usize>>,
    /// Per position in `order`: set when a new component starts there.
    starts: Vec<bool>,
    /// Per position: order, matching number and smaller-class total of the
    /// components that begin at or after it.
    rest_size: Vec<usize>,
    rest_tau: Vec<usize>,
    rest_minside: Vec<usize>,
    /// Pattern components, each as an ascending vertex list.
    pub(crate) components: Vec<Vec<usize>>,
}

fn centroid(h: &Graph, comp: &VertexSet) -> usize {
    let size = comp.len();
    let mut best = (usize::MAX, usize::MAX);
    for v in comp.iter() {
        let mut rest = *comp;
        rest.remove(v);
        let heaviest = h
            .components_within(&rest)
            .iter()
            .map(|c| c.len())
            .max()
            .unwrap_or(0);
        debug_assert!(heaviest < size);
        best = best.min((heaviest, v));
    }
    best.1
}

impl ForestPlan {
    pub(crate) fn new(h: &Graph) -> ForestPlan {
        let n = h.n();
        let comps = h.components();
        let mate = maximum_matching(h);
        let color = two_coloring(h).expect("forests are bipartite");
        let mut by_size: Vec<&VertexSet> = comps.iter().collect();
        by_size.sort_by_key(|c| (std::cmp::Reverse(c.len()), c.first()));

        let mut order = Vec::with_capacity(n);
        let mut parent = vec![None; n];
        let mut children = vec![0; n];
        let mut after = vec![None; n];
        let mut starts = Vec::with_capacity(n);
        let mut sizes = Vec::new();
        let mut last_isolated = None;
        for comp in &by_size {
            let root = centroid(h, comp);
            let mut bfs = vec![root];
            let mut seen = VertexSet::singleton(root);
            let mut queue = VecDeque::from([root]);
            while let Some(v) = queue.pop_front() {
                for u in h.neighbors(v).iter() {
                    if seen.contains(u) {
                        continue;
                    }
                    seen.insert(u);
                    parent[u] = Some(v);
                    children[v] += 1;
                    bfs.push(u);
                    queue.push_back(u);
                }
            }
            // Internal vertices keep BFS order, so parents always precede
            // children; leaves follow.
            let (leaves, internal): (Vec<usize>, Vec<usize>) = bfs[1..]
                .iter()
                .partition(|&&v| h.degree(v) == 1);
            let mut last_leaf_of = std::collections::HashMap::new();
            for &leaf in &leaves {
                let p = parent[leaf].expect("non-root vertex");
                if let Some(prev) = last_leaf_of.insert(p, leaf) {
                    after[leaf] = Some(prev);
                }
            }
            if comp.len() == 1 {
                after[root] = last_isolated;
                last_isolated = Some(root);
            }
            let start = order.len();
            order.push(root);
            order.extend(internal);
            order.extend(leaves);
            starts.extend((start..order.len()).map(|i| i == start));
            let tau = comp
                .iter()
                .filter(|&v| mate[v].is_some_and(|u| u > v))
                .count();
            let ones = comp.iter().filter(|&v| color[v] == 1).count();
            let minside = if comp.len() > 1 { ones.min(comp.len() - ones) } else { 0 };
            sizes.push((start, comp.len(), tau, minside));
        }
        let mut rest_size = vec![0; n + 1];
        let mut rest_tau = vec![0; n + 1];
        let mut rest_minside = vec![0; n + 1];
        let (mut s, mut t, mut m) = (0, 0, 0);
        for &(start, size, tau, minside) in sizes.iter().rev() {
            s += size;
            t += tau;
            m += minside;
            rest_size[start] = s;
            rest_tau[start] = t;
            rest_minside[start] = m;
        }
        debug_assert_eq!(matched_pairs(&mate).len(), rest_tau[0]);
        ForestPlan {
            order,
            parent,
            children,
            after,
            starts,
            rest_size,
            rest_tau,
            rest_minside,
            components: comps.iter().map(|c| c.to_vec()).collect(),
        }
    }
}

/// Greedy vertex cover of `g[avail]` by repeatedly taking a vertex of
/// largest remaining degree. Stops once it has more than `limit` vertices.
fn greedy_cover(g: &Graph, avail: &VertexSet, limit: usize) -> VertexSet {
    let mut live = *avail;
    let mut cover = VertexSet::new();
    loop {
        let pick = live
            .iter()
            .map(|v| (g.neighbors(v).intersection_len(&live), v))
            .filter(|&(d, _)| d > 0)
            .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
        let Some((_, v)) = pick else {
            return cover;
        };
        cover.insert(v);
        live.remove(v);
        if cover.len() > limit {
            return cover;
        }
    }
}

pub(crate) struct Embedder<'a> {
    g: &'a Graph,
    plan: &'a ForestPlan,
    use_bounds: bool,
    phi: Vec<usize>,
    pub(crate) nodes: u64,
}

impl<'a> Embedder<'a> {
    pub(crate) fn new(g: &'a Graph, plan: &'a ForestPlan, opts: &DetectorOptions) -> Self {
        Embedder {
            g,
            plan,
            use_bounds: opts.use_bounds,
            phi: vec![usize::MAX; plan.parent.len()],
            nodes: 0,
        }
    }

    /// Image of every pattern vertex, if an embedding into `g[avail]` exists.
    pub(crate) fn embed(&mut self, avail: VertexSet) -> Option<Vec<usize>> {
        self.go(0, avail).then(|| self.phi.clone())
    }

    fn excluded_by_cover(&self, pos: usize, avail: &VertexSet) -> bool {
        let tau = self.plan.rest_tau[pos];
        let minside = self.plan.rest_minside[pos];
        let need = tau.max(minside);
        let cover = greedy_cover(self.g, avail, need);
        if cover.len() < tau {
            return true;
        }
        // An independent cover can only host each pattern component through
        // one whole colour class.
        cover.len() < minside && self.g.edges_within(&cover) == 0
    }

    fn go(&mut self, pos: usize, avail: VertexSet) -> bool {
        self.nodes += 1;
        let plan = self.plan;
        if pos == plan.order.len() {
            return true;
        }
        if plan.starts[pos] {
            if avail.len() < plan.rest_size[pos] {
                return false;
            }
            if self.use_bounds && self.excluded_by_cover(pos, &avail) {
                return false;
            }
        }
        let x = plan.order[pos];
        let cands = match plan.parent[x] {
            Some(p) => *self.g.neighbors(self.phi[p]) & avail,
            None => avail,
        };
        let floor = plan.after[x].map(|s| self.phi[s]);
        for c in cands.iter() {
            if floor.is_some_and(|f| c < f) {
                continue;
            }
            if self.g.neighbors(c).intersection_len(&avail) < plan.children[x] {
                continue;
            }
            self.phi[x] = c;
            let mut rest = avail;
            rest.remove(c);
            if self.go(pos + 1, rest) {
                return true;
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, disjoint_union, double_star, empty, join, path, star};

    fn embeds(g: &Graph, h: &Graph) -> bool {
        let plan = ForestPlan::new(h);
        let phi = Embedder::new(g, &plan, &DetectorOptions::default()).embed(g.vertices());
        if let Some(phi) = &phi {
            let img: VertexSet = phi.iter().collect();
            assert_eq!(img.len(), h.n());
            for (u, v) in h.edges() {
                assert!(g.has_edge(phi[u], phi[v]));
            }
        }
        phi.is_some()
    }

    #[test]
    fn plan_orders_parents_first() {
        let h = disjoint_union(&path(2).unwrap(), &double_star(2, 2).unwrap()).unwrap();
        let plan = ForestPlan::new(&h);
        assert_eq!(plan.order.len(), 8);
        for (i, &v) in plan.order.iter().enumerate() {
            if let Some(p) = plan.parent[v] {
                assert!(plan.order[..i].contains(&p));
            }
        }
        assert_eq!(plan.rest_tau[0], 3);
        assert_eq!(plan.rest_minside[0], 4);
    }

    #[test]
    fn small_embeddings() {
        let s22 = double_star(2, 2).unwrap();
        assert!(embeds(&complete(6).unwrap(), &s22));
        assert!(!embeds(&complete(5).unwrap(), &s22));
        assert!(embeds(&star(5).unwrap(), &star(3).unwrap()));
        assert!(!embeds(&path(10).unwrap(), &star(3).unwrap()));
        let two_edges = disjoint_union(&path(2).unwrap(), &path(2).unwrap()).unwrap();
        assert!(!embeds(&star(9).unwrap(), &two_edges));
        let h = disjoint_union(&path(2).unwrap(), &s22).unwrap();
        let k3e = join(&empty(3).unwrap(), &empty(37).unwrap()).unwrap();
        assert!(!embeds(&k3e, &h));
        let k4e = join(&empty(4).unwrap(), &empty(36).unwrap()).unwrap();
        assert!(embeds(&k4e, &h));
    }
}
