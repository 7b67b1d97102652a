//! Canonical labelling by partition refinement and individualisation.
//!
//! Vertices are first split into an equitable partition (by repeated
//! neighbour-count refinement). The search then individualises each vertex of
//! the first non-singleton cell in turn, refines again, and recurses until the
//! partition is discrete. Each leaf yields an ordering of the vertices, and the
//! canonical code is the lexicographically least upper-triangle adjacency
//! string over all leaves. Automorphisms discovered along the way (two leaves
//! with equal codes) prune sibling branches in the same orbit and cut back to
//! the common ancestor of equivalent leaves.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bitset::VertexSet;
use crate::graph::{Graph, GraphError};

/// Isomorphism-invariant byte string: two graphs have equal codes exactly when
/// they are isomorphic.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GraphCode(Vec<u8>);

impl GraphCode {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    /// Vertex count recorded in the code.
    pub fn n(&self) -> usize {
        u16::from_be_bytes([self.0[0], self.0[1]]) as usize
    }

    /// Rebuild the canonically labelled representative.
    pub fn to_graph(&self) -> Result<Graph, GraphError> {
        let n = self.n();
        let mut g = Graph::blank(n)?;
        let mut bit = 0usize;
        for i in 0..n {
            for j in i + 1..n {
                let byte = self.0[2 + bit / 8];
                if byte & (0x80 >> (bit % 8)) != 0 {
                    g.add_edge_unchecked(i, j);
                }
                bit += 1;
            }
        }
        Ok(g)
    }

    fn from_words(n: usize, words: &[u64]) -> Self {
        let pairs = n * n.saturating_sub(1) / 2;
        let nbytes = pairs.div_ceil(8);
        let mut bytes = Vec::with_capacity(2 + nbytes);
        bytes.extend_from_slice(&(n as u16).to_be_bytes());
        for w in words {
            bytes.extend_from_slice(&w.to_be_bytes());
        }
        bytes.truncate(2 + nbytes);
        GraphCode(bytes)
    }
}

impl fmt::Debug for GraphCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GraphCode(")?;
        for b in &self.0 {
            write!(f, "{b:02x}")?;
        }
        write!(f, ")")
    }
}

/// Canonical code together with the labelling that produced it:
/// `order[i]` is the original vertex placed at canonical position `i`.
#[derive(Debug, Clone)]
pub struct CanonicalForm {
    pub code: GraphCode,
    pub order: Vec<usize>,
}

impl CanonicalForm {
    /// Canonical position of every original vertex.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.order.len()];
        for (i, &v) in self.order.iter().enumerate() {
            pos[v] = i;
        }
        pos
    }
}

pub fn canonical_code(g: &Graph) -> GraphCode {
    canonical_form(g).code
}

pub fn canonical_form(g: &Graph) -> CanonicalForm {
    let n = g.n();
    if n == 0 {
        return CanonicalForm {
            code: GraphCode::from_words(0, &[]),
            order: Vec::new(),
        };
    }
    let mut search = Search {
        g,
        best: None,
        autos: Vec::new(),
    };
    let cells = vec![0usize; n];
    let mut path = Vec::new();
    search.descend(cells, &mut path);
    let best = search.best.expect("at least one leaf is always reached");
    CanonicalForm {
        code: GraphCode::from_words(n, &best.code),
        order: best.order,
    }
}

/// True when `g` and `h` are isomorphic.
pub fn isomorphic(g: &Graph, h: &Graph) -> bool {
    g.n() == h.n() && g.m() == h.m() && canonical_code(g) == canonical_code(h)
}

const MAX_STORED_AUTOMORPHISMS: usize = 64;

struct Leaf {
    code: Vec<u64>,
    order: Vec<usize>,
    path: Vec<usize>,
}

struct Search<'a> {
    g: &'a Graph,
    best: Option<Leaf>,
    autos: Vec<Vec<usize>>,
}

impl Search<'_> {
    /// Returns `Some(d)` when the subtree should be abandoned up to depth `d`.
    fn descend(&mut self, mut cells: Vec<usize>, path: &mut Vec<usize>) -> Option<usize> {
        let ncells = refine(self.g, &mut cells);
        let n = self.g.n();
        if ncells == n {
            return self.leaf(&cells, path);
        }

        // First non-singleton cell in cell order.
        let mut sizes = vec![0usize; ncells];
        for &c in &cells {
            sizes[c] += 1;
        }
        let target = (0..ncells).find(|&c| sizes[c] > 1).expect("not discrete");
        let members: Vec<usize> = (0..n).filter(|&v| cells[v] == target).collect();

        let depth = path.len();
        let mut explored: Vec<usize> = Vec::new();
        for &w in &members {
            if !explored.is_empty() && self.in_explored_orbit(w, &explored, path) {
                continue;
            }
            explored.push(w);
            path.push(w);
            let result = self.descend(individualize(&cells, w), path);
            path.pop();
            if let Some(d) = result {
                if d < depth {
                    return Some(d);
                }
            }
        }
        None
    }

    fn leaf(&mut self, cells: &[usize], path: &[usize]) -> Option<usize> {
        let n = self.g.n();
        let mut order = vec![0usize; n];
        for (v, &c) in cells.iter().enumerate() {
            order[c] = v;
        }
        let code = leaf_code(self.g, &order);
        match &self.best {
            None => {
                self.best = Some(Leaf {
                    code,
                    order,
                    path: path.to_vec(),
                });
                None
            }
            Some(best) => match code.cmp(&best.code) {
                Ordering::Less => {
                    self.best = Some(Leaf {
                        code,
                        order,
                        path: path.to_vec(),
                    });
                    None
                }
                Ordering::Greater => None,
                Ordering::Equal => {
                    let mut gamma = vec![0usize; n];
                    for i in 0..n {
                        gamma[best.order[i]] = order[i];
                    }
                    let common = path
                        .iter()
                        .zip(best.path.iter())
                        .take_while(|(a, b)| a == b)
                        .count();
                    if self.autos.len() < MAX_STORED_AUTOMORPHISMS {
                        self.autos.push(gamma);
                    }
                    Some(common)
                }
            },
        }
    }

    /// Is `w` in the orbit of an explored sibling under the stored
    /// automorphisms that fix the current prefix pointwise?
    fn in_explored_orbit(&self, w: usize, explored: &[usize], path: &[usize]) -> bool {
        let n = self.g.n();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut any = false;
        for gamma in &self.autos {
            if path.iter().any(|&p| gamma[p] != p) {
                continue;
            }
            any = true;
            for (v, &image) in gamma.iter().enumerate() {
                let (a, b) = (find(&mut parent, v), find(&mut parent, image));
                if a != b {
                    parent[a] = b;
                }
            }
        }
        if !any {
            return false;
        }
        let root = find(&mut parent, w);
        explored.iter().any(|&e| find(&mut parent, e) == root)
    }
}

/// Refine `cells` (cell index per vertex) to the coarsest equitable partition
/// finer than it. Cell indices stay ordered by an isomorphism-invariant key.
/// Returns the number of cells.
fn refine(g: &Graph, cells: &mut [usize]) -> usize {
    let n = g.n();
    let mut ncells = normalize(cells);
    let mut idx: Vec<usize> = (0..n).collect();
    loop {
        let mut sets = vec![VertexSet::new(); ncells];
        for (v, &c) in cells.iter().enumerate() {
            sets[c].insert(v);
        }
        let counts: Vec<u16> = (0..n)
            .flat_map(|v| {
                let row = g.neighbors(v);
                sets.iter().map(move |s| row.intersection_len(s) as u16)
            })
            .collect();
        let key = |v: usize| (cells[v], &counts[v * ncells..(v + 1) * ncells]);
        idx.sort_by(|&a, &b| key(a).cmp(&key(b)));
        let mut fresh = vec![0usize; n];
        let mut next = 0usize;
        for i in 0..n {
            if i > 0 && key(idx[i]) != key(idx[i - 1]) {
                next += 1;
            }
            fresh[idx[i]] = next;
        }
        let new_count = next + 1;
        cells.copy_from_slice(&fresh);
        if new_count == ncells {
            return ncells;
        }
        ncells = new_count;
    }
}

/// Renumber cell indices to `0..k` preserving their order; returns `k`.
fn normalize(cells: &mut [usize]) -> usize {
    let mut distinct: Vec<usize> = cells.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    for c in cells.iter_mut() {
        *c = distinct.binary_search(c).expect("present");
    }
    distinct.len()
}

/// Split `w` off the front of its cell.
fn individualize(cells: &[usize], w: usize) -> Vec<usize> {
    let cw = cells[w];
    let mut out: Vec<usize> = cells
        .iter()
        .enumerate()
        .map(|(u, &c)| 2 * c + usize::from(c == cw && u != w))
        .collect();
    normalize(&mut out);
    out
}

fn leaf_code(g: &Graph, order: &[usize]) -> Vec<u64> {
    let n = order.len();
    let pairs = n * n.saturating_sub(1) / 2;
    let mut words = vec![0u64; pairs.div_ceil(64).max(1)];
    let mut bit = 0usize;
    for i in 0..n {
        let row = g.neighbors(order[i]);
        for &u in &order[i + 1..] {
            if row.contains(u) {
                words[bit / 64] |= 1u64 << (63 - bit % 64);
            }
            bit += 1;
        }
    }
    words
}
