//! Exact Turán numbers for small `n` by exhaustive generation of
//! pattern-free graphs, one per isomorphism class.
//!
//! Graphs are grown one vertex at a time. A child is kept only if the new
//! vertex has minimum degree and, among minimum-degree vertices, is
//! equivalent to the one that comes first in the canonical labelling. Every
//! pattern-free graph then has exactly one accepted ancestry, and because
//! containment is inherited by supergraphs, any child that contains the
//! pattern is discarded together with its whole subtree.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::bitset::VertexSet;
use crate::canon::{canonical_code, canonical_form, GraphCode};
use crate::constructions;
use crate::detectors::{contains_pattern, DetectorError, PatternSpec};
use crate::formulas::{self, choose2, FormulaError};
use crate::graph::{Graph, GraphError};
use crate::io::to_graph6;

/// Largest `n` accepted by default.
pub const DEFAULT_ORACLE_CAP: usize = 12;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("n = {n} is above the oracle cap of {cap}")]
    OverCap { n: usize, cap: usize },
    #[error("search for n = {n} did not complete within its budget")]
    Incomplete { n: usize },
    #[error("no {pattern}-free graph exists on {n} vertices")]
    NoFreeGraph { n: usize, pattern: String },
    #[error("thread pool: {0}")]
    ThreadPool(String),
    #[error(transparent)]
    Detector(#[from] DetectorError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone)]
pub struct SearchOptions {
    /// Stop after this many accepted search nodes.
    pub max_nodes: Option<u64>,
    pub max_time: Option<Duration>,
    /// Worker threads; 0 lets the pool decide.
    pub threads: usize,
    pub cap: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            max_nodes: None,
            max_time: None,
            threads: 0,
            cap: DEFAULT_ORACLE_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchReport {
    pub n: usize,
    #[serde(serialize_with = "ser_pattern")]
    pub pattern: PatternSpec,
    /// Largest edge count found. `None` when no pattern-free graph on `n`
    /// vertices exists (or none was reached before the budget ran out).
    pub max_edges: Option<usize>,
    /// Canonical codes of every extremal graph found, ascending.
    #[serde(serialize_with = "ser_codes")]
    pub witnesses: Vec<GraphCode>,
    pub nodes_explored: u64,
    #[serde(serialize_with = "ser_duration")]
    pub wall_time: Duration,
    /// False iff a budget was hit; the other fields are then best-so-far.
    pub complete: bool,
}

fn ser_pattern<S: Serializer>(p: &PatternSpec, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(p)
}

fn ser_codes<S: Serializer>(codes: &[GraphCode], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(
        codes
            .iter()
            .map(|c| to_graph6(&c.to_graph().expect("codes decode"))),
    )
}

fn ser_duration<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

impl SearchReport {
    pub fn witness_graphs(&self) -> Vec<Graph> {
        self.witnesses
            .iter()
            .map(|c| c.to_graph().expect("codes decode"))
            .collect()
    }
}

/// Shared state of one search.
struct Search<'a> {
    n: usize,
    pattern: &'a PatternSpec,
    /// `ex_upper[j]` bounds the edges of a pattern-free graph on `j`
    /// vertices.
    ex_upper: Vec<usize>,
    best: AtomicUsize,
    nodes: AtomicU64,
    max_nodes: u64,
    deadline: Option<Instant>,
    stopped: AtomicBool,
}

/// A generated graph together with its canonical code.
#[derive(Clone)]
struct Node {
    g: Graph,
    code: GraphCode,
}

impl Search<'_> {
    /// Upper bound on the edges of any level-`n` descendant of a graph on
    /// `i` vertices with `m` edges and minimum degree `delta`.
    ///
    /// Each added vertex has minimum degree in its graph, so its degree is at
    /// most one more than the previous minimum degree, and at most the
    /// average degree of the graph it joins.
    fn upper(&self, i: usize, m: usize, delta: usize) -> usize {
        let (mut m, mut d) = (m, delta);
        for j in i + 1..=self.n {
            let mut step = (j - 1).min(d + 1);
            if j > 2 {
                step = step.min(2 * m / (j - 2));
            }
            step = step.min(2 * self.ex_upper[j] / j);
            m = (m + step).min(self.ex_upper[j]);
            d = step;
        }
        m
    }

    fn out_of_budget(&self) -> bool {
        if self.stopped.load(Ordering::Relaxed) {
            return true;
        }
        let over_nodes = self.nodes.load(Ordering::Relaxed) >= self.max_nodes;
        let over_time = self.deadline.is_some_and(|d| Instant::now() >= d);
        if over_nodes || over_time {
            self.stopped.store(true, Ordering::Relaxed);
        }
        over_nodes || over_time
    }

    /// Accepted pattern-free children of `parent`, in a deterministic order.
    fn children(&self, parent: &Node) -> Vec<Node> {
        let g = &parent.g;
        let i = g.n();
        let delta = if i == 0 { 0 } else { g.min_degree() };
        let best = self.best.load(Ordering::Relaxed);
        let max_d = if i == 0 { 0 } else { (delta + 1).min(i) };
        let mut seen: HashSet<GraphCode> = HashSet::new();
        let mut out = Vec::new();
        for d in (0..=max_d).rev() {
            if self.upper(i + 1, g.m() + d, d) < best {
                break;
            }
            // Vertices of degree d-1 must gain an edge to stay at least d;
            // vertices of lower degree rule d out.
            let mut forced = VertexSet::new();
            let mut free = Vec::new();
            let mut feasible = true;
            for u in 0..i {
                let du = g.degree(u);
                if du + 1 < d {
                    feasible = false;
                    break;
                }
                if du + 1 == d {
                    forced.insert(u);
                } else {
                    free.push(u);
                }
            }
            if !feasible || forced.len() > d || free.len() < d - forced.len() {
                continue;
            }
            for_each_subset(&free, d - forced.len(), &mut |pick| {
                if self.out_of_budget() {
                    return false;
                }
                let mut nbrs = forced;
                for &u in pick {
                    nbrs.insert(u);
                }
                let child = g.with_vertex(&nbrs).expect("within cap");
                if contains_pattern(&child, self.pattern).is_some() {
                    return true;
                }
                let form = canonical_form(&child);
                let pos = form.positions();
                let w = (0..=i)
                    .filter(|&v| child.degree(v) == d)
                    .min_by_key(|&v| pos[v])
                    .expect("new vertex has degree d");
                if w != i && canonical_code(&child.remove_vertex(w)) != parent.code {
                    return true;
                }
                if seen.insert(form.code.clone()) {
                    self.nodes.fetch_add(1, Ordering::Relaxed);
                    out.push(Node {
                        g: child,
                        code: form.code,
                    });
                }
                true
            });
        }
        out
    }

    /// Depth-first search below `node`, collecting level-`n` graphs that
    /// reach the running best.
    fn descend(&self, node: Node, found: &mut BTreeMap<usize, BTreeSet<GraphCode>>) {
        let i = node.g.n();
        if i == self.n {
            let m = node.g.m();
            let best = self.best.fetch_max(m, Ordering::Relaxed).max(m);
            if m >= best {
                found.entry(m).or_default().insert(node.code);
            }
            return;
        }
        for child in self.children(&node) {
            if self.out_of_budget() {
                return;
            }
            let delta = child.g.min_degree();
            if self.upper(child.g.n(), child.g.m(), delta) < self.best.load(Ordering::Relaxed) {
                continue;
            }
            self.descend(child, found);
        }
    }
}

/// Calls `f` on every `k`-subset of `items` in lexicographic order until `f`
/// returns false.
fn for_each_subset(items: &[usize], k: usize, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    fn rec(
        items: &[usize],
        k: usize,
        start: usize,
        acc: &mut Vec<usize>,
        f: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if acc.len() == k {
            return f(acc);
        }
        let need = k - acc.len();
        for i in start..=items.len() - need {
            acc.push(items[i]);
            let go_on = rec(items, k, i + 1, acc, f);
            acc.pop();
            if !go_on {
                return false;
            }
        }
        true
    }
    if k > items.len() {
        return true;
    }
    rec(items, k, 0, &mut Vec::with_capacity(k), f)
}

/// `ex(n, p)` and every extremal graph up to isomorphism.
pub fn exact_ex(n: usize, p: &PatternSpec, opts: &SearchOptions) -> Result<SearchReport, OracleError> {
    if n > opts.cap {
        return Err(OracleError::OverCap { n, cap: opts.cap });
    }
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.threads)
        .build()
        .map_err(|e| OracleError::ThreadPool(e.to_string()))?;
    let deadline = opts.max_time.map(|t| start + t);
    let seeded = !p.has_isolated_vertex();

    // Solve every smaller order first: their values tighten the bound.
    let mut ex_upper: Vec<usize> = (0..=n).map(|j| choose2(j as u64) as usize).collect();
    let mut nodes = 0u64;
    let mut last = None;
    for j in 0..=n {
        let floor = if seeded && j > 0 { ex_upper[j - 1] } else { 0 };
        let budget_left = opts.max_nodes.map_or(u64::MAX, |b| b.saturating_sub(nodes));
        let search = Search {
            n: j,
            pattern: p,
            ex_upper: ex_upper[..=j].to_vec(),
            best: AtomicUsize::new(floor),
            nodes: AtomicU64::new(0),
            max_nodes: budget_left,
            deadline,
            stopped: AtomicBool::new(false),
        };
        let found = pool.install(|| run_level(&search, opts.threads));
        nodes += search.nodes.load(Ordering::Relaxed);
        let complete = !search.stopped.load(Ordering::Relaxed);
        let (max_edges, witnesses) = match found.into_iter().next_back() {
            Some((m, codes)) => (Some(m), codes.into_iter().collect::<Vec<_>>()),
            None => (None, Vec::new()),
        };
        if complete {
            match max_edges {
                Some(m) => ex_upper[j] = m,
                None => {
                    // No free graph here means none on more vertices either.
                    for e in &mut ex_upper[j..] {
                        *e = 0;
                    }
                }
            }
        }
        last = Some((max_edges, witnesses, complete));
        if !complete {
            if j < n {
                last = Some((None, Vec::new(), false));
            }
            break;
        }
        if max_edges.is_none() {
            break;
        }
    }
    let (max_edges, witnesses, complete) = last.expect("at least level 0");
    Ok(SearchReport {
        n,
        pattern: p.clone(),
        max_edges,
        witnesses,
        nodes_explored: nodes,
        wall_time: start.elapsed(),
        complete,
    })
}

/// Expands the top of the tree breadth first, then searches the subtrees in
/// parallel. Results are merged as sets, so the outcome does not depend on
/// scheduling.
fn run_level(search: &Search<'_>, threads: usize) -> BTreeMap<usize, BTreeSet<GraphCode>> {
    let empty = Graph::from_edges(0, &[]).expect("empty graph");
    let root = Node {
        code: canonical_code(&empty),
        g: empty,
    };
    let want = 32 * threads.max(rayon::current_num_threads()).max(1);
    let mut frontier = vec![root];
    let mut found = BTreeMap::new();
    while frontier.len() < want && frontier.iter().all(|f| f.g.n() < search.n) {
        let mut next = Vec::new();
        for node in &frontier {
            next.extend(search.children(node));
        }
        if next.is_empty() {
            return found;
        }
        frontier = next;
    }
    if frontier.iter().all(|f| f.g.n() == search.n) {
        for node in frontier {
            search.descend(node, &mut found);
        }
        return keep_top(found);
    }
    let merged = Mutex::new(BTreeMap::<usize, BTreeSet<GraphCode>>::new());
    frontier.into_par_iter().for_each(|node| {
        let mut local = BTreeMap::new();
        search.descend(node, &mut local);
        let mut all = merged.lock().expect("no panics while merging");
        for (m, codes) in local {
            all.entry(m).or_default().extend(codes);
        }
    });
    keep_top(merged.into_inner().expect("no panics while merging"))
}

/// Keeps only the top edge count.
fn keep_top(mut found: BTreeMap<usize, BTreeSet<GraphCode>>) -> BTreeMap<usize, BTreeSet<GraphCode>> {
    match found.pop_last() {
        Some((m, codes)) => BTreeMap::from([(m, codes)]),
        None => found,
    }
}

/// The extremal graphs of a completed search.
pub fn extremal_graphs(n: usize, p: &PatternSpec, opts: &SearchOptions) -> Result<Vec<Graph>, OracleError> {
    let report = exact_ex(n, p, opts)?;
    if !report.complete {
        return Err(OracleError::Incomplete { n });
    }
    if report.max_edges.is_none() {
        return Err(OracleError::NoFreeGraph {
            n,
            pattern: p.to_string(),
        });
    }
    Ok(report.witness_graphs())
}

/// Formula family compared against the oracle.
#[derive(Debug, Clone)]
pub enum Family {
    /// `k*P3`, compared against the piecewise lower bound.
    KP3 { k: usize },
    KPl { k: usize, l: usize },
    Forest { h: Graph },
}

impl Family {
    fn pattern(&self) -> Result<PatternSpec, OracleError> {
        Ok(match self {
            Family::KP3 { k } => PatternSpec::disjoint_paths(*k, 3)?,
            Family::KPl { k, l } => PatternSpec::disjoint_paths(*k, *l)?,
            Family::Forest { h } => PatternSpec::forest(h.clone())?,
        })
    }

    fn name(&self) -> &'static str {
        match self {
            Family::KP3 { .. } => "k_p3",
            Family::KPl { .. } => "k_pl",
            Family::Forest { .. } => "forest",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "=")]
    Equal,
    #[serde(rename = "<")]
    Less,
    #[serde(rename = ">")]
    Greater,
    #[serde(rename = "n/a")]
    NotApplicable,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Equal => "=",
            Relation::Less => "<",
            Relation::Greater => ">",
            Relation::NotApplicable => "n/a",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FormulaRow {
    pub family: &'static str,
    pub n: usize,
    pub formula: u64,
    pub in_proved_range: bool,
    pub conditional_on_erdos_sos: bool,
    /// Exact value when the oracle ran to completion.
    pub oracle: Option<usize>,
    pub oracle_complete: bool,
    /// Edge count of the family's construction, used when the oracle is
    /// out of reach.
    pub construction: Option<usize>,
    /// Formula compared with the complete oracle value.
    pub relation: Relation,
    /// The formula disagrees with a complete oracle value where it is
    /// claimed to be exact.
    pub contradiction: bool,
}

/// One row per `n`: formula value against the exact value (or a
/// construction when `n` is above the oracle cap).
pub fn verify_formula_range(
    family: &Family,
    n_range: std::ops::RangeInclusive<usize>,
    opts: &SearchOptions,
) -> Result<Vec<FormulaRow>, OracleError> {
    let pattern = family.pattern()?;
    let mut rows = Vec::new();
    for n in n_range {
        let nn = n as u64;
        let (formula, construction) = match family {
            Family::KP3 { k } => {
                let mut f = formulas::gorgol_lower_p3(nn, *k as u64)?;
                // Exact for n >= 7k, and on the whole range for k <= 3.
                f.in_proved_range = *k <= 3 || f.value == 0 || nn >= 7 * *k as u64;
                let c = constructions::p3_extremal(n, *k)
                    .map(|g| g.m())
                    .into_iter()
                    .chain(constructions::gorgol_low_p3(n, *k).map(|g| g.m()))
                    .max();
                (f, c)
            }
            Family::KPl { k, l } => (
                formulas::ex_k_pl(nn, *k as u64, *l as u64)?,
                constructions::pl_extremal(n, *k, *l).ok().map(|g| g.m()),
            ),
            Family::Forest { h } => (
                formulas::ex_equibipartite_forest(nn, h)?,
                constructions::forest_extremal(n, h).ok().map(|g| g.m()),
            ),
        };
        let report = if n <= opts.cap {
            Some(exact_ex(n, &pattern, opts)?)
        } else {
            None
        };
        let complete = report.as_ref().is_some_and(|r| r.complete);
        let oracle = report.as_ref().and_then(|r| r.max_edges);
        let relation = match (complete, oracle) {
            (true, Some(o)) => match (formula.value as usize).cmp(&o) {
                std::cmp::Ordering::Equal => Relation::Equal,
                std::cmp::Ordering::Less => Relation::Less,
                std::cmp::Ordering::Greater => Relation::Greater,
            },
            _ => Relation::NotApplicable,
        };
        let contradiction = formula.in_proved_range
            && matches!(relation, Relation::Less | Relation::Greater);
        rows.push(FormulaRow {
            family: family.name(),
            n,
            formula: formula.value,
            in_proved_range: formula.in_proved_range,
            conditional_on_erdos_sos: formula.conditional_on_erdos_sos,
            oracle: if complete { oracle } else { None },
            oracle_complete: complete,
            construction,
            relation,
            contradiction,
        });
    }
    Ok(rows)
}
