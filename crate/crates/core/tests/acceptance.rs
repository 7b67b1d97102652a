//! The nine acceptance criteria. Runs without the libtest harness and prints
//! one PASS/FAIL line per criterion; exits nonzero if any fails.

mod common;

use std::collections::{BTreeSet, HashMap};
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use turan::canon::canonical_code;
use turan::constructions::{forest_extremal, p3_extremal, pl_extremal};
use turan::detectors::{
    contains_pattern, find_high_codegree_subset, longest_path, path_copies, verify_witness, PatternSpec,
};
use turan::formulas::{badlemma_bound, ex_equibipartite_forest, ex_k_p3, ex_k_pl, gorgol_lower_p3};
use turan::graph::{complete, disjoint_union, empty, join, petersen, Graph};
use turan::oracle::{exact_ex, SearchOptions, SearchReport};
use turan::treelab::{
    check_all_unequal_partitions, enumerate_equibipartite_trees, enumerate_trees, has_perfect_matching,
    nopm_partition,
};

use common::{
    brute_longest_path, forests_up_to_iso, graph_from_mask, graphs_up_to_iso, naive_embeds, random_graph,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn oracle(n: usize, p: &PatternSpec) -> SearchReport {
    exact_ex(n, p, &SearchOptions::default()).expect("n within cap")
}

fn complete_value(n: usize, p: &PatternSpec) -> Result<usize, String> {
    let r = oracle(n, p);
    ensure(r.complete, || format!("oracle incomplete at n={n}, {p}"))?;
    r.max_edges.ok_or_else(|| format!("no {p}-free graph at n={n}"))
}

fn gorgol_small_k() -> Outcome {
    let p = PatternSpec::disjoint_paths(2, 3).unwrap();
    let mut vals = Vec::new();
    for n in 6..=9 {
        let ex = complete_value(n, &p)?;
        let f = gorgol_lower_p3(n as u64, 2).unwrap().value as usize;
        ensure(ex == f, || format!("n={n}: oracle {ex} != formula {f}"))?;
        vals.push(ex);
    }
    // Stretch: a budget-limited run only reports; a complete one must match.
    let stretch = SearchOptions {
        cap: 14,
        max_time: Some(std::time::Duration::from_secs(120)),
        ..SearchOptions::default()
    };
    let mut extra = Vec::new();
    for n in 10..=14 {
        let r = exact_ex(n, &p, &stretch).expect("n within cap");
        let f = gorgol_lower_p3(n as u64, 2).unwrap().value as usize;
        match r.max_edges {
            Some(ex) if r.complete => {
                ensure(ex == f, || format!("n={n}: oracle {ex} != formula {f}"))?;
                extra.push(ex.to_string());
            }
            best => extra.push(format!("incomplete(best {best:?})")),
        }
    }
    Ok(format!("ex(n,2*P3) for n=6..9: {vals:?}; n=10..14: [{}]", extra.join(", ")))
}

fn p3_construction() -> Outcome {
    let cases: Vec<(usize, usize)> = (1..=4).flat_map(|k| (3 * k..=60).map(move |n| (n, k))).collect();
    cases.par_iter().try_for_each(|&(n, k)| {
        let g = p3_extremal(n, k).unwrap();
        let f = ex_k_p3(n as u64, k as u64).unwrap().value as usize;
        ensure(g.m() == f, || format!("n={n}, k={k}: {} edges, formula {f}", g.m()))?;
        let p = PatternSpec::disjoint_paths(k, 3).unwrap();
        ensure(contains_pattern(&g, &p).is_none(), || format!("n={n}, k={k}: contains {p}"))
    })?;
    Ok(format!("{} (n,k) pairs", cases.len()))
}

fn pl_construction() -> Outcome {
    let mut cases = Vec::new();
    for k in [2, 3] {
        for l in [4, 5, 6] {
            let start = k * (l / 2) + 1;
            cases.extend((start..=60).map(|n| (n, k, l)));
        }
    }
    cases.par_iter().try_for_each(|&(n, k, l)| {
        let g = pl_extremal(n, k, l).unwrap();
        let f = ex_k_pl(n as u64, k as u64, l as u64).unwrap().value as usize;
        ensure(g.m() == f, || format!("n={n}, k={k}, l={l}: {} edges, formula {f}", g.m()))?;
        let p = PatternSpec::disjoint_paths(k, l).unwrap();
        ensure(contains_pattern(&g, &p).is_none(), || format!("n={n}, k={k}, l={l}: contains {p}"))
    })?;
    // Lower-bound consistency wherever the oracle completes.
    let mut checked = 0;
    for (k, l, n_max) in [(2, 4, 10), (2, 5, 10), (2, 6, 10)] {
        let p = PatternSpec::disjoint_paths(k, l).unwrap();
        for n in k * (l / 2) + 1..=n_max {
            let ex = complete_value(n, &p)?;
            let c = pl_extremal(n, k, l).unwrap().m();
            ensure(ex >= c, || format!("n={n}, {p}: oracle {ex} < construction {c}"))?;
            checked += 1;
        }
    }
    Ok(format!("{} constructions, {checked} oracle comparisons", cases.len()))
}

fn erdos_gallai() -> Outcome {
    let mut rows = 0;
    let mut equalities = 0;
    for l in 4..=7 {
        let p = PatternSpec::single_path(l).unwrap();
        for n in l - 1..=10 {
            let ex = complete_value(n, &p)?;
            let bound = (l - 2) * n / 2;
            ensure(ex <= bound, || format!("n={n}, l={l}: oracle {ex} > bound {bound}"))?;
            if n % (l - 1) == 0 {
                ensure(ex == bound, || format!("n={n}, l={l}: oracle {ex} != bound {bound}"))?;
                equalities += 1;
            }
            rows += 1;
        }
    }
    Ok(format!("{rows} (n,l) pairs, {equalities} equality cases"))
}

fn tree_lemmas() -> Outcome {
    let mut with_pm = 0;
    let mut without = 0;
    for two_l in (2..=12).step_by(2) {
        for t in enumerate_equibipartite_trees(two_l).unwrap() {
            if has_perfect_matching(&t).0 {
                ensure(check_all_unequal_partitions(&t).unwrap(), || {
                    format!("tree {t:?} with a perfect matching has an independent larger class")
                })?;
                with_pm += 1;
            } else {
                let cert = nopm_partition(&t).map_err(|e| format!("tree {t:?}: {e}"))?;
                ensure(cert.verify(&t) && cert.small_class.len() < two_l / 2, || {
                    format!("tree {t:?}: bad certificate {cert:?}")
                })?;
                without += 1;
            }
        }
    }
    Ok(format!("{with_pm} trees with a perfect matching, {without} without"))
}

fn is_two_p4_free(g: &Graph) -> bool {
    contains_pattern(g, &PatternSpec::disjoint_paths(2, 4).unwrap()).is_none()
}

/// Random maximal 2*P4-free graph: edges offered in random order.
fn greedy_free(rng: &mut ChaCha8Rng, n: usize) -> Graph {
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    pairs.shuffle(rng);
    let mut g = empty(n).unwrap();
    for (u, v) in pairs {
        let h = g.with_edge(u, v).unwrap();
        if is_two_p4_free(&h) {
            g = h;
        }
    }
    g
}

fn badlemma_realization() -> Outcome {
    let p4 = PatternSpec::single_path(4).unwrap();
    let ex_p4: HashMap<usize, u64> = (0..=8).map(|n| (n, complete_value(n, &p4).unwrap() as u64)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut instances = Vec::new();
    for i in 0..500 {
        let n = rng.gen_range(8..=12);
        let g = if i % 2 == 0 {
            greedy_free(&mut rng, n)
        } else {
            let mut g = join(&complete(3).unwrap(), &empty(n - 3).unwrap()).unwrap();
            let edges: Vec<_> = g.edges().collect();
            for (u, v) in edges {
                if rng.gen_bool(0.2) {
                    g = g.without_edge(u, v).unwrap();
                }
            }
            g
        };
        instances.push(g);
    }
    let mut copies_checked = 0;
    let mut nonvacuous = 0;
    for g in &instances {
        ensure(is_two_p4_free(g), || format!("fuzzed instance contains 2*P4: {g:?}"))?;
        let n = g.n();
        let bound = badlemma_bound(n as u64, g.m() as u64, 4, 2, ex_p4[&(n - 4)]).unwrap();
        let need = bound.ceil().to_integer().max(0) as usize;
        if need > 0 {
            nonvacuous += 1;
        }
        for copy in path_copies(g, 4, usize::MAX).0 {
            let (subset, codegree) = find_high_codegree_subset(g, &copy, 2).unwrap();
            ensure(codegree >= need, || {
                format!("copy {copy:?}: best pair {subset:?} has codegree {codegree} < {need} in {g:?}")
            })?;
            copies_checked += 1;
        }
    }
    Ok(format!(
        "500 instances ({nonvacuous} with a positive bound), {copies_checked} P4 copies"
    ))
}

/// Equibipartite forests with at least two components and at most
/// `max_vertices` vertices.
fn valid_forests(max_vertices: usize) -> Vec<Graph> {
    let trees: Vec<Graph> = (2..=max_vertices)
        .step_by(2)
        .flat_map(|s| enumerate_equibipartite_trees(s).unwrap())
        .collect();
    let mut out = Vec::new();
    fn rec(trees: &[Graph], from: usize, acc: Graph, parts: usize, max: usize, out: &mut Vec<Graph>) {
        if parts >= 2 {
            out.push(acc.clone());
        }
        for (i, t) in trees.iter().enumerate().skip(from) {
            if acc.n() + t.n() <= max {
                rec(trees, i, disjoint_union(&acc, t).unwrap(), parts + 1, max, out);
            }
        }
    }
    rec(&trees, 0, empty(0).unwrap(), 0, max_vertices, &mut out);
    out
}

fn forest_theorem() -> Outcome {
    let forests = valid_forests(10);
    let cases: Vec<(usize, &Graph)> = forests
        .iter()
        .flat_map(|h| (h.n() / 2 - 1..=40).map(move |n| (n, h)))
        .collect();
    cases.par_iter().try_for_each(|&(n, h)| {
        let g = forest_extremal(n, h).unwrap();
        let f = ex_equibipartite_forest(n as u64, h).unwrap().value as usize;
        ensure(g.m() == f, || format!("n={n}, h={h:?}: {} edges, formula {f}", g.m()))?;
        let p = PatternSpec::forest(h.clone()).unwrap();
        ensure(contains_pattern(&g, &p).is_none(), || format!("n={n}: contains {h:?}"))
    })?;
    let mut spot = 0;
    for size in 2..=6 {
        for t in enumerate_trees(size).unwrap() {
            let p = PatternSpec::forest(t.clone()).unwrap();
            for n in 1..=9 {
                let ex = complete_value(n, &p)?;
                let bound = (size - 2) * n / 2;
                ensure(ex <= bound, || format!("tree {t:?}, n={n}: ex {ex} > {bound}"))?;
                spot += 1;
            }
        }
    }
    Ok(format!("{} forests, {} (n,h) pairs, {spot} tree spot checks", forests.len(), cases.len()))
}

/// Maximum edge count and extremal classes by scanning every labelled graph.
fn naive_ex(n: usize, h: &Graph) -> (usize, BTreeSet<Vec<u8>>) {
    let pairs = n * n.saturating_sub(1) / 2;
    let found: Vec<(usize, u64)> = (0u64..1 << pairs)
        .into_par_iter()
        .filter_map(|mask| {
            let g = graph_from_mask(n, mask);
            (!naive_embeds(&g, h)).then_some((g.m(), mask))
        })
        .collect();
    let best = found.iter().map(|f| f.0).max().unwrap_or(0);
    let codes = found
        .iter()
        .filter(|f| f.0 == best)
        .map(|&(_, mask)| canonical_code(&graph_from_mask(n, mask)).as_bytes().to_vec())
        .collect();
    (best, codes)
}

fn oracle_soundness() -> Outcome {
    let patterns = ["P3", "2*P3", "P4", "P5", "2*P2"];
    let mut compared = 0;
    for name in patterns {
        let p: PatternSpec = name.parse().unwrap();
        let h = p.to_graph().unwrap();
        for n in 1..=7 {
            let report = oracle(n, &p);
            ensure(report.complete, || format!("{name}, n={n}: incomplete"))?;
            let (best, codes) = naive_ex(n, &h);
            ensure(report.max_edges == Some(best), || {
                format!("{name}, n={n}: oracle {:?}, naive {best}", report.max_edges)
            })?;
            let got: BTreeSet<Vec<u8>> = report.witnesses.iter().map(|c| c.as_bytes().to_vec()).collect();
            ensure(got == codes, || format!("{name}, n={n}: witness sets differ"))?;
            compared += 1;
        }
    }
    let mut det = 0;
    for (name, n) in [("P3", 7), ("2*P3", 8), ("P4", 9), ("P5", 9), ("2*P2", 7), ("2*P3", 9)] {
        let p: PatternSpec = name.parse().unwrap();
        let run = |threads| {
            let opts = SearchOptions {
                threads,
                ..SearchOptions::default()
            };
            exact_ex(n, &p, &opts).unwrap()
        };
        let (a, b) = (run(1), run(8));
        ensure(a.complete && b.complete, || format!("{name}, n={n}: incomplete"))?;
        ensure(a.max_edges == b.max_edges && a.witnesses == b.witnesses, || {
            format!("{name}, n={n}: thread counts disagree")
        })?;
        det += 1;
    }
    Ok(format!("{compared} oracle/naive comparisons, {det} determinism checks"))
}

fn detector_equivalence() -> Outcome {
    let mut patterns: Vec<PatternSpec> = Vec::new();
    for size in 1..=6 {
        for f in forests_up_to_iso(size) {
            patterns.push(PatternSpec::forest(f).unwrap());
        }
    }
    for k in 1..=3 {
        for l in 2..=6 {
            if k * l <= 6 {
                patterns.push(PatternSpec::disjoint_paths(k, l).unwrap());
            }
        }
    }
    for l in 2..=6 {
        patterns.push(PatternSpec::single_path(l).unwrap());
    }
    let pattern_graphs: Vec<Graph> = patterns.iter().map(|p| p.to_graph().unwrap()).collect();
    let graphs: Vec<Graph> = (0..=8).flat_map(graphs_up_to_iso).collect();
    let pairs = graphs.len() * patterns.len();
    graphs.par_iter().try_for_each(|g| {
        for (p, h) in patterns.iter().zip(&pattern_graphs) {
            let fast = contains_pattern(g, p);
            let slow = naive_embeds(g, h);
            ensure(fast.is_some() == slow, || format!("{p} in {g:?}: detector {}, naive {slow}", fast.is_some()))?;
            if let Some(w) = fast {
                ensure(verify_witness(g, p, &w), || format!("{p} in {g:?}: bad witness {w:?}"))?;
            }
        }
        Ok::<_, String>(())
    })?;
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..200 {
        let n = rng.gen_range(1..=9);
        let p = rng.gen_range(0.1..0.7);
        let g = random_graph(&mut rng, n, p);
        let (len, path) = longest_path(&g);
        let brute = brute_longest_path(&g);
        ensure(len == brute, || format!("{g:?}: longest path {len}, brute force {brute}"))?;
        ensure(path.len() == len && path.windows(2).all(|w| g.has_edge(w[0], w[1])), || {
            format!("{g:?}: invalid path witness {path:?}")
        })?;
    }
    let pet = longest_path(&petersen()).0;
    ensure(pet == 10 && brute_longest_path(&petersen()) == 10, || format!("Petersen: {pet}"))?;
    Ok(format!(
        "{} graphs x {} patterns = {pairs} pairs; 200 random longest paths; Petersen -> 10",
        graphs.len(),
        patterns.len()
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("small-k equality for 2*P3, n in [6,9]", gorgol_small_k),
        ("k*P3 construction: edge count and freeness, n <= 60, k <= 4", p3_construction),
        ("k*Pl construction: edge count and freeness, n <= 60", pl_construction),
        ("Erdos-Gallai bound, l in [4,7], n <= 10", erdos_gallai),
        ("equibipartite tree partition lemmas, <= 12 vertices", tree_lemmas),
        ("shared-neighbourhood bound on 500 fuzzed 2*P4-free graphs", badlemma_realization),
        ("forest construction and tree spot checks", forest_theorem),
        ("oracle soundness and thread determinism", oracle_soundness),
        ("detector equivalence with naive search", detector_equivalence),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name} [{secs:.1}s] {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} [{secs:.1}s] {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
