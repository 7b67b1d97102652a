use turan::constructions::{self, Composition};
use turan::detectors::{contains_pattern, longest_path, PatternSpec};
use turan::formulas::{self, choose2, BoundKind};
use turan::graph::{double_star, disjoint_union, matching, path, star};

#[test]
fn kp3_grid_matches_construction_and_lower_bound() {
    for k in 1..=6u64 {
        for n in 3 * k..=80 {
            let f = formulas::ex_k_p3(n, k).unwrap();
            let g = constructions::p3_extremal(n as usize, k as usize).unwrap();
            assert_eq!(g.m() as u64, f.value, "n={n} k={k}");
            let low = formulas::gorgol_lower_p3(n, k).unwrap();
            assert_eq!(low.kind, BoundKind::Lower);
            if n + 1 >= 5 * k {
                assert_eq!(low.value, f.value);
            } else {
                assert_eq!(low.value, constructions::gorgol_low_p3(n as usize, k as usize).unwrap().m() as u64);
            }
            assert_eq!(f.in_proved_range, k == 1 || n >= 7 * k);
        }
    }
}

#[test]
fn kpl_grid_matches_construction() {
    for k in 2..=4u64 {
        for l in 4..=9u64 {
            let t = k * (l / 2) - 1;
            for n in t + 2..=60 {
                let f = formulas::ex_k_pl(n, k, l).unwrap();
                let g = constructions::pl_extremal(n as usize, k as usize, l as usize).unwrap();
                assert_eq!(g.m() as u64, f.value, "n={n} k={k} l={l}");
                assert_eq!(f.value, choose2(t) + t * (n - t) + l % 2);
            }
        }
    }
    assert!(formulas::ex_k_pl(10, 1, 4).is_err());
    assert!(formulas::ex_k_pl(10, 2, 3).is_err());
}

#[test]
fn erdos_gallai_extremal_graphs_avoid_the_path() {
    for l in 2..=8usize {
        for n in 1..=40usize {
            let g = constructions::erdos_gallai_extremal(n, l).unwrap();
            assert!(longest_path(&g).0 < l, "n={n} l={l}");
            let bound = formulas::erdos_gallai_bound(n as u64, l as u64).unwrap().value;
            assert!(g.m() as u64 <= bound);
            if n % (l - 1) == 0 {
                assert_eq!(g.m() as u64, bound);
            }
        }
    }
}

#[test]
fn forest_formula_tracks_perfect_matching() {
    let pm = disjoint_union(&path(4).unwrap(), &path(2).unwrap()).unwrap();
    let no_pm = disjoint_union(&double_star(2, 2).unwrap(), &path(2).unwrap()).unwrap();
    // pm has l = 3, no_pm has l = 4.
    for n in 3..=50u64 {
        let a = formulas::ex_equibipartite_forest(n, &pm).unwrap();
        let b = formulas::ex_equibipartite_forest(n, &no_pm).unwrap();
        assert_eq!(a.value, 1 + 2 * (n - 2));
        assert_eq!(b.value, 3 * (n - 3));
        assert_eq!(constructions::forest_extremal(n as usize, &no_pm).unwrap().m() as u64, b.value);
        assert_eq!(constructions::forest_extremal(n as usize, &pm).unwrap().m() as u64, a.value);
    }
    assert!(formulas::ex_equibipartite_forest(10, &path(6).unwrap()).is_err());
    assert!(formulas::ex_equibipartite_forest(10, &star(3).unwrap()).is_err());
}

#[test]
fn generic_compositions_agree_with_counts() {
    // P3 has ex(n, P3) = floor(n/2), realised by a matching.
    for k in 1..=3usize {
        for n in 3 * k..=24 {
            let (union, joined) = formulas::gorgol_generic_lower(n as u64, k as u64, 3, |x| x / 2).unwrap();
            let gu = constructions::gorgol_construction(
                n, k, &matching(n - 3 * k + 1).unwrap(), 3, Composition::Union,
            )
            .unwrap();
            let gj = constructions::gorgol_construction(
                n, k, &matching(n - k + 1).unwrap(), 3, Composition::Join,
            )
            .unwrap();
            assert_eq!(gu.m() as u64, union);
            assert_eq!(gj.m() as u64, joined);
            let p = PatternSpec::disjoint_paths(k, 3).unwrap();
            assert!(contains_pattern(&gu, &p).is_none(), "union n={n} k={k}");
            assert!(contains_pattern(&gj, &p).is_none(), "join n={n} k={k}");
            assert!(turan::isomorphic(&gu, &constructions::gorgol_low_p3(n, k).unwrap()));
        }
    }
}

#[test]
fn badlemma_bound_is_exact_rational() {
    let b = formulas::badlemma_bound(20, 100, 4, 2, 10).unwrap();
    // m' = 100 - 10 - 6 = 84; (84 - 16) / (3 * 6)
    assert_eq!(b, num_rational::Ratio::new(68, 18));
    assert!(formulas::badlemma_bound(20, 100, 4, 5, 10).is_err());
}

#[test]
fn kpl_sits_a_constant_below_the_long_path_bound() {
    for k in 2..=4u64 {
        for l in [4u64, 6, 8] {
            let t = k * l / 2 - 1;
            let gap = |n: u64| {
                let eg = formulas::erdos_gallai_bound(n, k * l).unwrap().value;
                let f = formulas::ex_k_pl(n, k, l).unwrap().value;
                assert!(f <= eg);
                eg - f
            };
            assert_eq!(gap(100), gap(1000));
            assert_eq!(gap(100), t * (t + 1) / 2);
        }
    }
}

#[test]
fn kpl_is_monotone_in_n() {
    for (k, l) in [(2u64, 4u64), (2, 5), (3, 7)] {
        let mut prev = 0;
        for n in k * (l / 2) + 1..=400 {
            let v = formulas::ex_k_pl(n, k, l).unwrap().value;
            assert!(v >= prev);
            prev = v;
        }
    }
}
