use std::collections::BTreeSet;

use oddcycle_core::bound::{b_log_gradient, b_value, b_value_product};
use oddcycle_core::coloring::{
    find_bad_edges, hom_find, shift_coloring, two_color_forest, verify_coloring, HomOutcome,
};
use oddcycle_core::cycles::odd_girth;
use oddcycle_core::decomposition::{decompose, verify_decomposition};
use oddcycle_core::experiment::{wilson_interval, Z95};
use oddcycle_core::graph::{families, generate_gnp, predict_two_core, two_core};
use oddcycle_core::oracle::{hom_search, DEFAULT_BUDGET};
use oddcycle_core::Graph;
use proptest::prelude::*;

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let k = pairs.len();
        proptest::collection::vec(any::<bool>(), k).prop_map(move |mask| {
            let edges = pairs.iter().zip(&mask).filter(|(_, &b)| b).map(|(&e, _)| e);
            Graph::from_edges(n, edges).unwrap()
        })
    })
}

/// Sparse graph: each pair kept with probability about `3/n`.
fn arb_sparse_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (3..=max_n, any::<u64>()).prop_map(|(n, seed)| generate_gnp(n, 2.5f64.min(n as f64), seed).unwrap())
}

/// Random labelled tree on `n` vertices from a parent array.
fn arb_tree(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<prop::sample::Index>(), n - 1).prop_map(move |idx| {
            let edges = idx.iter().enumerate().map(|(i, x)| (x.index(i + 1), i + 1));
            Graph::from_edges(n, edges).unwrap()
        })
    })
}

// ---- test-side oracles ----------------------------------------------------

fn components_oracle(g: &Graph) -> usize {
    let mut parent: Vec<usize> = (0..g.n()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] == x {
            x
        } else {
            let r = find(p, p[x]);
            p[x] = r;
            r
        }
    }
    for (u, v) in g.edges() {
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        parent[a] = b;
    }
    (0..g.n()).filter(|&v| find(&mut parent, v) == v).count()
}

/// Length of the shortest odd simple cycle by exhaustive DFS.
fn odd_girth_oracle(g: &Graph) -> Option<usize> {
    fn dfs(g: &Graph, start: usize, v: usize, path: &mut Vec<usize>, best: &mut Option<usize>) {
        for w in g.neighbors(v) {
            if w == start && path.len() >= 3 && path.len() % 2 == 1 {
                *best = Some(best.map_or(path.len(), |b| b.min(path.len())));
            }
            if w > start && !path.contains(&w) {
                path.push(w);
                dfs(g, start, w, path, best);
                path.pop();
            }
        }
    }
    let mut best = None;
    for s in 0..g.n() {
        dfs(g, s, s, &mut vec![s], &mut best);
    }
    best
}

fn three_colorable(g: &Graph) -> bool {
    let n = g.n();
    (0..3usize.pow(n as u32)).any(|mut code| {
        let col: Vec<usize> = (0..n)
            .map(|_| {
                let c = code % 3;
                code /= 3;
                c
            })
            .collect();
        g.edges().all(|(u, v)| col[u] != col[v])
    })
}

fn dist_in(f: &Graph, a: usize, b: usize) -> Option<usize> {
    f.bfs_distances(a).unwrap()[b]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn adjacency_matches_edge_set(g in arb_graph(12)) {
        let edges: Vec<_> = g.edges().collect();
        prop_assert_eq!(edges.len(), g.m());
        prop_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        prop_assert_eq!((0..g.n()).map(|v| g.degree(v)).sum::<usize>(), 2 * g.m());
        for v in 0..g.n() {
            let nb: Vec<_> = g.neighbors(v).collect();
            prop_assert!(nb.windows(2).all(|w| w[0] < w[1]));
            prop_assert!(!nb.contains(&v));
            for &w in &nb {
                prop_assert!(g.has_edge(w, v));
            }
        }
    }

    #[test]
    fn two_core_is_idempotent_with_min_degree_two(g in arb_sparse_graph(60)) {
        let k = two_core(&g);
        prop_assert_eq!(two_core(&k), k.clone());
        prop_assert!((0..k.n()).all(|v| k.degree(v) == 0 || k.degree(v) >= 2));
        prop_assert!(k.edges().all(|(u, v)| g.has_edge(u, v)));
        // every edge of g outside the core is a bridge-tree edge: removing the
        // core edges leaves a forest
        let rest = g.edge_subgraph(|u, v| !k.has_edge(u, v));
        prop_assert!(rest.is_forest());
    }

    #[test]
    fn gnp_is_deterministic(n in 1usize..300, c in 0.0f64..4.0, seed in any::<u64>()) {
        let c = c.min(n as f64);
        let a = generate_gnp(n, c, seed).unwrap();
        let b = generate_gnp(n, c, seed).unwrap();
        prop_assert_eq!(a.to_edge_list_string(), b.to_edge_list_string());
    }

    #[test]
    fn two_core_prediction_residual(c in 1.0001f64..12.0) {
        let p = predict_two_core(c).unwrap();
        prop_assert!(p.x > 0.0 && p.x < 1.0);
        prop_assert!((p.x * (-p.x).exp() - c * (-c).exp()).abs() <= 1e-12);
        prop_assert!((p.nu_frac - (1.0 - p.x) * (1.0 - p.x / c)).abs() < 1e-15);
    }

    #[test]
    fn forest_test_matches_component_count(g in arb_graph(10)) {
        let comps = components_oracle(&g);
        prop_assert_eq!(g.is_forest(), g.m() + comps == g.n());
        if let Some(c) = g.cycle_witness() {
            prop_assert!(c.len() >= 3);
            for i in 0..c.len() {
                prop_assert!(g.has_edge(c[i], c[(i + 1) % c.len()]));
            }
        }
    }

    #[test]
    fn bfs_levels_differ_by_at_most_one(g in arb_sparse_graph(40), s in any::<prop::sample::Index>()) {
        let s = s.index(g.n());
        let d = g.bfs_distances(s).unwrap();
        prop_assert_eq!(d[s], Some(0));
        for (u, v) in g.edges() {
            match (d[u], d[v]) {
                (Some(a), Some(b)) => prop_assert!(a.abs_diff(b) <= 1),
                (None, None) => {}
                _ => prop_assert!(false, "edge across reachability"),
            }
        }
    }

    #[test]
    fn odd_girth_matches_exhaustive_search(g in arb_graph(9)) {
        let got = odd_girth(&g);
        prop_assert_eq!(got.as_ref().map(|c| c.len()), odd_girth_oracle(&g));
        prop_assert_eq!(got.is_none(), g.is_bipartite());
        if let Some(c) = got {
            c.check_in(&g).unwrap();
        }
    }

    #[test]
    fn odd_girth_is_label_invariant(g in arb_sparse_graph(40), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut perm: Vec<usize> = (0..g.n()).collect();
        perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let h = g.relabel(&perm).unwrap();
        prop_assert_eq!(odd_girth(&g).map(|c| c.len()), odd_girth(&h).map(|c| c.len()));
    }

    #[test]
    fn decomposition_invariants(n in 20usize..400, c in 0.5f64..2.0, seed in any::<u64>(), k in 1usize..8) {
        let g = generate_gnp(n, c, seed).unwrap();
        let first = decompose(&g, k, None).unwrap();
        prop_assert_eq!(&first, &decompose(&g, k, None).unwrap());
        if let Ok(d) = first {
            let comps = components_oracle(&g);
            prop_assert_eq!(d.removed.len() + g.n(), g.m() + comps);
            let r = verify_decomposition(&g, &d);
            prop_assert!(r.all_ok(), "{:?}", r);
            let mut all: BTreeSet<(usize, usize)> = d.forest.edges().collect();
            for e in d.m_edges() {
                prop_assert!(all.insert(e));
            }
            prop_assert_eq!(all, g.edges().collect::<BTreeSet<_>>());
        }
    }

    #[test]
    fn shift_properties(f in arb_tree(80), extra in proptest::collection::vec((any::<prop::sample::Index>(), any::<prop::sample::Index>()), 0..12), ell in 1usize..4) {
        let n = f.n();
        let k = 4 * ell - 2;
        // candidate M-edges, kept greedily while pairwise F-distance >= k
        let mut m: Vec<(usize, usize)> = Vec::new();
        for (a, b) in extra {
            let (u, v) = (a.index(n), b.index(n));
            if u == v || f.has_edge(u, v) || m.iter().any(|&(x, y)| (x.min(y), x.max(y)) == (u.min(v), u.max(v))) {
                continue;
            }
            let far = m.iter().all(|&(x, y)| {
                [x, y].iter().all(|&p| [u, v].iter().all(|&q| dist_in(&f, p, q).unwrap() >= k))
            });
            if far {
                m.push((u, v));
            }
        }
        let c_f = two_color_forest(&f).unwrap();
        let bad = find_bad_edges(&c_f, &m).unwrap();
        let col = shift_coloring(&f, &c_f, &bad, ell).unwrap();
        let p = 2 * ell + 1;
        prop_assert!(verify_coloring(&f, &col).is_empty());
        for &(u, v) in &m {
            let proper = {
                let d = (col.colors[u] + p - col.colors[v]) % p;
                d == 1 || d == p - 1
            };
            if c_f[u] != c_f[v] {
                prop_assert!(proper, "good edge ({}, {}) broken", u, v);
            } else if dist_in(&f, u, v).unwrap() >= 2 * ell - 1 {
                prop_assert!(proper, "bad edge ({}, {}) not repaired", u, v);
            }
        }
        for b in &bad {
            let j = b.class as usize;
            let cx = col.colors[b.rep];
            prop_assert!(cx == (j + 1) % p || cx == (j + p - 1) % p);
        }
    }

    #[test]
    fn hom_find_never_mislabels(n in 10usize..300, c in 0.3f64..2.5, seed in any::<u64>(), ell in 1usize..5) {
        let g = generate_gnp(n, c, seed).unwrap();
        let out = hom_find(&g, ell).unwrap();
        prop_assert!(out.check(&g, ell).is_ok());
        if let HomOutcome::OddGirthCertificate { cycle, .. } = &out {
            prop_assert!(cycle.len() % 2 == 1 && cycle.len() < 2 * ell + 1);
        }
    }

    #[test]
    fn three_coloring_oracle(g in arb_graph(8)) {
        let found = hom_search(&g, &families::complete(3), DEFAULT_BUDGET).decided().unwrap();
        prop_assert_eq!(found, three_colorable(&g));
    }

    #[test]
    fn hom_search_is_label_invariant(g in arb_graph(9), seed in any::<u64>(), ell in 1usize..4) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut perm: Vec<usize> = (0..g.n()).collect();
        perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let h = g.relabel(&perm).unwrap();
        let target = families::cycle(2 * ell + 1);
        let a = hom_search(&g, &target, DEFAULT_BUDGET).decided();
        prop_assert_eq!(a, hom_search(&h, &target, DEFAULT_BUDGET).decided());
        if odd_girth(&g).is_some_and(|c| c.len() < 2 * ell + 1) {
            prop_assert_eq!(a, Some(false));
        }
    }

    #[test]
    fn b_forms_agree(a0 in 0.06f64..0.3, a1 in 0.06f64..0.3, a2 in 0.06f64..0.3, a3 in 0.06f64..0.3, c in 0.5f64..6.0) {
        let alpha = [a0, a1, a2, a3];
        prop_assume!(1.0 - alpha.iter().sum::<f64>() > 0.01);
        let log_form = b_value(c, alpha).unwrap().b();
        let prod = b_value_product(c, alpha).unwrap();
        prop_assert!((log_form - prod).abs() <= 1e-12 * prod.max(1.0));
        let g = b_log_gradient(c, alpha).unwrap();
        prop_assert!(g.iter().all(|x| x.is_finite()));
    }

    #[test]
    fn wilson_interval_is_sane(n in 0u64..5000, frac in 0.0f64..=1.0) {
        let k = (frac * n as f64).round() as u64;
        let w = wilson_interval(k, n, Z95);
        prop_assert!(0.0 <= w.lo && w.lo <= w.hi && w.hi <= 1.0);
        if n > 0 {
            let p = k as f64 / n as f64;
            prop_assert!(w.lo <= p + 1e-12 && p <= w.hi + 1e-12);
        }
    }
}

#[test]
fn circulant_odd_cycles() {
    use oddcycle_core::oracle::circulant;
    for ell in 1..=6 {
        let h = circulant(2 * ell + 1, ell).unwrap();
        assert_eq!(h.m(), 2 * ell + 1);
        assert!((0..h.n()).all(|v| h.degree(v) == 2));
        assert_eq!(components_oracle(&h), 1);
    }
}

#[test]
fn hom_outcome_confirmed_by_oracle() {
    // every Hom from the pipeline must be confirmed by exact search
    let target = families::cycle(5);
    let mut checked = 0;
    for seed in 0..60 {
        let g = generate_gnp(150 + 5 * seed as usize, 1.1, seed).unwrap();
        if let HomOutcome::Hom(col) = hom_find(&g, 2).unwrap() {
            assert!(verify_coloring(&g, &col).is_empty());
            if let Some(found) = hom_search(&g, &target, DEFAULT_BUDGET).decided() {
                assert!(found, "seed {seed}");
                checked += 1;
            }
        }
    }
    assert!(checked > 30);
}
