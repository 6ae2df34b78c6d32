//! Construction-level guarantees: exactness of every built spanner against
//! brute-force tree distances, the per-k weight bounds, contraction
//! distance preservation at every recursion level, and determinism.

use hopspan_core::{
    build_tree_spanner, build_tree_spanner_observed, bounded_hop_apsp, verify, BuildEvent, Metric,
    WeightedTree,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_tree(rng: &mut ChaCha8Rng, n: usize) -> WeightedTree {
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    for v in 1..n {
        let p = rng.gen_range(0..v);
        edges.push((p, v, rng.gen_range(1.0..100.0)));
    }
    WeightedTree::new(n, 0, edges).unwrap()
}

fn bfs_distances(t: &WeightedTree, src: usize) -> Vec<f64> {
    let n = t.vertex_count();
    let mut dist = vec![f64::INFINITY; n];
    dist[src] = 0.0;
    let mut queue = std::collections::VecDeque::from([src]);
    while let Some(u) = queue.pop_front() {
        for &(v, w) in t.neighbors(u) {
            if dist[v].is_infinite() {
                dist[v] = dist[u] + w;
                queue.push_back(v);
            }
        }
    }
    dist
}

fn k_values(n: usize) -> Vec<usize> {
    let mut ks = vec![1, 2, 3, 4, 7, n];
    ks.retain(|&k| k >= 1);
    ks.sort_unstable();
    ks.dedup();
    ks
}

#[test]
fn built_spanners_realize_exact_distances_within_hop_budget() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA11CE);
    for _ in 0..40 {
        let n = rng.gen_range(1..=150);
        let t = random_tree(&mut rng, n);
        let oracle: Vec<Vec<f64>> = (0..n).map(|s| bfs_distances(&t, s)).collect();
        for k in k_values(n) {
            let g = build_tree_spanner(&t, k).unwrap();
            let d = bounded_hop_apsp(&g, k);
            for u in 0..n {
                for v in 0..n {
                    let want = oracle[u][v];
                    assert!(
                        (d[u][v] - want).abs() <= 1e-9 * want.max(1.0),
                        "n={n} k={k} pair ({u},{v}): {} vs {want}",
                        d[u][v]
                    );
                }
            }
        }
    }
}

#[test]
fn per_k_weight_bounds_hold() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xBEEF);
    for _ in 0..60 {
        let n = rng.gen_range(2..=200);
        let t = random_tree(&mut rng, n);
        let total = t.total_weight();

        let w2 = build_tree_spanner(&t, 2).unwrap().weight();
        assert!(
            w2 <= n as f64 * total * (1.0 + 1e-9),
            "n={n}: W2 = {w2} > n L = {}",
            n as f64 * total
        );

        let w3 = build_tree_spanner(&t, 3).unwrap().weight();
        let bound3 = 32.0 * (n as f64).powf(2.0 / 3.0) * total;
        assert!(w3 <= bound3 * (1.0 + 1e-9), "n={n}: W3 = {w3} > {bound3}");

        for k in [4usize, 5, 8] {
            let wk = build_tree_spanner(&t, k).unwrap().weight();
            let bound = 128.0 * k as f64 * (n as f64).powf(2.0 / k as f64) * total;
            assert!(wk <= bound * (1.0 + 1e-9), "n={n} k={k}: {wk} > {bound}");
        }
    }
}

#[test]
fn contraction_preserves_distances_at_every_level() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0DE);
    for _ in 0..20 {
        let n = rng.gen_range(20..=256);
        let t = random_tree(&mut rng, n);
        for k in [3usize, 4, 6] {
            let mut checked = 0usize;
            build_tree_spanner_observed(&t, k, &mut |event| {
                let BuildEvent::Contraction {
                    tree,
                    contracted,
                    x_vertices,
                    ..
                } = event;
                for i in 0..contracted.vertex_count() {
                    for j in (i + 1)..contracted.vertex_count() {
                        let dc = contracted.distance(i, j).unwrap();
                        let dt = tree.distance(x_vertices[i], x_vertices[j]).unwrap();
                        assert!(
                            (dc - dt).abs() <= 1e-9 * dt.max(1.0),
                            "contracted pair ({i},{j}): {dc} vs {dt}"
                        );
                    }
                }
                checked += 1;
            })
            .unwrap();
            assert!(checked > 0 || n <= k, "expected at least one contraction for n={n} k={k}");
        }
    }
}

#[test]
fn builds_are_deterministic() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xD00D);
    for _ in 0..10 {
        let n = rng.gen_range(2..=120);
        let t = random_tree(&mut rng, n);
        for k in [1usize, 2, 3, 5] {
            let a = build_tree_spanner(&t, k).unwrap();
            let b = build_tree_spanner(&t, k).unwrap();
            assert_eq!(a.edges(), b.edges());
        }
    }
}

#[test]
fn verify_agrees_with_declared_stretch_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xFACE);
    for _ in 0..10 {
        let n = rng.gen_range(2..=100);
        let t = random_tree(&mut rng, n);
        let m = Metric::Tree(t.clone());
        for k in [2usize, 3] {
            let g = build_tree_spanner(&t, k).unwrap();
            let report = verify(&g, &m, k, 1.0).unwrap();
            assert_eq!(report.violations, 0);
            assert!((report.stats.max_stretch - 1.0).abs() <= 1e-9);
            assert_eq!(report.stats.hop_diameter_at_t.map(|h| h <= k), Some(true));
        }
    }
}
