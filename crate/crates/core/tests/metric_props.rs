//! Metric layer properties checked against independent oracles: plain BFS
//! path sums for tree distances and exhaustive labeled-tree enumeration for
//! the MST baseline.

use hopspan_core::{mst_weight, Metric, WeightedTree};
use proptest::prelude::*;

/// Attachment tree: vertex v > 0 picks a parent among 0..v.
fn tree_strategy(max_n: usize) -> impl Strategy<Value = WeightedTree> {
    (1..=max_n)
        .prop_flat_map(|n| {
            (
                Just(n),
                proptest::collection::vec(0.0f64..1.0, n.saturating_sub(1)),
                proptest::collection::vec(1.0f64..100.0, n.saturating_sub(1)),
            )
        })
        .prop_map(|(n, picks, weights)| {
            let edges = (1..n)
                .map(|v| {
                    let p = ((picks[v - 1] * v as f64) as usize).min(v - 1);
                    (p, v, weights[v - 1])
                })
                .collect();
            WeightedTree::new(n, 0, edges).unwrap()
        })
}

/// Path sums along the unique tree path, accumulated outward from the
/// source; no root-distance cancellation involved.
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

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tree_distance_matches_path_sums(t in tree_strategy(200)) {
        let n = t.vertex_count();
        for u in 0..n {
            let oracle = bfs_distances(&t, u);
            for v in 0..n {
                let got = t.distance(u, v).unwrap();
                let want = oracle[v];
                prop_assert!(
                    (got - want).abs() <= 1e-12 * want.max(1.0),
                    "({u}, {v}): {got} vs {want}"
                );
            }
        }
    }

    #[test]
    fn tree_mst_weight_equals_tree_weight(t in tree_strategy(120)) {
        let total = t.total_weight();
        let m = Metric::Tree(t);
        let got = mst_weight(&m);
        prop_assert!((got - total).abs() <= 1e-9 * total.max(1.0));
        // dense Prim over the induced metric agrees
        let prim = dense_prim(&m);
        prop_assert!((prim - total).abs() <= 1e-9 * total.max(1.0), "{prim} vs {total}");
    }

    #[test]
    fn mst_is_minimal_over_all_spanning_trees(
        coords in proptest::collection::vec(
            proptest::collection::vec(0.0f64..1.0, 2),
            2..=7,
        )
    ) {
        // de-duplicate identical points to keep the metric valid
        let mut coords = coords;
        coords.sort_by(|a, b| a.partial_cmp(b).unwrap());
        coords.dedup();
        prop_assume!(coords.len() >= 2);
        let m = Metric::points(coords).unwrap();
        let n = m.size();
        let best = enumerate_spanning_trees_min(&m, n);
        let got = mst_weight(&m);
        prop_assert!((got - best).abs() <= 1e-9 * best.max(1.0), "{got} vs {best}");
    }
}

/// Independent dense Prim used only as a test oracle.
fn dense_prim(m: &Metric) -> f64 {
    let n = m.size();
    if n <= 1 {
        return 0.0;
    }
    let mut in_tree = vec![false; n];
    let mut best = vec![f64::INFINITY; n];
    in_tree[0] = true;
    for v in 1..n {
        best[v] = m.distance(0, v).unwrap();
    }
    let mut total = 0.0;
    for _ in 1..n {
        let pick = (0..n)
            .filter(|&v| !in_tree[v])
            .min_by(|&a, &b| best[a].total_cmp(&best[b]))
            .unwrap();
        in_tree[pick] = true;
        total += best[pick];
        for v in 0..n {
            if !in_tree[v] {
                best[v] = best[v].min(m.distance(pick, v).unwrap());
            }
        }
    }
    total
}

/// Minimum spanning-tree weight by enumerating every labeled tree through
/// its parent sequence (all n^(n-2) of them; n <= 7 keeps this cheap).
fn enumerate_spanning_trees_min(m: &Metric, n: usize) -> f64 {
    if n == 2 {
        return m.distance(0, 1).unwrap();
    }
    let len = n - 2;
    let mut code = vec![0usize; len];
    let mut best = f64::INFINITY;
    loop {
        best = best.min(pruefer_weight(m, n, &code));
        // next code in lexicographic order
        let mut i = len;
        loop {
            if i == 0 {
                return best;
            }
            i -= 1;
            code[i] += 1;
            if code[i] < n {
                break;
            }
            code[i] = 0;
        }
    }
}

fn pruefer_weight(m: &Metric, n: usize, code: &[usize]) -> f64 {
    let mut degree = vec![1usize; n];
    for &c in code {
        degree[c] += 1;
    }
    let mut total = 0.0;
    for &c in code {
        let leaf = (0..n).find(|&v| degree[v] == 1).unwrap();
        total += m.distance(leaf, c).unwrap();
        degree[leaf] -= 1;
        degree[c] -= 1;
    }
    let (mut u, mut v) = (usize::MAX, usize::MAX);
    for x in 0..n {
        if degree[x] == 1 {
            if u == usize::MAX {
                u = x;
            } else {
                v = x;
            }
        }
    }
    total + m.distance(u, v).unwrap()
}
