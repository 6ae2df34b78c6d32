//! Ground-truth measurement: bounded-hop distances, stretch/lightness
//! verification, hop-diameter search, and an exhaustive minimum-lightness
//! oracle for small metrics.

use crate::cover::{FULL_CHECK_LIMIT, SAMPLE_PAIRS, SAMPLE_SEED};
use crate::error::{Error, Result};
use crate::metric::{lightness_ratio, mst_weight, sum_weights, Metric, SpannerGraph, SpannerStats};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Relative tolerance for stretch comparisons.
pub const STRETCH_TOLERANCE: f64 = 1e-9;

/// Reference constant for the general-k lightness lower bound on uniform
/// line metrics (hop-diameter k >= 3 forces lightness >= c * k * n^(2/k)).
/// Far below anything measurable at oracle scale; recorded for reference,
/// not used as a test threshold.
pub const LINE_LOWER_BOUND_CONSTANT: f64 = 1.0 / 73728.0;

/// Measurement report for a spanner against a metric at a hop budget k and
/// declared stretch t.
#[derive(Debug, Clone, serde::Serialize)]
pub struct VerifyReport {
    pub stats: SpannerStats,
    /// Pair realizing the worst stretch at k hops, with its ratio.
    pub worst_pair: Option<(usize, usize, f64)>,
    /// Scanned pairs whose k-hop stretch exceeds t (within tolerance).
    pub violations: u64,
    /// For h = 1..=k, the worst stretch achievable within h hops.
    pub per_hop_profile: Vec<f64>,
    /// Weight restricted to real-real edges (total weight is in `stats`).
    pub real_edge_weight: f64,
}

/// All-pairs bounded-hop distance table: entry `[u][v]` is the minimum
/// length over paths with at most k edges, infinity when no such path
/// exists. Table spans auxiliary vertices too.
pub fn bounded_hop_apsp(g: &SpannerGraph, k: usize) -> Vec<Vec<f64>> {
    let n = g.total_count();
    (0..n)
        .map(|s| bounded_hop_from(g.edges(), n, s, k).0)
        .collect()
}

/// Single-source bounded-hop distances via k rounds of min-plus relaxation
/// from the 0-hop table, double-buffered so round h admits exactly paths of
/// at most h edges. Returns the final table plus, for every h = 1..=k, a
/// snapshot handle: `history[h - 1]` is the table after round h (rounds past
/// stabilization reuse the stable table).
fn bounded_hop_from(
    edges: &[(usize, usize, f64)],
    n: usize,
    src: usize,
    k: usize,
) -> (Vec<f64>, Vec<Vec<f64>>) {
    let mut prev = vec![f64::INFINITY; n];
    prev[src] = 0.0;
    let mut history: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut stable = false;
    for _ in 0..k {
        if stable {
            history.push(prev.clone());
            continue;
        }
        let mut next = prev.clone();
        let mut changed = false;
        for &(u, v, w) in edges {
            let du = prev[u] + w;
            if du < next[v] {
                next[v] = du;
                changed = true;
            }
            let dv = prev[v] + w;
            if dv < next[u] {
                next[u] = dv;
                changed = true;
            }
        }
        prev = next;
        history.push(prev.clone());
        if !changed {
            stable = true;
        }
    }
    (prev, history)
}

struct StretchScan {
    per_hop_profile: Vec<f64>,
    violations: u64,
    worst_pair: Option<(usize, usize, f64)>,
}

/// Scan stretch over real pairs: every pair when the metric is small,
/// otherwise all pairs out of a fixed-seed sample of sources sized so about
/// [`SAMPLE_PAIRS`] pairs are covered.
fn stretch_scan(g: &SpannerGraph, m: &Metric, k: usize, t: f64) -> Result<StretchScan> {
    let n_real = g.real_count();
    if m.size() != n_real {
        return Err(Error::SizeMismatch(format!(
            "spanner has {} real points but metric has {}",
            n_real,
            m.size()
        )));
    }
    if k < 1 {
        return Err(Error::InvalidParam("hop budget k must be >= 1".into()));
    }
    let sources: Vec<usize> = if n_real <= FULL_CHECK_LIMIT {
        (0..n_real).collect()
    } else {
        let want = SAMPLE_PAIRS.div_ceil(n_real - 1).min(n_real);
        let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
        let mut set = std::collections::BTreeSet::new();
        while set.len() < want {
            set.insert(rng.gen_range(0..n_real));
        }
        set.into_iter().collect()
    };

    let mut profile = vec![1.0f64; k];
    let mut violations = 0u64;
    let mut worst: Option<(usize, usize, f64)> = None;
    for &s in &sources {
        let (final_dist, history) = bounded_hop_from(g.edges(), g.total_count(), s, k);
        let mut delta = vec![0.0f64; n_real];
        for v in 0..n_real {
            if v != s {
                delta[v] = m.distance(s, v)?;
            }
        }
        for (h, snapshot) in history.iter().enumerate() {
            for v in 0..n_real {
                if v != s {
                    let ratio = snapshot[v] / delta[v];
                    if ratio > profile[h] {
                        profile[h] = ratio;
                    }
                }
            }
        }
        for v in 0..n_real {
            if v == s {
                continue;
            }
            let ratio = final_dist[v] / delta[v];
            if ratio > t + STRETCH_TOLERANCE {
                violations += 1;
            }
            if worst.map_or(true, |(_, _, r)| ratio > r) {
                worst = Some((s, v, ratio));
            }
        }
    }
    Ok(StretchScan {
        per_hop_profile: profile,
        violations,
        worst_pair: worst,
    })
}

/// Full verification: stretch profile, violation count against the declared
/// stretch t at hop budget k, and weight/lightness statistics.
pub fn verify(g: &SpannerGraph, m: &Metric, k: usize, t: f64) -> Result<VerifyReport> {
    let scan = stretch_scan(g, m, k, t)?;
    let weight = g.weight();
    let mst = mst_weight(m);
    let max_stretch = scan.per_hop_profile[k - 1];
    let hop_diameter_at_t = (1..=k).find(|&h| scan.per_hop_profile[h - 1] <= t + STRETCH_TOLERANCE);
    let n_real = g.real_count();
    let stats = SpannerStats {
        weight,
        mst_weight: mst,
        lightness: lightness_ratio(weight, mst),
        max_stretch,
        hop_diameter_at_t,
        edge_count: g.edge_count(),
        sparsity: g.edge_count() as f64 / (n_real.saturating_sub(1).max(1)) as f64,
    };
    Ok(VerifyReport {
        stats,
        worst_pair: scan.worst_pair,
        violations: scan.violations,
        per_hop_profile: scan.per_hop_profile,
        real_edge_weight: g.real_edge_weight(),
    })
}

/// Smallest hop budget k <= n - 1 at which every scanned pair meets stretch
/// t, found by doubling then binary search; `None` when even n - 1 hops do
/// not suffice. Returns 0 for metrics with fewer than two points.
pub fn hop_diameter(g: &SpannerGraph, m: &Metric, t: f64) -> Result<Option<usize>> {
    let n = g.real_count();
    if n <= 1 {
        return Ok(Some(0));
    }
    let cap = n - 1;
    let ok = |k: usize| -> Result<bool> { Ok(stretch_scan(g, m, k, t)?.violations == 0) };
    let mut lo = 1usize; // lower bound for the search range, exclusive once bumped
    let mut hi = 1usize;
    loop {
        if ok(hi)? {
            break;
        }
        if hi == cap {
            return Ok(None);
        }
        lo = hi + 1;
        hi = (hi * 2).min(cap);
    }
    while lo < hi {
        let mid = (lo + hi) / 2;
        if ok(mid)? {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(Some(hi))
}

/// Hard cap on the oracle's instance size.
pub const ORACLE_CAP: usize = 10;

/// Exact minimum lightness over all edge subsets of the complete metric
/// graph in which every pair is connected by a path of at most k edges
/// (path length unconstrained, so the value lower-bounds every finite
/// stretch requirement). Branch and bound: edges in decreasing-weight
/// order, exclude branch first, pruned by the best incumbent, by forced
/// connectivity weight, and by infeasibility of the undecided suffix.
/// Returns the lightness and a witness subgraph.
pub fn optimal_lightness(m: &Metric, k: usize) -> Result<(f64, SpannerGraph)> {
    let n = m.size();
    if n > ORACLE_CAP {
        return Err(Error::OracleCap { n, cap: ORACLE_CAP });
    }
    if k < 1 {
        return Err(Error::InvalidParam("oracle requires k >= 1".into()));
    }
    if n == 1 {
        let g = SpannerGraph::new(1, 1, vec![], k, 1.0)?;
        return Ok((1.0, g));
    }

    let mut edges: Vec<(usize, usize, f64)> = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            edges.push((u, v, m.distance(u, v)?));
        }
    }
    edges.sort_by(|a, b| b.2.total_cmp(&a.2).then((a.0, a.1).cmp(&(b.0, b.1))));
    let m_edges = edges.len();

    let mut suffix_min = vec![f64::INFINITY; m_edges + 1];
    for i in (0..m_edges).rev() {
        suffix_min[i] = suffix_min[i + 1].min(edges[i].2);
    }
    let full_mask: u64 = if m_edges == 64 { u64::MAX } else { (1u64 << m_edges) - 1 };

    let feasible = |mask: u64| -> bool {
        for s in 0..n {
            let mut prev = vec![f64::INFINITY; n];
            prev[s] = 0.0;
            for _ in 0..k.min(n - 1) {
                let mut next = prev.clone();
                let mut changed = false;
                for (i, &(u, v, w)) in edges.iter().enumerate() {
                    if mask >> i & 1 == 0 {
                        continue;
                    }
                    if prev[u] + w < next[v] {
                        next[v] = prev[u] + w;
                        changed = true;
                    }
                    if prev[v] + w < next[u] {
                        next[u] = prev[v] + w;
                        changed = true;
                    }
                }
                prev = next;
                if !changed {
                    break;
                }
            }
            if prev.iter().any(|d| d.is_infinite()) {
                return false;
            }
        }
        true
    };

    let components = |mask: u64| -> usize {
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut v: usize) -> usize {
            while p[v] != v {
                p[v] = p[p[v]];
                v = p[v];
            }
            v
        }
        let mut comps = n;
        for (i, &(u, v, _)) in edges.iter().enumerate() {
            if mask >> i & 1 == 1 {
                let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
                if ru != rv {
                    parent[ru] = rv;
                    comps -= 1;
                }
            }
        }
        comps
    };

    struct Search<'a> {
        edges: &'a [(usize, usize, f64)],
        suffix_min: &'a [f64],
        full_mask: u64,
        best_weight: f64,
        best_mask: u64,
        feasible: &'a dyn Fn(u64) -> bool,
        components: &'a dyn Fn(u64) -> usize,
    }
    impl Search<'_> {
        fn dfs(&mut self, idx: usize, mask: u64, weight: f64) {
            if (self.feasible)(mask) {
                if weight < self.best_weight {
                    self.best_weight = weight;
                    self.best_mask = mask;
                }
                return;
            }
            if idx == self.edges.len() {
                return;
            }
            let undecided = self.full_mask & !((1u64 << idx) - 1);
            if !(self.feasible)(mask | undecided) {
                return;
            }
            let lb = weight + ((self.components)(mask) - 1) as f64 * self.suffix_min[idx];
            if lb >= self.best_weight {
                return;
            }
            self.dfs(idx + 1, mask, weight);
            self.dfs(idx + 1, mask | 1u64 << idx, weight + self.edges[idx].2);
        }
    }

    let mut search = Search {
        edges: &edges,
        suffix_min: &suffix_min,
        full_mask,
        best_weight: f64::INFINITY,
        best_mask: full_mask,
        feasible: &feasible,
        components: &components,
    };
    search.dfs(0, 0, 0.0);
    debug_assert!(search.best_weight.is_finite(), "clique is always feasible");

    let chosen: Vec<(usize, usize, f64)> = edges
        .iter()
        .enumerate()
        .filter(|(i, _)| search.best_mask >> i & 1 == 1)
        .map(|(_, &e)| e)
        .collect();
    let weight = sum_weights(chosen.iter().map(|e| e.2));
    let witness = SpannerGraph::new(n, n, chosen, k, 1.0)?;
    // Declared stretch of the witness is its measured stretch at k hops.
    let scan = stretch_scan(&witness, m, k, 1.0)?;
    let measured_t = scan.per_hop_profile[k - 1].max(1.0);
    let witness = SpannerGraph::new(
        n,
        n,
        witness.edges().to_vec(),
        k,
        measured_t,
    )?;
    Ok((lightness_ratio(weight, mst_weight(m)), witness))
}
