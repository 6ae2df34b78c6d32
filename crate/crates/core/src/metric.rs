//! Core data types: weighted trees with fast distance queries, metric spaces
//! (tree-induced, Euclidean point set, explicit matrix), spanner graphs, and
//! the MST baseline that lightness is measured against.

use crate::error::{Error, Result};

/// Sum edge weights in ascending order. Deterministic and keeps rounding
/// error at the bottom of the accumulation; ratios of sums computed this way
/// stay stable across runs.
pub fn sum_weights<I: IntoIterator<Item = f64>>(weights: I) -> f64 {
    let mut ws: Vec<f64> = weights.into_iter().collect();
    ws.sort_by(f64::total_cmp);
    ws.iter().sum()
}

/// Rooted edge-weighted tree over dense 0-based vertex indices.
///
/// Construction validates the tree invariants (exactly `n - 1` edges,
/// connected, finite nonnegative weights) and precomputes root distances plus
/// a binary-lifting table, so distance queries cost `O(log n)`.
#[derive(Debug, Clone)]
pub struct WeightedTree {
    n: usize,
    root: usize,
    edges: Vec<(usize, usize, f64)>,
    adj: Vec<Vec<(usize, f64)>>,
    parent: Vec<usize>,
    depth: Vec<u32>,
    dist_root: Vec<f64>,
    up: Vec<Vec<u32>>,
    total_weight: f64,
}

impl WeightedTree {
    pub fn new(n: usize, root: usize, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidTree("vertex count must be at least 1".into()));
        }
        if root >= n {
            return Err(Error::InvalidTree(format!(
                "root {root} out of range for {n} vertices"
            )));
        }
        if edges.len() != n - 1 {
            return Err(Error::InvalidTree(format!(
                "not spanning: expected {} edges for {} vertices, got {}",
                n - 1,
                n,
                edges.len()
            )));
        }
        let mut adj = vec![Vec::new(); n];
        for (i, &(u, v, w)) in edges.iter().enumerate() {
            if u >= n || v >= n {
                return Err(Error::InvalidTree(format!(
                    "edge {i} = ({u}, {v}) references a vertex outside [0, {n})"
                )));
            }
            if u == v {
                return Err(Error::InvalidTree(format!("edge {i} is a self-loop at {u}")));
            }
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidTree(format!(
                    "edge {i} = ({u}, {v}) has invalid weight {w}"
                )));
            }
            adj[u].push((v, w));
            adj[v].push((u, w));
        }
        for a in adj.iter_mut() {
            a.sort_by(|x, y| x.0.cmp(&y.0));
        }

        let mut parent = vec![usize::MAX; n];
        let mut depth = vec![0u32; n];
        let mut dist_root = vec![0.0f64; n];
        let mut order = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        seen[root] = true;
        parent[root] = root;
        order.push(root);
        let mut head = 0;
        while head < order.len() {
            let u = order[head];
            head += 1;
            for &(v, w) in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    parent[v] = u;
                    depth[v] = depth[u] + 1;
                    dist_root[v] = dist_root[u] + w;
                    order.push(v);
                }
            }
        }
        if order.len() != n {
            return Err(Error::InvalidTree(format!(
                "not spanning: only {} of {} vertices reachable from root {}",
                order.len(),
                n,
                root
            )));
        }

        let levels = usize::BITS as usize - (n.max(2) - 1).leading_zeros() as usize;
        let mut up = vec![vec![0u32; n]; levels.max(1)];
        for v in 0..n {
            up[0][v] = parent[v] as u32;
        }
        for j in 1..up.len() {
            for v in 0..n {
                up[j][v] = up[j - 1][up[j - 1][v] as usize];
            }
        }

        let total_weight = sum_weights(edges.iter().map(|e| e.2));
        Ok(WeightedTree {
            n,
            root,
            edges,
            adj,
            parent,
            depth,
            dist_root,
            up,
            total_weight,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    /// Neighbor lists sorted by vertex index.
    pub fn neighbors(&self, v: usize) -> &[(usize, f64)] {
        &self.adj[v]
    }

    pub fn parent_of(&self, v: usize) -> Option<usize> {
        if v == self.root {
            None
        } else {
            Some(self.parent[v])
        }
    }

    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    pub fn lca(&self, mut u: usize, mut v: usize) -> usize {
        if self.depth[u] < self.depth[v] {
            std::mem::swap(&mut u, &mut v);
        }
        let mut diff = self.depth[u] - self.depth[v];
        let mut j = 0;
        while diff > 0 {
            if diff & 1 == 1 {
                u = self.up[j][u] as usize;
            }
            diff >>= 1;
            j += 1;
        }
        if u == v {
            return u;
        }
        for j in (0..self.up.len()).rev() {
            if self.up[j][u] != self.up[j][v] {
                u = self.up[j][u] as usize;
                v = self.up[j][v] as usize;
            }
        }
        self.parent[u]
    }

    /// Tree-metric distance between two vertices.
    ///
    /// Computed as (root_dist(u) - root_dist(lca)) + (root_dist(v) -
    /// root_dist(lca)); both subtractions cancel the shared prefix of the
    /// root paths, so the result tracks the plain path sum to within a few
    /// ulps even deep in heavy trees.
    pub fn distance(&self, u: usize, v: usize) -> Result<f64> {
        if u >= self.n || v >= self.n {
            return Err(Error::InvalidParam(format!(
                "vertex pair ({u}, {v}) out of range for {} vertices",
                self.n
            )));
        }
        if u == v {
            return Ok(0.0);
        }
        let a = self.lca(u, v);
        let da = self.dist_root[a];
        Ok((self.dist_root[u] - da) + (self.dist_root[v] - da))
    }
}

/// A finite metric space over dense 0-based point indices.
#[derive(Debug, Clone)]
pub enum Metric {
    /// Metric induced by a weighted tree; every tree vertex is a point.
    Tree(WeightedTree),
    /// Euclidean point set; all coordinate vectors share one dimension.
    Points { dim: usize, coords: Vec<Vec<f64>> },
    /// Explicit symmetric nonnegative distance table with zero diagonal,
    /// stored row-major.
    Matrix { n: usize, entries: Vec<f64> },
}

/// Relative tolerance used by matrix symmetry/triangle validation.
pub const MATRIX_TOLERANCE: f64 = 1e-9;

impl Metric {
    pub fn points(coords: Vec<Vec<f64>>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidMetric("point set must be nonempty".into()));
        }
        let dim = coords[0].len();
        if dim == 0 {
            return Err(Error::InvalidMetric("points must have dimension >= 1".into()));
        }
        for (i, c) in coords.iter().enumerate() {
            if c.len() != dim {
                return Err(Error::InvalidMetric(format!(
                    "point {i} has dimension {}, expected {dim}",
                    c.len()
                )));
            }
            if c.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidMetric(format!("point {i} has a non-finite coordinate")));
            }
        }
        Ok(Metric::Points { dim, coords })
    }

    /// Build a matrix metric from a full row-major table. Symmetry is
    /// enforced within [`MATRIX_TOLERANCE`] and the stored table is
    /// symmetrized exactly by averaging mirror entries.
    pub fn matrix(n: usize, mut entries: Vec<f64>) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidMetric("matrix must have at least one row".into()));
        }
        if entries.len() != n * n {
            return Err(Error::InvalidMetric(format!(
                "matrix has {} entries, expected {}",
                entries.len(),
                n * n
            )));
        }
        for i in 0..n {
            let dii = entries[i * n + i];
            if dii != 0.0 {
                return Err(Error::InvalidMetric(format!(
                    "diagonal entry ({i}, {i}) = {dii} is not zero"
                )));
            }
            for j in 0..n {
                let d = entries[i * n + j];
                if !d.is_finite() || d < 0.0 {
                    return Err(Error::InvalidMetric(format!(
                        "entry ({i}, {j}) = {d} must be finite and nonnegative"
                    )));
                }
                if i != j && d == 0.0 {
                    return Err(Error::InvalidMetric(format!(
                        "entry ({i}, {j}) is zero but points are distinct"
                    )));
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let a = entries[i * n + j];
                let b = entries[j * n + i];
                if (a - b).abs() > MATRIX_TOLERANCE * a.max(b) {
                    return Err(Error::InvalidMetric(format!(
                        "not symmetric: entry ({i}, {j}) = {a} but ({j}, {i}) = {b}"
                    )));
                }
                let avg = 0.5 * (a + b);
                entries[i * n + j] = avg;
                entries[j * n + i] = avg;
            }
        }
        Ok(Metric::Matrix { n, entries })
    }

    /// Optional O(n^3) triangle-inequality validation for matrix metrics.
    pub fn validate_triangle(&self) -> Result<()> {
        let Metric::Matrix { n, entries } = self else {
            return Ok(());
        };
        let n = *n;
        for w in 0..n {
            for u in 0..n {
                let duw = entries[u * n + w];
                for v in (u + 1)..n {
                    let duv = entries[u * n + v];
                    let dwv = entries[w * n + v];
                    if duv > (duw + dwv) * (1.0 + MATRIX_TOLERANCE) {
                        return Err(Error::InvalidMetric(format!(
                            "triangle inequality violated: d({u},{v}) = {duv} > d({u},{w}) + d({w},{v}) = {}",
                            duw + dwv
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Number of points.
    pub fn size(&self) -> usize {
        match self {
            Metric::Tree(t) => t.vertex_count(),
            Metric::Points { coords, .. } => coords.len(),
            Metric::Matrix { n, .. } => *n,
        }
    }

    /// Metric distance between two points.
    pub fn distance(&self, u: usize, v: usize) -> Result<f64> {
        let n = self.size();
        if u >= n || v >= n {
            return Err(Error::InvalidParam(format!(
                "point pair ({u}, {v}) out of range for {n} points"
            )));
        }
        Ok(match self {
            Metric::Tree(t) => t.distance(u, v)?,
            Metric::Points { coords, .. } => {
                let (a, b) = (&coords[u], &coords[v]);
                let mut s = 0.0;
                for i in 0..a.len() {
                    let d = a[i] - b[i];
                    s += d * d;
                }
                s.sqrt()
            }
            Metric::Matrix { n, entries } => entries[u * n + v],
        })
    }
}

/// Uniform line metric: n points at coordinates i/n on the unit interval.
pub fn uniform_line(n: usize) -> Result<Metric> {
    if n < 1 {
        return Err(Error::InvalidParam("uniform line needs at least 1 point".into()));
    }
    let coords = (0..n).map(|i| vec![i as f64 / n as f64]).collect();
    Metric::points(coords)
}

/// Weight of a minimum spanning tree of the complete graph on the metric's
/// points.
///
/// Point and matrix metrics run the dense O(n^2) Prim scheme. For a tree
/// metric the tree itself is a minimum spanning tree (every tree edge is a
/// lightest edge across the cut it spans), so its total weight is returned
/// directly.
pub fn mst_weight(m: &Metric) -> f64 {
    if let Metric::Tree(t) = m {
        return t.total_weight();
    }
    let n = m.size();
    if n <= 1 {
        return 0.0;
    }
    let mut in_tree = vec![false; n];
    let mut best = vec![f64::INFINITY; n];
    in_tree[0] = true;
    for v in 1..n {
        best[v] = m.distance(0, v).expect("indices in range");
    }
    let mut total = 0.0;
    for _ in 1..n {
        let mut pick = usize::MAX;
        let mut pick_w = f64::INFINITY;
        for v in 0..n {
            if !in_tree[v] && best[v] < pick_w {
                pick = v;
                pick_w = best[v];
            }
        }
        in_tree[pick] = true;
        total += pick_w;
        for v in 0..n {
            if !in_tree[v] {
                let d = m.distance(pick, v).expect("indices in range");
                if d < best[v] {
                    best[v] = d;
                }
            }
        }
    }
    total
}

/// Ratio conventions shared by lightness reporting: 0/0 counts as 1,
/// positive weight over a zero baseline is infinite.
pub fn lightness_ratio(weight: f64, mst: f64) -> f64 {
    if mst > 0.0 {
        weight / mst
    } else if weight == 0.0 {
        1.0
    } else {
        f64::INFINITY
    }
}

/// Weighted edge list over the metric's points plus optional auxiliary
/// (Steiner) vertices at indices >= `real_count`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpannerGraph {
    real_count: usize,
    total_count: usize,
    edges: Vec<(usize, usize, f64)>,
    declared_k: usize,
    declared_t: f64,
}

impl SpannerGraph {
    /// Validates, canonicalizes (u < v, sorted), and rejects duplicate
    /// undirected edges.
    pub fn new(
        real_count: usize,
        total_count: usize,
        edges: Vec<(usize, usize, f64)>,
        declared_k: usize,
        declared_t: f64,
    ) -> Result<Self> {
        if total_count < real_count {
            return Err(Error::InvalidSpanner(format!(
                "total vertex count {total_count} is below real count {real_count}"
            )));
        }
        if !declared_t.is_finite() || declared_t < 1.0 {
            return Err(Error::InvalidSpanner(format!(
                "declared stretch {declared_t} must be finite and >= 1"
            )));
        }
        let mut canon = Vec::with_capacity(edges.len());
        for (i, &(u, v, w)) in edges.iter().enumerate() {
            if u >= total_count || v >= total_count {
                return Err(Error::InvalidSpanner(format!(
                    "edge {i} = ({u}, {v}) references a vertex outside [0, {total_count})"
                )));
            }
            if u == v {
                return Err(Error::InvalidSpanner(format!("edge {i} is a self-loop at {u}")));
            }
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidSpanner(format!(
                    "edge {i} = ({u}, {v}) has invalid weight {w}"
                )));
            }
            canon.push((u.min(v), u.max(v), w));
        }
        canon.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)).then(a.2.total_cmp(&b.2)));
        for pair in canon.windows(2) {
            if pair[0].0 == pair[1].0 && pair[0].1 == pair[1].1 {
                return Err(Error::InvalidSpanner(format!(
                    "duplicate undirected edge ({}, {})",
                    pair[0].0, pair[0].1
                )));
            }
        }
        Ok(SpannerGraph {
            real_count,
            total_count,
            edges: canon,
            declared_k,
            declared_t,
        })
    }

    pub fn real_count(&self) -> usize {
        self.real_count
    }

    pub fn total_count(&self) -> usize {
        self.total_count
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn declared_k(&self) -> usize {
        self.declared_k
    }

    pub fn declared_t(&self) -> f64 {
        self.declared_t
    }

    /// Total edge weight (auxiliary edges included).
    pub fn weight(&self) -> f64 {
        sum_weights(self.edges.iter().map(|e| e.2))
    }

    /// Weight restricted to edges whose endpoints are both real points.
    pub fn real_edge_weight(&self) -> f64 {
        sum_weights(
            self.edges
                .iter()
                .filter(|e| e.0 < self.real_count && e.1 < self.real_count)
                .map(|e| e.2),
        )
    }

    /// Checks that no real-real edge undershoots the metric distance of its
    /// endpoints (within relative tolerance).
    pub fn check_edges_against(&self, m: &Metric, tol: f64) -> Result<()> {
        if m.size() != self.real_count {
            return Err(Error::SizeMismatch(format!(
                "spanner has {} real points but metric has {}",
                self.real_count,
                m.size()
            )));
        }
        for &(u, v, w) in &self.edges {
            if u < self.real_count && v < self.real_count {
                let d = m.distance(u, v)?;
                if w < d - tol * d.max(1.0) {
                    return Err(Error::InvalidSpanner(format!(
                        "edge ({u}, {v}) weight {w} undershoots metric distance {d}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Measured summary of a spanner against its metric.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct SpannerStats {
    pub weight: f64,
    pub mst_weight: f64,
    pub lightness: f64,
    pub max_stretch: f64,
    /// Smallest hop count within the verified budget that realizes stretch
    /// <= t; `None` when no budget sufficed.
    pub hop_diameter_at_t: Option<usize>,
    pub edge_count: usize,
    pub sparsity: f64,
}
