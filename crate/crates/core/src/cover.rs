//! Tree covers: collections of dominating trees with a per-point vertex map.
//!
//! Three sources: the identity cover of a tree metric, a shifted-quadtree
//! HST cover for Euclidean point sets (a reproducible substitute whose
//! stretch and lightness are measured rather than proven), and externally
//! supplied covers ingested from files.

use crate::error::{Error, Result};
use crate::metric::{lightness_ratio, mst_weight, Metric, WeightedTree};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Pair scans are exhaustive up to this many points and sampled above it.
pub const FULL_CHECK_LIMIT: usize = 512;
/// Number of sampled pairs used above [`FULL_CHECK_LIMIT`].
pub const SAMPLE_PAIRS: usize = 100_000;
/// Fixed seed for sampled pair scans; measurements must be reproducible.
pub const SAMPLE_SEED: u64 = 0x5eed_c0de_u64;

/// One dominating tree together with the map from point index to the tree
/// vertex hosting that point.
#[derive(Debug, Clone)]
pub struct CoverTree {
    pub tree: WeightedTree,
    pub point_map: Vec<usize>,
}

/// A collection of dominating trees covering a metric.
#[derive(Debug, Clone)]
pub struct TreeCover {
    pub trees: Vec<CoverTree>,
    pub declared_stretch: f64,
    pub declared_lightness: f64,
}

impl TreeCover {
    /// Number of trees (the cover size gamma).
    pub fn size(&self) -> usize {
        self.trees.len()
    }
}

/// Measured cover quality.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct CoverStats {
    pub size: usize,
    pub stretch: f64,
    pub lightness: f64,
}

/// Degenerate cover of a tree metric by the tree itself: one tree, identity
/// point map, stretch 1, lightness 1.
pub fn identity_cover(t: &WeightedTree) -> TreeCover {
    TreeCover {
        trees: vec![CoverTree {
            tree: t.clone(),
            point_map: (0..t.vertex_count()).collect(),
        }],
        declared_stretch: 1.0,
        declared_lightness: 1.0,
    }
}

/// Measured size, stretch, and lightness of a cover.
///
/// Stretch is the maximum over point pairs of the best (smallest) tree
/// distance divided by the metric distance; exhaustive for small metrics,
/// sampled with a fixed seed above [`FULL_CHECK_LIMIT`]. Domination is
/// checked on every scanned pair for every tree and a violation is an error
/// carrying the witness pair. Lightness is the maximum tree weight over the
/// MST weight of the metric.
pub fn cover_stats(c: &TreeCover, m: &Metric) -> Result<CoverStats> {
    if c.trees.is_empty() {
        return Err(Error::InvalidCover("cover contains no trees".into()));
    }
    let n = m.size();
    for (ti, ct) in c.trees.iter().enumerate() {
        if ct.point_map.len() != n {
            return Err(Error::InvalidCover(format!(
                "tree {ti} maps {} points but the metric has {n}",
                ct.point_map.len()
            )));
        }
        for (p, &v) in ct.point_map.iter().enumerate() {
            if v >= ct.tree.vertex_count() {
                return Err(Error::InvalidCover(format!(
                    "tree {ti} maps point {p} to unknown vertex {v}"
                )));
            }
        }
    }

    let mst = mst_weight(m);
    let lightness = c
        .trees
        .iter()
        .map(|ct| lightness_ratio(ct.tree.total_weight(), mst))
        .fold(0.0f64, f64::max);

    let mut max_stretch = 1.0f64;
    let mut scan = |u: usize, v: usize| -> Result<()> {
        let du = m.distance(u, v)?;
        let mut best = f64::INFINITY;
        for (ti, ct) in c.trees.iter().enumerate() {
            let dt = ct.tree.distance(ct.point_map[u], ct.point_map[v])?;
            if dt < du * (1.0 - 1e-9) {
                return Err(Error::DominationViolation {
                    tree: ti,
                    u,
                    v,
                    tree_dist: dt,
                    metric_dist: du,
                });
            }
            best = best.min(dt);
        }
        max_stretch = max_stretch.max(best / du);
        Ok(())
    };

    if n <= FULL_CHECK_LIMIT {
        for u in 0..n {
            for v in (u + 1)..n {
                scan(u, v)?;
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
        for _ in 0..SAMPLE_PAIRS {
            let u = rng.gen_range(0..n);
            let mut v = rng.gen_range(0..n - 1);
            if v >= u {
                v += 1;
            }
            scan(u, v)?;
        }
    }

    Ok(CoverStats {
        size: c.trees.len(),
        stretch: max_stretch,
        lightness,
    })
}

/// Shifted-quadtree HST cover of a Euclidean point set.
///
/// Builds d + 1 quadtree hierarchies over the points normalized to the unit
/// cube, the j-th translated by j/(d+2) in every coordinate. Cells subdivide
/// (branching 2^d) until they hold at most `base_cells` points or the depth
/// cap ceil(2 log2 n) is reached; each nonempty cell becomes an internal HST
/// vertex, points hang off their final cell as leaves, and the edge weight
/// below a cell of side s is s*sqrt(d)/2 (half the cell diameter), which
/// makes every tree dominating by construction. Declared stretch and
/// lightness are the measured values from [`cover_stats`].
pub fn shifted_quadtree_cover(m: &Metric, base_cells: usize) -> Result<TreeCover> {
    let Metric::Points { dim, coords } = m else {
        return Err(Error::InvalidParam(
            "shifted quadtree cover requires a point-set metric".into(),
        ));
    };
    if base_cells < 1 {
        return Err(Error::InvalidParam("base_cells must be >= 1".into()));
    }
    let d = *dim;
    let n = coords.len();

    // Normalize into the unit cube with one uniform scale so distances only
    // rescale; the inverse scale converts cell sizes back to metric units.
    let mut lo = vec![f64::INFINITY; d];
    let mut hi = vec![f64::NEG_INFINITY; d];
    for c in coords {
        for a in 0..d {
            lo[a] = lo[a].min(c[a]);
            hi[a] = hi[a].max(c[a]);
        }
    }
    let extent = (0..d).map(|a| hi[a] - lo[a]).fold(0.0f64, f64::max);
    let scale = if extent > 0.0 { 1.0 / extent } else { 1.0 };
    let norm: Vec<Vec<f64>> = coords
        .iter()
        .map(|c| (0..d).map(|a| (c[a] - lo[a]) * scale).collect())
        .collect();

    let depth_cap = (2.0 * (n as f64).log2()).ceil().max(0.0) as usize;
    let mut trees = Vec::with_capacity(d + 1);
    for j in 0..=d {
        let shift = j as f64 / (d + 2) as f64;
        let mut b = HstBuilder {
            norm: &norm,
            d,
            base_cells,
            depth_cap,
            inv_scale: 1.0 / scale,
            sqrt_d: (d as f64).sqrt(),
            shift,
            edges: Vec::new(),
            point_vertex: vec![usize::MAX; n],
            next_id: 0,
        };
        let all: Vec<usize> = (0..n).collect();
        b.node(&vec![0.0; d], 2.0, 0, &all);
        let tree = WeightedTree::new(b.next_id, 0, b.edges)?;
        trees.push(CoverTree {
            tree,
            point_map: b.point_vertex,
        });
    }

    let mut cover = TreeCover {
        trees,
        declared_stretch: 1.0,
        declared_lightness: 1.0,
    };
    let stats = cover_stats(&cover, m)?;
    cover.declared_stretch = stats.stretch;
    cover.declared_lightness = stats.lightness;
    Ok(cover)
}

struct HstBuilder<'a> {
    norm: &'a [Vec<f64>],
    d: usize,
    base_cells: usize,
    depth_cap: usize,
    inv_scale: f64,
    sqrt_d: f64,
    shift: f64,
    edges: Vec<(usize, usize, f64)>,
    point_vertex: Vec<usize>,
    next_id: usize,
}

impl HstBuilder<'_> {
    fn node(&mut self, origin: &[f64], side: f64, depth: usize, pts: &[usize]) -> usize {
        let id = self.next_id;
        self.next_id += 1;
        let child_weight = side * self.sqrt_d * 0.5 * self.inv_scale;
        if pts.len() <= self.base_cells || depth >= self.depth_cap {
            for &p in pts {
                let leaf = self.next_id;
                self.next_id += 1;
                self.point_vertex[p] = leaf;
                self.edges.push((id, leaf, child_weight));
            }
            return id;
        }
        let mut buckets: std::collections::BTreeMap<usize, Vec<usize>> =
            std::collections::BTreeMap::new();
        for &p in pts {
            let mut idx = 0usize;
            for a in 0..self.d {
                let mid = origin[a] + side * 0.5;
                let x = self.norm[p][a] + self.shift;
                idx = (idx << 1) | usize::from(x >= mid);
            }
            buckets.entry(idx).or_default().push(p);
        }
        for (ci, child_pts) in buckets {
            let mut corigin = origin.to_vec();
            for a in 0..self.d {
                if (ci >> (self.d - 1 - a)) & 1 == 1 {
                    corigin[a] += side * 0.5;
                }
            }
            let child = self.node(&corigin, side * 0.5, depth + 1, &child_pts);
            self.edges.push((id, child, child_weight));
        }
        id
    }
}
