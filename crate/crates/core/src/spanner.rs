//! Exact (stretch-1) spanners with a prescribed hop-diameter for tree
//! metrics, plus the reduction that lifts them to arbitrary metrics through
//! a tree cover.
//!
//! The tree construction is recursive. Small trees are returned whole,
//! k = 1 yields the clique, k = 2 stars every vertex to the centroid and
//! recurses on the remaining components, and k >= 3 splits the tree with a
//! separator, wires every component vertex to its (at most two) boundary
//! separator vertices, recurses on components with the same k, and connects
//! the separator set itself with a (k - 2)-hop construction on the
//! contracted tree. Every emitted edge carries the tree-metric distance of
//! its endpoints.

use crate::cover::TreeCover;
use crate::decompose::{centroid, split, Separator};
use crate::error::{Error, Result};
use crate::metric::{Metric, SpannerGraph, WeightedTree};
use num_bigint::BigUint;

/// Largest m with m^k <= scale^k * n^2, i.e. floor(scale * n^(2/k)) computed
/// exactly. Floating-point pow alone misses integer boundaries (e.g.
/// 1000^(2/3) evaluates just below 100).
fn floor_scaled_root(n: u64, k: u32, scale: u64) -> u64 {
    let rhs = BigUint::from(scale).pow(k) * BigUint::from(n).pow(2);
    let guess = (scale as f64 * (n as f64).powf(2.0 / k as f64)).floor() as u64;
    let mut m = guess.max(1);
    while BigUint::from(m).pow(k) > rhs {
        m -= 1;
    }
    while BigUint::from(m + 1).pow(k) <= rhs {
        m += 1;
    }
    m
}

/// Component size parameter for the separator at recursion parameter k >= 3:
/// floor(n^(2/3)) when k = 3, k itself when k >= 4 and n <= 2k^2, and
/// floor(2 n^(2/k)) otherwise; never below 1.
pub fn choose_ell(n: usize, k: usize) -> Result<usize> {
    if k < 3 {
        return Err(Error::InvalidParam(format!("choose_ell requires k >= 3, got {k}")));
    }
    if n < 1 {
        return Err(Error::InvalidParam("choose_ell requires n >= 1".into()));
    }
    let ell = if k == 3 {
        floor_scaled_root(n as u64, 3, 1)
    } else if n <= 2 * k * k {
        k as u64
    } else {
        floor_scaled_root(n as u64, k as u32, 2)
    };
    Ok((ell as usize).max(1))
}

/// Observer hook for recursion internals; used by verification suites to
/// check contracted trees at every level of a build.
pub enum BuildEvent<'a> {
    Contraction {
        /// Tree being split, in its local indices.
        tree: &'a WeightedTree,
        /// Separator that produced the contraction.
        separator: &'a Separator,
        /// Contracted tree over the separator set, reindexed densely.
        contracted: &'a WeightedTree,
        /// Contracted index -> vertex of `tree`.
        x_vertices: &'a [usize],
    },
}

/// 1-spanner of the tree metric of `t` with hop-diameter `k`. Deterministic;
/// the output contains no auxiliary vertices and every edge weight equals
/// the distance of its endpoints in `t`.
pub fn build_tree_spanner(t: &WeightedTree, k: usize) -> Result<SpannerGraph> {
    build_tree_spanner_observed(t, k, &mut |_| {})
}

/// Same as [`build_tree_spanner`] but reports every contraction to `observer`.
pub fn build_tree_spanner_observed(
    t: &WeightedTree,
    k: usize,
    observer: &mut dyn FnMut(BuildEvent<'_>),
) -> Result<SpannerGraph> {
    if k < 1 {
        return Err(Error::InvalidParam(format!("hop-diameter k must be >= 1, got {k}")));
    }
    let n = t.vertex_count();
    let map: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    build_rec(t, &map, k, observer, &mut out)?;

    for e in out.iter_mut() {
        if e.0 > e.1 {
            std::mem::swap(&mut e.0, &mut e.1);
        }
    }
    out.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
    // Overlapping rules can emit the same pair twice; the weights agree
    // because both equal the tree distance of the endpoints.
    out.dedup_by(|next, kept| {
        let dup = next.0 == kept.0 && next.1 == kept.1;
        debug_assert!(!dup || (next.2 - kept.2).abs() <= 1e-12 * kept.2.max(1.0));
        dup
    });
    SpannerGraph::new(n, n, out, k, 1.0)
}

fn build_rec(
    tree: &WeightedTree,
    map: &[usize],
    k: usize,
    observer: &mut dyn FnMut(BuildEvent<'_>),
    out: &mut Vec<(usize, usize, f64)>,
) -> Result<()> {
    let n = tree.vertex_count();
    if n <= k {
        for &(u, v, w) in tree.edges() {
            out.push((map[u], map[v], w));
        }
        return Ok(());
    }
    if k == 1 {
        for u in 0..n {
            for v in (u + 1)..n {
                out.push((map[u], map[v], tree.distance(u, v)?));
            }
        }
        return Ok(());
    }
    if k == 2 {
        let c = centroid(tree);
        for v in 0..n {
            if v != c {
                out.push((map[c], map[v], tree.distance(c, v)?));
            }
        }
        for comp in components_without(tree, c) {
            let (sub, submap) = induced_subtree(tree, &comp, map)?;
            build_rec(&sub, &submap, 2, observer, out)?;
        }
        return Ok(());
    }

    // k >= 3; cap ell at n - 1 so the separator is never trivial here.
    let ell = choose_ell(n, k)?.min(n - 1);
    let sep = split(tree, ell)?;
    for (comp, bnd) in sep.components.iter().zip(&sep.boundary) {
        if bnd.is_empty() {
            return Err(Error::SeparatorMismatch(
                "component has no boundary vertex in a split with nonempty separator".into(),
            ));
        }
        for &b in bnd {
            for &w in comp {
                out.push((map[b], map[w], tree.distance(b, w)?));
            }
        }
        let (sub, submap) = induced_subtree(tree, comp, map)?;
        build_rec(&sub, &submap, k, observer, out)?;
    }
    let (contracted, x_vertices) = build_contracted_tree(tree, &sep)?;
    observer(BuildEvent::Contraction {
        tree,
        separator: &sep,
        contracted: &contracted,
        x_vertices: &x_vertices,
    });
    let xmap: Vec<usize> = x_vertices.iter().map(|&x| map[x]).collect();
    build_rec(&contracted, &xmap, k - 2, observer, out)
}

/// Connected components of `tree` with one vertex removed, each sorted,
/// ordered by smallest member.
fn components_without(tree: &WeightedTree, removed: usize) -> Vec<Vec<usize>> {
    let n = tree.vertex_count();
    let mut seen = vec![false; n];
    seen[removed] = true;
    let mut comps = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut comp = vec![s];
        seen[s] = true;
        let mut head = 0;
        while head < comp.len() {
            let u = comp[head];
            head += 1;
            for &(v, _) in tree.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    comp.push(v);
                }
            }
        }
        comp.sort_unstable();
        comps.push(comp);
    }
    comps
}

/// Materialize the subtree induced by `vertices` (sorted, connected in
/// `tree`), with local index = rank in `vertices`. Returns the subtree and
/// the composed local -> output map.
fn induced_subtree(
    tree: &WeightedTree,
    vertices: &[usize],
    map: &[usize],
) -> Result<(WeightedTree, Vec<usize>)> {
    let mut edges = Vec::with_capacity(vertices.len().saturating_sub(1));
    for (lu, &u) in vertices.iter().enumerate() {
        for &(v, w) in tree.neighbors(u) {
            if v > u {
                if let Ok(lv) = vertices.binary_search(&v) {
                    edges.push((lu, lv, w));
                }
            }
        }
    }
    let sub = WeightedTree::new(vertices.len(), 0, edges)?;
    let submap = vertices.iter().map(|&v| map[v]).collect();
    Ok((sub, submap))
}

/// Tree on the separator set X: original tree edges inside X plus, for each
/// component with two boundary vertices, a shortcut edge carrying their tree
/// distance. Preserves tree-metric distances on X exactly. Returns the
/// contracted tree (densely reindexed, rooted at 0) and the map from new
/// index to the vertex of `t`.
pub fn build_contracted_tree(
    t: &WeightedTree,
    s: &Separator,
) -> Result<(WeightedTree, Vec<usize>)> {
    if s.separator.is_empty() {
        return Err(Error::EmptySeparator);
    }
    let x = &s.separator;
    let index_of = |v: usize| -> Result<usize> {
        x.binary_search(&v)
            .map_err(|_| Error::SeparatorMismatch(format!("vertex {v} is not in the separator")))
    };
    let mut edges = Vec::new();
    let in_x = |v: usize| x.binary_search(&v).is_ok();
    for &(u, v, w) in t.edges() {
        if in_x(u) && in_x(v) {
            edges.push((index_of(u)?, index_of(v)?, w));
        }
    }
    for bnd in &s.boundary {
        if bnd.len() == 2 {
            let (u, v) = (bnd[0], bnd[1]);
            edges.push((index_of(u)?, index_of(v)?, t.distance(u, v)?));
        }
    }
    let contracted = WeightedTree::new(x.len(), 0, edges)
        .map_err(|e| Error::SeparatorMismatch(format!("contraction is not a tree: {e}")))?;
    Ok((contracted, x.clone()))
}

/// Union of per-tree spanners over a tree cover.
///
/// Each cover tree is spanned over all of its vertices (auxiliary ones
/// included); auxiliary vertices are reindexed into disjoint blocks after
/// the real points while real vertices are shared across trees. Parallel
/// edges arising from different trees keep the lighter copy.
///
/// Domination of the cover is the caller's responsibility (validate with
/// [`crate::cover::cover_stats`] or trust an external cover explicitly).
pub fn cover_to_spanner(c: &TreeCover, k: usize, m: &Metric) -> Result<SpannerGraph> {
    if c.trees.is_empty() {
        return Err(Error::InvalidCover("cover contains no trees".into()));
    }
    let n_real = m.size();
    let mut merged: std::collections::BTreeMap<(usize, usize), f64> = std::collections::BTreeMap::new();
    let mut next_aux = n_real;
    for (ti, ct) in c.trees.iter().enumerate() {
        let tn = ct.tree.vertex_count();
        if ct.point_map.len() != n_real {
            return Err(Error::InvalidCover(format!(
                "tree {ti} maps {} points but the metric has {n_real}",
                ct.point_map.len()
            )));
        }
        let mut vertex_to_point = vec![usize::MAX; tn];
        for (p, &v) in ct.point_map.iter().enumerate() {
            if v >= tn {
                return Err(Error::InvalidCover(format!(
                    "tree {ti} maps point {p} to unknown vertex {v}"
                )));
            }
            if vertex_to_point[v] != usize::MAX {
                return Err(Error::InvalidCover(format!(
                    "tree {ti} maps two points to vertex {v}"
                )));
            }
            vertex_to_point[v] = p;
        }
        let mut global = vec![usize::MAX; tn];
        for v in 0..tn {
            global[v] = if vertex_to_point[v] != usize::MAX {
                vertex_to_point[v]
            } else {
                let id = next_aux;
                next_aux += 1;
                id
            };
        }
        let h = build_tree_spanner(&ct.tree, k)?;
        for &(u, v, w) in h.edges() {
            let (gu, gv) = (global[u], global[v]);
            let key = (gu.min(gv), gu.max(gv));
            merged
                .entry(key)
                .and_modify(|old| {
                    if w < *old {
                        *old = w;
                    }
                })
                .or_insert(w);
        }
    }
    let edges = merged.into_iter().map(|((u, v), w)| (u, v, w)).collect();
    SpannerGraph::new(n_real, next_aux, edges, k, c.declared_stretch.max(1.0))
}
