//! Tree separators: the centroid used by the 2-hop construction and the
//! greedy ell-split whose components have at most `ell` vertices and at most
//! two boundary edges into the separator set.

use crate::error::{Error, Result};
use crate::metric::WeightedTree;

/// Result of splitting a tree with parameter `ell`.
///
/// `separator` (X) and `components` partition the vertex set; every
/// component has at most `ell` vertices, at most two tree edges leaving it,
/// and all leaving edges end in X. `boundary[i]` lists the X-vertices
/// adjacent to `components[i]` (empty only in the degenerate X = {} case).
#[derive(Debug, Clone)]
pub struct Separator {
    pub separator: Vec<usize>,
    pub components: Vec<Vec<usize>>,
    pub boundary: Vec<Vec<usize>>,
    pub ell: usize,
}

impl Separator {
    /// Re-derives components and boundaries from scratch (BFS over `t` with
    /// X removed) and checks every separator invariant. Used by tests and
    /// the `decompose --check` debugging path; independent of the
    /// bookkeeping `split` uses.
    pub fn check_invariants(&self, t: &WeightedTree) -> std::result::Result<(), String> {
        let n = t.vertex_count();
        let mut in_x = vec![false; n];
        for &x in &self.separator {
            if x >= n {
                return Err(format!("separator vertex {x} out of range"));
            }
            if in_x[x] {
                return Err(format!("separator vertex {x} listed twice"));
            }
            in_x[x] = true;
        }

        // Partition exactness.
        let mut owner = vec![usize::MAX; n];
        for (ci, comp) in self.components.iter().enumerate() {
            for &v in comp {
                if v >= n {
                    return Err(format!("component vertex {v} out of range"));
                }
                if in_x[v] {
                    return Err(format!("vertex {v} is in both X and a component"));
                }
                if owner[v] != usize::MAX {
                    return Err(format!("vertex {v} appears in two components"));
                }
                owner[v] = ci;
            }
        }
        for v in 0..n {
            if !in_x[v] && owner[v] == usize::MAX {
                return Err(format!("vertex {v} is in neither X nor a component"));
            }
        }

        // Components must match connected components of T minus X exactly.
        let mut seen = vec![false; n];
        let mut bfs_comps: Vec<Vec<usize>> = Vec::new();
        for s in 0..n {
            if in_x[s] || seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut head = 0;
            while head < comp.len() {
                let u = comp[head];
                head += 1;
                for &(v, _) in t.neighbors(u) {
                    if !in_x[v] && !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                    }
                }
            }
            comp.sort_unstable();
            bfs_comps.push(comp);
        }
        bfs_comps.sort_by_key(|c| c[0]);
        if bfs_comps.len() != self.components.len() {
            return Err(format!(
                "expected {} components, found {}",
                bfs_comps.len(),
                self.components.len()
            ));
        }
        for (got, want) in self.components.iter().zip(&bfs_comps) {
            if got != want {
                return Err(format!("component mismatch: {got:?} vs {want:?}"));
            }
        }

        // Size bound.
        for comp in &self.components {
            if comp.len() > self.ell {
                return Err(format!(
                    "component of size {} exceeds ell = {}",
                    comp.len(),
                    self.ell
                ));
            }
        }

        // Boundary lists and the two-outgoing-edges bound, by edge scan.
        let mut derived: Vec<Vec<usize>> = vec![Vec::new(); self.components.len()];
        let mut outgoing = vec![0usize; self.components.len()];
        for &(u, v, _) in t.edges() {
            match (in_x[u], in_x[v]) {
                (true, false) => {
                    outgoing[owner[v]] += 1;
                    derived[owner[v]].push(u);
                }
                (false, true) => {
                    outgoing[owner[u]] += 1;
                    derived[owner[u]].push(v);
                }
                _ => {}
            }
        }
        for (ci, d) in derived.iter_mut().enumerate() {
            d.sort_unstable();
            d.dedup();
            if outgoing[ci] > 2 {
                return Err(format!("component {ci} has {} outgoing edges", outgoing[ci]));
            }
            if *d != self.boundary[ci] {
                return Err(format!(
                    "boundary mismatch for component {ci}: {:?} vs derived {d:?}",
                    self.boundary[ci]
                ));
            }
        }

        // Separator size bound |X| <= ceil(2n / ell).
        let cap = (2 * n).div_ceil(self.ell);
        if self.separator.len() > cap {
            return Err(format!(
                "|X| = {} exceeds ceil(2n/ell) = {cap}",
                self.separator.len()
            ));
        }
        Ok(())
    }
}

/// A vertex whose removal leaves components of at most floor(n/2) vertices;
/// smallest index wins ties.
pub fn centroid(t: &WeightedTree) -> usize {
    let n = t.vertex_count();
    if n == 1 {
        return 0;
    }
    let order = post_order(t);
    let mut size = vec![1usize; n];
    for &v in &order {
        if let Some(p) = t.parent_of(v) {
            size[p] += size[v];
        }
    }
    let mut best = usize::MAX;
    let mut best_max = usize::MAX;
    for v in 0..n {
        let mut max_comp = n - size[v];
        for &(c, _) in t.neighbors(v) {
            if t.parent_of(c) == Some(v) {
                max_comp = max_comp.max(size[c]);
            }
        }
        if max_comp < best_max {
            best_max = max_comp;
            best = v;
        }
    }
    debug_assert!(best_max <= n / 2);
    best
}

/// Vertices in post order (children before parents), children visited in
/// increasing index order. Iterative; trees can be deep paths.
fn post_order(t: &WeightedTree) -> Vec<usize> {
    let n = t.vertex_count();
    let mut order = Vec::with_capacity(n);
    let mut stack = vec![t.root()];
    while let Some(u) = stack.pop() {
        order.push(u);
        for &(v, _) in t.neighbors(u) {
            if t.parent_of(v) == Some(u) {
                stack.push(v);
            }
        }
    }
    order.reverse();
    order
}

/// Greedy ell-split.
///
/// Walks the rooted tree in post order keeping, per vertex, the size `c(v)`
/// of the open cluster hanging at `v` and the count `x(v)` of separator
/// contacts accumulated below it. A vertex is cut (added to X) when
/// `c(v) >= ell + 1` or `x(v) >= 2`; cutting finalizes the child clusters as
/// components. This yields components of at most `ell` vertices with at most
/// two outgoing edges each and `|X| <= ceil(2n/ell)`.
pub fn split(t: &WeightedTree, ell: usize) -> Result<Separator> {
    if ell < 1 {
        return Err(Error::InvalidParam("split requires ell >= 1".into()));
    }
    let n = t.vertex_count();
    if ell >= n {
        let mut all: Vec<usize> = (0..n).collect();
        all.sort_unstable();
        return Ok(Separator {
            separator: Vec::new(),
            components: vec![all],
            boundary: vec![Vec::new()],
            ell,
        });
    }

    let order = post_order(t);
    let mut cluster_size = vec![1usize; n];
    let mut contacts = vec![0usize; n];
    let mut cut = vec![false; n];
    // Union-find over open clusters; cut vertices stay singletons.
    let mut uf: Vec<usize> = (0..n).collect();
    fn find(uf: &mut [usize], mut v: usize) -> usize {
        while uf[v] != v {
            uf[v] = uf[uf[v]];
            v = uf[v];
        }
        v
    }

    for &v in &order {
        for &(c, _) in t.neighbors(v) {
            if t.parent_of(c) != Some(v) {
                continue;
            }
            if cut[c] {
                contacts[v] += 1;
            } else {
                cluster_size[v] += cluster_size[c];
                contacts[v] += contacts[c];
            }
        }
        if cluster_size[v] >= ell + 1 || contacts[v] >= 2 {
            cut[v] = true;
        } else {
            // v stays open: absorb the children's clusters. A cut vertex
            // instead finalizes them as separate components.
            for &(c, _) in t.neighbors(v) {
                if t.parent_of(c) == Some(v) && !cut[c] {
                    let rc = find(&mut uf, c);
                    uf[rc] = v;
                }
            }
        }
    }

    let mut separator: Vec<usize> = (0..n).filter(|&v| cut[v]).collect();
    separator.sort_unstable();

    // Group uncut vertices by cluster root, order components by smallest
    // member, members ascending.
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); n];
    for v in 0..n {
        if !cut[v] {
            let r = find(&mut uf, v);
            groups[r].push(v);
        }
    }
    let mut components: Vec<Vec<usize>> = groups.into_iter().filter(|g| !g.is_empty()).collect();
    for comp in components.iter_mut() {
        comp.sort_unstable();
    }
    components.sort_by_key(|c| c[0]);

    let mut owner = vec![usize::MAX; n];
    for (ci, comp) in components.iter().enumerate() {
        for &v in comp {
            owner[v] = ci;
        }
    }
    let mut boundary: Vec<Vec<usize>> = vec![Vec::new(); components.len()];
    for &(u, v, _) in t.edges() {
        match (cut[u], cut[v]) {
            (true, false) => boundary[owner[v]].push(u),
            (false, true) => boundary[owner[u]].push(v),
            _ => {}
        }
    }
    for b in boundary.iter_mut() {
        b.sort_unstable();
        // In a tree two edges from one component to the same separator
        // vertex would close a cycle, so entries are distinct.
        debug_assert!(b.windows(2).all(|w| w[0] != w[1]));
        debug_assert!(b.len() <= 2);
    }

    Ok(Separator {
        separator,
        components,
        boundary,
        ell,
    })
}
