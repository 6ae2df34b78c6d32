//! Benchmark harness: sweeps (n, k) grids over input families, records one
//! CSV row per combination, and fits scaling exponents of lightness in n.

use anyhow::{bail, Context, Result};
use hopspan_core::{
    build_tree_spanner, cover_to_spanner, hop_diameter, lightness_ratio, mst_weight,
    shifted_quadtree_cover, uniform_line, verify, Metric, SpannerGraph, TreeCover, WeightedTree,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

pub const CSV_HEADER: &str =
    "family,n,k,edge_count,weight,mst_weight,lightness,max_stretch,hop_diameter,build_millis";

/// One measurement row of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub family: String,
    pub n: usize,
    pub k: usize,
    pub edge_count: usize,
    pub weight: f64,
    pub mst_weight: f64,
    pub lightness: f64,
    pub max_stretch: f64,
    pub hop_diameter: Option<usize>,
    pub build_millis: u64,
}

/// Input families the harness can generate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    UniformLine,
    RandomTree,
    RandomPoints(usize),
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::UniformLine => write!(f, "uniform-line"),
            Family::RandomTree => write!(f, "random-tree"),
            Family::RandomPoints(d) => write!(f, "random-points-d{d}"),
        }
    }
}

impl FromStr for Family {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform-line" => Ok(Family::UniformLine),
            "random-tree" => Ok(Family::RandomTree),
            _ => {
                if let Some(d) = s.strip_prefix("random-points-d") {
                    let d: usize = d
                        .parse()
                        .with_context(|| format!("bad dimension in family {s:?}"))?;
                    if d < 1 {
                        bail!("family {s:?}: dimension must be >= 1");
                    }
                    return Ok(Family::RandomPoints(d));
                }
                bail!("unknown family {s:?} (expected uniform-line, random-tree, or random-points-dD)")
            }
        }
    }
}

/// Per-n seed derivation so rows do not depend on sweep order.
fn derive_seed(seed: u64, n: usize) -> u64 {
    seed ^ (n as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Uniform random attachment tree with weights uniform in [1, 100].
pub fn random_attachment_tree(n: usize, seed: u64) -> WeightedTree {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    for v in 1..n {
        let p = rng.gen_range(0..v);
        edges.push((p, v, rng.gen_range(1.0..100.0)));
    }
    WeightedTree::new(n, 0, edges).expect("attachment construction is a tree")
}

fn random_points(n: usize, dim: usize, seed: u64) -> Metric {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coords = (0..n)
        .map(|_| (0..dim).map(|_| rng.gen_range(0.0..1.0)).collect())
        .collect();
    Metric::points(coords).expect("generated point set is valid")
}

/// The path over consecutive line points; its tree metric equals the line
/// metric.
pub fn line_path_tree(m: &Metric) -> WeightedTree {
    let n = m.size();
    let edges = (0..n - 1)
        .map(|i| (i, i + 1, m.distance(i, i + 1).expect("in range")))
        .collect();
    WeightedTree::new(n, 0, edges).expect("path is a tree")
}

enum Instance {
    Tree { tree: WeightedTree, metric: Metric },
    Covered { cover: TreeCover, metric: Metric },
}

impl Instance {
    fn generate(family: Family, n: usize, seed: u64) -> Result<Instance> {
        Ok(match family {
            Family::UniformLine => {
                let metric = uniform_line(n)?;
                let tree = line_path_tree(&metric);
                Instance::Tree { tree, metric }
            }
            Family::RandomTree => {
                let tree = random_attachment_tree(n, derive_seed(seed, n));
                let metric = Metric::Tree(tree.clone());
                Instance::Tree { tree, metric }
            }
            Family::RandomPoints(d) => {
                let metric = random_points(n, d, derive_seed(seed, n));
                let cover = shifted_quadtree_cover(&metric, 1)?;
                Instance::Covered { cover, metric }
            }
        })
    }

    fn metric(&self) -> &Metric {
        match self {
            Instance::Tree { metric, .. } => metric,
            Instance::Covered { metric, .. } => metric,
        }
    }

    /// Declared stretch the spanner is verified against.
    fn target_stretch(&self) -> f64 {
        match self {
            Instance::Tree { .. } => 1.0,
            Instance::Covered { cover, .. } => cover.declared_stretch.max(1.0),
        }
    }

    fn build(&self, k: usize) -> Result<SpannerGraph> {
        Ok(match self {
            Instance::Tree { tree, .. } => build_tree_spanner(tree, k)?,
            Instance::Covered { cover, metric } => cover_to_spanner(cover, k, metric)?,
        })
    }
}

/// Run the sweep: one row per (n, k), sorted by (family, n, k).
/// Reproducible given the same seed (the timing column excepted).
pub fn bench_sweep(family: Family, ns: &[usize], ks: &[usize], seed: u64) -> Result<Vec<BenchRow>> {
    if ns.is_empty() {
        bail!("bench requires at least one n value");
    }
    if ks.is_empty() {
        bail!("bench requires at least one k value");
    }
    let mut ns: Vec<usize> = ns.to_vec();
    ns.sort_unstable();
    ns.dedup();
    let mut ks: Vec<usize> = ks.to_vec();
    ks.sort_unstable();
    ks.dedup();
    if ns[0] < 2 {
        bail!("bench requires n >= 2");
    }
    if ks[0] < 1 {
        bail!("bench requires k >= 1");
    }

    let mut rows = Vec::with_capacity(ns.len() * ks.len());
    for &n in &ns {
        let instance = Instance::generate(family, n, seed)?;
        let mst = mst_weight(instance.metric());
        let t = instance.target_stretch();
        for &k in &ks {
            let started = Instant::now();
            let g = instance.build(k)?;
            let build_millis = started.elapsed().as_millis() as u64;
            let report = verify(&g, instance.metric(), k, t)?;
            let hd = hop_diameter(&g, instance.metric(), t)?;
            let weight = g.weight();
            rows.push(BenchRow {
                family: family.to_string(),
                n,
                k,
                edge_count: g.edge_count(),
                weight,
                mst_weight: mst,
                lightness: lightness_ratio(weight, mst),
                max_stretch: report.stats.max_stretch,
                hop_diameter: hd,
                build_millis,
            });
        }
    }
    rows.sort_by(|a, b| (&a.family, a.n, a.k).cmp(&(&b.family, b.n, b.k)));
    Ok(rows)
}

pub fn write_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let hd = match r.hop_diameter {
            Some(h) => h.to_string(),
            None => "inf".to_string(),
        };
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            r.family,
            r.n,
            r.k,
            r.edge_count,
            hopspan_core::io::format_float(r.weight),
            hopspan_core::io::format_float(r.mst_weight),
            hopspan_core::io::format_float(r.lightness),
            hopspan_core::io::format_float(r.max_stretch),
            hd,
            r.build_millis,
        ));
    }
    out
}

pub fn parse_csv(text: &str) -> Result<Vec<BenchRow>> {
    let mut lines = text.lines();
    let header = lines.next().context("empty CSV")?;
    if header != CSV_HEADER {
        bail!("unexpected CSV header {header:?}");
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 10 {
            bail!("line {}: expected 10 fields, found {}", i + 2, fields.len());
        }
        rows.push(BenchRow {
            family: fields[0].to_string(),
            n: fields[1].parse()?,
            k: fields[2].parse()?,
            edge_count: fields[3].parse()?,
            weight: fields[4].parse()?,
            mst_weight: fields[5].parse()?,
            lightness: fields[6].parse()?,
            max_stretch: fields[7].parse()?,
            hop_diameter: if fields[8] == "inf" {
                None
            } else {
                Some(fields[8].parse()?)
            },
            build_millis: fields[9].parse()?,
        });
    }
    Ok(rows)
}

/// Ordinary least squares slope of ln(lightness) against ln(n). Rows must
/// share one k and span at least three distinct n values.
pub fn fit_slope(rows: &[BenchRow]) -> Result<f64> {
    if rows.is_empty() {
        bail!("fit_slope needs rows");
    }
    let k = rows[0].k;
    if rows.iter().any(|r| r.k != k) {
        bail!("fit_slope expects rows filtered to a single k");
    }
    let mut ns: Vec<usize> = rows.iter().map(|r| r.n).collect();
    ns.sort_unstable();
    ns.dedup();
    if ns.len() < 3 {
        bail!("fit_slope needs at least 3 distinct n values, got {}", ns.len());
    }
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| {
            if !(r.lightness.is_finite() && r.lightness > 0.0) {
                bail!("row (n = {}) has non-positive lightness {}", r.n, r.lightness);
            }
            Ok(((r.n as f64).ln(), r.lightness.ln()))
        })
        .collect::<Result<_>>()?;
    let m = pts.len() as f64;
    let mean_x = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mean_x) * (p.0 - mean_x)).sum();
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic_rows(lightness: impl Fn(usize) -> f64) -> Vec<BenchRow> {
        [64usize, 128, 256, 512]
            .iter()
            .map(|&n| BenchRow {
                family: "synthetic".into(),
                n,
                k: 3,
                edge_count: n,
                weight: lightness(n),
                mst_weight: 1.0,
                lightness: lightness(n),
                max_stretch: 1.0,
                hop_diameter: Some(3),
                build_millis: 0,
            })
            .collect()
    }

    #[test]
    fn fit_slope_recovers_power_law() {
        let rows = synthetic_rows(|n| (n as f64).powf(2.0 / 3.0));
        let slope = fit_slope(&rows).unwrap();
        assert!((slope - 2.0 / 3.0).abs() <= 1e-9, "{slope}");
    }

    #[test]
    fn fit_slope_flat_is_zero() {
        let rows = synthetic_rows(|_| 7.5);
        let slope = fit_slope(&rows).unwrap();
        assert!(slope.abs() <= 1e-9, "{slope}");
    }

    #[test]
    fn fit_slope_wants_three_points() {
        let mut rows = synthetic_rows(|n| n as f64);
        rows.truncate(2);
        assert!(fit_slope(&rows).is_err());
        let mixed = synthetic_rows(|n| n as f64)
            .into_iter()
            .enumerate()
            .map(|(i, mut r)| {
                r.k = i;
                r
            })
            .collect::<Vec<_>>();
        assert!(fit_slope(&mixed).is_err());
    }

    #[test]
    fn family_parsing() {
        assert_eq!("uniform-line".parse::<Family>().unwrap(), Family::UniformLine);
        assert_eq!("random-tree".parse::<Family>().unwrap(), Family::RandomTree);
        assert_eq!(
            "random-points-d2".parse::<Family>().unwrap(),
            Family::RandomPoints(2)
        );
        assert!("random-points-d0".parse::<Family>().is_err());
        assert!("mystery".parse::<Family>().is_err());
    }

    #[test]
    fn csv_round_trip() {
        let rows = bench_sweep(Family::UniformLine, &[8, 16], &[2, 3], 0).unwrap();
        let text = write_csv(&rows);
        let back = parse_csv(&text).unwrap();
        assert_eq!(rows, back);
    }

    #[test]
    fn tree_returned_whole_when_k_covers_n() {
        let rows = bench_sweep(Family::UniformLine, &[16], &[15], 0).unwrap();
        assert_eq!(rows.len(), 1);
        assert!((rows[0].lightness - 1.0).abs() <= 1e-9);
        assert_eq!(rows[0].edge_count, 15);
    }

    #[test]
    fn two_hop_lightness_within_claim_bound() {
        let rows = bench_sweep(Family::UniformLine, &[64], &[2], 0).unwrap();
        // weight bound W2 <= n * L with L = mst here
        assert!(rows[0].lightness <= 64.0 + 1e-9, "{}", rows[0].lightness);
        assert!((rows[0].max_stretch - 1.0).abs() <= 1e-9);
        assert_eq!(rows[0].hop_diameter, Some(2));
    }

    #[test]
    fn sweeps_are_deterministic_given_seed() {
        let a = bench_sweep(Family::RandomTree, &[32, 48], &[2, 4], 11).unwrap();
        let b = bench_sweep(Family::RandomTree, &[48, 32], &[4, 2], 11).unwrap();
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            let (mut x, mut y) = (x.clone(), y.clone());
            x.build_millis = 0;
            y.build_millis = 0;
            assert_eq!(x, y);
        }
    }

    #[test]
    fn random_points_family_round_trips_through_cover() {
        let rows = bench_sweep(Family::RandomPoints(2), &[24], &[2, 4], 5).unwrap();
        for r in &rows {
            assert!(r.max_stretch.is_finite());
            assert!(r.max_stretch >= 1.0 - 1e-9);
            assert!(r.hop_diameter.unwrap() <= r.k);
            assert!(r.lightness.is_finite() && r.lightness > 0.0);
        }
    }

    #[test]
    fn empty_inputs_rejected() {
        assert!(bench_sweep(Family::UniformLine, &[], &[2], 0).is_err());
        assert!(bench_sweep(Family::UniformLine, &[8], &[], 0).is_err());
        assert!(bench_sweep(Family::UniformLine, &[1], &[2], 0).is_err());
        assert!(bench_sweep(Family::UniformLine, &[8], &[0], 0).is_err());
    }
}
