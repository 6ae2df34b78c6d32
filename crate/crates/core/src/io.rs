//! File ingestion and serialization.
//!
//! Formats:
//! - tree (JSON): `{"n": int, "root": int, "edges": [[u, v, w], ...]}`
//! - points (CSV): one point per line, comma-separated coordinates,
//!   dimension inferred from the first line
//! - matrix (CSV): n lines of n comma-separated entries
//! - spanner (JSON): `{"real": int, "total": int, "k": int, "t": float,
//!   "edges": [[u, v, w], ...]}`
//! - cover (JSON): `{"gamma": int, "t": float, "L": float, "trees":
//!   [{tree fields..., "point_map": [[point, vertex], ...]}, ...]}`
//!
//! All floats are written with 17 significant digits, which round-trips f64
//! exactly.

use crate::cover::{CoverTree, TreeCover};
use crate::error::{Error, Result};
use crate::metric::{Metric, SpannerGraph, WeightedTree};
use serde::{Deserialize, Serialize};
use std::path::Path;

/// 17 significant digits in scientific notation; parses back bit-exact.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

struct SciFormatter;

impl serde_json::ser::Formatter for SciFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        if value.is_finite() {
            write!(writer, "{value:.16e}")
        } else {
            writer.write_all(b"null")
        }
    }
}

/// Serialize any value as compact JSON with the float convention above.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SciFormatter);
    value
        .serialize(&mut ser)
        .expect("in-memory JSON serialization cannot fail");
    String::from_utf8(out).expect("JSON output is UTF-8")
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn from_json<'a, T: Deserialize<'a>>(path: &Path, text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Json {
        path: path.to_path_buf(),
        line: e.line(),
        column: e.column(),
        msg: e.to_string(),
    })
}

#[derive(Serialize, Deserialize)]
struct TreeFile {
    n: usize,
    root: usize,
    edges: Vec<(usize, usize, f64)>,
}

pub fn load_tree(path: &Path) -> Result<WeightedTree> {
    let text = read_file(path)?;
    let f: TreeFile = from_json(path, &text)?;
    WeightedTree::new(f.n, f.root, f.edges)
}

pub fn save_tree(path: &Path, t: &WeightedTree) -> Result<()> {
    let f = TreeFile {
        n: t.vertex_count(),
        root: t.root(),
        edges: t.edges().to_vec(),
    };
    write_file(path, &(to_json(&f) + "\n"))
}

#[derive(Serialize, Deserialize)]
struct SpannerFile {
    real: usize,
    total: usize,
    k: usize,
    t: f64,
    edges: Vec<(usize, usize, f64)>,
}

pub fn load_spanner(path: &Path) -> Result<SpannerGraph> {
    let text = read_file(path)?;
    let f: SpannerFile = from_json(path, &text)?;
    SpannerGraph::new(f.real, f.total, f.edges, f.k, f.t)
}

pub fn save_spanner(path: &Path, g: &SpannerGraph) -> Result<()> {
    let f = SpannerFile {
        real: g.real_count(),
        total: g.total_count(),
        k: g.declared_k(),
        t: g.declared_t(),
        edges: g.edges().to_vec(),
    };
    write_file(path, &(to_json(&f) + "\n"))
}

#[derive(Serialize, Deserialize)]
struct CoverTreeFile {
    n: usize,
    root: usize,
    edges: Vec<(usize, usize, f64)>,
    point_map: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct CoverFile {
    gamma: usize,
    t: f64,
    #[serde(rename = "L")]
    lightness: f64,
    trees: Vec<CoverTreeFile>,
}

pub fn load_cover(path: &Path) -> Result<TreeCover> {
    let text = read_file(path)?;
    let f: CoverFile = from_json(path, &text)?;
    if f.gamma != f.trees.len() {
        return Err(Error::InvalidCover(format!(
            "gamma = {} but file contains {} trees",
            f.gamma,
            f.trees.len()
        )));
    }
    if f.trees.is_empty() {
        return Err(Error::InvalidCover("cover contains no trees".into()));
    }
    let points = f.trees[0].point_map.len();
    let mut trees = Vec::with_capacity(f.trees.len());
    for (ti, tf) in f.trees.into_iter().enumerate() {
        let tree = WeightedTree::new(tf.n, tf.root, tf.edges)?;
        if tf.point_map.len() != points {
            return Err(Error::InvalidCover(format!(
                "tree {ti} maps {} points but tree 0 maps {points}",
                tf.point_map.len()
            )));
        }
        let mut point_map = vec![usize::MAX; points];
        for &(p, v) in &tf.point_map {
            if p >= points {
                return Err(Error::InvalidCover(format!(
                    "tree {ti} references point {p}, expected points 0..{points}"
                )));
            }
            if point_map[p] != usize::MAX {
                return Err(Error::InvalidCover(format!("tree {ti} maps point {p} twice")));
            }
            if v >= tree.vertex_count() {
                return Err(Error::InvalidCover(format!(
                    "tree {ti} maps point {p} to unknown vertex {v}"
                )));
            }
            point_map[p] = v;
        }
        if let Some(missing) = point_map.iter().position(|&v| v == usize::MAX) {
            return Err(Error::InvalidCover(format!(
                "tree {ti} does not map point {missing}"
            )));
        }
        trees.push(CoverTree { tree, point_map });
    }
    Ok(TreeCover {
        trees,
        declared_stretch: f.t,
        declared_lightness: f.lightness,
    })
}

pub fn save_cover(path: &Path, c: &TreeCover) -> Result<()> {
    let f = CoverFile {
        gamma: c.trees.len(),
        t: c.declared_stretch,
        lightness: c.declared_lightness,
        trees: c
            .trees
            .iter()
            .map(|ct| CoverTreeFile {
                n: ct.tree.vertex_count(),
                root: ct.tree.root(),
                edges: ct.tree.edges().to_vec(),
                point_map: ct.point_map.iter().copied().enumerate().collect(),
            })
            .collect(),
    };
    write_file(path, &(to_json(&f) + "\n"))
}

fn parse_csv_floats(path: &Path, text: &str) -> Result<Vec<Vec<f64>>> {
    let mut rows = Vec::new();
    for (li, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut row = Vec::new();
        for (fi, field) in line.split(',').enumerate() {
            let x: f64 = field.trim().parse().map_err(|_| Error::Parse {
                path: path.to_path_buf(),
                line: li + 1,
                field: fi + 1,
                msg: format!("cannot parse {:?} as a number", field.trim()),
            })?;
            if !x.is_finite() {
                return Err(Error::Parse {
                    path: path.to_path_buf(),
                    line: li + 1,
                    field: fi + 1,
                    msg: "values must be finite".into(),
                });
            }
            row.push(x);
        }
        rows.push((li + 1, row));
    }
    if rows.is_empty() {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line: 1,
            field: 1,
            msg: "file contains no data rows".into(),
        });
    }
    let width = rows[0].1.len();
    for (li, row) in &rows {
        if row.len() != width {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line: *li,
                field: row.len().min(width) + 1,
                msg: format!("expected {width} fields, found {}", row.len()),
            });
        }
    }
    Ok(rows.into_iter().map(|(_, r)| r).collect())
}

/// Load a point set; dimension inferred, exact duplicate points rejected.
pub fn load_points(path: &Path) -> Result<Metric> {
    let text = read_file(path)?;
    let coords = parse_csv_floats(path, &text)?;
    let mut order: Vec<usize> = (0..coords.len()).collect();
    order.sort_by(|&a, &b| {
        coords[a]
            .iter()
            .map(|x| x.to_bits())
            .cmp(coords[b].iter().map(|x| x.to_bits()))
    });
    for pair in order.windows(2) {
        if coords[pair[0]] == coords[pair[1]] {
            return Err(Error::InvalidMetric(format!(
                "points {} and {} are exact duplicates",
                pair[0].min(pair[1]),
                pair[0].max(pair[1])
            )));
        }
    }
    Metric::points(coords)
}

pub fn save_points(path: &Path, m: &Metric) -> Result<()> {
    let Metric::Points { coords, .. } = m else {
        return Err(Error::InvalidParam("save_points requires a point-set metric".into()));
    };
    let mut out = String::new();
    for c in coords {
        let fields: Vec<String> = c.iter().map(|&x| format_float(x)).collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    write_file(path, &out)
}

pub fn load_matrix(path: &Path) -> Result<Metric> {
    let text = read_file(path)?;
    let rows = parse_csv_floats(path, &text)?;
    let n = rows.len();
    if rows[0].len() != n {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line: 1,
            field: 1,
            msg: format!("matrix must be square: {n} rows but {} columns", rows[0].len()),
        });
    }
    Metric::matrix(n, rows.into_iter().flatten().collect())
}

pub fn save_matrix(path: &Path, m: &Metric) -> Result<()> {
    let Metric::Matrix { n, entries } = m else {
        return Err(Error::InvalidParam("save_matrix requires a matrix metric".into()));
    };
    let mut out = String::new();
    for i in 0..*n {
        let fields: Vec<String> = (0..*n).map(|j| format_float(entries[i * n + j])).collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    write_file(path, &out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::identity_cover;
    use crate::metric::uniform_line;

    fn tmp() -> tempfile::TempDir {
        tempfile::tempdir().unwrap()
    }

    #[test]
    fn float_format_round_trips() {
        for &x in &[0.75, 1.0 / 3.0, 1e-300, 12345.6789, 0.0, 2.0f64.powi(-1022)] {
            let s = format_float(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{s}");
        }
    }

    #[test]
    fn tree_round_trip() {
        let dir = tmp();
        let p = dir.path().join("t.json");
        let t = WeightedTree::new(3, 0, vec![(0, 1, 2.0), (1, 2, 1.0 / 3.0)]).unwrap();
        save_tree(&p, &t).unwrap();
        let t2 = load_tree(&p).unwrap();
        assert_eq!(t.edges(), t2.edges());
        assert_eq!(t.root(), t2.root());
        let p2 = dir.path().join("t2.json");
        save_tree(&p2, &t2).unwrap();
        assert_eq!(
            std::fs::read_to_string(&p).unwrap(),
            std::fs::read_to_string(&p2).unwrap()
        );
    }

    #[test]
    fn non_spanning_tree_file_is_rejected() {
        let dir = tmp();
        let p = dir.path().join("bad.json");
        std::fs::write(&p, r#"{"n": 3, "root": 0, "edges": [[0, 1, 1.0]]}"#).unwrap();
        match load_tree(&p) {
            Err(Error::InvalidTree(msg)) => assert!(msg.contains("not spanning"), "{msg}"),
            other => panic!("expected invalid tree, got {other:?}"),
        }
    }

    #[test]
    fn malformed_json_reports_position() {
        let dir = tmp();
        let p = dir.path().join("bad.json");
        std::fs::write(&p, "{\"n\": 3,\n  \"root\": oops}").unwrap();
        match load_tree(&p) {
            Err(Error::Json { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected json error, got {other:?}"),
        }
    }

    #[test]
    fn spanner_round_trip() {
        let dir = tmp();
        let p = dir.path().join("s.json");
        let g = SpannerGraph::new(3, 4, vec![(0, 3, 0.1), (0, 1, 1.0)], 2, 1.5).unwrap();
        save_spanner(&p, &g).unwrap();
        let g2 = load_spanner(&p).unwrap();
        assert_eq!(g.edges(), g2.edges());
        assert_eq!(g2.total_count(), 4);
        assert_eq!(g2.declared_t(), 1.5);
    }

    #[test]
    fn cover_round_trip() {
        let dir = tmp();
        let p = dir.path().join("c.json");
        let t = WeightedTree::new(4, 0, vec![(0, 1, 1.0), (1, 2, 0.5), (1, 3, 0.25)]).unwrap();
        let c = identity_cover(&t);
        save_cover(&p, &c).unwrap();
        let c2 = load_cover(&p).unwrap();
        assert_eq!(c2.size(), 1);
        assert_eq!(c2.trees[0].point_map, c.trees[0].point_map);
        assert_eq!(c2.trees[0].tree.edges(), c.trees[0].tree.edges());
        assert_eq!(c2.declared_stretch, 1.0);
    }

    #[test]
    fn points_round_trip_and_duplicate_rejection() {
        let dir = tmp();
        let p = dir.path().join("pts.csv");
        let m = uniform_line(5).unwrap();
        save_points(&p, &m).unwrap();
        let m2 = load_points(&p).unwrap();
        let (Metric::Points { coords: a, .. }, Metric::Points { coords: b, .. }) = (&m, &m2) else {
            panic!()
        };
        assert_eq!(a, b);

        let dup = dir.path().join("dup.csv");
        std::fs::write(&dup, "0.5,1.0\n0.25,0.75\n0.5,1.0\n").unwrap();
        match load_points(&dup) {
            Err(Error::InvalidMetric(msg)) => assert!(msg.contains("duplicates")),
            other => panic!("expected duplicate rejection, got {other:?}"),
        }
    }

    #[test]
    fn points_parse_errors_carry_positions() {
        let dir = tmp();
        let p = dir.path().join("bad.csv");
        std::fs::write(&p, "0.5,1.0\n0.25,oops\n").unwrap();
        match load_points(&p) {
            Err(Error::Parse { line, field, .. }) => {
                assert_eq!(line, 2);
                assert_eq!(field, 2);
            }
            other => panic!("expected parse error, got {other:?}"),
        }
        let ragged = dir.path().join("ragged.csv");
        std::fs::write(&ragged, "0.5,1.0\n0.25\n").unwrap();
        assert!(matches!(load_points(&ragged), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn matrix_round_trip_and_asymmetry_rejection() {
        let dir = tmp();
        let p = dir.path().join("m.csv");
        let m = Metric::matrix(3, vec![0.0, 1.0, 2.0, 1.0, 0.0, 1.0, 2.0, 1.0, 0.0]).unwrap();
        save_matrix(&p, &m).unwrap();
        let m2 = load_matrix(&p).unwrap();
        assert_eq!(m2.distance(0, 2).unwrap(), 2.0);

        let bad = dir.path().join("bad.csv");
        std::fs::write(&bad, "0,1.0\n1.001,0\n").unwrap();
        match load_matrix(&bad) {
            Err(Error::InvalidMetric(msg)) => assert!(msg.contains("not symmetric"), "{msg}"),
            other => panic!("expected asymmetry rejection, got {other:?}"),
        }
    }
}
