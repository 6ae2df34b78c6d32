//! Light spanners with bounded hop-diameter.
//!
//! The crate builds exact (stretch-1) spanners of tree metrics whose
//! hop-diameter is a chosen k, trading hops for lightness; lifts them to
//! arbitrary metrics through tree covers; and measures everything with
//! independent oracles (bounded-hop shortest paths, an exhaustive
//! minimum-lightness search at small scale).

pub mod cover;
pub mod decompose;
pub mod error;
pub mod io;
pub mod metric;
pub mod spanner;
pub mod verify;

pub use cover::{cover_stats, identity_cover, shifted_quadtree_cover, CoverStats, CoverTree, TreeCover};
pub use decompose::{centroid, split, Separator};
pub use error::{Error, Result};
pub use metric::{
    lightness_ratio, mst_weight, sum_weights, uniform_line, Metric, SpannerGraph, SpannerStats,
    WeightedTree,
};
pub use spanner::{
    build_contracted_tree, build_tree_spanner, build_tree_spanner_observed, choose_ell,
    cover_to_spanner, BuildEvent,
};
pub use verify::{bounded_hop_apsp, hop_diameter, optimal_lightness, verify, VerifyReport};
