#![allow(dead_code)]

use std::sync::OnceLock;

use geochrom::catalog::{convex_clique, OnDemandCatalogs};
use geochrom::{is_geometric_hom, random_geometric_graph, GeometricGraph, LiftReport};

/// Catalogs up to K6, enumerated once per test binary.
pub fn catalogs() -> &'static OnDemandCatalogs {
    static CATALOGS: OnceLock<OnDemandCatalogs> = OnceLock::new();
    CATALOGS.get_or_init(|| OnDemandCatalogs::new(6))
}

/// Seeded instance with 6..=12 vertices and the given crossing-distance floor.
pub fn random_instance(seed: u64, min_dist: usize) -> GeometricGraph {
    let vertices = 6 + (seed % 7) as usize;
    let p = match min_dist {
        2 => 0.22,
        1 => 0.28,
        _ => 0.35,
    };
    random_geometric_graph(vertices, p, min_dist, seed).expect("random instance")
}

pub fn lands_in_convex_clique(g: &GeometricGraph, report: &LiftReport) -> bool {
    is_geometric_hom(g, &convex_clique(report.target_size), &report.beta)
}
