//! Geometric homomorphisms and the geochromatic number of straight-line
//! drawings.
//!
//! Drawings are [`GeometricGraph`]s on integer points in general position.
//! The crate computes the chromatic, pseudo-geochromatic and geochromatic
//! numbers exactly, derives lower bounds from vertex pairs no geometric
//! homomorphism can identify, and lifts proper colourings into explicit maps
//! onto convex cliques.

pub mod catalog;
pub mod coloring;
pub mod generators;
pub mod geometry;
pub mod graph;
pub mod hom;
pub mod lift;
pub mod obstructions;
pub mod structure;

pub use catalog::{
    convex_clique, enumerate_clique_structures, CatalogDir, CatalogError, CatalogSource, CliqueCatalog,
    InMemoryCatalogs, OnDemandCatalogs,
};
pub use coloring::{chromatic_number, Coloring};
pub use generators::{
    figure_graph, random_geometric_graph, separation_family, star_crossing, Family, FamilySpec, Figure,
};
pub use geometry::{
    convex_crossing_rule, is_general_position, orientation, regular_polygon, segments_cross, Orientation,
};
pub use graph::{Crossing, CrossingDistance, CrossingView, Edge, GeometricGraph, GraphError, SimpleGraph};
pub use hom::{
    find_geometric_hom, geochromatic_number, is_geometric_hom, is_graph_hom, pseudo_geochromatic_number, Geochromatic,
    VertexMap,
};
pub use lift::{
    find_noncollapsing_hom, lift_dist2, lift_independent, lift_independent_noncollapsing, lift_small_chi, LiftError,
    LiftMethod, LiftReport,
};
pub use obstructions::{geochromatic_lower_bound, non_identifiable_pairs, DistinctnessGraph, Rule};
pub use structure::{crossing_structure, CrossingStructure};

pub type Point = geometry::Point<i64>;
pub type Point32 = geometry::Point<i32>;
pub type BigPoint = geometry::Point<num_bigint::BigInt>;
