//! Graph and geometric homomorphisms: verification, search, and the exact
//! chromatic, geochromatic and pseudo-geochromatic numbers.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::{CatalogError, CatalogSource};
use crate::coloring::{chromatic_number, Coloring};
use crate::graph::{CrossingView, Edge, GeometricGraph, SimpleGraph};
use crate::obstructions::{
    geochromatic_lower_bound_with_cap, non_identifiable_pairs, DistinctnessGraph, DEFAULT_PATH_CAP,
};
use crate::structure::CrossingStructure;

/// Targets with more vertices than this are not searched.
pub const MAX_SEARCH_TARGET: usize = 64;

#[derive(Debug, Error)]
pub enum HomError {
    #[error("image {image} of vertex {vertex} outside 0..{target_size}")]
    ImageOutOfRange { vertex: usize, image: usize, target_size: usize },
    #[error(transparent)]
    Catalog(#[from] CatalogError),
}

/// A total map from source vertices to target vertex ids.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexMap {
    target_size: usize,
    images: Vec<usize>,
}

impl VertexMap {
    pub fn new(target_size: usize, images: Vec<usize>) -> Result<Self, HomError> {
        for (vertex, &image) in images.iter().enumerate() {
            if image >= target_size {
                return Err(HomError::ImageOutOfRange { vertex, image, target_size });
            }
        }
        Ok(VertexMap { target_size, images })
    }

    pub fn identity(n: usize) -> Self {
        VertexMap { target_size: n, images: (0..n).collect() }
    }

    pub fn source_size(&self) -> usize {
        self.images.len()
    }

    pub fn target_size(&self) -> usize {
        self.target_size
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn image(&self, v: usize) -> usize {
        self.images[v]
    }

    /// `then ∘ self`.
    pub fn then(&self, then: &VertexMap) -> Option<VertexMap> {
        if then.source_size() != self.target_size {
            return None;
        }
        Some(VertexMap { target_size: then.target_size, images: self.images.iter().map(|&t| then.images[t]).collect() })
    }
}

impl From<&Coloring> for VertexMap {
    /// Colour `c` becomes target vertex `c - 1`.
    fn from(c: &Coloring) -> Self {
        VertexMap { target_size: c.color_count(), images: c.colors().iter().map(|x| x - 1).collect() }
    }
}

/// Every edge of `g` maps onto an edge of `h`.
pub fn is_graph_hom(g: &SimpleGraph, h: &SimpleGraph, f: &VertexMap) -> bool {
    f.source_size() == g.vertex_count()
        && f.target_size() == h.vertex_count()
        && g.edges().iter().all(|e| h.is_adjacent(f.image(e.lo()), f.image(e.hi())))
}

/// Adjacency is preserved and every crossing maps onto a crossing.
pub fn is_geometric_hom<G: CrossingView + ?Sized, H: CrossingView + ?Sized>(g: &G, h: &H, f: &VertexMap) -> bool {
    if !is_graph_hom(g.graph(), h.graph(), f) {
        return false;
    }
    g.crossings().iter().all(|c| {
        let a = Edge::new(f.image(c.first.lo()), f.image(c.first.hi()));
        let b = Edge::new(f.image(c.second.lo()), f.image(c.second.hi()));
        !a.shares_vertex(&b) && h.edges_cross(a, b)
    })
}

/// Searches for a geometric homomorphism `g -> target`.
///
/// Pairs forced distinct by the obstruction rules are given distinct images.
/// Returns `None` when none exists or the target is larger than
/// [`MAX_SEARCH_TARGET`].
pub fn find_geometric_hom<T: CrossingView + ?Sized>(g: &GeometricGraph, target: &T) -> Option<VertexMap> {
    let forced = non_identifiable_pairs(g, DEFAULT_PATH_CAP);
    find_geometric_hom_with(g, target, &forced)
}

pub fn find_geometric_hom_with<T: CrossingView + ?Sized>(
    g: &GeometricGraph,
    target: &T,
    forced: &DistinctnessGraph,
) -> Option<VertexMap> {
    let tn = target.vertex_count();
    if tn > MAX_SEARCH_TARGET {
        return None;
    }
    let n = g.vertex_count();
    if n == 0 {
        return Some(VertexMap { target_size: tn, images: Vec::new() });
    }
    if tn == 0 {
        return None;
    }
    let mut search = HomSearch::new(g, target, forced);
    let domains = vec![search.full; n];
    let mut images = vec![usize::MAX; n];
    if search.solve(&domains, &mut images, 0) {
        Some(VertexMap { target_size: tn, images })
    } else {
        None
    }
}

struct HomSearch<'a, T: CrossingView + ?Sized> {
    g: &'a GeometricGraph,
    target: &'a T,
    full: u64,
    // target_adj[t]: bitmask of target neighbours of t
    target_adj: Vec<u64>,
    distinct: Vec<Vec<usize>>,
    crossings_of: Vec<Vec<[usize; 4]>>,
    crossing_degree: Vec<usize>,
}

impl<'a, T: CrossingView + ?Sized> HomSearch<'a, T> {
    fn new(g: &'a GeometricGraph, target: &'a T, forced: &DistinctnessGraph) -> Self {
        let tn = target.vertex_count();
        let full = if tn == 64 { u64::MAX } else { (1u64 << tn) - 1 };
        let th = target.graph();
        let target_adj = (0..tn).map(|t| th.neighbors(t).iter().fold(0u64, |m, &w| m | 1 << w)).collect();
        let n = g.vertex_count();
        let mut distinct = vec![Vec::new(); n];
        for (pair, _) in forced.pairs() {
            if !g.graph().is_adjacent(pair.lo(), pair.hi()) {
                distinct[pair.lo()].push(pair.hi());
                distinct[pair.hi()].push(pair.lo());
            }
        }
        let mut crossings_of = vec![Vec::new(); n];
        for c in g.crossings() {
            let q = c.vertices();
            for v in q {
                crossings_of[v].push(q);
            }
        }
        let crossing_degree = crossings_of.iter().map(Vec::len).collect();
        HomSearch { g, target, full, target_adj, distinct, crossings_of, crossing_degree }
    }

    /// Image options for the one unassigned vertex of a crossing.
    fn crossing_options(&self, q: [usize; 4], images: &[usize], missing: usize, domain: u64) -> u64 {
        let mut allowed = 0;
        let mut rest = domain;
        while rest != 0 {
            let t = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let img = |v: usize| if v == missing { t } else { images[v] };
            let a = Edge::new(img(q[0]), img(q[1]));
            let b = Edge::new(img(q[2]), img(q[3]));
            if a.lo() != a.hi() && b.lo() != b.hi() && !a.shares_vertex(&b) && self.target.edges_cross(a, b) {
                allowed |= 1 << t;
            }
        }
        allowed
    }

    fn solve(&mut self, domains: &[u64], images: &mut [usize], assigned: usize) -> bool {
        let n = images.len();
        if assigned == n {
            return true;
        }
        // smallest domain first, then most crossings, then lowest id
        let v = (0..n)
            .filter(|&v| images[v] == usize::MAX)
            .min_by_key(|&v| (domains[v].count_ones(), usize::MAX - self.crossing_degree[v], v))
            .expect("unassigned vertex exists");
        let mut options = domains[v];
        while options != 0 {
            let t = options.trailing_zeros() as usize;
            options &= options - 1;
            images[v] = t;
            if let Some(next) = self.propagate(domains, images, v, t) {
                if self.solve(&next, images, assigned + 1) {
                    return true;
                }
            }
            images[v] = usize::MAX;
        }
        false
    }

    /// Narrows domains after `v -> t`; `None` on a wipe-out or violated crossing.
    fn propagate(&self, domains: &[u64], images: &[usize], v: usize, t: usize) -> Option<Vec<u64>> {
        let mut next = domains.to_vec();
        next[v] = 1 << t;
        for &w in self.g.graph().neighbors(v) {
            if images[w] == usize::MAX {
                next[w] &= self.target_adj[t];
                if next[w] == 0 {
                    return None;
                }
            }
        }
        for &w in &self.distinct[v] {
            if images[w] == usize::MAX {
                next[w] &= !(1u64 << t);
                if next[w] == 0 {
                    return None;
                }
            }
        }
        for &q in &self.crossings_of[v] {
            let unassigned: Vec<usize> = q.iter().copied().filter(|&x| images[x] == usize::MAX).collect();
            match unassigned.as_slice() {
                [] => {
                    let a = Edge::new(images[q[0]], images[q[1]]);
                    let b = Edge::new(images[q[2]], images[q[3]]);
                    if a.shares_vertex(&b) || !self.target.edges_cross(a, b) {
                        return None;
                    }
                }
                [m] => {
                    next[*m] = self.crossing_options(q, images, *m, next[*m]);
                    if next[*m] == 0 {
                        return None;
                    }
                }
                _ => {}
            }
        }
        Some(next)
    }
}

/// Result of an exact geochromatic computation.
#[allow(clippy::large_enum_variant)]
#[derive(Debug, Clone)]
pub enum Geochromatic {
    Resolved {
        n: usize,
        target: CrossingStructure,
        target_witness: GeometricGraph,
        catalog_index: usize,
        map: VertexMap,
    },
    Unresolved {
        searched_to: usize,
    },
}

impl Geochromatic {
    pub fn value(&self) -> Option<usize> {
        match self {
            Geochromatic::Resolved { n, .. } => Some(*n),
            Geochromatic::Unresolved { .. } => None,
        }
    }
}

/// Least `n <= max_n` such that `g` maps geometrically onto some cataloged Kₙ.
///
/// Sizes below the obstruction lower bound cannot succeed and are skipped.
/// Within a size, catalog entries are tried in order (convex first) and the
/// lowest-index success is reported.
pub fn geochromatic_number(
    g: &GeometricGraph,
    max_n: usize,
    catalogs: &dyn CatalogSource,
) -> Result<Geochromatic, HomError> {
    let (lower, forced) = geochromatic_lower_bound_with_cap(g, DEFAULT_PATH_CAP);
    for n in lower.max(1)..=max_n {
        let catalog = catalogs.catalog(n)?;
        let hit = catalog
            .entries
            .par_iter()
            .enumerate()
            .find_map_first(|(i, entry)| find_geometric_hom_with(g, &entry.structure, &forced).map(|m| (i, m)));
        if let Some((i, map)) = hit {
            let entry = &catalog.entries[i];
            return Ok(Geochromatic::Resolved {
                n,
                target: entry.structure.clone(),
                target_witness: entry.witness.clone(),
                catalog_index: i,
                map,
            });
        }
    }
    Ok(Geochromatic::Unresolved { searched_to: max_n })
}

/// Graph whose edges are the edges of `g` plus every pair inside a crossing.
pub fn pseudo_constraint_graph(g: &GeometricGraph) -> SimpleGraph {
    let mut edges: Vec<Edge> = g.edges().to_vec();
    for c in g.crossings() {
        let q = c.vertices();
        for i in 0..4 {
            for j in (i + 1)..4 {
                edges.push(Edge::new(q[i], q[j]));
            }
        }
    }
    SimpleGraph::new(g.vertex_count(), edges)
}

/// Least number of colours that is proper on edges and gives the four
/// vertices of each crossing four distinct colours.
pub fn pseudo_geochromatic_number(g: &GeometricGraph) -> (usize, Coloring) {
    chromatic_number(&pseudo_constraint_graph(g))
}

/// Whether `c` is a pseudo-geochromatic colouring of `g`.
pub fn is_pseudo_coloring(g: &GeometricGraph, c: &Coloring) -> bool {
    c.is_proper(&pseudo_constraint_graph(g))
}
