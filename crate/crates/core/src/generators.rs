//! Constructions of the named graph families and drawings, plus seeded random
//! geometric graphs with a crossing-distance constraint.
//!
//! Every fixed drawing checks its own combinatorics when built, so a bad
//! coordinate shows up as a panic rather than as a silently different graph.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::catalog::convex_clique;
use crate::coloring::Coloring;
use crate::geometry::{is_general_position, regular_polygon, Point, POLYGON_RADIUS};
use crate::graph::{CrossingDistance, CrossingView, Edge, GeometricGraph};
use crate::hom::{is_pseudo_coloring, VertexMap};

/// Largest vertex count accepted by [`random_geometric_graph`].
pub const MAX_RANDOM_VERTICES: usize = 14;

/// Attempts made before [`random_geometric_graph`] gives up.
pub const RANDOM_RETRIES: usize = 20_000;

const RANDOM_SPAN: i64 = 1000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeneratorError {
    #[error("unknown figure {0:?}")]
    UnknownFigure(String),
    #[error("parameter {0} must be at least 1")]
    BadParameter(usize),
    #[error("random graphs are limited to {MAX_RANDOM_VERTICES} vertices, got {0}")]
    TooManyVertices(usize),
    #[error("edge probability {0} outside [0, 1]")]
    BadProbability(f64),
    #[error("crossing distance threshold {0} is not 0, 1 or 2")]
    BadDistance(usize),
    #[error("no sample met the constraints after {0} attempts")]
    Exhausted(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Figure {
    Figure1Left,
    Figure1Right,
    Figure2Left,
    Figure2Right,
    Figure3Left,
    Figure3Right,
    Figure6,
}

impl Figure {
    pub const ALL: [Figure; 7] = [
        Figure::Figure1Left,
        Figure::Figure1Right,
        Figure::Figure2Left,
        Figure::Figure2Right,
        Figure::Figure3Left,
        Figure::Figure3Right,
        Figure::Figure6,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Figure::Figure1Left => "figure1-left",
            Figure::Figure1Right => "figure1-right",
            Figure::Figure2Left => "figure2-left",
            Figure::Figure2Right => "figure2-right",
            Figure::Figure3Left => "figure3-left",
            Figure::Figure3Right => "figure3-right",
            Figure::Figure6 => "figure6",
        }
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Figure {
    type Err = GeneratorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Figure::ALL.into_iter().find(|f| f.name() == s).ok_or_else(|| GeneratorError::UnknownFigure(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    StarCrossing,
    Separation,
    ConvexClique,
    Figure(Figure),
    Random { edge_probability: f64, min_crossing_distance: usize },
}

/// A family member: `parameter` is `k` for stars, `n` for the separation
/// family and convex cliques, and the vertex count for random graphs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilySpec {
    pub family: Family,
    pub parameter: usize,
    pub seed: u64,
}

/// A generated graph with whatever witness comes with it.
#[derive(Debug, Clone)]
pub struct Generated {
    pub graph: GeometricGraph,
    /// Geometric homomorphism into the convex clique on `map.target_size()` vertices.
    pub map: Option<VertexMap>,
    pub coloring: Option<Coloring>,
}

impl Generated {
    fn plain(graph: GeometricGraph) -> Self {
        Generated { graph, map: None, coloring: None }
    }
}

impl FamilySpec {
    pub fn generate(&self) -> Result<Generated, GeneratorError> {
        match self.family {
            Family::StarCrossing => {
                let (graph, map) = star_crossing(self.parameter)?;
                Ok(Generated { graph, map: Some(map), coloring: None })
            }
            Family::Separation => separation_family(self.parameter).map(Generated::plain),
            Family::ConvexClique => {
                if self.parameter == 0 {
                    return Err(GeneratorError::BadParameter(0));
                }
                Ok(Generated::plain(convex_clique(self.parameter)))
            }
            Family::Figure(Figure::Figure6) => {
                Ok(Generated { graph: figure_graph(Figure::Figure6), map: None, coloring: Some(figure6_coloring()) })
            }
            Family::Figure(f) => Ok(Generated::plain(figure_graph(f))),
            Family::Random { edge_probability, min_crossing_distance } => {
                random_geometric_graph(self.parameter, edge_probability, min_crossing_distance, self.seed)
                    .map(Generated::plain)
            }
        }
    }
}

fn pt(x: i64, y: i64) -> Point {
    Point::new(x, y).expect("figure coordinates are small")
}

fn points(coords: &[(i64, i64)]) -> Vec<Point> {
    coords.iter().map(|&(x, y)| pt(x, y)).collect()
}

/// Star `K_{1,k}` with one extra edge crossing all `k` spokes, and its map
/// into the convex K4.
///
/// For `k = 1` this is the convex K4 itself with the identity map. Otherwise
/// the centre is vertex 0, the leaves `1..=k` lie on an arc spanning a right
/// angle above it, and the edge `{k+1, k+2}` runs beneath the leaves.
pub fn star_crossing(k: usize) -> Result<(GeometricGraph, VertexMap), GeneratorError> {
    if k == 0 {
        return Err(GeneratorError::BadParameter(0));
    }
    if k == 1 {
        return Ok((convex_clique(4), VertexMap::identity(4)));
    }
    let r = POLYGON_RADIUS as f64;
    let mut pos = vec![pt(0, 0)];
    for i in 0..k {
        let theta = std::f64::consts::FRAC_PI_4 + std::f64::consts::FRAC_PI_2 * i as f64 / (k - 1) as f64;
        pos.push(pt((r * theta.cos()).round() as i64, (r * theta.sin()).round() as i64));
    }
    pos.push(pt(-POLYGON_RADIUS, POLYGON_RADIUS / 2));
    pos.push(pt(POLYGON_RADIUS, POLYGON_RADIUS / 2 + 1));
    let mut edges: Vec<(usize, usize)> = (1..=k).map(|i| (0, i)).collect();
    edges.push((k + 1, k + 2));
    let g = GeometricGraph::new(pos, &edges).expect("star drawing is in general position");

    let bar = Edge::new(k + 1, k + 2);
    assert_eq!(g.crossings().len(), k);
    assert!(g.crossings().iter().all(|c| c.second == bar || c.first == bar));

    let mut images = vec![2; k + 3];
    images[0] = 0;
    images[k + 1] = 1;
    images[k + 2] = 3;
    Ok((g, VertexMap::new(4, images).expect("images below 4")))
}

/// The graph on `3m` convex points, `m = n + 1`: a triangle on labels
/// `1, m+1, 2m+1` and, for `i` in `2..m`, the 2-path `m+i, i, 2m+i`.
/// Vertex id is label minus one; labels `m, 2m, 3m` stay isolated.
pub fn separation_family(n: usize) -> Result<GeometricGraph, GeneratorError> {
    if n == 0 {
        return Err(GeneratorError::BadParameter(0));
    }
    let m = n + 1;
    let id = |label: usize| label - 1;
    let mut edges = vec![(id(1), id(m + 1)), (id(1), id(2 * m + 1)), (id(m + 1), id(2 * m + 1))];
    for i in 2..m {
        edges.push((id(i), id(m + i)));
        edges.push((id(i), id(2 * m + i)));
    }
    Ok(GeometricGraph::new(regular_polygon(3 * m), &edges).expect("convex points are in general position"))
}

/// Colouring shown with the figure-6 drawing, vertices `a, b, c, x, y, z`.
pub fn figure6_coloring() -> Coloring {
    Coloring::new(5, vec![1, 2, 3, 5, 5, 4]).expect("colours within 1..=5")
}

pub fn figure_graph(which: Figure) -> GeometricGraph {
    let g = match which {
        Figure::Figure1Left => {
            GeometricGraph::complete(points(&[(0, -3), (0, 19), (20, 3), (-20, 3), (-12, -20), (12, -20)]))
        }
        Figure::Figure1Right => {
            GeometricGraph::complete(points(&[(61, 20), (80, 10), (80, -10), (61, -20), (40, -10), (40, 10)]))
        }
        // a zig-zag 3-path 0-1-2-3 whose edges all cross the edge 4-5
        Figure::Figure2Left => GeometricGraph::new(
            points(&[(-28, -9), (-12, -2), (-28, 2), (-12, 9), (-20, -12), (-20, 12)]),
            &[(0, 1), (1, 2), (2, 3), (4, 5)],
        ),
        // triangle a, b, c crossed by the 2-path x-z-y
        Figure::Figure2Right => GeometricGraph::new(
            points(&[(0, 0), (20, 0), (10, 15), (0, 10), (20, 10), (10, -10)]),
            &[(0, 1), (1, 2), (2, 0), (3, 5), (5, 4)],
        ),
        // grid drawings with the rows bent slightly so no three points are collinear
        Figure::Figure3Left => GeometricGraph::new(
            points(&[(0, 0), (10, -1), (0, 10), (10, 11), (20, 14), (30, 19), (40, 26), (30, -9), (40, -16)]),
            &[(0, 3), (3, 4), (4, 5), (5, 8), (2, 1), (7, 6)],
        ),
        Figure::Figure3Right => GeometricGraph::new(
            points(&[(0, 0), (10, -1), (20, -4), (30, -9), (0, 10), (10, 11), (20, 14), (30, 19)]),
            &[(0, 5), (5, 6), (6, 3), (4, 1), (7, 2)],
        ),
        Figure::Figure6 => GeometricGraph::new(
            points(&[(-10, 0), (10, 0), (0, 15), (-10, 10), (10, 10), (0, -8)]),
            &[(0, 1), (1, 2), (2, 0), (3, 5), (5, 4)],
        ),
    }
    .expect("figure coordinates are in general position");
    check_figure(which, &g);
    g
}

fn all_edges_crossed(g: &GeometricGraph, v: usize) -> bool {
    g.graph()
        .neighbors(v)
        .iter()
        .all(|&w| g.crossings().iter().any(|c| c.first == Edge::new(v, w) || c.second == Edge::new(v, w)))
}

fn check_figure(which: Figure, g: &GeometricGraph) {
    let crossing_count = g.crossings().len();
    match which {
        Figure::Figure1Left => {
            assert!((0..6).any(|v| all_edges_crossed(g, v)), "{which}: no vertex with every edge crossed");
        }
        Figure::Figure1Right => {
            assert!(!(0..6).any(|v| all_edges_crossed(g, v)), "{which}: a vertex has every edge crossed");
            let left = figure_graph(Figure::Figure1Left).crossings().len();
            assert!(crossing_count > left, "{which}: {crossing_count} crossings, left drawing has {left}");
        }
        Figure::Figure2Left => {
            assert_eq!(crossing_count, 3, "{which}");
            let bar = Edge::new(4, 5);
            assert!(g.crossings().iter().all(|c| c.second == bar || c.first == bar), "{which}");
        }
        Figure::Figure2Right => {
            assert_eq!(crossing_count, 4, "{which}");
            for c in g.crossings() {
                assert!(c.first.contains(5) != c.second.contains(5), "{which}: crossing {c:?}");
            }
        }
        Figure::Figure3Left => {
            assert_eq!(crossing_count, 2, "{which}");
            assert_eq!(g.min_pairwise_crossing_distance(), CrossingDistance::Finite(2), "{which}");
        }
        Figure::Figure3Right => {
            assert_eq!(crossing_count, 2, "{which}");
            assert_eq!(g.min_pairwise_crossing_distance(), CrossingDistance::Finite(1), "{which}");
        }
        Figure::Figure6 => {
            assert_eq!(crossing_count, 4, "{which}");
            assert!(is_pseudo_coloring(g, &figure6_coloring()), "{which}: bundled colouring");
        }
    }
}

/// A seeded random geometric graph whose crossings are pairwise at crossing
/// distance at least `min_crossing_distance` (0 imposes nothing).
///
/// Points are drawn from a `1001 x 1001` grid and edges independently with
/// probability `edge_probability`; the whole sample is redrawn until it is in
/// general position and meets the distance constraint.
pub fn random_geometric_graph(
    vertex_count: usize,
    edge_probability: f64,
    min_crossing_distance: usize,
    seed: u64,
) -> Result<GeometricGraph, GeneratorError> {
    if vertex_count > MAX_RANDOM_VERTICES {
        return Err(GeneratorError::TooManyVertices(vertex_count));
    }
    if !(0.0..=1.0).contains(&edge_probability) {
        return Err(GeneratorError::BadProbability(edge_probability));
    }
    if min_crossing_distance > 2 {
        return Err(GeneratorError::BadDistance(min_crossing_distance));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RANDOM_RETRIES {
        let pos: Vec<Point> =
            (0..vertex_count).map(|_| pt(rng.gen_range(0..=RANDOM_SPAN), rng.gen_range(0..=RANDOM_SPAN))).collect();
        let mut edges = Vec::new();
        for a in 0..vertex_count {
            for b in (a + 1)..vertex_count {
                if rng.gen_bool(edge_probability) {
                    edges.push((a, b));
                }
            }
        }
        if !is_general_position(&pos) {
            continue;
        }
        let g = GeometricGraph::new(pos, &edges).expect("validated sample");
        if g.min_pairwise_crossing_distance().at_least(min_crossing_distance) {
            return Ok(g);
        }
    }
    Err(GeneratorError::Exhausted(RANDOM_RETRIES))
}
