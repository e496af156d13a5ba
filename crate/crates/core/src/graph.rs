//! Geometric graphs, their derived crossings, and crossing distance.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{crosses_properly, is_general_position, GeometryError, Point};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex ids must be 0..{expected}, found {found}")]
    BadVertexId { expected: usize, found: usize },
    #[error("edge {0:?} references a missing vertex")]
    MissingVertex([usize; 2]),
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("duplicate edge {0:?}")]
    DuplicateEdge([usize; 2]),
    #[error("vertices are not in general position")]
    NotGeneralPosition,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("graph has {0} vertices, more than the supported 255")]
    TooLarge(usize),
    #[error("invalid graph JSON: {0}")]
    Json(String),
}

/// An unordered vertex pair, stored with the smaller id first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge(usize, usize);

impl Edge {
    pub fn new(a: usize, b: usize) -> Self {
        if a <= b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }

    pub fn lo(&self) -> usize {
        self.0
    }

    pub fn hi(&self) -> usize {
        self.1
    }

    pub fn endpoints(&self) -> [usize; 2] {
        [self.0, self.1]
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0 == v || self.1 == v
    }

    pub fn shares_vertex(&self, other: &Edge) -> bool {
        self.contains(other.0) || self.contains(other.1)
    }

    /// The endpoint that is not `v`. `v` must be an endpoint.
    pub fn other(&self, v: usize) -> usize {
        if self.0 == v {
            self.1
        } else {
            self.0
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.0, self.1)
    }
}

/// An unordered pair of disjoint edges, smaller edge first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Crossing {
    pub first: Edge,
    pub second: Edge,
}

impl Crossing {
    pub fn new(a: Edge, b: Edge) -> Self {
        if a <= b {
            Crossing { first: a, second: b }
        } else {
            Crossing { first: b, second: a }
        }
    }

    pub fn vertices(&self) -> [usize; 4] {
        [self.first.0, self.first.1, self.second.0, self.second.1]
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        self.first.contains(v) || self.second.contains(v)
    }

    pub fn lowest_vertex(&self) -> usize {
        self.vertices().into_iter().min().unwrap_or(0)
    }
}

/// Abstract simple graph on vertices `0..n` with an adjacency matrix and sorted
/// neighbour lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    n: usize,
    matrix: Vec<bool>,
    neighbors: Vec<Vec<usize>>,
    edges: Vec<Edge>,
}

impl SimpleGraph {
    /// Builds from an edge list; loops are ignored and duplicates collapsed.
    pub fn new(n: usize, edges: impl IntoIterator<Item = Edge>) -> Self {
        let mut matrix = vec![false; n * n];
        let mut list = Vec::new();
        for e in edges {
            if e.0 == e.1 || e.1 >= n || matrix[e.0 * n + e.1] {
                continue;
            }
            matrix[e.0 * n + e.1] = true;
            matrix[e.1 * n + e.0] = true;
            list.push(e);
        }
        list.sort_unstable();
        let mut neighbors = vec![Vec::new(); n];
        for e in &list {
            neighbors[e.0].push(e.1);
            neighbors[e.1].push(e.0);
        }
        for nb in &mut neighbors {
            nb.sort_unstable();
        }
        SimpleGraph { n, matrix, neighbors, edges: list }
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|a| ((a + 1)..n).map(move |b| Edge(a, b)));
        Self::new(n, edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.matrix[u * self.n + v]
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v].len()
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Breadth-first distances from a set of sources; `None` marks unreachable.
    pub fn distances_from(&self, sources: &[usize]) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        let mut queue = VecDeque::new();
        for &s in sources {
            if dist[s].is_none() {
                dist[s] = Some(0);
                queue.push_back(s);
            }
        }
        while let Some(v) = queue.pop_front() {
            let d = dist[v].unwrap_or(0);
            for &w in &self.neighbors[v] {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Whether the subgraph formed by `edges` contains an odd cycle.
    pub fn edge_set_has_odd_cycle(n: usize, edges: &[Edge]) -> bool {
        let sub = SimpleGraph::new(n, edges.iter().copied());
        let mut side: Vec<Option<bool>> = vec![None; n];
        for start in 0..n {
            if side[start].is_some() || sub.degree(start) == 0 {
                continue;
            }
            side[start] = Some(false);
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                let s = side[v].unwrap_or(false);
                for &w in sub.neighbors(v) {
                    match side[w] {
                        None => {
                            side[w] = Some(!s);
                            queue.push_back(w);
                        }
                        Some(t) if t == s => return true,
                        Some(_) => {}
                    }
                }
            }
        }
        false
    }
}

/// Crossing pairs over a fixed edge list, with O(1) membership lookup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossingTable {
    n: usize,
    edge_index: Vec<Option<usize>>,
    edge_count: usize,
    matrix: Vec<bool>,
    list: Vec<Crossing>,
}

impl CrossingTable {
    pub fn new(graph: &SimpleGraph, crossings: impl IntoIterator<Item = Crossing>) -> Self {
        let n = graph.vertex_count();
        let mut edge_index = vec![None; n * n];
        for (i, e) in graph.edges().iter().enumerate() {
            edge_index[e.0 * n + e.1] = Some(i);
            edge_index[e.1 * n + e.0] = Some(i);
        }
        let m = graph.edges().len();
        let mut matrix = vec![false; m * m];
        let mut list: Vec<Crossing> = Vec::new();
        for c in crossings {
            let (Some(i), Some(j)) = (edge_index[c.first.0 * n + c.first.1], edge_index[c.second.0 * n + c.second.1])
            else {
                continue;
            };
            if c.first.shares_vertex(&c.second) || matrix[i * m + j] {
                continue;
            }
            matrix[i * m + j] = true;
            matrix[j * m + i] = true;
            list.push(c);
        }
        list.sort_unstable();
        CrossingTable { n, edge_index, edge_count: m, matrix, list }
    }

    pub fn list(&self) -> &[Crossing] {
        &self.list
    }

    /// Whether the edges `{a,b}` and `{c,d}` both exist and cross.
    pub fn crosses(&self, a: usize, b: usize, c: usize, d: usize) -> bool {
        let n = self.n;
        if a >= n || b >= n || c >= n || d >= n {
            return false;
        }
        match (self.edge_index[a * n + b], self.edge_index[c * n + d]) {
            (Some(i), Some(j)) => self.matrix[i * self.edge_count + j],
            _ => false,
        }
    }
}

/// Read-only access to adjacency plus crossings, shared by drawings and
/// coordinate-free structures.
pub trait CrossingView {
    fn graph(&self) -> &SimpleGraph;
    fn crossing_table(&self) -> &CrossingTable;

    fn vertex_count(&self) -> usize {
        self.graph().vertex_count()
    }

    fn crossings(&self) -> &[Crossing] {
        self.crossing_table().list()
    }

    fn edges_cross(&self, e1: Edge, e2: Edge) -> bool {
        self.crossing_table().crosses(e1.0, e1.1, e2.0, e2.1)
    }
}

/// Graph distance between two crossings; `Infinite` when no path joins them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CrossingDistance {
    Finite(usize),
    Infinite,
}

impl CrossingDistance {
    pub fn at_least(self, d: usize) -> bool {
        match self {
            CrossingDistance::Finite(x) => x >= d,
            CrossingDistance::Infinite => true,
        }
    }
}

impl fmt::Display for CrossingDistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CrossingDistance::Finite(d) => write!(f, "{d}"),
            CrossingDistance::Infinite => write!(f, "inf"),
        }
    }
}

/// A simple graph drawn with straight edges on integer points in general position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeometricGraph {
    positions: Vec<Point>,
    graph: SimpleGraph,
    crossings: CrossingTable,
}

impl GeometricGraph {
    pub fn new(positions: Vec<Point>, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let n = positions.len();
        if n > 255 {
            return Err(GraphError::TooLarge(n));
        }
        for p in &positions {
            Point::new(p.x, p.y)?;
        }
        if !is_general_position(&positions) {
            return Err(GraphError::NotGeneralPosition);
        }
        let mut seen = HashSet::new();
        let mut list = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(GraphError::MissingVertex([a, b]));
            }
            if a == b {
                return Err(GraphError::Loop(a));
            }
            let e = Edge::new(a, b);
            if !seen.insert(e) {
                return Err(GraphError::DuplicateEdge([e.0, e.1]));
            }
            list.push(e);
        }
        let graph = SimpleGraph::new(n, list);
        let crossings = CrossingTable::new(&graph, compute_crossings(&positions, graph.edges()));
        Ok(GeometricGraph { positions, graph, crossings })
    }

    /// Complete graph on the given points.
    pub fn complete(positions: Vec<Point>) -> Result<Self, GraphError> {
        let n = positions.len();
        let edges: Vec<(usize, usize)> = (0..n).flat_map(|a| ((a + 1)..n).map(move |b| (a, b))).collect();
        Self::new(positions, &edges)
    }

    pub fn positions(&self) -> &[Point] {
        &self.positions
    }

    pub fn edges(&self) -> &[Edge] {
        self.graph.edges()
    }

    /// Copy of this drawing with every vertex moved by `f`.
    pub fn map_positions(&self, f: impl Fn(&Point) -> Point) -> Result<Self, GraphError> {
        let pts = self.positions.iter().map(f).collect();
        let edges: Vec<(usize, usize)> = self.edges().iter().map(|e| (e.0, e.1)).collect();
        Self::new(pts, &edges)
    }

    /// Copy with vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self, GraphError> {
        let mut pts = self.positions.clone();
        for (v, &t) in perm.iter().enumerate() {
            pts[t] = self.positions[v].clone();
        }
        let edges: Vec<(usize, usize)> = self.edges().iter().map(|e| (perm[e.0], perm[e.1])).collect();
        Self::new(pts, &edges)
    }

    /// Number of crossings each vertex takes part in.
    pub fn crossing_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.positions.len()];
        for c in self.crossings() {
            for v in c.vertices() {
                deg[v] += 1;
            }
        }
        deg
    }

    /// Graph distance between the vertex sets of two crossings.
    pub fn crossing_distance(&self, c1: &Crossing, c2: &Crossing) -> CrossingDistance {
        let dist = self.graph.distances_from(&c1.vertices());
        c2.vertices().iter().filter_map(|&v| dist[v]).min().map_or(CrossingDistance::Infinite, CrossingDistance::Finite)
    }

    /// Minimum distance over unordered pairs of distinct crossings.
    pub fn min_pairwise_crossing_distance(&self) -> CrossingDistance {
        let cs = self.crossings();
        let mut best = CrossingDistance::Infinite;
        for (i, c1) in cs.iter().enumerate() {
            let dist = self.graph.distances_from(&c1.vertices());
            for c2 in &cs[i + 1..] {
                if let Some(d) = c2.vertices().iter().filter_map(|&v| dist[v]).min() {
                    best = best.min(CrossingDistance::Finite(d));
                }
            }
            if best == CrossingDistance::Finite(0) {
                break;
            }
        }
        best
    }

    pub fn to_json_value(&self) -> GraphJson {
        GraphJson {
            vertices: self.positions.iter().enumerate().map(|(id, p)| VertexJson { id, x: p.x, y: p.y }).collect(),
            edges: self.edges().iter().map(|e| [e.0, e.1]).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("graph JSON serializes")
    }

    pub fn from_json_value(value: GraphJson) -> Result<Self, GraphError> {
        let n = value.vertices.len();
        let mut slots: Vec<Option<Point>> = vec![None; n];
        for v in value.vertices {
            if v.id >= n || slots[v.id].is_some() {
                return Err(GraphError::BadVertexId { expected: n, found: v.id });
            }
            slots[v.id] = Some(Point::new(v.x, v.y)?);
        }
        let positions = slots.into_iter().map(|p| p.expect("all ids filled")).collect();
        let edges: Vec<(usize, usize)> = value.edges.iter().map(|e| (e[0], e[1])).collect();
        Self::new(positions, &edges)
    }

    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        let value: GraphJson = serde_json::from_str(text).map_err(|e| GraphError::Json(e.to_string()))?;
        Self::from_json_value(value)
    }
}

impl CrossingView for GeometricGraph {
    fn graph(&self) -> &SimpleGraph {
        &self.graph
    }

    fn crossing_table(&self) -> &CrossingTable {
        &self.crossings
    }
}

/// All disjoint edge pairs whose segments properly cross.
fn compute_crossings(positions: &[Point], edges: &[Edge]) -> Vec<Crossing> {
    let mut out = Vec::new();
    for (i, e) in edges.iter().enumerate() {
        for f in &edges[i + 1..] {
            if e.shares_vertex(f) {
                continue;
            }
            if crosses_properly(&positions[e.0], &positions[e.1], &positions[f.0], &positions[f.1]) {
                out.push(Crossing::new(*e, *f));
            }
        }
    }
    out
}

/// Wire form of a vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexJson {
    pub id: usize,
    pub x: i64,
    pub y: i64,
}

/// Wire form of a geometric graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphJson {
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<[usize; 2]>,
}
