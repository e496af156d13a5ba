//! Exact vertex colouring by DSATUR-ordered backtracking.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::SimpleGraph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColoringError {
    #[error("colour {color} of vertex {vertex} outside 1..={n}")]
    ColorOutOfRange { vertex: usize, color: usize, n: usize },
}

/// Colours `1..=n` assigned to vertices `0..len`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Coloring {
    n: usize,
    colors: Vec<usize>,
}

impl Coloring {
    pub fn new(n: usize, colors: Vec<usize>) -> Result<Self, ColoringError> {
        for (vertex, &color) in colors.iter().enumerate() {
            if color == 0 || color > n {
                return Err(ColoringError::ColorOutOfRange { vertex, color, n });
            }
        }
        Ok(Coloring { n, colors })
    }

    /// Builds from zero-based colour indices.
    pub(crate) fn from_indices(n: usize, indices: &[usize]) -> Self {
        Coloring { n, colors: indices.iter().map(|c| c + 1).collect() }
    }

    pub fn color_count(&self) -> usize {
        self.n
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn color(&self, v: usize) -> usize {
        self.colors[v]
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    /// Endpoint colours differ on every edge.
    pub fn is_proper(&self, graph: &SimpleGraph) -> bool {
        self.colors.len() == graph.vertex_count()
            && graph.edges().iter().all(|e| self.colors[e.lo()] != self.colors[e.hi()])
    }
}

/// Exact chromatic number with a proper colouring using exactly that many colours.
pub fn chromatic_number(graph: &SimpleGraph) -> (usize, Coloring) {
    let n = graph.vertex_count();
    if n == 0 {
        return (0, Coloring::from_indices(0, &[]));
    }
    let (upper, greedy) = dsatur_greedy(graph);
    let lower = greedy_clique(graph).max(1);
    for k in lower..upper {
        if let Some(colors) = k_coloring(graph, k) {
            return (k, Coloring::from_indices(k, &colors));
        }
    }
    (upper, Coloring::from_indices(upper, &greedy))
}

/// A proper colouring with at most `k` colours (zero-based), if one exists.
pub fn k_coloring(graph: &SimpleGraph, k: usize) -> Option<Vec<usize>> {
    let n = graph.vertex_count();
    if n == 0 {
        return Some(Vec::new());
    }
    if k == 0 {
        return None;
    }
    let mut state = Dsatur::new(graph, k);
    if state.solve(0) {
        Some(state.color.into_iter().map(|c| c.unwrap_or(0)).collect())
    } else {
        None
    }
}

struct Dsatur<'a> {
    graph: &'a SimpleGraph,
    k: usize,
    color: Vec<Option<usize>>,
    // neighbour_colors[v * k + c] counts coloured neighbours of v with colour c
    neighbour_colors: Vec<u32>,
    saturation: Vec<usize>,
    colored: usize,
}

impl<'a> Dsatur<'a> {
    fn new(graph: &'a SimpleGraph, k: usize) -> Self {
        let n = graph.vertex_count();
        Dsatur { graph, k, color: vec![None; n], neighbour_colors: vec![0; n * k], saturation: vec![0; n], colored: 0 }
    }

    fn pick(&self) -> usize {
        let mut best: Option<(usize, usize, usize)> = None;
        for v in 0..self.graph.vertex_count() {
            if self.color[v].is_some() {
                continue;
            }
            let key = (self.saturation[v], self.graph.degree(v), usize::MAX - v);
            if best.is_none_or(|b| key > b) {
                best = Some(key);
            }
        }
        usize::MAX - best.expect("an uncoloured vertex remains").2
    }

    fn assign(&mut self, v: usize, c: usize) {
        self.color[v] = Some(c);
        self.colored += 1;
        for &w in self.graph.neighbors(v) {
            let slot = &mut self.neighbour_colors[w * self.k + c];
            if *slot == 0 {
                self.saturation[w] += 1;
            }
            *slot += 1;
        }
    }

    fn unassign(&mut self, v: usize, c: usize) {
        self.color[v] = None;
        self.colored -= 1;
        for &w in self.graph.neighbors(v) {
            let slot = &mut self.neighbour_colors[w * self.k + c];
            *slot -= 1;
            if *slot == 0 {
                self.saturation[w] -= 1;
            }
        }
    }

    fn solve(&mut self, used: usize) -> bool {
        if self.colored == self.graph.vertex_count() {
            return true;
        }
        let v = self.pick();
        if self.saturation[v] >= self.k {
            return false;
        }
        // colours above `used` are interchangeable, so only the first fresh one is tried
        let limit = (used + 1).min(self.k);
        for c in 0..limit {
            if self.neighbour_colors[v * self.k + c] != 0 {
                continue;
            }
            self.assign(v, c);
            if self.solve(used.max(c + 1)) {
                return true;
            }
            self.unassign(v, c);
        }
        false
    }
}

/// Greedy DSATUR colouring: (colour count, zero-based colours).
fn dsatur_greedy(graph: &SimpleGraph) -> (usize, Vec<usize>) {
    let n = graph.vertex_count();
    let mut state = Dsatur::new(graph, n.max(1));
    let mut used = 0;
    while state.colored < n {
        let v = state.pick();
        let c = (0..n).find(|&c| state.neighbour_colors[v * state.k + c] == 0).expect("n colours always suffice");
        state.assign(v, c);
        used = used.max(c + 1);
    }
    (used, state.color.into_iter().map(|c| c.unwrap_or(0)).collect())
}

/// Size of a clique grown greedily from each vertex; a lower bound on chi.
fn greedy_clique(graph: &SimpleGraph) -> usize {
    let n = graph.vertex_count();
    let mut best = 0;
    for start in 0..n {
        let mut clique = vec![start];
        let mut candidates: Vec<usize> = graph.neighbors(start).to_vec();
        candidates.sort_by_key(|&v| std::cmp::Reverse(graph.degree(v)));
        for v in candidates {
            if clique.iter().all(|&u| graph.is_adjacent(u, v)) {
                clique.push(v);
            }
        }
        best = best.max(clique.len());
    }
    best
}
