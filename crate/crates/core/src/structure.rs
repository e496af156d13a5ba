//! Coordinate-free crossing structures and their canonical form.
//!
//! The canonical form is the lexicographically least serialization over all
//! labelings reachable by individualization/refinement. Refinement splits
//! vertex classes by degree, crossing participation, and neighbourhood classes;
//! vertices swapped by a transposition automorphism are explored once.

use std::collections::HashSet;

use thiserror::Error;

use crate::graph::{Crossing, CrossingTable, CrossingView, Edge, GeometricGraph, SimpleGraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("crossing {0:?} uses an edge missing from the adjacency")]
    CrossingEdgeMissing([[usize; 2]; 2]),
    #[error("crossing {0:?} pairs edges that share a vertex")]
    CrossingNotDisjoint([[usize; 2]; 2]),
    #[error("structures are limited to 255 vertices, got {0}")]
    TooLarge(usize),
}

/// Adjacency plus crossing pairs, with no coordinates.
#[derive(Debug, Clone)]
pub struct CrossingStructure {
    graph: SimpleGraph,
    crossings: CrossingTable,
    canonical: Vec<u8>,
}

impl PartialEq for CrossingStructure {
    fn eq(&self, other: &Self) -> bool {
        self.graph == other.graph && self.crossings.list() == other.crossings.list()
    }
}

impl Eq for CrossingStructure {}

impl CrossingStructure {
    pub fn from_parts(
        n: usize,
        edges: impl IntoIterator<Item = Edge>,
        crossings: impl IntoIterator<Item = Crossing>,
    ) -> Result<Self, StructureError> {
        if n > 255 {
            return Err(StructureError::TooLarge(n));
        }
        let graph = SimpleGraph::new(n, edges);
        let crossings: Vec<Crossing> = crossings.into_iter().collect();
        for c in &crossings {
            let raw = [c.first.endpoints(), c.second.endpoints()];
            if !graph.is_adjacent(c.first.lo(), c.first.hi()) || !graph.is_adjacent(c.second.lo(), c.second.hi()) {
                return Err(StructureError::CrossingEdgeMissing(raw));
            }
            if c.first.shares_vertex(&c.second) {
                return Err(StructureError::CrossingNotDisjoint(raw));
            }
        }
        let table = CrossingTable::new(&graph, crossings);
        let canonical = canonical_form(&graph, table.list());
        Ok(CrossingStructure { graph, crossings: table, canonical })
    }

    pub fn from_view(view: &impl CrossingView) -> Self {
        let graph = view.graph().clone();
        let crossings = view.crossing_table().clone();
        let canonical = canonical_form(&graph, crossings.list());
        CrossingStructure { graph, crossings, canonical }
    }

    pub fn canonical_form(&self) -> &[u8] {
        &self.canonical
    }

    pub fn canonical_hex(&self) -> String {
        hex::encode(&self.canonical)
    }

    /// Same structure up to relabeling.
    pub fn is_isomorphic(&self, other: &CrossingStructure) -> bool {
        self.canonical == other.canonical
    }

    /// The structure relabeled into canonical order.
    pub fn canonical_relabeling(&self) -> Vec<usize> {
        canonical_labeling(&self.graph, self.crossings.list()).0
    }
}

impl CrossingView for CrossingStructure {
    fn graph(&self) -> &SimpleGraph {
        &self.graph
    }

    fn crossing_table(&self) -> &CrossingTable {
        &self.crossings
    }
}

/// The coordinate-free record of a drawing.
pub fn crossing_structure(g: &GeometricGraph) -> CrossingStructure {
    CrossingStructure::from_view(g)
}

/// Canonical byte serialization of `(graph, crossings)`.
pub fn canonical_form(graph: &SimpleGraph, crossings: &[Crossing]) -> Vec<u8> {
    canonical_labeling(graph, crossings).1
}

/// Returns the labeling `v -> canonical id` achieving the canonical form, with the form.
fn canonical_labeling(graph: &SimpleGraph, crossings: &[Crossing]) -> (Vec<usize>, Vec<u8>) {
    let n = graph.vertex_count();
    let mut canon = Canonizer::new(graph, crossings);
    let start = if n == 0 { Vec::new() } else { vec![(0..n).collect()] };
    canon.search(start);
    canon.best.unwrap_or_else(|| (Vec::new(), serialize(graph, crossings, &[])))
}

/// A vertex's view of one crossing it belongs to: the other end of its own
/// edge and the two ends of the crossed edge.
#[derive(Clone, Copy)]
struct Incidence {
    partner: usize,
    across: [usize; 2],
}

/// Neighbour cells and crossing incidences of a vertex, used to split its cell.
type Signature = (Vec<usize>, Vec<(usize, usize, usize)>);

struct Canonizer<'a> {
    graph: &'a SimpleGraph,
    crossings: &'a [Crossing],
    incidences: Vec<Vec<Incidence>>,
    twin_class: Vec<usize>,
    best: Option<(Vec<usize>, Vec<u8>)>,
}

impl<'a> Canonizer<'a> {
    fn new(graph: &'a SimpleGraph, crossings: &'a [Crossing]) -> Self {
        let n = graph.vertex_count();
        let mut incidences = vec![Vec::new(); n];
        for c in crossings {
            for (own, other) in [(c.first, c.second), (c.second, c.first)] {
                for v in own.endpoints() {
                    incidences[v].push(Incidence { partner: own.other(v), across: other.endpoints() });
                }
            }
        }
        let twin_class = transposition_classes(graph, crossings);
        Canonizer { graph, crossings, incidences, twin_class, best: None }
    }

    fn refine(&self, mut cells: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
        let n = self.graph.vertex_count();
        let mut cell_of = vec![0usize; n];
        loop {
            for (i, cell) in cells.iter().enumerate() {
                for &v in cell {
                    cell_of[v] = i;
                }
            }
            let mut next: Vec<Vec<usize>> = Vec::with_capacity(cells.len());
            for cell in &cells {
                if cell.len() == 1 {
                    next.push(cell.clone());
                    continue;
                }
                let mut keyed: Vec<(Signature, usize)> = cell
                    .iter()
                    .map(|&v| {
                        let mut nb: Vec<usize> = self.graph.neighbors(v).iter().map(|&w| cell_of[w]).collect();
                        nb.sort_unstable();
                        let mut cr: Vec<(usize, usize, usize)> = self.incidences[v]
                            .iter()
                            .map(|inc| {
                                let a = cell_of[inc.across[0]];
                                let b = cell_of[inc.across[1]];
                                (cell_of[inc.partner], a.min(b), a.max(b))
                            })
                            .collect();
                        cr.sort_unstable();
                        ((nb, cr), v)
                    })
                    .collect();
                keyed.sort();
                let mut group: Vec<usize> = Vec::new();
                for i in 0..keyed.len() {
                    if i > 0 && keyed[i].0 != keyed[i - 1].0 {
                        next.push(std::mem::take(&mut group));
                    }
                    group.push(keyed[i].1);
                }
                next.push(group);
            }
            if next.len() == cells.len() {
                return next;
            }
            cells = next;
        }
    }

    fn search(&mut self, cells: Vec<Vec<usize>>) {
        let cells = self.refine(cells);
        let Some(idx) = cells.iter().position(|c| c.len() > 1) else {
            let mut label = vec![0usize; self.graph.vertex_count()];
            for (i, cell) in cells.iter().enumerate() {
                label[cell[0]] = i;
            }
            let bytes = serialize(self.graph, self.crossings, &label);
            if self.best.as_ref().is_none_or(|(_, b)| bytes < *b) {
                self.best = Some((label, bytes));
            }
            return;
        };
        let mut tried = HashSet::new();
        for &v in &cells[idx] {
            if !tried.insert(self.twin_class[v]) {
                continue;
            }
            let mut next = Vec::with_capacity(cells.len() + 1);
            next.extend_from_slice(&cells[..idx]);
            next.push(vec![v]);
            next.push(cells[idx].iter().copied().filter(|&w| w != v).collect());
            next.extend_from_slice(&cells[idx + 1..]);
            self.search(next);
        }
    }
}

/// Classes of vertices connected by transposition automorphisms.
fn transposition_classes(graph: &SimpleGraph, crossings: &[Crossing]) -> Vec<usize> {
    let n = graph.vertex_count();
    let set: HashSet<Crossing> = crossings.iter().copied().collect();
    let mut class: Vec<usize> = (0..n).collect();
    let mut deg_cross = vec![0usize; n];
    for c in crossings {
        for v in c.vertices() {
            deg_cross[v] += 1;
        }
    }
    for a in 0..n {
        if class[a] != a {
            continue;
        }
        for b in (a + 1)..n {
            if class[b] != b || graph.degree(a) != graph.degree(b) || deg_cross[a] != deg_cross[b] {
                continue;
            }
            if is_transposition_automorphism(graph, &set, crossings, a, b) {
                class[b] = a;
            }
        }
    }
    class
}

fn is_transposition_automorphism(
    graph: &SimpleGraph,
    set: &HashSet<Crossing>,
    crossings: &[Crossing],
    a: usize,
    b: usize,
) -> bool {
    let n = graph.vertex_count();
    if (0..n).any(|w| w != a && w != b && graph.is_adjacent(a, w) != graph.is_adjacent(b, w)) {
        return false;
    }
    let swap = |v: usize| {
        if v == a {
            b
        } else if v == b {
            a
        } else {
            v
        }
    };
    crossings.iter().all(|c| {
        let image = Crossing::new(
            Edge::new(swap(c.first.lo()), swap(c.first.hi())),
            Edge::new(swap(c.second.lo()), swap(c.second.hi())),
        );
        set.contains(&image)
    })
}

fn serialize(graph: &SimpleGraph, crossings: &[Crossing], label: &[usize]) -> Vec<u8> {
    let n = graph.vertex_count();
    let relabel = |e: &Edge| Edge::new(label[e.lo()], label[e.hi()]);
    let mut edges: Vec<Edge> = graph.edges().iter().map(relabel).collect();
    edges.sort_unstable();
    let mut cs: Vec<Crossing> =
        crossings.iter().map(|c| Crossing::new(relabel(&c.first), relabel(&c.second))).collect();
    cs.sort_unstable();
    let mut out = Vec::with_capacity(2 + 2 + 2 * edges.len() + 4 + 4 * cs.len());
    out.extend_from_slice(&(n as u16).to_be_bytes());
    out.extend_from_slice(&(edges.len() as u16).to_be_bytes());
    for e in &edges {
        out.push(e.lo() as u8);
        out.push(e.hi() as u8);
    }
    out.extend_from_slice(&(cs.len() as u32).to_be_bytes());
    for c in &cs {
        for v in c.vertices() {
            out.push(v as u8);
        }
    }
    out
}
