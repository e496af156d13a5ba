//! Catalogs of crossing structures realizable by straight-line drawings of Kₙ.
//!
//! Point sets are enumerated on growing square grids. Each subset is keyed by
//! its chirotope (orientation of every ordered triple), which determines the
//! crossing structure, so canonicalization only runs once per chirotope.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{orientation, regular_polygon, Orientation, Point};
use crate::graph::{GeometricGraph, GraphError, GraphJson};
use crate::structure::{crossing_structure, CrossingStructure};

/// Largest clique size the enumerator accepts.
pub const MAX_CATALOG_N: usize = 7;

/// Grid size at which enumeration gives up without converging.
pub const DEFAULT_MAX_GRID: usize = 24;

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("clique size {0} unsupported (catalogs cover 3..=7)")]
    SizeUnsupported(usize),
    #[error("no catalog available for K{0}; build one with `geochrom catalog --n {0}` and pass its directory")]
    Missing(usize),
    #[error("catalog file {path}: {reason}")]
    Corrupt { path: String, reason: String },
    #[error("io error on {path}: {reason}")]
    Io { path: String, reason: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Complete graph on a regular `n`-gon; vertex `i` carries hull label `i + 1`.
pub fn convex_clique(n: usize) -> GeometricGraph {
    GeometricGraph::complete(regular_polygon(n)).expect("regular polygon is in general position")
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub structure: CrossingStructure,
    pub witness: GeometricGraph,
}

#[derive(Debug, Clone)]
pub struct CliqueCatalog {
    pub n: usize,
    pub grid_bound: usize,
    pub converged: bool,
    /// The convex structure first (when `n >= 4`), the rest by canonical form.
    pub entries: Vec<CatalogEntry>,
}

impl CliqueCatalog {
    /// The single structure of K1, K2 or K3.
    pub fn trivial(n: usize) -> Self {
        assert!(n <= 3, "K{n} has more than one realization class");
        let witness = convex_clique(n);
        CliqueCatalog {
            n,
            grid_bound: 0,
            converged: true,
            entries: vec![CatalogEntry { structure: crossing_structure(&witness), witness }],
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, s: &CrossingStructure) -> bool {
        self.position(s).is_some()
    }

    pub fn position(&self, s: &CrossingStructure) -> Option<usize> {
        self.entries.iter().position(|e| e.structure.is_isomorphic(s))
    }

    pub fn to_json(&self) -> String {
        let file = CatalogFile {
            n: self.n,
            grid_bound: self.grid_bound,
            converged: self.converged,
            entries: self
                .entries
                .iter()
                .map(|e| EntryFile { witness: e.witness.to_json_value(), canonical: e.structure.canonical_hex() })
                .collect(),
        };
        serde_json::to_string(&file).expect("catalog JSON serializes")
    }

    /// Parses and re-verifies a catalog: every witness must be a complete
    /// graph on `n` vertices whose structure matches the stored canonical form.
    pub fn from_json(text: &str, origin: &str) -> Result<Self, CatalogError> {
        let corrupt = |reason: String| CatalogError::Corrupt { path: origin.to_string(), reason };
        let file: CatalogFile = serde_json::from_str(text).map_err(|e| corrupt(e.to_string()))?;
        let mut entries = Vec::with_capacity(file.entries.len());
        for (i, entry) in file.entries.into_iter().enumerate() {
            let witness = GeometricGraph::from_json_value(entry.witness)?;
            let k = witness.positions().len();
            if k != file.n || witness.edges().len() != k * k.saturating_sub(1) / 2 {
                return Err(corrupt(format!("entry {i} is not a complete graph on {} vertices", file.n)));
            }
            let structure = crossing_structure(&witness);
            if structure.canonical_hex() != entry.canonical {
                return Err(corrupt(format!("entry {i} canonical form mismatch")));
            }
            if entries.iter().any(|e: &CatalogEntry| e.structure.is_isomorphic(&structure)) {
                return Err(corrupt(format!("entry {i} duplicates an earlier entry")));
            }
            entries.push(CatalogEntry { structure, witness });
        }
        Ok(CliqueCatalog { n: file.n, grid_bound: file.grid_bound, converged: file.converged, entries })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CatalogFile {
    n: usize,
    grid_bound: usize,
    converged: bool,
    entries: Vec<EntryFile>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryFile {
    witness: GraphJson,
    canonical: String,
}

/// Enumerates crossing structures of Kₙ over grids `grid_start, grid_start + 1, ...`
/// until two consecutive grids give the same non-zero count.
pub fn enumerate_clique_structures(n: usize, grid_start: usize) -> Result<CliqueCatalog, CatalogError> {
    enumerate_with_limit(n, grid_start, DEFAULT_MAX_GRID)
}

pub fn enumerate_with_limit(n: usize, grid_start: usize, max_grid: usize) -> Result<CliqueCatalog, CatalogError> {
    if !(3..=MAX_CATALOG_N).contains(&n) {
        return Err(CatalogError::SizeUnsupported(n));
    }
    let mut found: HashMap<Vec<u8>, Vec<(i64, i64)>> = HashMap::new();
    let mut previous: Option<usize> = None;
    let mut g = grid_start.max(2);
    let mut converged = false;
    // subsets fitting in a (g-1)-box were already seen at smaller grids
    let mut seen_box = 0;
    loop {
        for size in (seen_box + 1)..=g {
            merge_found(&mut found, enumerate_box(n, size));
        }
        seen_box = g;
        let count = found.len();
        if count > 0 && previous == Some(count) {
            converged = true;
            break;
        }
        if g >= max_grid {
            break;
        }
        previous = Some(count);
        g += 1;
    }
    Ok(build_catalog(n, g, converged, found))
}

fn merge_found(into: &mut HashMap<Vec<u8>, Vec<(i64, i64)>>, from: HashMap<Vec<u8>, Vec<(i64, i64)>>) {
    for (key, witness) in from {
        into.entry(key)
            .and_modify(|w| {
                if witness < *w {
                    *w = witness.clone();
                }
            })
            .or_insert(witness);
    }
}

fn build_catalog(
    n: usize,
    grid_bound: usize,
    converged: bool,
    found: HashMap<Vec<u8>, Vec<(i64, i64)>>,
) -> CliqueCatalog {
    let convex = crossing_structure(&convex_clique(n));
    let mut entries: Vec<CatalogEntry> = found
        .into_values()
        .map(|raw| {
            let pts = raw.iter().map(|&(x, y)| Point { x, y }).collect();
            let witness = GeometricGraph::complete(pts).expect("enumerated sets are in general position");
            CatalogEntry { structure: crossing_structure(&witness), witness }
        })
        .collect();
    entries.sort_by(|a, b| {
        let ka = !a.structure.is_isomorphic(&convex);
        let kb = !b.structure.is_isomorphic(&convex);
        (ka, a.structure.canonical_form()).cmp(&(kb, b.structure.canonical_form()))
    });
    CliqueCatalog { n, grid_bound, converged, entries }
}

/// Structures of all general-position `n`-subsets of `{0..size}²` that touch
/// both axes and reach `size - 1` in some coordinate, keyed by canonical form
/// with the lexicographically least witness.
fn enumerate_box(n: usize, size: usize) -> HashMap<Vec<u8>, Vec<(i64, i64)>> {
    let cells: Vec<(i64, i64)> = (0..size as i64).flat_map(|y| (0..size as i64).map(move |x| (x, y))).collect();
    let firsts: Vec<usize> = (0..size).collect();
    firsts
        .into_par_iter()
        .map(|first| {
            let mut search = BoxSearch::new(n, size, &cells);
            search.chosen.push(first);
            search.run(1);
            search.found
        })
        .reduce(HashMap::new, |mut a, b| {
            merge_found(&mut a, b);
            a
        })
}

struct BoxSearch<'a> {
    n: usize,
    size: i64,
    cells: &'a [(i64, i64)],
    chosen: Vec<usize>,
    // chirotope bits accumulated along the current path, one per triple
    bits: Vec<u64>,
    memo: HashMap<u64, Vec<u8>>,
    found: HashMap<Vec<u8>, Vec<(i64, i64)>>,
}

impl<'a> BoxSearch<'a> {
    fn new(n: usize, size: usize, cells: &'a [(i64, i64)]) -> Self {
        BoxSearch {
            n,
            size: size as i64,
            cells,
            chosen: Vec::with_capacity(n),
            bits: vec![0; n + 1],
            memo: HashMap::new(),
            found: HashMap::new(),
        }
    }

    fn point(&self, idx: usize) -> Point {
        let (x, y) = self.cells[idx];
        Point { x, y }
    }

    fn run(&mut self, depth: usize) {
        if depth == self.n {
            self.record();
            return;
        }
        let last = *self.chosen.last().expect("first point chosen");
        let remaining = self.n - depth;
        for idx in (last + 1)..self.cells.len() {
            if self.cells.len() - idx < remaining {
                break;
            }
            let Some(bits) = self.extend_bits(idx, depth) else {
                continue;
            };
            self.bits[depth + 1] = bits;
            self.chosen.push(idx);
            self.run(depth + 1);
            self.chosen.pop();
        }
    }

    /// Chirotope bits after appending `idx`, or `None` if it is collinear with
    /// two chosen points.
    fn extend_bits(&self, idx: usize, depth: usize) -> Option<u64> {
        let r = self.point(idx);
        let mut bits = self.bits[depth];
        let mut shift = depth * depth.saturating_sub(1) * depth.saturating_sub(2) / 6;
        for j in 1..depth {
            let q = self.point(self.chosen[j]);
            for i in 0..j {
                let p = self.point(self.chosen[i]);
                match orientation(&p, &q, &r) {
                    Orientation::Collinear => return None,
                    Orientation::CounterClockwise => bits |= 1 << shift,
                    Orientation::Clockwise => {}
                }
                shift += 1;
            }
        }
        Some(bits)
    }

    fn record(&mut self) {
        let pts: Vec<(i64, i64)> = self.chosen.iter().map(|&i| self.cells[i]).collect();
        let touches_x = pts.iter().any(|p| p.0 == 0);
        let reaches = pts.iter().any(|p| p.0 == self.size - 1 || p.1 == self.size - 1);
        if !touches_x || !reaches {
            return;
        }
        let key = self.bits[self.n];
        let canonical = match self.memo.get(&key) {
            Some(c) => c.clone(),
            None => {
                let witness = GeometricGraph::complete(pts.iter().map(|&(x, y)| Point { x, y }).collect())
                    .expect("no three chosen points are collinear");
                let c = crossing_structure(&witness).canonical_form().to_vec();
                self.memo.insert(key, c.clone());
                c
            }
        };
        // subsets are visited in lexicographic order, so the first witness is least
        self.found.entry(canonical).or_insert(pts);
    }
}

/// Source of clique catalogs for geochromatic searches.
pub trait CatalogSource: Sync {
    fn catalog(&self, n: usize) -> Result<Arc<CliqueCatalog>, CatalogError>;
}

/// Catalogs held in memory.
#[derive(Default)]
pub struct InMemoryCatalogs {
    map: HashMap<usize, Arc<CliqueCatalog>>,
}

impl InMemoryCatalogs {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, catalog: CliqueCatalog) {
        self.map.insert(catalog.n, Arc::new(catalog));
    }
}

impl CatalogSource for InMemoryCatalogs {
    fn catalog(&self, n: usize) -> Result<Arc<CliqueCatalog>, CatalogError> {
        if n <= 3 {
            return Ok(Arc::new(CliqueCatalog::trivial(n)));
        }
        self.map.get(&n).cloned().ok_or(CatalogError::Missing(n))
    }
}

/// Path of the catalog file for Kₙ inside a catalog directory.
pub fn catalog_path(dir: &Path, n: usize) -> PathBuf {
    dir.join(format!("k{n}.catalog.json"))
}

pub fn write_catalog(dir: &Path, catalog: &CliqueCatalog) -> Result<PathBuf, CatalogError> {
    let path = catalog_path(dir, catalog.n);
    let io = |e: std::io::Error| CatalogError::Io { path: path.display().to_string(), reason: e.to_string() };
    fs::create_dir_all(dir).map_err(io)?;
    fs::write(&path, catalog.to_json() + "\n").map_err(io)?;
    Ok(path)
}

/// Catalog files `k<n>.catalog.json` in a directory, loaded lazily.
pub struct CatalogDir {
    dir: PathBuf,
    cache: Mutex<HashMap<usize, Arc<CliqueCatalog>>>,
}

impl CatalogDir {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        CatalogDir { dir: dir.into(), cache: Mutex::new(HashMap::new()) }
    }
}

impl CatalogSource for CatalogDir {
    fn catalog(&self, n: usize) -> Result<Arc<CliqueCatalog>, CatalogError> {
        if n <= 3 {
            return Ok(Arc::new(CliqueCatalog::trivial(n)));
        }
        let mut cache = self.cache.lock().expect("catalog cache poisoned");
        if let Some(c) = cache.get(&n) {
            return Ok(c.clone());
        }
        let path = catalog_path(&self.dir, n);
        if !path.exists() {
            return Err(CatalogError::Missing(n));
        }
        let text = fs::read_to_string(&path)
            .map_err(|e| CatalogError::Io { path: path.display().to_string(), reason: e.to_string() })?;
        let catalog = CliqueCatalog::from_json(&text, &path.display().to_string())?;
        if catalog.n != n {
            return Err(CatalogError::Corrupt {
                path: path.display().to_string(),
                reason: format!("file describes K{} not K{n}", catalog.n),
            });
        }
        let catalog = Arc::new(catalog);
        cache.insert(n, catalog.clone());
        Ok(catalog)
    }
}

/// Largest clique size that [`OnDemandCatalogs`] enumerates by itself. Larger
/// sizes come from the bundled K7 catalog.
pub const ON_DEMAND_MAX_N: usize = 6;

/// K7 catalog built with `geochrom catalog --n 7` (grids 9 and 10 agree at 122 structures).
const BUNDLED_K7: &str = include_str!("../catalogs/k7.catalog.json");

/// The bundled K7 catalog.
pub fn bundled_k7_catalog() -> CliqueCatalog {
    CliqueCatalog::from_json(BUNDLED_K7, "bundled k7").expect("bundled K7 catalog parses")
}

/// Enumerates catalogs on first use and keeps them; sizes above `max_n` are missing.

pub struct OnDemandCatalogs {
    max_n: usize,
    grid_start: usize,
    cache: Mutex<HashMap<usize, Arc<CliqueCatalog>>>,
}

impl OnDemandCatalogs {
    pub fn new(max_n: usize) -> Self {
        OnDemandCatalogs { max_n: max_n.min(MAX_CATALOG_N), grid_start: 3, cache: Mutex::new(HashMap::new()) }
    }
}

impl CatalogSource for OnDemandCatalogs {
    fn catalog(&self, n: usize) -> Result<Arc<CliqueCatalog>, CatalogError> {
        if n <= 3 {
            return Ok(Arc::new(CliqueCatalog::trivial(n)));
        }
        if n > self.max_n {
            return Err(CatalogError::Missing(n));
        }
        let mut cache = self.cache.lock().expect("catalog cache poisoned");
        if let Some(c) = cache.get(&n) {
            return Ok(c.clone());
        }
        let catalog = if n > ON_DEMAND_MAX_N {
            Arc::new(bundled_k7_catalog())
        } else {
            Arc::new(enumerate_clique_structures(n, self.grid_start)?)
        };
        cache.insert(n, catalog.clone());
        Ok(catalog)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::CrossingView;

    #[test]
    fn convex_clique_crossing_counts() {
        assert_eq!(convex_clique(3).crossings().len(), 0);
        assert_eq!(convex_clique(4).crossings().len(), 1);
        assert_eq!(convex_clique(6).crossings().len(), 15);
        assert_eq!(convex_clique(1).positions().len(), 1);
    }

    #[test]
    fn small_catalogs() {
        let k3 = enumerate_clique_structures(3, 2).unwrap();
        assert_eq!(k3.len(), 1);
        assert!(k3.converged);
        let k4 = enumerate_clique_structures(4, 2).unwrap();
        assert_eq!(k4.len(), 2);
        assert!(k4.entries[0].structure.is_isomorphic(&crossing_structure(&convex_clique(4))));
        assert_eq!(k4.entries[1].witness.crossings().len(), 0);
    }

    #[test]
    fn unsupported_sizes() {
        assert!(matches!(enumerate_clique_structures(2, 3), Err(CatalogError::SizeUnsupported(2))));
        assert!(matches!(enumerate_clique_structures(8, 3), Err(CatalogError::SizeUnsupported(8))));
    }

    #[test]
    fn json_round_trip_and_tamper_detection() {
        let k4 = enumerate_clique_structures(4, 2).unwrap();
        let text = k4.to_json();
        let back = CliqueCatalog::from_json(&text, "mem").unwrap();
        assert_eq!(back.len(), 2);
        assert_eq!(back.to_json(), text);
        let first = &k4.entries[0].structure.canonical_hex();
        let tampered = text.replacen(first.as_str(), &"0".repeat(first.len()), 1);
        assert!(matches!(CliqueCatalog::from_json(&tampered, "mem"), Err(CatalogError::Corrupt { .. })));
    }

    #[test]
    fn in_memory_source_reports_missing() {
        let src = InMemoryCatalogs::new();
        assert_eq!(src.catalog(3).unwrap().len(), 1);
        assert!(matches!(src.catalog(5), Err(CatalogError::Missing(5))));
    }
}
