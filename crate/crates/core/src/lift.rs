//! Lifting a proper colouring `alpha` into a geometric homomorphism `beta`
//! onto a convex clique.
//!
//! Convex cliques are labelled `1..=k` in hull order, so two disjoint chords
//! cross exactly when their labels alternate. Each method keeps `alpha` on
//! non-crossing vertices and re-labels a few vertices of every crossing so its
//! two edges land on alternating labels. Crossings never share vertices (the
//! independence precondition), so the per-crossing edits never interact.
//!
//! Every crossing is first normalized into one of these patterns by the
//! `alpha` labels of its endpoints, naming the crossing `{u,v} x {x,y}`:
//!
//! | tag  | pattern                          |
//! |------|----------------------------------|
//! | `1`  | four labels that already alternate |
//! | `1a` | `u < v < x < y`                  |
//! | `1b` | `y < u < v < x`                  |
//! | `2a` | `u < v = x < y`                  |
//! | `2b` | `v = x` is the largest or smallest label, `u` lies between `y` and it |
//! | `3`  | `u = y < v = x`                  |

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::coloring::Coloring;
use crate::geometry::convex_crossing_rule;
use crate::graph::{Crossing, CrossingDistance, CrossingView, GeometricGraph};
use crate::hom::VertexMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LiftMethod {
    /// Crossings pairwise at distance at least 2; target size `n + 2`.
    Dist2,
    /// Independent crossings and a non-collapsing colouring; target `2n`.
    Indep2n,
    /// Independent crossings; target `3n`.
    Indep3n,
    /// Independent crossings and 2 or 3 colours; target `2n`.
    SmallChi,
}

impl LiftMethod {
    pub fn name(self) -> &'static str {
        match self {
            LiftMethod::Dist2 => "dist2",
            LiftMethod::Indep2n => "indep2n",
            LiftMethod::Indep3n => "indep3n",
            LiftMethod::SmallChi => "smallchi",
        }
    }

    pub fn target_size(self, n: usize) -> usize {
        match self {
            LiftMethod::Dist2 => n + 2,
            LiftMethod::Indep2n | LiftMethod::SmallChi => 2 * n,
            LiftMethod::Indep3n => 3 * n,
        }
    }
}

impl fmt::Display for LiftMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CaseTag {
    #[serde(rename = "1")]
    Alternating,
    #[serde(rename = "1a")]
    Separated,
    #[serde(rename = "1b")]
    Nested,
    #[serde(rename = "2a")]
    SharedMiddle,
    #[serde(rename = "2b")]
    SharedEnd,
    #[serde(rename = "3")]
    Identical,
}

impl CaseTag {
    pub fn as_str(self) -> &'static str {
        match self {
            CaseTag::Alternating => "1",
            CaseTag::Separated => "1a",
            CaseTag::Nested => "1b",
            CaseTag::SharedMiddle => "2a",
            CaseTag::SharedEnd => "2b",
            CaseTag::Identical => "3",
        }
    }
}

/// One crossing as dispatched: `[[u, v], [x, y]]` in the roles of its case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CaseEntry {
    pub crossing: [[usize; 2]; 2],
    pub case: CaseTag,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftReport {
    pub method: LiftMethod,
    pub n_source: usize,
    pub target_size: usize,
    /// Target ids `0..target_size`; id `i` is hull label `i + 1`.
    pub beta: VertexMap,
    pub case_log: Vec<CaseEntry>,
}

impl LiftReport {
    /// Hull labels `1..=target_size` of every vertex.
    pub fn labels(&self) -> Vec<usize> {
        self.beta.images().iter().map(|i| i + 1).collect()
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Wire<'a> {
            method: &'a str,
            target_size: usize,
            map: &'a [usize],
            cases: &'a [CaseEntry],
        }
        serde_json::to_string(&Wire {
            method: self.method.name(),
            target_size: self.target_size,
            map: self.beta.images(),
            cases: &self.case_log,
        })
        .expect("lift report serializes")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LiftError {
    #[error("alpha is not a proper colouring of the graph")]
    NotProperColoring,
    #[error("crossings at distance {0} (need at least 2)")]
    DistanceTooSmall(usize),
    #[error("crossings share a vertex")]
    CrossingsNotIndependent,
    #[error("alpha maps both edges of crossing {0:?} onto the same edge")]
    CollapsedCrossingPair([[usize; 2]; 2]),
    #[error("colour count {0} is not 2 or 3")]
    ChiOutOfRange(usize),
    #[error("internal error: {0}")]
    Internal(String),
}

/// Roles of a crossing's vertices after normalization.
#[derive(Debug, Clone, Copy)]
struct Roles {
    u: usize,
    v: usize,
    x: usize,
    y: usize,
}

#[derive(Debug, Clone, Copy)]
struct Dispatch {
    tag: CaseTag,
    roles: Roles,
    /// For `2b`: whether the shared label is the largest of the three.
    shared_is_max: bool,
}

/// Names the crossing's vertices so the labels match one pattern of the table.
fn classify(c: &Crossing, label: &[usize]) -> Dispatch {
    let sorted = |e: crate::graph::Edge| {
        let (a, b) = (e.lo(), e.hi());
        if label[a] < label[b] || (label[a] == label[b] && a < b) {
            (a, b)
        } else {
            (b, a)
        }
    };
    let (p1, p2) = sorted(c.first);
    let (q1, q2) = sorted(c.second);
    let (lp1, lp2, lq1, lq2) = (label[p1], label[p2], label[q1], label[q2]);
    let roles = |u, v, x, y| Roles { u, v, x, y };
    let plain = |tag, r| Dispatch { tag, roles: r, shared_is_max: false };

    if lp1 == lq1 && lp2 == lq2 {
        // u = y < v = x
        return plain(CaseTag::Identical, roles(p1, p2, q2, q1));
    }
    let shared = [(p1, q1), (p1, q2), (p2, q1), (p2, q2)].into_iter().find(|&(a, b)| label[a] == label[b]);
    if let Some((ve, vf)) = shared {
        let ue = if ve == p1 { p2 } else { p1 };
        let uf = if vf == q1 { q2 } else { q1 };
        let (s, le, lf) = (label[ve], label[ue], label[uf]);
        if le < s && s < lf {
            return plain(CaseTag::SharedMiddle, roles(ue, ve, vf, uf));
        }
        if lf < s && s < le {
            return plain(CaseTag::SharedMiddle, roles(uf, vf, ve, ue));
        }
        let shared_is_max = s > le;
        // e1 is the edge whose leaf sits between the other leaf and the shared label
        let e_first = if shared_is_max { le > lf } else { le < lf };
        let r = if e_first { roles(ue, ve, vf, uf) } else { roles(uf, vf, ve, ue) };
        return Dispatch { tag: CaseTag::SharedEnd, roles: r, shared_is_max };
    }
    if alternates(lp1, lp2, lq1, lq2) {
        return plain(CaseTag::Alternating, roles(p1, p2, q1, q2));
    }
    if lp2 < lq1 {
        return plain(CaseTag::Separated, roles(p1, p2, q1, q2));
    }
    if lq2 < lp1 {
        return plain(CaseTag::Separated, roles(q1, q2, p1, p2));
    }
    if lq1 < lp1 && lp2 < lq2 {
        // first edge nested inside the second
        return plain(CaseTag::Nested, roles(p1, p2, q2, q1));
    }
    plain(CaseTag::Nested, roles(q1, q2, p2, p1))
}

fn alternates(a1: usize, a2: usize, b1: usize, b2: usize) -> bool {
    let (a, b) = if a1 < b1 { ((a1, a2), (b1, b2)) } else { ((b1, b2), (a1, a2)) };
    a.0 < b.0 && b.0 < a.1 && a.1 < b.1
}

fn check_alpha(g: &GeometricGraph, alpha: &Coloring) -> Result<(), LiftError> {
    if alpha.is_proper(g.graph()) {
        Ok(())
    } else {
        Err(LiftError::NotProperColoring)
    }
}

fn check_independent(g: &GeometricGraph) -> Result<(), LiftError> {
    match g.min_pairwise_crossing_distance() {
        CrossingDistance::Finite(0) => Err(LiftError::CrossingsNotIndependent),
        _ => Ok(()),
    }
}

/// Crossings in ascending order of their lowest vertex id.
fn ordered_crossings(g: &GeometricGraph) -> Vec<Crossing> {
    let mut cs = g.crossings().to_vec();
    cs.sort_by_key(|c| (c.lowest_vertex(), *c));
    cs
}

/// Applies `edit` to every crossing, re-checks each result with the convex
/// rule, and packages the report.
fn run_lift(
    g: &GeometricGraph,
    method: LiftMethod,
    n: usize,
    start: Vec<usize>,
    mut edit: impl FnMut(&Dispatch, &mut [usize]) -> Result<(), LiftError>,
) -> Result<LiftReport, LiftError> {
    let target_size = method.target_size(n);
    let mut beta = start.clone();
    let mut case_log = Vec::new();
    for c in ordered_crossings(g) {
        let d = classify(&c, &start);
        edit(&d, &mut beta)?;
        let Roles { u, v, x, y } = d.roles;
        let ok = convex_crossing_rule(target_size, (beta[u], beta[v]), (beta[x], beta[y]));
        if ok != Ok(true) {
            return Err(LiftError::Internal(format!(
                "{method} case {} left {{{},{}}} x {{{},{}}} uncrossed",
                d.tag.as_str(),
                beta[u],
                beta[v],
                beta[x],
                beta[y]
            )));
        }
        case_log.push(CaseEntry { crossing: [[u, v], [x, y]], case: d.tag });
    }
    if let Some(e) = g.edges().iter().find(|e| beta[e.lo()] == beta[e.hi()]) {
        return Err(LiftError::Internal(format!("{method} identified the endpoints of edge {e}")));
    }
    let beta = VertexMap::new(target_size, beta.iter().map(|l| l - 1).collect())
        .map_err(|e| LiftError::Internal(e.to_string()))?;
    Ok(LiftReport { method, n_source: n, target_size, beta, case_log })
}

/// Crossings pairwise at distance at least 2: lift into the convex clique on
/// `n + 2` labels, using the two extra labels `n + 1 < n + 2`.
pub fn lift_dist2(g: &GeometricGraph, alpha: &Coloring) -> Result<LiftReport, LiftError> {
    check_alpha(g, alpha)?;
    if let CrossingDistance::Finite(d) = g.min_pairwise_crossing_distance() {
        if d < 2 {
            return Err(LiftError::DistanceTooSmall(d));
        }
    }
    let n = alpha.color_count();
    let (hi1, hi2) = (n + 1, n + 2);
    run_lift(g, LiftMethod::Dist2, n, alpha.colors().to_vec(), |d, beta| {
        let Roles { v, x, y, .. } = d.roles;
        match d.tag {
            CaseTag::Alternating => {}
            CaseTag::Separated => {
                beta[v] = hi1;
                beta[x] = hi2;
            }
            CaseTag::Nested | CaseTag::SharedEnd => beta[v] = hi1,
            CaseTag::SharedMiddle | CaseTag::Identical => {
                beta[v] = hi1;
                beta[y] = hi2;
            }
        }
        Ok(())
    })
}

/// Shared edits of the `2n` construction: add `n` to selected vertices.
fn shift_edit(d: &Dispatch, beta: &mut [usize], n: usize) {
    let Roles { v, x, y, .. } = d.roles;
    match d.tag {
        CaseTag::Alternating | CaseTag::Identical => {}
        CaseTag::Separated => {
            beta[v] += n;
            beta[x] += n;
        }
        CaseTag::Nested | CaseTag::SharedEnd => beta[v] += n,
        CaseTag::SharedMiddle => {
            beta[v] += n;
            beta[y] += n;
        }
    }
}

/// Independent crossings and no crossing pair collapsed onto one edge by
/// `alpha`: lift into the convex clique on `2n` labels.
pub fn lift_independent_noncollapsing(g: &GeometricGraph, alpha: &Coloring) -> Result<LiftReport, LiftError> {
    check_alpha(g, alpha)?;
    check_independent(g)?;
    let colors = alpha.colors();
    for c in ordered_crossings(g) {
        let d = classify(&c, colors);
        if d.tag == CaseTag::Identical {
            let Roles { u, v, x, y } = d.roles;
            return Err(LiftError::CollapsedCrossingPair([[u, v], [x, y]]));
        }
    }
    let n = alpha.color_count();
    run_lift(g, LiftMethod::Indep2n, n, colors.to_vec(), |d, beta| {
        shift_edit(d, beta, n);
        Ok(())
    })
}

/// Independent crossings: lift into the convex clique on `3n` labels.
pub fn lift_independent(g: &GeometricGraph, alpha: &Coloring) -> Result<LiftReport, LiftError> {
    check_alpha(g, alpha)?;
    check_independent(g)?;
    let n = alpha.color_count();
    run_lift(g, LiftMethod::Indep3n, n, alpha.colors().to_vec(), |d, beta| {
        if d.tag == CaseTag::Identical {
            let Roles { u, x, .. } = d.roles;
            beta[x] += n;
            beta[u] += 2 * n;
        } else {
            shift_edit(d, beta, n);
        }
        Ok(())
    })
}

/// Independent crossings and a 2- or 3-colouring: colour `c` is placed on
/// hull label `2c - 1` of the convex clique on `2n` labels, and single
/// vertices move up by one label to make each crossing alternate.
pub fn lift_small_chi(g: &GeometricGraph, alpha: &Coloring) -> Result<LiftReport, LiftError> {
    let n = alpha.color_count();
    if !(2..=3).contains(&n) {
        return Err(LiftError::ChiOutOfRange(n));
    }
    check_alpha(g, alpha)?;
    check_independent(g)?;
    let recoded: Vec<usize> = alpha.colors().iter().map(|c| 2 * c - 1).collect();
    run_lift(g, LiftMethod::SmallChi, n, recoded, |d, beta| {
        let Roles { v, x, y, .. } = d.roles;
        match d.tag {
            CaseTag::Identical => {
                beta[y] += 1;
                beta[x] += 1;
            }
            CaseTag::SharedMiddle => beta[v] += 1,
            CaseTag::SharedEnd if d.shared_is_max => beta[v] += 1,
            CaseTag::SharedEnd => beta[x] += 1,
            other => {
                return Err(LiftError::Internal(format!(
                    "case {} cannot arise from at most three colours",
                    other.as_str()
                )))
            }
        }
        Ok(())
    })
}

/// A proper `n`-colouring in which no crossing has both edges on the same
/// colour pair, by exhaustive backtracking.
pub fn find_noncollapsing_hom(g: &GeometricGraph, n: usize) -> Option<Coloring> {
    let count = g.vertex_count();
    if count == 0 {
        return Some(Coloring::new(n, Vec::new()).expect("empty colouring"));
    }
    if n == 0 {
        return None;
    }
    let cdeg = g.crossing_degrees();
    let mut order: Vec<usize> = (0..count).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(cdeg[v]), std::cmp::Reverse(g.graph().degree(v)), v));
    let mut position = vec![0; count];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    // crossings checked when their last vertex (in search order) is coloured
    let mut closing: Vec<Vec<Crossing>> = vec![Vec::new(); count];
    for c in g.crossings() {
        let last = c.vertices().into_iter().max_by_key(|&v| position[v]).expect("four vertices");
        closing[last].push(*c);
    }
    let mut color = vec![usize::MAX; count];
    if noncollapsing_step(g, n, &order, &closing, &mut color, 0, 0) {
        Some(Coloring::new(n, color.iter().map(|c| c + 1).collect()).expect("colours within range"))
    } else {
        None
    }
}

fn noncollapsing_step(
    g: &GeometricGraph,
    n: usize,
    order: &[usize],
    closing: &[Vec<Crossing>],
    color: &mut [usize],
    depth: usize,
    used: usize,
) -> bool {
    if depth == order.len() {
        return true;
    }
    let v = order[depth];
    for c in 0..(used + 1).min(n) {
        if g.graph().neighbors(v).iter().any(|&w| color[w] == c) {
            continue;
        }
        color[v] = c;
        let collapsed = closing[v].iter().any(|cr| {
            let a = (color[cr.first.lo()].min(color[cr.first.hi()]), color[cr.first.lo()].max(color[cr.first.hi()]));
            let b =
                (color[cr.second.lo()].min(color[cr.second.hi()]), color[cr.second.lo()].max(color[cr.second.hi()]));
            a == b
        });
        if !collapsed && noncollapsing_step(g, n, order, closing, color, depth + 1, used.max(c + 1)) {
            return true;
        }
        color[v] = usize::MAX;
    }
    false
}
